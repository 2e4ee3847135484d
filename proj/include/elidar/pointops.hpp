/* Copyright 2026 The elidar Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef ELIDAR_POINTOPS_HPP_
#define ELIDAR_POINTOPS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "elidar/geometry.hpp"

namespace elidar {

inline constexpr std::size_t kDefaultKeypoints = 4096;

// Greedy furthest point sampling under 3D Euclidean distance.
//
// Starts at `start_index`; each step takes the point with the largest
// distance to the selected set, lowest index on ties. Returns indices in
// selection order, or every index in input order when k >= points.size().
// Throws std::invalid_argument on empty input, k == 0 or a bad start index.
std::vector<std::size_t> furthest_point_sampling(std::span<const Vec3> points, std::size_t k,
                                                 std::size_t start_index = 0);

// Single-threaded reference with identical output.
std::vector<std::size_t> furthest_point_sampling_serial(std::span<const Vec3> points,
                                                        std::size_t k,
                                                        std::size_t start_index = 0);

struct Voxel {
  std::array<std::int32_t, 3> coord{};
  std::vector<std::size_t> indices;  // first max_points_per_voxel points, input order
  std::size_t count = 0;             // all points that fell in this voxel
};

struct VoxelGridParams {
  Vec3 voxel_size{0.1, 0.1, 0.15};
  Vec3 range_min{-75.0, -75.0, -3.0};
  Vec3 range_max{75.0, 75.0, 5.0};
  std::size_t max_points_per_voxel = 32;
  std::size_t max_voxels = 40000;
};

struct VoxelGrid {
  VoxelGridParams params;
  std::vector<Voxel> voxels;  // first-occurrence order
  std::size_t in_range_points = 0;
  std::size_t dropped_by_voxel_limit = 0;
};

// Buckets points of the half-open box [range_min, range_max) into voxels at
// floor((p - range_min) / voxel_size). Voxels past max_voxels are dropped
// entirely. Throws std::invalid_argument on non-positive sizes or an empty
// range.
VoxelGrid voxelize(std::span<const Vec3> points, const VoxelGridParams& params);

}  // namespace elidar

#endif  // ELIDAR_POINTOPS_HPP_
