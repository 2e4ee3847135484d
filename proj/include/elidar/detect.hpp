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

#ifndef ELIDAR_DETECT_HPP_
#define ELIDAR_DETECT_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "elidar/annotate.hpp"
#include "elidar/sensor.hpp"

namespace elidar {

struct Detection {
  BoundingBox3D box;  // num_points = cluster size
  double score = 0.0;
};

struct GroundSplit {
  std::vector<std::size_t> ground;
  std::vector<std::size_t> objects;
  bool plane_found = false;  // false: the z <= threshold slab was used
  Vec3 normal{0.0, 0.0, 1.0};
  double offset = 0.0;  // plane: normal . p + offset = 0
};

// RANSAC ground plane. Candidates come from `iterations` seeded triples and
// are scored by inlier count; ties prefer the lower plane. A best plane with
// |normal . z| < 0.9 is rejected in favour of the z <= threshold slab.
GroundSplit remove_ground(std::span<const Vec3> points, double inlier_threshold, int iterations,
                          std::uint64_t seed);

// Euclidean clustering: connected components of the "distance <= radius"
// graph, built with a hash grid of cell size `radius`. Clusters smaller
// than `min_cluster_size` are dropped. Each cluster lists indices
// ascending; clusters are ordered by smallest member.
std::vector<std::vector<std::size_t>> cluster(std::span<const Vec3> points, double radius,
                                              std::size_t min_cluster_size);

inline constexpr double kMinFittedDim = 0.01;

// Oriented box from the principal axis of the xy covariance. Yaw lies in
// [-pi/2, pi/2); degenerate spreads get yaw 0. Dims floor at 1 cm.
BoundingBox3D fit_box(std::span<const Vec3> points);

struct SizeWindow {
  double footprint_min = 0.0;  // on max(length, width)
  double footprint_max = 0.0;
  double height_min = 0.0;
  double height_max = 0.0;
};

struct DetectorParams {
  double inlier_threshold = 0.15;
  int ransac_iterations = 100;
  std::uint64_t seed = 0;
  double cluster_radius = 0.7;
  std::size_t min_cluster_size = 5;
  SizeWindow pedestrian{0.0, 1.2, 0.6, 2.2};
  SizeWindow vehicle{2.5, 14.0, 1.0, 4.5};
  // Fraction of a window's span over which the fit factor decays at each
  // edge, and the factor reached exactly on the edge.
  double edge_margin = 0.1;
  double edge_factor = 0.5;
};

// Multiplier in [edge_factor, 1] for how comfortably `box` sits inside
// `window`; 0 when it is outside.
double class_fit(const BoundingBox3D& box, const SizeWindow& window, const DetectorParams& params);

// Ground removal, clustering, box fit and size classification. Scores are
// clamp(points / 100, 0.05, 1) times the class fit, clamped to [0.05, 1].
std::vector<Detection> detect_frame(const PointCloudFrame& frame, const DetectorParams& params);
std::vector<Detection> detect_points(std::span<const Vec3> points, const DetectorParams& params);

}  // namespace elidar

#endif  // ELIDAR_DETECT_HPP_
