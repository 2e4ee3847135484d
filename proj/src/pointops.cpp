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

#include "elidar/pointops.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace elidar {

namespace {

void check_fps_args(std::span<const Vec3> points, std::size_t k, std::size_t start_index) {
  if (points.empty()) throw std::invalid_argument("furthest point sampling on an empty cloud");
  if (k == 0) throw std::invalid_argument("furthest point sampling needs k >= 1");
  if (start_index >= points.size()) throw std::invalid_argument("start index out of range");
}

inline double dist2(const Vec3& a, const Vec3& b) {
  const Vec3 d = a - b;
  return d.x * d.x + d.y * d.y + d.z * d.z;
}

// Selected points keep this below every real squared distance, so they are
// never chosen again even when all remaining distances are 0.
constexpr double kTaken = -1.0;

struct Best {
  double dist;
  std::size_t index;
};

inline bool better(const Best& a, const Best& b) {
  return a.dist > b.dist || (a.dist == b.dist && a.index < b.index);
}

}  // namespace

std::vector<std::size_t> furthest_point_sampling_serial(std::span<const Vec3> points,
                                                        std::size_t k,
                                                        std::size_t start_index) {
  check_fps_args(points, k, start_index);
  const std::size_t n = points.size();
  if (k >= n) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return all;
  }
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  nearest[start_index] = kTaken;
  std::vector<std::size_t> selected{start_index};
  selected.reserve(k);
  std::size_t last = start_index;
  while (selected.size() < k) {
    Best best{-1.0, n};
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], dist2(points[i], points[last]));
      const Best cand{nearest[i], i};
      if (better(cand, best)) best = cand;
    }
    selected.push_back(best.index);
    nearest[best.index] = kTaken;
    last = best.index;
  }
  return selected;
}

std::vector<std::size_t> furthest_point_sampling(std::span<const Vec3> points, std::size_t k,
                                                 std::size_t start_index) {
  check_fps_args(points, k, start_index);
  const std::size_t n = points.size();
  if (k >= n) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return all;
  }
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  nearest[start_index] = kTaken;
  std::vector<std::size_t> selected{start_index};
  selected.reserve(k);
  const auto count = static_cast<std::int64_t>(n);
  Best shared{-1.0, n};
#pragma omp parallel
  {
    for (std::size_t step = 1; step < k; ++step) {
      const Vec3 last = points[selected.back()];
      Best local{-1.0, n};
#pragma omp for schedule(static) nowait
      for (std::int64_t ii = 0; ii < count; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        const double d = std::min(nearest[i], dist2(points[i], last));
        nearest[i] = d;
        const Best cand{d, i};
        if (better(cand, local)) local = cand;
      }
#pragma omp critical(elidar_fps_reduce)
      {
        if (better(local, shared)) shared = local;
      }
#pragma omp barrier
#pragma omp single
      {
        selected.push_back(shared.index);
        nearest[shared.index] = kTaken;
        shared = Best{-1.0, n};
      }
    }
  }
  return selected;
}

VoxelGrid voxelize(std::span<const Vec3> points, const VoxelGridParams& params) {
  const Vec3& size = params.voxel_size;
  const Vec3& lo = params.range_min;
  const Vec3& hi = params.range_max;
  if (!(size.x > 0.0 && size.y > 0.0 && size.z > 0.0)) {
    throw std::invalid_argument("voxel size must be positive");
  }
  if (!(lo.x < hi.x && lo.y < hi.y && lo.z < hi.z)) {
    throw std::invalid_argument("voxel range_min must be below range_max");
  }
  struct CoordHash {
    std::size_t operator()(const std::array<std::int32_t, 3>& c) const {
      std::uint64_t h = static_cast<std::uint32_t>(c[0]);
      h = h * 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint32_t>(c[1]);
      h = h * 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint32_t>(c[2]);
      return static_cast<std::size_t>(h ^ (h >> 29));
    }
  };
  VoxelGrid grid;
  grid.params = params;
  std::unordered_map<std::array<std::int32_t, 3>, std::size_t, CoordHash> lookup;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Vec3& p = points[i];
    if (!(p.x >= lo.x && p.x < hi.x && p.y >= lo.y && p.y < hi.y && p.z >= lo.z && p.z < hi.z)) {
      continue;
    }
    ++grid.in_range_points;
    const std::array<std::int32_t, 3> coord{
        static_cast<std::int32_t>(std::floor((p.x - lo.x) / size.x)),
        static_cast<std::int32_t>(std::floor((p.y - lo.y) / size.y)),
        static_cast<std::int32_t>(std::floor((p.z - lo.z) / size.z))};
    auto it = lookup.find(coord);
    if (it == lookup.end()) {
      if (grid.voxels.size() >= params.max_voxels) {
        ++grid.dropped_by_voxel_limit;
        continue;
      }
      it = lookup.emplace(coord, grid.voxels.size()).first;
      grid.voxels.push_back(Voxel{coord, {}, 0});
    }
    Voxel& v = grid.voxels[it->second];
    ++v.count;
    if (v.indices.size() < params.max_points_per_voxel) v.indices.push_back(i);
  }
  return grid;
}

}  // namespace elidar
