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

#include "elidar/detect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <unordered_map>

#include "elidar/rng.hpp"

namespace elidar {

GroundSplit remove_ground(std::span<const Vec3> points, double inlier_threshold, int iterations,
                          std::uint64_t seed) {
  GroundSplit split;
  const std::size_t n = points.size();
  if (n == 0) return split;

  std::size_t best_count = 0;
  double best_height = std::numeric_limits<double>::infinity();
  Vec3 best_normal{0.0, 0.0, 1.0};
  double best_offset = 0.0;
  bool have_plane = false;
  const auto count = static_cast<std::int64_t>(n);

  for (int it = 0; it < iterations && n >= 3; ++it) {
    KeyedStream rng(seed, static_cast<std::uint64_t>(it));
    const std::size_t i0 = rng.below(n);
    std::size_t i1 = rng.below(n);
    std::size_t i2 = rng.below(n);
    if (i0 == i1 || i0 == i2 || i1 == i2) continue;
    const Vec3 c = cross(points[i1] - points[i0], points[i2] - points[i0]);
    const double len = norm(c);
    if (len < 1e-9) continue;
    Vec3 normal = c * (1.0 / len);
    if (normal.z < 0.0) normal = -normal;
    const double offset = -dot(normal, points[i0]);
    std::size_t inliers = 0;
#pragma omp parallel for reduction(+ : inliers) schedule(static)
    for (std::int64_t k = 0; k < count; ++k) {
      if (std::abs(dot(normal, points[static_cast<std::size_t>(k)]) + offset) <= inlier_threshold) {
        ++inliers;
      }
    }
    const double height = normal.z > 1e-12 ? -offset / normal.z
                                           : std::numeric_limits<double>::infinity();
    if (!have_plane || inliers > best_count || (inliers == best_count && height < best_height)) {
      best_count = inliers;
      best_height = height;
      best_normal = normal;
      best_offset = offset;
      have_plane = true;
    }
  }

  split.plane_found = have_plane && best_normal.z >= 0.9;
  if (split.plane_found) {
    split.normal = best_normal;
    split.offset = best_offset;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const bool ground =
        split.plane_found
            ? std::abs(dot(split.normal, points[k]) + split.offset) <= inlier_threshold
            : points[k].z <= inlier_threshold;
    (ground ? split.ground : split.objects).push_back(k);
  }
  return split;
}

namespace {

struct CellKey {
  std::int64_t x, y, z;
  bool operator==(const CellKey&) const = default;
};

struct CellHash {
  std::size_t operator()(const CellKey& k) const {
    std::uint64_t h = mix64(static_cast<std::uint64_t>(k.x));
    h = mix64(h ^ static_cast<std::uint64_t>(k.y));
    h = mix64(h ^ static_cast<std::uint64_t>(k.z));
    return static_cast<std::size_t>(h);
  }
};

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  // The smaller index becomes the root.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

std::vector<std::vector<std::size_t>> cluster(std::span<const Vec3> points, double radius,
                                              std::size_t min_cluster_size) {
  const std::size_t n = points.size();
  auto key_of = [radius](const Vec3& p) {
    return CellKey{static_cast<std::int64_t>(std::floor(p.x / radius)),
                   static_cast<std::int64_t>(std::floor(p.y / radius)),
                   static_cast<std::int64_t>(std::floor(p.z / radius))};
  };
  std::unordered_map<CellKey, std::vector<std::size_t>, CellHash> grid;
  grid.reserve(n);
  for (std::size_t i = 0; i < n; ++i) grid[key_of(points[i])].push_back(i);

  const double r2 = radius * radius;
  DisjointSets sets(n);
  for (std::size_t i = 0; i < n; ++i) {
    const CellKey c = key_of(points[i]);
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        for (std::int64_t dz = -1; dz <= 1; ++dz) {
          const auto it = grid.find({c.x + dx, c.y + dy, c.z + dz});
          if (it == grid.end()) continue;
          for (std::size_t j : it->second) {
            if (j <= i) continue;
            const Vec3 d = points[j] - points[i];
            if (dot(d, d) <= r2) sets.unite(i, j);
          }
        }
      }
    }
  }

  // Roots are the smallest member, so walking indices in order yields
  // clusters ordered by smallest member with ascending contents.
  std::unordered_map<std::size_t, std::size_t> slot;
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = sets.find(i);
    auto [it, inserted] = slot.try_emplace(root, groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(i);
  }
  std::vector<std::vector<std::size_t>> out;
  for (auto& g : groups) {
    if (g.size() >= min_cluster_size) out.push_back(std::move(g));
  }
  return out;
}

BoundingBox3D fit_box(std::span<const Vec3> points) {
  BoundingBox3D box;
  if (points.empty()) {
    box.length = box.width = box.height = kMinFittedDim;
    return box;
  }
  double mx = 0.0;
  double my = 0.0;
  for (const auto& p : points) {
    mx += p.x;
    my += p.y;
  }
  const double inv_n = 1.0 / static_cast<double>(points.size());
  mx *= inv_n;
  my *= inv_n;
  double cxx = 0.0;
  double cyy = 0.0;
  double cxy = 0.0;
  for (const auto& p : points) {
    const double dx = p.x - mx;
    const double dy = p.y - my;
    cxx += dx * dx;
    cyy += dy * dy;
    cxy += dx * dy;
  }
  cxx *= inv_n;
  cyy *= inv_n;
  cxy *= inv_n;

  double yaw = 0.0;
  if (cxx + cyy > 1e-12) yaw = 0.5 * std::atan2(2.0 * cxy, cxx - cyy);
  if (yaw >= 0.5 * std::numbers::pi) yaw -= std::numbers::pi;
  if (yaw < -0.5 * std::numbers::pi) yaw += std::numbers::pi;

  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  double lo_x = std::numeric_limits<double>::infinity();
  double lo_y = lo_x;
  double lo_z = lo_x;
  double hi_x = -lo_x;
  double hi_y = -lo_x;
  double hi_z = -lo_x;
  for (const auto& p : points) {
    const double u = c * p.x + s * p.y;
    const double v = -s * p.x + c * p.y;
    lo_x = std::min(lo_x, u);
    hi_x = std::max(hi_x, u);
    lo_y = std::min(lo_y, v);
    hi_y = std::max(hi_y, v);
    lo_z = std::min(lo_z, p.z);
    hi_z = std::max(hi_z, p.z);
  }
  const double u_mid = 0.5 * (lo_x + hi_x);
  const double v_mid = 0.5 * (lo_y + hi_y);
  box.yaw = yaw;
  box.center = {c * u_mid - s * v_mid, s * u_mid + c * v_mid, 0.5 * (lo_z + hi_z)};
  box.length = std::max(kMinFittedDim, hi_x - lo_x);
  box.width = std::max(kMinFittedDim, hi_y - lo_y);
  box.height = std::max(kMinFittedDim, hi_z - lo_z);
  box.num_points = static_cast<int>(points.size());
  return box;
}

namespace {

double edge_decay(double value, double lo, double hi, bool decay_low, const DetectorParams& params) {
  if (value < lo || value > hi) return 0.0;
  const double margin = params.edge_margin * (hi - lo);
  if (margin <= 0.0) return 1.0;
  double distance = hi - value;
  if (decay_low) distance = std::min(distance, value - lo);
  return params.edge_factor + (1.0 - params.edge_factor) * std::min(1.0, distance / margin);
}

}  // namespace

double class_fit(const BoundingBox3D& box, const SizeWindow& window, const DetectorParams& params) {
  const double footprint = std::max(box.length, box.width);
  // A window starting at zero has no lower edge to decay toward.
  const double f = edge_decay(footprint, window.footprint_min, window.footprint_max,
                              window.footprint_min > 0.0, params);
  const double h = edge_decay(box.height, window.height_min, window.height_max,
                              window.height_min > 0.0, params);
  return f * h;
}

std::vector<Detection> detect_points(std::span<const Vec3> points, const DetectorParams& params) {
  std::vector<Detection> out;
  if (points.empty()) return out;
  const GroundSplit split =
      remove_ground(points, params.inlier_threshold, params.ransac_iterations, params.seed);
  std::vector<Vec3> objects;
  objects.reserve(split.objects.size());
  for (std::size_t i : split.objects) objects.push_back(points[i]);

  for (const auto& members : cluster(objects, params.cluster_radius, params.min_cluster_size)) {
    std::vector<Vec3> pts;
    pts.reserve(members.size());
    for (std::size_t i : members) pts.push_back(objects[i]);
    BoundingBox3D box = fit_box(pts);
    const double ped = class_fit(box, params.pedestrian, params);
    const double veh = class_fit(box, params.vehicle, params);
    if (ped <= 0.0 && veh <= 0.0) continue;
    box.object_class = veh > ped ? ObjectClass::kVehicle : ObjectClass::kPedestrian;
    box.object_id = static_cast<std::int32_t>(out.size()) + 1;  // per-frame detection number
    const double fit = std::max(ped, veh);
    const double support = std::clamp(static_cast<double>(members.size()) / 100.0, 0.05, 1.0);
    out.push_back({box, std::clamp(support * fit, 0.05, 1.0)});
  }
  return out;
}

std::vector<Detection> detect_frame(const PointCloudFrame& frame, const DetectorParams& params) {
  std::vector<Vec3> points;
  points.reserve(frame.points.size());
  for (const auto& p : frame.points) points.push_back(p.position);
  return detect_points(points, params);
}

}  // namespace elidar
