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

#ifndef ELIDAR_RAYCAST_HPP_
#define ELIDAR_RAYCAST_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "elidar/geometry.hpp"
#include "elidar/mesh.hpp"

namespace elidar {

struct Ray {
  Vec3 origin;
  Vec3 direction;  // unit length
  double max_range = 1.0;
};

struct Hit {
  double t = 0.0;
  Vec3 point;
  Vec3 normal;  // unit, normal . direction < 0
  std::int32_t object_id = 0;
  double reflectivity = 0.0;
  std::uint32_t triangle = 0;  // index into the merged triangle list
};

// Hits closer than this are rejected to avoid re-hitting the surface a ray
// starts on.
inline constexpr double kMinHitDistance = 1e-6;

// Moller-Trumbore. Returns t in [kMinHitDistance, max_range] or nothing.
// Barycentric bounds are inclusive, so a ray through a shared edge hits both
// neighbours; nearest-hit selection collapses them to the lower index.
std::optional<double> ray_triangle(const Ray& ray, const Vec3& a, const Vec3& b, const Vec3& c);

struct Aabb {
  Vec3 lo{1e300, 1e300, 1e300};
  Vec3 hi{-1e300, -1e300, -1e300};

  void extend(const Vec3& p);
  void extend(const Aabb& b);
  bool contains(const Vec3& p) const;
  int longest_axis() const;
};

// Bounding-volume hierarchy over the merged triangles of one frame.
//
// Built by median split on the longest axis of the centroid bounds, leaves
// hold at most four triangles. Immutable after construction; queries are
// safe from any number of threads.
class SpatialIndex {
 public:
  static constexpr int kMaxLeafSize = 4;

  SpatialIndex() = default;
  explicit SpatialIndex(std::span<const TriangleMesh* const> meshes);
  explicit SpatialIndex(const TriangleMesh& mesh);

  // Nearest hit; equal t resolves to the lowest merged triangle index.
  std::optional<Hit> intersect_nearest(const Ray& ray) const;

  std::size_t triangle_count() const { return vertices_.size(); }
  std::size_t node_count() const { return nodes_.size(); }

  // Merged triangle `i` in input order.
  const std::array<Vec3, 3>& triangle(std::size_t i) const { return vertices_[i]; }
  std::int32_t object_id(std::size_t i) const { return object_ids_[i]; }
  double reflectivity(std::size_t i) const { return reflectivity_[i]; }

  // Every triangle appears in exactly one leaf and every node box contains
  // its subtree. Used by tests.
  bool check_structure() const;

  // Builds the Hit record for merged triangle `tri` at distance `t`.
  Hit make_hit(const Ray& ray, double t, std::uint32_t tri) const;

 private:
  struct Node {
    Aabb box;
    std::uint32_t first = 0;  // leaf: offset into order_; inner: right child
    std::uint16_t count = 0;  // > 0 for leaves
    std::uint8_t axis = 0;
  };

  void build();
  std::uint32_t build_node(std::uint32_t begin, std::uint32_t end, std::vector<Vec3>& centroids);

  std::vector<std::array<Vec3, 3>> vertices_;
  std::vector<std::int32_t> object_ids_;
  std::vector<double> reflectivity_;
  std::vector<std::uint32_t> order_;  // triangle ids in leaf order
  std::vector<Node> nodes_;           // depth-first, left child at index + 1
};

// Batch kernels. Results are in ray order; both produce identical output.
std::vector<std::optional<Hit>> cast_rays(const SpatialIndex& index, std::span<const Ray> rays);
std::vector<std::optional<Hit>> cast_rays_serial(const SpatialIndex& index,
                                                 std::span<const Ray> rays);

}  // namespace elidar

#endif  // ELIDAR_RAYCAST_HPP_
