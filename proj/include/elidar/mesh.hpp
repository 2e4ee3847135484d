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

#ifndef ELIDAR_MESH_HPP_
#define ELIDAR_MESH_HPP_

#include <array>
#include <cstdint>
#include <vector>

#include "elidar/geometry.hpp"

namespace elidar {

// Reserved object ids carried by triangles and points.
inline constexpr std::int32_t kGroundId = 0;
inline constexpr std::int32_t kStaticPropId = -1;
inline constexpr std::int32_t kUnknownId = -2;

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<std::uint32_t, 3>> triangles;
  // Per-triangle attributes, parallel to `triangles`.
  std::vector<std::int32_t> object_ids;
  std::vector<double> reflectivity;

  std::size_t triangle_count() const { return triangles.size(); }
  bool empty() const { return triangles.empty(); }

  // Appends `other`, re-basing its vertex indices.
  void append(const TriangleMesh& other);

  // Adds one triangle over existing vertices.
  void add_triangle(std::uint32_t a, std::uint32_t b, std::uint32_t c, std::int32_t object_id,
                    double rho);

  // Sets every triangle's attributes.
  void tag(std::int32_t object_id, double rho);

  // Applies p -> rotate_z(p, yaw) + offset to every vertex.
  void transform(double yaw, const Vec3& offset);

  // Throws ValidationError on out-of-range indices, attribute size mismatch,
  // non-finite vertices or triangles with area <= 1e-12 m^2.
  void validate() const;
};

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);

// Primitive builders. All produce outward-facing closed surfaces in a local
// frame; callers tag and transform.

// Axis-aligned box spanning [lo, hi].
TriangleMesh make_box(const Vec3& lo, const Vec3& hi);

// UV sphere with poles on the z axis, so the top vertex sits exactly at
// center.z + radius.
TriangleMesh make_sphere(const Vec3& center, double radius, int rings, int segments);

// Capsule whose axis runs along z from `bottom` to `top` (sphere centers).
TriangleMesh make_capsule(const Vec3& bottom, const Vec3& top, double radius, int rings,
                          int segments);

// Cylinder with horizontal circular end caps centered at `top` and `bottom`.
// A non-vertical top-bottom axis gives a sheared cylinder whose cap heights
// stay exact.
TriangleMesh make_slanted_cylinder(const Vec3& bottom, const Vec3& top, double radius,
                                   int segments);

// Square of half-size `half_extent` on z = height, two triangles.
TriangleMesh make_ground(double half_extent, double height = 0.0);

}  // namespace elidar

#endif  // ELIDAR_MESH_HPP_
