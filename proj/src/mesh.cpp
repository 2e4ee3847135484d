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

#include "elidar/mesh.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "elidar/errors.hpp"

namespace elidar {

void TriangleMesh::append(const TriangleMesh& other) {
  const auto base = static_cast<std::uint32_t>(vertices.size());
  vertices.insert(vertices.end(), other.vertices.begin(), other.vertices.end());
  triangles.reserve(triangles.size() + other.triangles.size());
  for (const auto& t : other.triangles) {
    triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
  }
  object_ids.insert(object_ids.end(), other.object_ids.begin(), other.object_ids.end());
  reflectivity.insert(reflectivity.end(), other.reflectivity.begin(), other.reflectivity.end());
}

void TriangleMesh::add_triangle(std::uint32_t a, std::uint32_t b, std::uint32_t c,
                                std::int32_t object_id, double rho) {
  triangles.push_back({a, b, c});
  object_ids.push_back(object_id);
  reflectivity.push_back(rho);
}

void TriangleMesh::tag(std::int32_t object_id, double rho) {
  object_ids.assign(triangles.size(), object_id);
  reflectivity.assign(triangles.size(), rho);
}

void TriangleMesh::transform(double yaw, const Vec3& offset) {
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  for (auto& v : vertices) {
    v = {c * v.x - s * v.y + offset.x, s * v.x + c * v.y + offset.y, v.z + offset.z};
  }
}

void TriangleMesh::validate() const {
  if (object_ids.size() != triangles.size() || reflectivity.size() != triangles.size()) {
    throw ValidationError("mesh attribute arrays do not match triangle count");
  }
  for (const auto& v : vertices) {
    if (!is_finite(v)) throw ValidationError("mesh has a non-finite vertex");
  }
  for (std::size_t i = 0; i < triangles.size(); ++i) {
    const auto& t = triangles[i];
    for (auto idx : t) {
      if (idx >= vertices.size()) {
        throw ValidationError("triangle " + std::to_string(i) + " has out-of-range vertex index");
      }
    }
    if (triangle_area(vertices[t[0]], vertices[t[1]], vertices[t[2]]) <= 1e-12) {
      throw ValidationError("triangle " + std::to_string(i) + " is degenerate");
    }
    if (!(reflectivity[i] >= 0.0 && reflectivity[i] <= 1.0)) {
      throw ValidationError("triangle " + std::to_string(i) + " reflectivity outside [0,1]");
    }
  }
}

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * norm(cross(b - a, c - a));
}

namespace {

void add_untagged(TriangleMesh& m, std::uint32_t a, std::uint32_t b, std::uint32_t c) {
  m.add_triangle(a, b, c, kUnknownId, 0.0);
}

// Vertical band of `segments` quads between two rings that start at
// `lower` and `upper`.
void stitch_rings(TriangleMesh& m, std::uint32_t lower, std::uint32_t upper, int segments) {
  for (int k = 0; k < segments; ++k) {
    const auto k0 = static_cast<std::uint32_t>(k);
    const auto k1 = static_cast<std::uint32_t>((k + 1) % segments);
    add_untagged(m, lower + k0, lower + k1, upper + k1);
    add_untagged(m, lower + k0, upper + k1, upper + k0);
  }
}

void fan(TriangleMesh& m, std::uint32_t apex, std::uint32_t ring, int segments, bool up) {
  for (int k = 0; k < segments; ++k) {
    const auto k0 = ring + static_cast<std::uint32_t>(k);
    const auto k1 = ring + static_cast<std::uint32_t>((k + 1) % segments);
    if (up) {
      add_untagged(m, k0, k1, apex);
    } else {
      add_untagged(m, k1, k0, apex);
    }
  }
}

void push_ring(TriangleMesh& m, const Vec3& center, double radius, int segments) {
  for (int k = 0; k < segments; ++k) {
    const double a = 2.0 * std::numbers::pi * k / segments;
    m.vertices.push_back({center.x + radius * std::cos(a), center.y + radius * std::sin(a), center.z});
  }
}

}  // namespace

TriangleMesh make_box(const Vec3& lo, const Vec3& hi) {
  TriangleMesh m;
  for (int i = 0; i < 8; ++i) {
    m.vertices.push_back({(i & 1) ? hi.x : lo.x, (i & 2) ? hi.y : lo.y, (i & 4) ? hi.z : lo.z});
  }
  // Outward winding, two triangles per face.
  static constexpr std::uint32_t kFaces[6][4] = {
      {0, 2, 3, 1},  // z-
      {4, 5, 7, 6},  // z+
      {0, 1, 5, 4},  // y-
      {2, 6, 7, 3},  // y+
      {0, 4, 6, 2},  // x-
      {1, 3, 7, 5},  // x+
  };
  for (const auto& f : kFaces) {
    add_untagged(m, f[0], f[1], f[2]);
    add_untagged(m, f[0], f[2], f[3]);
  }
  return m;
}

TriangleMesh make_sphere(const Vec3& center, double radius, int rings, int segments) {
  TriangleMesh m;
  m.vertices.push_back({center.x, center.y, center.z - radius});
  for (int r = 1; r < rings; ++r) {
    const double polar = std::numbers::pi * r / rings;
    push_ring(m, {center.x, center.y, center.z - radius * std::cos(polar)},
              radius * std::sin(polar), segments);
  }
  const auto top = static_cast<std::uint32_t>(m.vertices.size());
  m.vertices.push_back({center.x, center.y, center.z + radius});
  fan(m, 0, 1, segments, false);
  for (int r = 1; r + 1 < rings; ++r) {
    stitch_rings(m, 1 + static_cast<std::uint32_t>((r - 1) * segments),
                 1 + static_cast<std::uint32_t>(r * segments), segments);
  }
  fan(m, top, 1 + static_cast<std::uint32_t>((rings - 2) * segments), segments, true);
  return m;
}

TriangleMesh make_capsule(const Vec3& bottom, const Vec3& top, double radius, int rings,
                          int segments) {
  // `rings` latitude steps per hemisphere, equator ring shared by the body.
  TriangleMesh m;
  m.vertices.push_back({bottom.x, bottom.y, bottom.z - radius});
  for (int r = 1; r <= rings; ++r) {
    const double polar = 0.5 * std::numbers::pi * r / rings;
    push_ring(m, {bottom.x, bottom.y, bottom.z - radius * std::cos(polar)},
              radius * std::sin(polar), segments);
  }
  for (int r = rings; r >= 1; --r) {
    const double polar = 0.5 * std::numbers::pi * r / rings;
    push_ring(m, {top.x, top.y, top.z + radius * std::cos(polar)}, radius * std::sin(polar),
              segments);
  }
  const auto apex = static_cast<std::uint32_t>(m.vertices.size());
  m.vertices.push_back({top.x, top.y, top.z + radius});
  const int ring_count = 2 * rings;
  fan(m, 0, 1, segments, false);
  for (int r = 0; r + 1 < ring_count; ++r) {
    stitch_rings(m, 1 + static_cast<std::uint32_t>(r * segments),
                 1 + static_cast<std::uint32_t>((r + 1) * segments), segments);
  }
  fan(m, apex, 1 + static_cast<std::uint32_t>((ring_count - 1) * segments), segments, true);
  return m;
}

TriangleMesh make_slanted_cylinder(const Vec3& bottom, const Vec3& top, double radius,
                                   int segments) {
  TriangleMesh m;
  m.vertices.push_back(bottom);
  push_ring(m, bottom, radius, segments);
  push_ring(m, top, radius, segments);
  const auto top_center = static_cast<std::uint32_t>(m.vertices.size());
  m.vertices.push_back(top);
  fan(m, 0, 1, segments, false);
  stitch_rings(m, 1, 1 + static_cast<std::uint32_t>(segments), segments);
  fan(m, top_center, 1 + static_cast<std::uint32_t>(segments), segments, true);
  return m;
}

TriangleMesh make_ground(double half_extent, double height) {
  TriangleMesh m;
  m.vertices = {{-half_extent, -half_extent, height},
                {half_extent, -half_extent, height},
                {half_extent, half_extent, height},
                {-half_extent, half_extent, height}};
  add_untagged(m, 0, 1, 2);
  add_untagged(m, 0, 2, 3);
  return m;
}

}  // namespace elidar
