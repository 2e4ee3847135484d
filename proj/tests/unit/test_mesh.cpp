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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "elidar/errors.hpp"
#include "elidar/mesh.hpp"

namespace elidar {
namespace {

// Divergence theorem; positive for outward-facing closed surfaces.
double signed_volume(const TriangleMesh& m) {
  double v = 0.0;
  for (const auto& t : m.triangles) {
    v += dot(m.vertices[t[0]], cross(m.vertices[t[1]], m.vertices[t[2]])) / 6.0;
  }
  return v;
}

TEST(Mesh, BoxIsClosedOutwardAndExact) {
  TriangleMesh b = make_box({1, 2, 3}, {4, 6, 8});
  b.tag(5, 0.5);
  EXPECT_EQ(b.triangle_count(), 12u);
  EXPECT_NEAR(signed_volume(b), 3.0 * 4.0 * 5.0, 1e-9);
  b.validate();
}

TEST(Mesh, SphereApproximatesVolumeAndKeepsExactPoles) {
  TriangleMesh s = make_sphere({0, 0, 1}, 0.5, 12, 24);
  s.tag(1, 0.5);
  s.validate();
  const double exact = 4.0 / 3.0 * std::numbers::pi * 0.125;
  EXPECT_GT(signed_volume(s), 0.9 * exact);
  EXPECT_LT(signed_volume(s), exact);
  double top = -1e9;
  for (const auto& v : s.vertices) top = std::max(top, v.z);
  EXPECT_DOUBLE_EQ(top, 1.5);
}

TEST(Mesh, CapsuleAndSlantedCylinderAreOutward) {
  TriangleMesh c = make_capsule({0, 0, 0.5}, {0, 0, 1.5}, 0.2, 6, 12);
  c.tag(1, 0.5);
  c.validate();
  const double cap = std::numbers::pi * 0.04 * 1.0 + 4.0 / 3.0 * std::numbers::pi * 0.008;
  EXPECT_GT(signed_volume(c), 0.85 * cap);
  EXPECT_LT(signed_volume(c), cap);

  TriangleMesh y = make_slanted_cylinder({0.3, 0, 0}, {0, 0, 1}, 0.1, 16);
  y.tag(1, 0.5);
  y.validate();
  double zmin = 1e9, zmax = -1e9;
  for (const auto& v : y.vertices) {
    zmin = std::min(zmin, v.z);
    zmax = std::max(zmax, v.z);
  }
  EXPECT_DOUBLE_EQ(zmin, 0.0);
  EXPECT_DOUBLE_EQ(zmax, 1.0);
  // Shear preserves volume: base area times height.
  const double prism = 0.5 * 16 * 0.01 * std::sin(2 * std::numbers::pi / 16);
  EXPECT_NEAR(signed_volume(y), prism, 1e-9);
}

TEST(Mesh, AppendRebasesIndicesAndTransformMovesVertices) {
  TriangleMesh a = make_ground(1.0);
  a.tag(kGroundId, 0.2);
  TriangleMesh b = make_box({0, 0, 0}, {1, 1, 1});
  b.tag(3, 0.7);
  const std::size_t base = a.vertices.size();
  a.append(b);
  EXPECT_EQ(a.triangle_count(), 14u);
  EXPECT_EQ(a.triangles[2][0], b.triangles[0][0] + base);
  EXPECT_EQ(a.object_ids[13], 3);
  a.validate();
  a.transform(std::numbers::pi / 2, {10, 0, 0});
  EXPECT_NEAR(a.vertices[base + 0].x, 10.0 - b.vertices[0].y, 1e-12);
}

TEST(Mesh, ValidateRejectsBrokenMeshes) {
  TriangleMesh m = make_box({0, 0, 0}, {1, 1, 1});
  m.tag(1, 0.5);
  m.validate();

  TriangleMesh short_attrs = m;
  short_attrs.object_ids.pop_back();
  EXPECT_THROW(short_attrs.validate(), ValidationError);

  TriangleMesh bad_index = m;
  bad_index.triangles[0][1] = 99;
  EXPECT_THROW(bad_index.validate(), ValidationError);

  TriangleMesh degenerate = m;
  degenerate.vertices.push_back({0, 0, 0});
  degenerate.vertices.push_back({1e-7, 0, 0});
  degenerate.vertices.push_back({0, 1e-7, 0});
  const auto n = static_cast<std::uint32_t>(degenerate.vertices.size());
  degenerate.add_triangle(n - 3, n - 2, n - 1, 1, 0.5);
  EXPECT_THROW(degenerate.validate(), ValidationError);

  TriangleMesh nan = m;
  nan.vertices[0].x = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(nan.validate(), ValidationError);

  TriangleMesh rho = m;
  rho.reflectivity[0] = 1.5;
  EXPECT_THROW(rho.validate(), ValidationError);
}

}  // namespace
}  // namespace elidar
