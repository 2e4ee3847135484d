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
#include <random>
#include <vector>

#include "elidar/raycast.hpp"
#include "oracles/oracles.hpp"
#include "support/test_support.hpp"

namespace elidar {
namespace {

TriangleMesh square(double z, std::int32_t id = 1, double half = 1.0) {
  TriangleMesh m = make_ground(half, z);
  m.tag(id, 0.5);
  return m;
}

TriangleMesh random_triangles(std::mt19937_64& rng, std::size_t count, double extent, double size) {
  TriangleMesh m;
  for (std::size_t i = 0; i < count; ++i) {
    const Vec3 c = testing::random_point(rng, -extent, extent);
    Vec3 a, b, d;
    do {
      a = c + testing::random_point(rng, -size, size);
      b = c + testing::random_point(rng, -size, size);
      d = c + testing::random_point(rng, -size, size);
    } while (triangle_area(a, b, d) <= 1e-6);
    const auto base = static_cast<std::uint32_t>(m.vertices.size());
    m.vertices.insert(m.vertices.end(), {a, b, d});
    m.add_triangle(base, base + 1, base + 2, static_cast<std::int32_t>(i % 37) + 1, 0.5);
  }
  return m;
}

Ray random_ray(std::mt19937_64& rng, double extent) {
  return Ray{testing::random_point(rng, -extent, extent), testing::random_unit(rng), 4.0 * extent};
}

TEST(RayTriangle, DownwardRayHitsGroundAtTen) {
  const Ray r{{0, 0, 10}, {0, 0, -1}, 100.0};
  const auto t = ray_triangle(r, {-1, -1, 0}, {1, -1, 0}, {0, 1, 0});
  ASSERT_TRUE(t.has_value());
  EXPECT_DOUBLE_EQ(*t, 10.0);
}

TEST(RayTriangle, TriangleBehindTheOriginIsMissed) {
  const Ray r{{0, 0, 10}, {0, 0, -1}, 100.0};
  EXPECT_FALSE(ray_triangle(r, {-1, -1, 20}, {1, -1, 20}, {0, 1, 20}).has_value());
}

TEST(RayTriangle, RejectsHitsBelowTheSelfIntersectionEpsilon) {
  const Ray r{{0, 0, 1e-7}, {0, 0, -1}, 100.0};
  EXPECT_FALSE(ray_triangle(r, {-1, -1, 0}, {1, -1, 0}, {0, 1, 0}).has_value());
}

TEST(RayTriangle, AgreesWithPlaneOracleAwayFromEdges) {
  std::mt19937_64 rng(21);
  int hits = 0;
  for (int i = 0; i < 20000; ++i) {
    const Vec3 a = testing::random_point(rng, -1, 1);
    const Vec3 b = testing::random_point(rng, -1, 1);
    const Vec3 c = testing::random_point(rng, -1, 1);
    if (triangle_area(a, b, c) < 1e-3) continue;
    const Ray r{testing::random_point(rng, -3, 3), testing::random_unit(rng), 10.0};
    const auto got = ray_triangle(r, a, b, c);
    const auto inner = oracle::plane_ray_triangle(r, a, b, c, 1e-6);
    const auto outer = oracle::plane_ray_triangle(r, a, b, c, -1e-6);
    if (inner) {
      ASSERT_TRUE(got.has_value());
      EXPECT_NEAR(*got, *inner, 1e-9);
      ++hits;
    }
    if (!outer) {
      EXPECT_FALSE(got.has_value());
    }
  }
  EXPECT_GT(hits, 50);
}

TEST(SpatialIndex, SharedEdgeGrazeReportsOneHitOnTheLowerTriangle) {
  // Two triangles sharing the edge x = 0 on z = 0.
  TriangleMesh m;
  m.vertices = {{0, -1, 0}, {0, 1, 0}, {-1, 0, 0}, {1, 0, 0}};
  m.add_triangle(0, 1, 2, 7, 0.5);
  m.add_triangle(1, 0, 3, 8, 0.5);
  const SpatialIndex idx(m);
  const Ray r{{0, 0.25, 5}, {0, 0, -1}, 10.0};
  // Both triangles individually accept the ray.
  EXPECT_TRUE(ray_triangle(r, m.vertices[0], m.vertices[1], m.vertices[2]).has_value());
  EXPECT_TRUE(ray_triangle(r, m.vertices[1], m.vertices[0], m.vertices[3]).has_value());
  const auto hit = idx.intersect_nearest(r);
  ASSERT_TRUE(hit.has_value());
  EXPECT_EQ(hit->triangle, 0u);
  EXPECT_EQ(hit->object_id, 7);
  const auto oracle_hit = oracle::brute_force_nearest(idx, r);
  ASSERT_TRUE(oracle_hit.has_value());
  EXPECT_EQ(oracle_hit->triangle, hit->triangle);
}

TEST(SpatialIndex, EmptyGeometryMissesEverything) {
  const SpatialIndex idx{TriangleMesh{}};
  EXPECT_EQ(idx.triangle_count(), 0u);
  EXPECT_FALSE(idx.intersect_nearest(Ray{{0, 0, 0}, {0, 0, 1}, 10}).has_value());
  EXPECT_TRUE(idx.check_structure());
}

TEST(SpatialIndex, SingleTriangleEqualsRayTriangle) {
  std::mt19937_64 rng(22);
  const TriangleMesh m = random_triangles(rng, 1, 0.5, 1.0);
  const SpatialIndex idx(m);
  for (int i = 0; i < 2000; ++i) {
    const Ray r = random_ray(rng, 2.0);
    const auto a = ray_triangle(r, m.vertices[0], m.vertices[1], m.vertices[2]);
    const auto b = idx.intersect_nearest(r);
    ASSERT_EQ(a.has_value(), b.has_value());
    if (a) {
      EXPECT_EQ(*a, b->t);
    }
  }
}

TEST(SpatialIndex, RandomSceneMatchesBruteForce) {
  std::mt19937_64 rng(23);
  const TriangleMesh m = random_triangles(rng, 10000, 20.0, 1.5);
  const SpatialIndex idx(m);
  ASSERT_TRUE(idx.check_structure());
  int hits = 0;
  for (int i = 0; i < 1000; ++i) {
    const Ray r = random_ray(rng, 20.0);
    const auto want = oracle::brute_force_nearest(idx, r);
    const auto got = idx.intersect_nearest(r);
    ASSERT_EQ(want.has_value(), got.has_value()) << "ray " << i;
    if (!want) continue;
    ++hits;
    EXPECT_NEAR(got->t, want->t, 1e-9);
    EXPECT_EQ(got->triangle, want->triangle);
    EXPECT_EQ(got->object_id, idx.object_id(want->triangle));
  }
  EXPECT_GT(hits, 300);
}

TEST(SpatialIndex, NearerOfTwoParallelWallsWins) {
  const TriangleMesh top = square(0.0, 1);
  const TriangleMesh bottom = square(-5.0, 2);
  const std::vector<const TriangleMesh*> meshes{&bottom, &top};
  const SpatialIndex idx(meshes);
  const auto hit = idx.intersect_nearest(Ray{{0.1, 0.2, 10}, {0, 0, -1}, 100});
  ASSERT_TRUE(hit.has_value());
  EXPECT_DOUBLE_EQ(hit->t, 10.0);
  EXPECT_EQ(hit->object_id, 1);
}

TEST(SpatialIndex, RangeGateDropsFarWalls) {
  const SpatialIndex idx(square(-10.0));
  EXPECT_FALSE(idx.intersect_nearest(Ray{{0, 0, 0}, {0, 0, -1}, 5.0}).has_value());
  EXPECT_TRUE(idx.intersect_nearest(Ray{{0, 0, 0}, {0, 0, -1}, 10.0}).has_value());
}

TEST(SpatialIndex, HitNormalFacesTheRayAndPointIsReconstructed) {
  std::mt19937_64 rng(24);
  const TriangleMesh m = random_triangles(rng, 3000, 10.0, 1.5);
  const SpatialIndex idx(m);
  int hits = 0;
  for (int i = 0; i < 3000; ++i) {
    const Ray r = random_ray(rng, 10.0);
    const auto h = idx.intersect_nearest(r);
    if (!h) continue;
    ++hits;
    EXPECT_LT(dot(h->normal, r.direction), 0.0);
    EXPECT_NEAR(norm(h->normal), 1.0, 1e-12);
    EXPECT_LT(norm(h->point - (r.origin + h->t * r.direction)), 1e-9);
    EXPECT_GT(h->t, 0.0);
    EXPECT_LE(h->t, r.max_range);
  }
  EXPECT_GT(hits, 100);
}

TEST(SpatialIndex, AxisAlignedRaysTraverseCorrectly) {
  std::mt19937_64 rng(25);
  const TriangleMesh m = random_triangles(rng, 2000, 5.0, 1.0);
  const SpatialIndex idx(m);
  const Vec3 dirs[] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  for (int i = 0; i < 600; ++i) {
    const Ray r{testing::random_point(rng, -6, 6), dirs[i % 6], 30.0};
    const auto want = oracle::brute_force_nearest(idx, r);
    const auto got = idx.intersect_nearest(r);
    ASSERT_EQ(want.has_value(), got.has_value());
    if (want) {
      EXPECT_EQ(got->triangle, want->triangle);
    }
  }
}

TEST(SpatialIndex, MergedOrderFollowsMeshOrder) {
  const TriangleMesh a = square(0.0, 4);
  const TriangleMesh b = square(1.0, 9);
  const std::vector<const TriangleMesh*> meshes{&a, &b};
  const SpatialIndex idx(meshes);
  ASSERT_EQ(idx.triangle_count(), 4u);
  EXPECT_EQ(idx.object_id(0), 4);
  EXPECT_EQ(idx.object_id(3), 9);
}

TEST(CastRays, ParallelKernelMatchesSerial) {
  std::mt19937_64 rng(26);
  const TriangleMesh m = random_triangles(rng, 5000, 10.0, 1.5);
  const SpatialIndex idx(m);
  std::vector<Ray> rays;
  for (int i = 0; i < 5000; ++i) rays.push_back(random_ray(rng, 10.0));
  const auto a = cast_rays(idx, rays);
  const auto b = cast_rays_serial(idx, rays);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i].has_value(), b[i].has_value());
    if (a[i]) {
      EXPECT_EQ(a[i]->t, b[i]->t);
      EXPECT_EQ(a[i]->triangle, b[i]->triangle);
    }
  }
}

}  // namespace
}  // namespace elidar
