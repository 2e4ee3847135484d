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
#include <numbers>
#include <vector>

#include "elidar/sensor.hpp"
#include "support/test_support.hpp"

namespace elidar {
namespace {

using std::numbers::pi;

SceneConfig ground_scene(double rho) {
  SceneConfig s;
  s.duration = 1.0;
  s.frame_rate = 1.0;
  s.ground_reflectivity = rho;
  return s;
}

SpatialIndex static_index(const SceneConfig& s) {
  const FrameGeometry g = geometry_at(s, 0);
  return SpatialIndex(g.meshes());
}

TEST(GenerateRays, CountIsChannelsTimesSteps) {
  const SensorModel s = default_sensor(1, {0, 0, 5});
  EXPECT_EQ(generate_rays(s).size(), 65536u);
}

TEST(GenerateRays, QuarterTurnsOnTheHorizon) {
  SensorModel s = testing::quiet_sensor(1, {0, 0, 0}, 1, 0, 0, 4);
  s.channels = {0.0};
  const auto rays = generate_rays(s);
  ASSERT_EQ(rays.size(), 4u);
  const Vec3 want[] = {{1, 0, 0}, {0, 1, 0}, {-1, 0, 0}, {0, -1, 0}};
  for (int i = 0; i < 4; ++i) {
    EXPECT_LT(norm(rays[i].direction - want[i]), 1e-12);
  }
}

TEST(GenerateRays, StraightDownChannelIgnoresAzimuth) {
  SensorModel s = testing::quiet_sensor(1, {3, 4, 5}, 1, 0, 0, 16);
  s.channels = {-pi / 2};
  for (const auto& r : generate_rays(s)) {
    EXPECT_LT(norm(r.direction - Vec3{0, 0, -1}), 1e-12);
    EXPECT_EQ(r.origin, (Vec3{3, 4, 5}));
    EXPECT_EQ(r.max_range, s.max_range);
  }
}

TEST(GenerateRays, ChannelMajorOrderAndMountRotation) {
  SensorModel s = testing::quiet_sensor(1, {0, 0, 0}, 3, -10, 10, 8);
  s.yaw = pi / 2;
  const auto rays = generate_rays(s);
  for (int c = 0; c < 3; ++c) {
    for (int a = 0; a < 8; ++a) {
      const double e = s.channels[c];
      const double al = 2 * pi * a / 8 + pi / 2;
      const Vec3 want{std::cos(e) * std::cos(al), std::cos(e) * std::sin(al), std::sin(e)};
      EXPECT_LT(norm(rays[c * 8 + a].direction - want), 1e-12);
      EXPECT_NEAR(norm(rays[c * 8 + a].direction), 1.0, 1e-12);
    }
  }
  SensorModel tilted = testing::quiet_sensor(1, {0, 0, 0}, 1, 0, 0, 1);
  tilted.channels = {0.0};
  tilted.pitch = pi / 6;
  const auto up = generate_rays(tilted);
  EXPECT_LT(norm(up[0].direction - Vec3{std::cos(pi / 6), 0, std::sin(pi / 6)}), 1e-12);
}

TEST(BeamIntensity, ModelAndClipping) {
  EXPECT_DOUBLE_EQ(beam_intensity(0.8, 1.0, 7.0, 0), 0.8);
  EXPECT_NEAR(beam_intensity(1.0, 0.5, 3.0, 0), 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(beam_intensity(1.0, -0.3, 3.0, 0), 0.0);
  EXPECT_NEAR(beam_intensity(0.9, 1.0, 3.0, 2), 0.1, 1e-15);
  EXPECT_DOUBLE_EQ(beam_intensity(1.0, 1.0, 0.5, 2), 1.0);
  double prev = 2.0;
  for (double ang = 0.0; ang <= pi / 2; ang += 0.01) {
    const double v = beam_intensity(0.7, std::cos(ang), 12.0, 0);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    EXPECT_LE(v, prev);
    prev = v;
  }
}

TEST(SimulateFrame, NormalIncidenceGivesReflectivityAtTheExactPoint) {
  const SceneConfig scene = ground_scene(0.8);
  const SpatialIndex idx = static_index(scene);
  SensorModel s = testing::quiet_sensor(1, {0, 0, 10}, 1, 0, 0, 1);
  s.channels = {-pi / 2};
  const PointCloudFrame f = simulate_frame(idx, std::span(&s, 1), 0, 10.0, 1);
  ASSERT_EQ(f.points.size(), 1u);
  EXPECT_DOUBLE_EQ(f.points[0].intensity, 0.8);
  EXPECT_LT(norm(f.points[0].position), 1e-12);
  EXPECT_EQ(f.points[0].object_id, kGroundId);
  EXPECT_EQ(f.points[0].sensor_id, 1);
}

TEST(SimulateFrame, SixtyDegreeIncidenceHalvesIntensity) {
  const SceneConfig scene = ground_scene(1.0);
  const SpatialIndex idx = static_index(scene);
  SensorModel s = testing::quiet_sensor(1, {0, 0, 10}, 1, 0, 0, 1);
  s.channels = {-pi / 6};  // 30 degrees below the horizon, 60 from the normal
  const PointCloudFrame f = simulate_frame(idx, std::span(&s, 1), 0, 10.0, 1);
  ASSERT_EQ(f.points.size(), 1u);
  EXPECT_NEAR(f.points[0].intensity, 0.5, 1e-12);
}

TEST(SimulateFrame, FullDropoutGivesAnEmptyFrame) {
  const SceneConfig scene = ground_scene(0.5);
  const SpatialIndex idx = static_index(scene);
  SensorModel s = testing::quiet_sensor(1, {0, 0, 5}, 16, -45, -10, 64);
  s.dropout_prob = 1.0;
  EXPECT_TRUE(simulate_frame(idx, std::span(&s, 1), 0, 10.0, 1).points.empty());
}

TEST(SimulateFrame, AllHitGeometryWithoutDropoutEmitsEveryRay) {
  const SceneConfig scene = ground_scene(0.5);
  const SpatialIndex idx = static_index(scene);
  SensorModel s = testing::quiet_sensor(2, {0, 0, 5}, 16, -45, -10, 64);
  s.range_noise_sigma = 0.02;
  const PointCloudFrame f = simulate_frame(idx, std::span(&s, 1), 3, 10.0, 1);
  EXPECT_EQ(f.points.size(), s.ray_count());
  EXPECT_DOUBLE_EQ(f.timestamp, 0.3);
  EXPECT_EQ(f.frame_index, 3);
}

TEST(SimulateFrame, DropoutAndNoiseFollowTheirParameters) {
  const SceneConfig scene = ground_scene(0.5);
  const SpatialIndex idx = static_index(scene);
  SensorModel s = testing::quiet_sensor(1, {0, 0, 5}, 32, -45, -10, 512);
  s.channels.assign(32, 0.0);
  for (int c = 0; c < 32; ++c) s.channels[c] = -pi / 2 + 0.001 * c;
  s.dropout_prob = 0.1;
  s.range_noise_sigma = 0.05;
  const PointCloudFrame f = simulate_frame(idx, std::span(&s, 1), 0, 10.0, 99);
  const double kept = static_cast<double>(f.points.size()) / static_cast<double>(s.ray_count());
  EXPECT_NEAR(kept, 0.9, 0.01);
  // Near-vertical beams: the z error is almost exactly the range error.
  double sum = 0.0, sum2 = 0.0;
  for (const auto& p : f.points) {
    sum += p.position.z;
    sum2 += p.position.z * p.position.z;
  }
  const double n = static_cast<double>(f.points.size());
  const double mean = sum / n;
  EXPECT_NEAR(mean, 0.0, 0.003);
  EXPECT_NEAR(std::sqrt(sum2 / n - mean * mean), 0.05, 0.003);
}

TEST(SimulateFrame, NoiselessPointsLieOnTheRecastSurface) {
  const SceneConfig aux = parse_scene(testing::slurp(testing::repo_data("demo_scene.cfg")));
  SceneConfig scene = aux;
  for (auto& s : scene.sensors) {
    s.range_noise_sigma = 0.0;
    s.azimuth_steps = 256;
  }
  const FrameGeometry g = geometry_at(scene, 20);
  const SpatialIndex idx(g.meshes());
  const PointCloudFrame f = simulate_frame(idx, scene.sensors, 20, scene.frame_rate, scene.seed);
  ASSERT_FALSE(f.points.empty());
  std::vector<std::vector<Ray>> rays;
  for (const auto& s : scene.sensors) rays.push_back(generate_rays(s));
  for (std::size_t i = 0; i < f.points.size(); i += 7) {
    const PointRecord& p = f.points[i];
    const std::size_t si = p.sensor_id == scene.sensors[0].sensor_id ? 0 : 1;
    const Ray& r = rays[si][static_cast<std::size_t>(p.channel) * 256 + p.azimuth];
    const auto h = idx.intersect_nearest(r);
    ASSERT_TRUE(h.has_value());
    EXPECT_LT(norm(h->point - p.position), 1e-9);
    EXPECT_EQ(h->object_id, p.object_id);
  }
}

TEST(SimulateFrame, ParallelMatchesSerialBitForBit) {
  const SceneConfig scene = parse_scene(testing::slurp(testing::repo_data("demo_scene.cfg")));
  const FrameGeometry g = geometry_at(scene, 50);
  const SpatialIndex idx(g.meshes());
  std::vector<SensorModel> sensors = scene.sensors;
  for (auto& s : sensors) s.azimuth_steps = 256;
  const PointCloudFrame a = simulate_frame(idx, sensors, 50, scene.frame_rate, scene.seed);
  const PointCloudFrame b = simulate_frame_serial(idx, sensors, 50, scene.frame_rate, scene.seed);
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    EXPECT_EQ(a.points[i].position, b.points[i].position);
    EXPECT_EQ(a.points[i].intensity, b.points[i].intensity);
    EXPECT_EQ(a.points[i].object_id, b.points[i].object_id);
    EXPECT_EQ(a.points[i].channel, b.points[i].channel);
    EXPECT_EQ(a.points[i].azimuth, b.points[i].azimuth);
  }
}

TEST(SimulateFrame, AddingGeometryNeverLengthensAHit) {
  std::mt19937_64 rng(31);
  SceneConfig scene = ground_scene(0.5);
  const FrameGeometry base = geometry_at(scene, 0);
  const SpatialIndex before(base.meshes());
  TriangleMesh extra;
  for (int i = 0; i < 20; ++i) {
    const Vec3 lo = testing::random_point(rng, -10, 10);
    extra.append(make_box({lo.x, lo.y, 0.0}, {lo.x + 1, lo.y + 1, 2.0}));
  }
  extra.tag(5, 0.5);
  std::vector<const TriangleMesh*> meshes = base.meshes();
  meshes.push_back(&extra);
  const SpatialIndex after(meshes);
  const SensorModel s = testing::quiet_sensor(1, {0, 0, 5}, 16, -45, 0, 128);
  for (const auto& r : generate_rays(s)) {
    const auto a = before.intersect_nearest(r);
    const auto b = after.intersect_nearest(r);
    if (a) {
      ASSERT_TRUE(b.has_value());
      EXPECT_LE(b->t, a->t);
    }
  }
}

SceneConfig small_ground_scene(double sigma, double dropout) {
  SceneConfig s = ground_scene(0.4);
  s.duration = 10.0;
  s.frame_rate = 10.0;
  SensorModel m = testing::quiet_sensor(1, {0, 0, 5}, 8, -45, -5, 64);
  m.range_noise_sigma = sigma;
  m.dropout_prob = dropout;
  s.sensors.push_back(m);
  return s;
}

TEST(SimulateScene, TenSecondsAtTenHertzGivesHundredFrames) {
  const auto frames = simulate_scene(small_ground_scene(0.02, 0.02));
  ASSERT_EQ(frames.size(), 100u);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    EXPECT_EQ(frames[i].frame_index, static_cast<int>(i));
    EXPECT_DOUBLE_EQ(frames[i].timestamp, static_cast<double>(i) / 10.0);
  }
}

bool same_points(const PointCloudFrame& a, const PointCloudFrame& b) {
  if (a.points.size() != b.points.size()) return false;
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    if (!(a.points[i].position == b.points[i].position) ||
        a.points[i].intensity != b.points[i].intensity) {
      return false;
    }
  }
  return true;
}

TEST(SimulateScene, StaticNoiselessSceneRepeatsEveryFrame) {
  const auto frames = simulate_scene(small_ground_scene(0.0, 0.0));
  for (const auto& f : frames) {
    EXPECT_TRUE(same_points(f, frames[0]));
  }
}

TEST(SimulateScene, NoiseDrawsDifferBetweenFrames) {
  const auto frames = simulate_scene(small_ground_scene(0.02, 0.0));
  EXPECT_FALSE(same_points(frames[0], frames[1]));
}

TEST(SimulateScene, ResultIsIndependentOfTheSchedule) {
  SceneConfig scene = parse_scene(testing::slurp(testing::repo_data("demo_scene.cfg")));
  scene.duration = 1.0;
  for (auto& s : scene.sensors) s.azimuth_steps = 128;
  const auto a = simulate_scene(scene, 1);
  const auto b = simulate_scene(scene, 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_TRUE(same_points(a[i], b[i]));
    EXPECT_LE(a[i].points.size(), 2u * 64u * 128u);
    for (const auto& p : a[i].points) {
      EXPECT_GE(p.intensity, 0.0);
      EXPECT_LE(p.intensity, 1.0);
      EXPECT_TRUE(is_finite(p.position));
    }
  }
}

}  // namespace
}  // namespace elidar
