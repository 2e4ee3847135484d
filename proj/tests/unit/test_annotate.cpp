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
#include <map>
#include <numbers>

#include "elidar/annotate.hpp"
#include "elidar/errors.hpp"
#include "elidar/sensor.hpp"
#include "support/test_support.hpp"

namespace elidar {
namespace {

using std::numbers::pi;

TEST(PointInBox, CenterIsInside) {
  const auto b = testing::make_box(ObjectClass::kVehicle, {1, 2, 3}, 4, 2, 1, 0.3);
  EXPECT_TRUE(point_in_box({1, 2, 3}, b));
}

TEST(PointInBox, FacesBelongToTheClosedBox) {
  const auto b = testing::make_box(ObjectClass::kVehicle, {0, 0, 0}, 4, 2, 1, 0.0);
  EXPECT_TRUE(point_in_box({2, 0, 0}, b, 0.0));
  EXPECT_TRUE(point_in_box({0, -1, 0.5}, b, 0.0));
  EXPECT_FALSE(point_in_box({2.001, 0, 0}, b, 0.0));
  EXPECT_TRUE(point_in_box({2.001, 0, 0}, b, 0.01));
}

TEST(PointInBox, QuarterTurnMovesTheLengthAxisOntoY) {
  const auto b = testing::make_box(ObjectClass::kVehicle, {0, 0, 0}, 1, 0.2, 1, pi / 2);
  EXPECT_TRUE(point_in_box({0, 0.4, 0}, b));
  EXPECT_FALSE(point_in_box({0.4, 0, 0}, b));
}

SceneConfig lit_scene(Subtype subtype, const Vec3& position, double yaw) {
  SceneConfig s = testing::single_object_scene(subtype, position, yaw);
  s.sensors.push_back(testing::quiet_sensor(1, {-12, -9, 5}, 64, -45, 0, 1024));
  s.sensors.push_back(testing::quiet_sensor(2, {12, 9, 5}, 64, -45, 0, 1024));
  return s;
}

std::map<std::int32_t, int> count_ids(const PointCloudFrame& f) {
  std::map<std::int32_t, int> c;
  for (const auto& p : f.points) ++c[p.object_id];
  return c;
}

TEST(AnnotateFrame, UnseenObjectGetsNoBox) {
  SceneConfig s = lit_scene(Subtype::kCar, {300, 0, 0}, 0.0);
  const auto frames = simulate_scene(s);
  EXPECT_EQ(count_ids(frames[0])[1], 0);
  EXPECT_TRUE(annotate_frame(s, 0, frames[0], 5).empty());
}

TEST(AnnotateFrame, StaticCarBoxHasCompoundExtents) {
  const SceneConfig s = lit_scene(Subtype::kCar, {2, 1, 0}, 0.4);
  const auto frames = simulate_scene(s);
  const auto boxes = annotate_frame(s, 0, frames[0]);
  ASSERT_EQ(boxes.size(), 1u);
  const Dims d = default_dims(Subtype::kCar);
  EXPECT_NEAR(boxes[0].length, d.length, 1e-6);
  EXPECT_NEAR(boxes[0].width, d.width, 1e-6);
  EXPECT_NEAR(boxes[0].height, d.height, 1e-6);
  EXPECT_NEAR(boxes[0].center.x, 2.0, 1e-6);
  EXPECT_NEAR(boxes[0].center.y, 1.0, 1e-6);
  EXPECT_NEAR(boxes[0].center.z, d.height / 2, 1e-6);
  EXPECT_NEAR(boxes[0].yaw, 0.4, 1e-12);
  EXPECT_EQ(boxes[0].object_class, ObjectClass::kVehicle);
  EXPECT_EQ(boxes[0].num_points, count_ids(frames[0])[1]);
}

TEST(AnnotateFrame, MidStridePedestrianBoxBreathesAndContainsItsPoints) {
  SceneConfig s = lit_scene(Subtype::kAdult, {0, 0, 0}, 0.0);
  s.duration = 1.0;
  s.frame_rate = 20.0;
  s.objects[0].gait = kRunningGait;
  const auto frames = simulate_scene(s);
  const Dims d = default_dims(Subtype::kAdult);
  double smallest = 1e9, largest = 0.0;
  for (const auto& f : frames) {
    const auto boxes = annotate_frame(s, f.frame_index, f);
    ASSERT_EQ(boxes.size(), 1u);
    const auto& b = boxes[0];
    EXPECT_NEAR(b.height, d.height, 1e-9);
    smallest = std::min(smallest, b.length * b.width);
    largest = std::max(largest, b.length * b.width);
    for (const auto& p : f.points) {
      if (p.object_id == 1) {
        EXPECT_TRUE(point_in_box(p.position, b, 0.01));
      }
    }
  }
  EXPECT_GT(largest, 1.5 * smallest);
}

TEST(AnnotateFrame, MismatchedFrameIndexIsADataError) {
  const SceneConfig s = lit_scene(Subtype::kCar, {0, 0, 0}, 0.0);
  PointCloudFrame f;
  f.frame_index = 3;
  EXPECT_THROW(annotate_frame(s, 0, f), DataError);
}

class DemoFrames : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    scene_ = new SceneConfig(parse_scene(testing::slurp(testing::repo_data("demo_scene.cfg"))));
    scene_->duration = 2.0;
    for (auto& s : scene_->sensors) s.azimuth_steps = 512;
    noisy_ = new std::vector<PointCloudFrame>(simulate_scene(*scene_, 2));
  }
  static void TearDownTestSuite() {
    delete noisy_;
    delete scene_;
  }
  static SceneConfig* scene_;
  static std::vector<PointCloudFrame>* noisy_;
};
SceneConfig* DemoFrames::scene_ = nullptr;
std::vector<PointCloudFrame>* DemoFrames::noisy_ = nullptr;

TEST_F(DemoFrames, BoxesAreSortedCountedAndNeverReserved) {
  for (const auto& f : *noisy_) {
    const auto boxes = annotate_frame(*scene_, f.frame_index, f);
    const auto counts = count_ids(f);
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      EXPECT_GT(boxes[i].object_id, 0);
      if (i > 0) {
        EXPECT_LT(boxes[i - 1].object_id, boxes[i].object_id);
      }
      EXPECT_EQ(boxes[i].num_points, counts.at(boxes[i].object_id));
      EXPECT_GE(boxes[i].yaw, -pi);
      EXPECT_LT(boxes[i].yaw, pi);
    }
  }
}

TEST_F(DemoFrames, RaisingMinPointsNeverAddsABox) {
  for (const auto& f : *noisy_) {
    std::size_t prev = annotate_frame(*scene_, f.frame_index, f, 0).size();
    for (int m : {1, 5, 20, 100, 1000, 100000}) {
      const std::size_t n = annotate_frame(*scene_, f.frame_index, f, m).size();
      EXPECT_LE(n, prev);
      prev = n;
    }
  }
}

TEST_F(DemoFrames, NoisyPointsStayWithinThreeSigmaOfTheirBox) {
  std::size_t total = 0, inside = 0;
  for (const auto& f : *noisy_) {
    for (const auto& b : annotate_frame(*scene_, f.frame_index, f)) {
      for (const auto& p : f.points) {
        if (p.object_id != b.object_id) continue;
        ++total;
        inside += point_in_box(p.position, b, 0.01 + 3 * 0.02);
      }
    }
  }
  ASSERT_GT(total, 1000u);
  EXPECT_GE(static_cast<double>(inside) / static_cast<double>(total), 0.995);
}

TEST_F(DemoFrames, NoiselessPointsAreAllInsideTheirBox) {
  SceneConfig quiet = *scene_;
  for (auto& s : quiet.sensors) s.range_noise_sigma = 0.0;
  for (const auto& f : simulate_scene(quiet, 2)) {
    const auto boxes = annotate_frame(quiet, f.frame_index, f, 1);
    std::map<std::int32_t, const BoundingBox3D*> by_id;
    for (const auto& b : boxes) by_id[b.object_id] = &b;
    for (const auto& p : f.points) {
      if (p.object_id <= 0) continue;
      ASSERT_TRUE(by_id.count(p.object_id));
      EXPECT_TRUE(point_in_box(p.position, *by_id[p.object_id], 0.01));
    }
  }
}

}  // namespace
}  // namespace elidar
