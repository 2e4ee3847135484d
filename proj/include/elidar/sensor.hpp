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

#ifndef ELIDAR_SENSOR_HPP_
#define ELIDAR_SENSOR_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "elidar/raycast.hpp"
#include "elidar/scene.hpp"
#include "elidar/sensor_model.hpp"

namespace elidar {

struct PointRecord {
  Vec3 position;  // world frame, range noise applied
  double intensity = 0.0;
  std::int32_t object_id = kUnknownId;
  std::int32_t sensor_id = 0;
  std::int32_t channel = 0;
  std::int32_t azimuth = 0;
};

struct PointCloudFrame {
  int frame_index = 0;
  double timestamp = 0.0;
  std::vector<PointRecord> points;
};

// Channel-major, azimuth-ascending beam pattern of one sensor.
std::vector<Ray> generate_rays(const SensorModel& sensor);

// Return strength for reflectivity `rho`, incidence cosine `cos_incidence`
// and range `t`, clipped to [0, 1].
double beam_intensity(double rho, double cos_incidence, double t, int exponent);

// One sweep of every sensor against `index`. Randomness is keyed by
// (seed, frame_index, sensor_id, ray index). Points are emitted in sensor
// order, then ray order.
PointCloudFrame simulate_frame(const SpatialIndex& index, std::span<const SensorModel> sensors,
                               int frame_index, double frame_rate, std::uint64_t seed);

// Single-threaded reference for simulate_frame; output is identical.
PointCloudFrame simulate_frame_serial(const SpatialIndex& index,
                                      std::span<const SensorModel> sensors, int frame_index,
                                      double frame_rate, std::uint64_t seed);

using FrameCallback =
    std::function<void(const FrameGeometry& geometry, const PointCloudFrame& frame)>;

// Simulates every frame of `scene`, running up to `jobs` frames concurrently.
// `on_frame` may be invoked from several threads at once, in any order.
void for_each_frame(const SceneConfig& scene, int jobs, const FrameCallback& on_frame);

// Collects all frames in index order.
std::vector<PointCloudFrame> simulate_scene(const SceneConfig& scene, int jobs = 1);

}  // namespace elidar

#endif  // ELIDAR_SENSOR_HPP_
