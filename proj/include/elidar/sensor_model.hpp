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

#ifndef ELIDAR_SENSOR_MODEL_HPP_
#define ELIDAR_SENSOR_MODEL_HPP_

#include <cstdint>
#include <vector>

#include "elidar/geometry.hpp"

namespace elidar {

// A spinning LiDAR on fixed infrastructure.
//
// Beam directions are built in the sensor frame as
// (cos e cos a, cos e sin a, sin e) for elevation e and azimuth a, then
// pitched (positive pitch tilts the sensor x axis toward +z) and yawed about
// +z into the world frame.
struct SensorModel {
  std::int32_t sensor_id = 0;
  Vec3 position{0.0, 0.0, 5.0};
  double yaw = 0.0;    // radians
  double pitch = 0.0;  // radians
  std::vector<double> channels;  // elevation angles, radians, strictly ascending
  int azimuth_steps = 1024;
  double max_range = 120.0;         // meters
  double range_noise_sigma = 0.02;  // meters, along the beam
  double dropout_prob = 0.02;
  int intensity_exponent = 0;  // 0: no distance attenuation, 2: inverse square

  std::size_t ray_count() const { return channels.size() * static_cast<std::size_t>(azimuth_steps); }
};

// `count` elevations spread uniformly over [min_deg, max_deg].
std::vector<double> uniform_channels(int count, double min_deg, double max_deg);

// 64 channels over [-45, 0] degrees, 1024 azimuth steps, 120 m range,
// 2 cm range noise, 2 % dropout, no distance attenuation.
SensorModel default_sensor(std::int32_t sensor_id, const Vec3& position);

// Throws ValidationError when an invariant does not hold.
void validate(const SensorModel& sensor);

}  // namespace elidar

#endif  // ELIDAR_SENSOR_MODEL_HPP_
