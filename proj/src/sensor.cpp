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

#include "elidar/sensor.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>

#include <omp.h>

#include "elidar/errors.hpp"
#include "elidar/rng.hpp"

namespace elidar {

std::vector<double> uniform_channels(int count, double min_deg, double max_deg) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double deg = count == 1 ? min_deg : min_deg + (max_deg - min_deg) * i / (count - 1);
    out.push_back(deg_to_rad(deg));
  }
  return out;
}

SensorModel default_sensor(std::int32_t sensor_id, const Vec3& position) {
  SensorModel s;
  s.sensor_id = sensor_id;
  s.position = position;
  s.channels = uniform_channels(64, -45.0, 0.0);
  return s;
}

void validate(const SensorModel& s) {
  const std::string tag = "sensor " + std::to_string(s.sensor_id);
  if (s.channels.empty()) throw ValidationError(tag + ": no channels");
  for (std::size_t i = 0; i < s.channels.size(); ++i) {
    if (!std::isfinite(s.channels[i])) throw ValidationError(tag + ": non-finite channel");
    if (i > 0 && !(s.channels[i] > s.channels[i - 1])) {
      throw ValidationError(tag + ": channels must be strictly ascending");
    }
  }
  if (s.azimuth_steps < 1) throw ValidationError(tag + ": azimuth_steps must be >= 1");
  if (!(s.max_range > 0.0)) throw ValidationError(tag + ": max_range must be positive");
  if (!(s.range_noise_sigma >= 0.0)) throw ValidationError(tag + ": range_noise must be >= 0");
  if (!(s.dropout_prob >= 0.0 && s.dropout_prob <= 1.0)) {
    throw ValidationError(tag + ": dropout outside [0,1]");
  }
  if (s.intensity_exponent != 0 && s.intensity_exponent != 2) {
    throw ValidationError(tag + ": intensity_exponent must be 0 or 2");
  }
  if (!is_finite(s.position) || !std::isfinite(s.yaw) || !std::isfinite(s.pitch)) {
    throw ValidationError(tag + ": non-finite mount pose");
  }
}

std::vector<Ray> generate_rays(const SensorModel& sensor) {
  std::vector<Ray> rays;
  rays.reserve(sensor.ray_count());
  const double cp = std::cos(sensor.pitch);
  const double sp = std::sin(sensor.pitch);
  const double cy = std::cos(sensor.yaw);
  const double sy = std::sin(sensor.yaw);
  for (double e : sensor.channels) {
    const double ce = std::cos(e);
    const double se = std::sin(e);
    for (int a = 0; a < sensor.azimuth_steps; ++a) {
      const double az = 2.0 * std::numbers::pi * a / sensor.azimuth_steps;
      const Vec3 local{ce * std::cos(az), ce * std::sin(az), se};
      // Pitch about y (x toward +z), then yaw about z.
      const Vec3 pitched{cp * local.x - sp * local.z, local.y, sp * local.x + cp * local.z};
      const Vec3 world{cy * pitched.x - sy * pitched.y, sy * pitched.x + cy * pitched.y, pitched.z};
      rays.push_back({sensor.position, world, sensor.max_range});
    }
  }
  return rays;
}

double beam_intensity(double rho, double cos_incidence, double t, int exponent) {
  double value = rho * std::max(0.0, cos_incidence);
  if (exponent != 0) value *= std::pow(1.0 / t, exponent);
  return std::clamp(value, 0.0, 1.0);
}

namespace {

std::optional<PointRecord> sample_return(const SpatialIndex& index, const SensorModel& sensor,
                                         const Ray& ray, std::int32_t ray_index, int frame_index,
                                         std::uint64_t seed) {
  const auto hit = index.intersect_nearest(ray);
  if (!hit) return std::nullopt;
  KeyedStream rng(seed, static_cast<std::uint64_t>(frame_index),
                  static_cast<std::uint64_t>(static_cast<std::int64_t>(sensor.sensor_id)),
                  static_cast<std::uint64_t>(ray_index));
  if (rng.uniform() < sensor.dropout_prob) return std::nullopt;
  const double noise = sensor.range_noise_sigma > 0.0 ? sensor.range_noise_sigma * rng.normal() : 0.0;
  PointRecord p;
  p.position = noise == 0.0 ? hit->point : ray.origin + ray.direction * (hit->t + noise);
  p.intensity = beam_intensity(hit->reflectivity, -dot(ray.direction, hit->normal), hit->t,
                               sensor.intensity_exponent);
  p.object_id = hit->object_id;
  p.sensor_id = sensor.sensor_id;
  p.channel = ray_index / sensor.azimuth_steps;
  p.azimuth = ray_index % sensor.azimuth_steps;
  return p;
}

}  // namespace

PointCloudFrame simulate_frame(const SpatialIndex& index, std::span<const SensorModel> sensors,
                               int frame_index, double frame_rate, std::uint64_t seed) {
  PointCloudFrame frame;
  frame.frame_index = frame_index;
  frame.timestamp = frame_index / frame_rate;
  for (const auto& sensor : sensors) {
    const std::vector<Ray> rays = generate_rays(sensor);
    std::vector<std::optional<PointRecord>> slots(rays.size());
    const auto n = static_cast<std::int64_t>(rays.size());
#pragma omp parallel for schedule(dynamic, 512)
    for (std::int64_t k = 0; k < n; ++k) {
      slots[static_cast<std::size_t>(k)] =
          sample_return(index, sensor, rays[static_cast<std::size_t>(k)],
                        static_cast<std::int32_t>(k), frame_index, seed);
    }
    for (auto& s : slots) {
      if (s) frame.points.push_back(*s);
    }
  }
  return frame;
}

PointCloudFrame simulate_frame_serial(const SpatialIndex& index,
                                      std::span<const SensorModel> sensors, int frame_index,
                                      double frame_rate, std::uint64_t seed) {
  PointCloudFrame frame;
  frame.frame_index = frame_index;
  frame.timestamp = frame_index / frame_rate;
  for (const auto& sensor : sensors) {
    const std::vector<Ray> rays = generate_rays(sensor);
    for (std::size_t k = 0; k < rays.size(); ++k) {
      if (auto p = sample_return(index, sensor, rays[k], static_cast<std::int32_t>(k), frame_index,
                                 seed)) {
        frame.points.push_back(*p);
      }
    }
  }
  return frame;
}

void for_each_frame(const SceneConfig& scene, int jobs, const FrameCallback& on_frame) {
  const int frames = scene.frame_count();
  jobs = std::max(1, jobs);
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run_one = [&](int f, bool parallel_rays) {
    const FrameGeometry geometry = geometry_at(scene, f);
    const auto meshes = geometry.meshes();
    const SpatialIndex index(meshes);
    const PointCloudFrame frame =
        parallel_rays ? simulate_frame(index, scene.sensors, f, scene.frame_rate, scene.seed)
                      : simulate_frame_serial(index, scene.sensors, f, scene.frame_rate, scene.seed);
    on_frame(geometry, frame);
  };
  if (jobs == 1) {
    for (int f = 0; f < frames; ++f) run_one(f, false);
    return;
  }
#pragma omp parallel for num_threads(jobs) schedule(dynamic, 1)
  for (int f = 0; f < frames; ++f) {
    {
      std::lock_guard lock(error_mutex);
      if (error) continue;
    }
    try {
      run_one(f, false);
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

std::vector<PointCloudFrame> simulate_scene(const SceneConfig& scene, int jobs) {
  std::vector<PointCloudFrame> frames(static_cast<std::size_t>(scene.frame_count()));
  for_each_frame(scene, jobs, [&](const FrameGeometry&, const PointCloudFrame& frame) {
    frames[static_cast<std::size_t>(frame.frame_index)] = frame;
  });
  return frames;
}

}  // namespace elidar
