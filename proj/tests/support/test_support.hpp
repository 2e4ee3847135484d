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

#ifndef ELIDAR_TESTS_SUPPORT_TEST_SUPPORT_HPP_
#define ELIDAR_TESTS_SUPPORT_TEST_SUPPORT_HPP_

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "elidar/annotate.hpp"
#include "elidar/detect.hpp"
#include "elidar/geometry.hpp"
#include "elidar/scene.hpp"

namespace elidar::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

double uniform(std::mt19937_64& rng, double lo, double hi);
Vec3 random_point(std::mt19937_64& rng, double lo, double hi);
Vec3 random_unit(std::mt19937_64& rng);

BoundingBox3D make_box(ObjectClass c, const Vec3& center, double l, double w, double h,
                       double yaw, std::int32_t id = 1);

// One sensor at `sensor_position` with a `channels` x `steps` pattern, no
// noise or dropout unless given.
SensorModel quiet_sensor(std::int32_t id, const Vec3& sensor_position, int channels, double min_deg,
                         double max_deg, int steps);

// Scene with a single stationary object of `subtype` at `position`/`yaw`.
SceneConfig single_object_scene(Subtype subtype, const Vec3& position, double yaw);

// Reads a file's bytes as a string.
std::string slurp(const std::filesystem::path& path);

// Sorted relative paths of every regular file below `root`.
std::vector<std::string> list_files(const std::filesystem::path& root);

// Absolute path of a file in tests/data or data/.
std::filesystem::path test_data(const std::string& name);
std::filesystem::path repo_data(const std::string& name);

}  // namespace elidar::testing

#endif  // ELIDAR_TESTS_SUPPORT_TEST_SUPPORT_HPP_
