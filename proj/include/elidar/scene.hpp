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

#ifndef ELIDAR_SCENE_HPP_
#define ELIDAR_SCENE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "elidar/geometry.hpp"
#include "elidar/mesh.hpp"
#include "elidar/sensor_model.hpp"

namespace elidar {

struct Pose {
  Vec3 position;     // bottom center of the object
  double yaw = 0.0;  // about +z from +x, in [-pi, pi)
};

struct Keyframe {
  double time = 0.0;
  Pose pose;
};

// Piecewise-linear motion through keyframes sorted strictly by time.
class Trajectory {
 public:
  Trajectory() = default;
  // Throws ValidationError if empty, unsorted, or non-finite.
  explicit Trajectory(std::vector<Keyframe> keyframes);

  const std::vector<Keyframe>& keyframes() const { return keyframes_; }

 private:
  std::vector<Keyframe> keyframes_;
};

// Positions interpolate linearly, yaw along the shorter arc. Times outside
// the keyframe span clamp to the nearest boundary pose.
Pose pose_at(const Trajectory& trajectory, double t);

enum class ObjectClass { kVehicle, kPedestrian };
enum class Subtype { kCar, kSuv, kBus, kTruck, kAdult, kChild };

struct Dims {
  double length = 0.0;
  double width = 0.0;
  double height = 0.0;
};

struct Gait {
  double frequency_hz = 1.8;
  double amplitude_rad = 0.5;
};

inline constexpr Gait kWalkingGait{1.8, 0.5};
inline constexpr Gait kRunningGait{2.8, 0.9};

struct ObjectSpec {
  std::int32_t object_id = 1;
  ObjectClass object_class = ObjectClass::kVehicle;
  Subtype subtype = Subtype::kCar;
  Dims nominal_dims;
  double reflectivity = 0.5;
  Trajectory trajectory;
  Gait gait;  // pedestrians only
};

struct StaticProp {
  TriangleMesh mesh;  // world frame
  double reflectivity = 0.5;
};

struct SceneConfig {
  std::string name = "scene";
  double duration = 10.0;   // seconds
  double frame_rate = 10.0; // Hz
  std::vector<ObjectSpec> objects;
  std::vector<SensorModel> sensors;
  double ground_reflectivity = 0.3;
  std::vector<StaticProp> static_props;
  std::uint64_t seed = 0;

  int frame_count() const;
  double frame_time(int frame_index) const { return frame_index / frame_rate; }
  const ObjectSpec* find_object(std::int32_t object_id) const;
};

ObjectClass class_of(Subtype subtype);
Dims default_dims(Subtype subtype);
std::string_view to_string(ObjectClass c);  // "Vehicle" / "Pedestrian"
std::string_view to_string(Subtype s);      // "car", "suv", ...
std::optional<ObjectClass> parse_object_class(std::string_view text);
std::optional<Subtype> parse_subtype(std::string_view text);

// Throws ValidationError on duplicate ids, bad dims/reflectivity, reserved
// ids, bad sensors or a zero frame count.
void validate(const SceneConfig& scene);

// Parses the scene-config document format (see docs/scene_format.md).
// Throws ParseError (with position) or ValidationError.
SceneConfig parse_scene(std::string_view text);

// Canonical document for `scene`; parse_scene(format_scene(s)) reproduces s.
std::string format_scene(const SceneConfig& scene);

// Local-frame mesh of an object at gait phase `phase` (radians). Local frame:
// bottom center at the origin, heading along +x.
TriangleMesh object_mesh(const ObjectSpec& object, double phase);

struct ObjectInstance {
  std::int32_t object_id = 0;
  Pose pose;
  TriangleMesh mesh;  // world frame, tagged
};

struct FrameGeometry {
  int frame_index = 0;
  double time = 0.0;
  std::vector<ObjectInstance> objects;
  TriangleMesh static_mesh;  // ground plus props, world frame, tagged

  std::vector<const TriangleMesh*> meshes() const;
};

// Throws std::out_of_range unless 0 <= frame_index < frame_count().
FrameGeometry geometry_at(const SceneConfig& scene, int frame_index);

}  // namespace elidar

#endif  // ELIDAR_SCENE_HPP_
