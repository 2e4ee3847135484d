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

#ifndef ELIDAR_ANNOTATE_HPP_
#define ELIDAR_ANNOTATE_HPP_

#include <cstdint>
#include <vector>

#include "elidar/geometry.hpp"
#include "elidar/scene.hpp"
#include "elidar/sensor.hpp"

namespace elidar {

struct BoundingBox3D {
  ObjectClass object_class = ObjectClass::kVehicle;
  std::int32_t object_id = 0;
  Vec3 center;
  double length = 0.0;  // along heading
  double width = 0.0;
  double height = 0.0;
  double yaw = 0.0;
  int num_points = 0;
};

// Closed-box containment with every half extent inflated by `epsilon`.
bool point_in_box(const Vec3& p, const BoundingBox3D& box, double epsilon = 0.0);

// Tightest box with the given yaw around the mesh vertices.
BoundingBox3D tight_box(const TriangleMesh& mesh, double yaw);

inline constexpr int kDefaultMinPoints = 5;

// One box per dynamic object with at least `min_points` frame points,
// sorted by object id. Throws DataError if the frame index does not match.
std::vector<BoundingBox3D> annotate_frame(const SceneConfig& scene, int frame_index,
                                          const PointCloudFrame& frame,
                                          int min_points = kDefaultMinPoints);

// Same, reusing geometry already instantiated for this frame.
std::vector<BoundingBox3D> annotate_frame(const SceneConfig& scene, const FrameGeometry& geometry,
                                          const PointCloudFrame& frame,
                                          int min_points = kDefaultMinPoints);

}  // namespace elidar

#endif  // ELIDAR_ANNOTATE_HPP_
