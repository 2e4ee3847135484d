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

#include "elidar/annotate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "elidar/errors.hpp"

namespace elidar {

bool point_in_box(const Vec3& p, const BoundingBox3D& box, double epsilon) {
  const Vec3 local = rotate_z(p - box.center, -box.yaw);
  return std::abs(local.x) <= 0.5 * box.length + epsilon &&
         std::abs(local.y) <= 0.5 * box.width + epsilon &&
         std::abs(local.z) <= 0.5 * box.height + epsilon;
}

BoundingBox3D tight_box(const TriangleMesh& mesh, double yaw) {
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  Vec3 lo{1e300, 1e300, 1e300};
  Vec3 hi{-1e300, -1e300, -1e300};
  for (const auto& v : mesh.vertices) {
    // Rotate by -yaw into the box frame.
    const double x = c * v.x + s * v.y;
    const double y = -s * v.x + c * v.y;
    lo = {std::min(lo.x, x), std::min(lo.y, y), std::min(lo.z, v.z)};
    hi = {std::max(hi.x, x), std::max(hi.y, y), std::max(hi.z, v.z)};
  }
  BoundingBox3D box;
  box.yaw = normalize_angle(yaw);
  box.length = hi.x - lo.x;
  box.width = hi.y - lo.y;
  box.height = hi.z - lo.z;
  const Vec3 mid_local = (lo + hi) * 0.5;
  box.center = {c * mid_local.x - s * mid_local.y, s * mid_local.x + c * mid_local.y, mid_local.z};
  return box;
}

std::vector<BoundingBox3D> annotate_frame(const SceneConfig& scene, const FrameGeometry& geometry,
                                          const PointCloudFrame& frame, int min_points) {
  if (geometry.frame_index != frame.frame_index) {
    throw DataError("frame " + std::to_string(frame.frame_index) +
                    " does not match geometry of frame " + std::to_string(geometry.frame_index));
  }
  std::map<std::int32_t, int> counts;
  for (const auto& p : frame.points) {
    if (p.object_id > 0) ++counts[p.object_id];
  }
  std::vector<BoundingBox3D> boxes;
  for (const auto& inst : geometry.objects) {
    const auto it = counts.find(inst.object_id);
    const int n = it == counts.end() ? 0 : it->second;
    if (n < min_points) continue;
    const ObjectSpec* spec = scene.find_object(inst.object_id);
    if (spec == nullptr) continue;
    BoundingBox3D box = tight_box(inst.mesh, inst.pose.yaw);
    box.object_class = spec->object_class;
    box.object_id = inst.object_id;
    box.num_points = n;
    boxes.push_back(box);
  }
  std::sort(boxes.begin(), boxes.end(),
            [](const BoundingBox3D& a, const BoundingBox3D& b) { return a.object_id < b.object_id; });
  return boxes;
}

std::vector<BoundingBox3D> annotate_frame(const SceneConfig& scene, int frame_index,
                                          const PointCloudFrame& frame, int min_points) {
  if (frame.frame_index != frame_index) {
    throw DataError("point cloud belongs to frame " + std::to_string(frame.frame_index) +
                    ", expected " + std::to_string(frame_index));
  }
  return annotate_frame(scene, geometry_at(scene, frame_index), frame, min_points);
}

}  // namespace elidar
