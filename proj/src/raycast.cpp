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

#include "elidar/raycast.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace elidar {

std::optional<double> ray_triangle(const Ray& ray, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 e1 = b - a;
  const Vec3 e2 = c - a;
  const Vec3 p = cross(ray.direction, e2);
  const double det = dot(e1, p);
  if (std::abs(det) < 1e-14) return std::nullopt;
  const double inv_det = 1.0 / det;
  const Vec3 s = ray.origin - a;
  const double u = dot(s, p) * inv_det;
  if (u < 0.0 || u > 1.0) return std::nullopt;
  const Vec3 q = cross(s, e1);
  const double v = dot(ray.direction, q) * inv_det;
  if (v < 0.0 || u + v > 1.0) return std::nullopt;
  const double t = dot(e2, q) * inv_det;
  if (t < kMinHitDistance || t > ray.max_range) return std::nullopt;
  return t;
}

void Aabb::extend(const Vec3& p) {
  lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
  hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
}

void Aabb::extend(const Aabb& b) {
  extend(b.lo);
  extend(b.hi);
}

bool Aabb::contains(const Vec3& p) const {
  return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y && p.z >= lo.z && p.z <= hi.z;
}

int Aabb::longest_axis() const {
  const Vec3 d = hi - lo;
  if (d.x >= d.y && d.x >= d.z) return 0;
  return d.y >= d.z ? 1 : 2;
}

SpatialIndex::SpatialIndex(std::span<const TriangleMesh* const> meshes) {
  std::size_t total = 0;
  for (const auto* m : meshes) total += m->triangle_count();
  vertices_.reserve(total);
  object_ids_.reserve(total);
  reflectivity_.reserve(total);
  for (const auto* m : meshes) {
    for (std::size_t i = 0; i < m->triangles.size(); ++i) {
      const auto& t = m->triangles[i];
      vertices_.push_back({m->vertices[t[0]], m->vertices[t[1]], m->vertices[t[2]]});
      object_ids_.push_back(m->object_ids[i]);
      reflectivity_.push_back(m->reflectivity[i]);
    }
  }
  build();
}

SpatialIndex::SpatialIndex(const TriangleMesh& mesh) {
  const TriangleMesh* ptr = &mesh;
  *this = SpatialIndex(std::span<const TriangleMesh* const>(&ptr, 1));
}

void SpatialIndex::build() {
  const auto n = static_cast<std::uint32_t>(vertices_.size());
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), 0u);
  nodes_.clear();
  if (n == 0) return;
  nodes_.reserve(2 * (n / kMaxLeafSize + 1));
  std::vector<Vec3> centroids(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto& v = vertices_[i];
    centroids[i] = (v[0] + v[1] + v[2]) * (1.0 / 3.0);
  }
  build_node(0, n, centroids);
}

std::uint32_t SpatialIndex::build_node(std::uint32_t begin, std::uint32_t end,
                                       std::vector<Vec3>& centroids) {
  const auto index = static_cast<std::uint32_t>(nodes_.size());
  nodes_.emplace_back();
  Aabb box;
  Aabb centroid_box;
  for (std::uint32_t i = begin; i < end; ++i) {
    for (const auto& v : vertices_[order_[i]]) box.extend(v);
    centroid_box.extend(centroids[order_[i]]);
  }
  nodes_[index].box = box;
  if (end - begin <= kMaxLeafSize) {
    nodes_[index].first = begin;
    nodes_[index].count = static_cast<std::uint16_t>(end - begin);
    return index;
  }
  const int axis = centroid_box.longest_axis();
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     const double ca = centroids[a][axis];
                     const double cb = centroids[b][axis];
                     return ca < cb || (ca == cb && a < b);
                   });
  build_node(begin, mid, centroids);
  const std::uint32_t right = build_node(mid, end, centroids);
  nodes_[index].first = right;
  nodes_[index].axis = static_cast<std::uint8_t>(axis);
  return index;
}

namespace {

// Entry distance of the ray into `box` clipped to [0, limit], or a negative
// value on a miss.
inline double slab_entry(const Aabb& box, const Vec3& origin, const Vec3& inv_dir,
                         const Vec3& dir, double limit) {
  double tmin = 0.0;
  double tmax = limit;
  for (int axis = 0; axis < 3; ++axis) {
    const double o = origin[axis];
    const double lo = box.lo[axis];
    const double hi = box.hi[axis];
    if (dir[axis] == 0.0) {
      if (o < lo || o > hi) return -1.0;
      continue;
    }
    const double inv = inv_dir[axis];
    double t0 = (lo - o) * inv;
    double t1 = (hi - o) * inv;
    if (t0 > t1) std::swap(t0, t1);
    tmin = std::max(tmin, t0);
    tmax = std::min(tmax, t1);
    if (tmin > tmax) return -1.0;
  }
  return tmin;
}

}  // namespace

Hit SpatialIndex::make_hit(const Ray& ray, double t, std::uint32_t tri) const {
  const auto& v = vertices_[tri];
  Vec3 n = normalized(cross(v[1] - v[0], v[2] - v[0]));
  if (dot(n, ray.direction) > 0.0) n = -n;
  Hit hit;
  hit.t = t;
  hit.point = ray.origin + ray.direction * t;
  hit.normal = n;
  hit.object_id = object_ids_[tri];
  hit.reflectivity = reflectivity_[tri];
  hit.triangle = tri;
  return hit;
}

std::optional<Hit> SpatialIndex::intersect_nearest(const Ray& ray) const {
  if (nodes_.empty()) return std::nullopt;
  const Vec3& d = ray.direction;
  const Vec3 inv_dir{d.x != 0.0 ? 1.0 / d.x : 0.0, d.y != 0.0 ? 1.0 / d.y : 0.0,
                     d.z != 0.0 ? 1.0 / d.z : 0.0};
  double best_t = ray.max_range;
  std::uint32_t best_tri = 0;
  bool found = false;

  std::uint32_t stack[64];
  int top = 0;
  if (slab_entry(nodes_[0].box, ray.origin, inv_dir, d, best_t) < 0.0) return std::nullopt;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    if (node.count > 0) {
      for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
        const std::uint32_t tri = order_[i];
        const auto& v = vertices_[tri];
        const auto t = ray_triangle(ray, v[0], v[1], v[2]);
        if (!t) continue;
        if (!found || *t < best_t || (*t == best_t && tri < best_tri)) {
          best_t = *t;
          best_tri = tri;
          found = true;
        }
      }
      continue;
    }
    const std::uint32_t self = static_cast<std::uint32_t>(&node - nodes_.data());
    std::uint32_t near_child = self + 1;
    std::uint32_t far_child = node.first;
    if (d[node.axis] < 0.0) std::swap(near_child, far_child);
    const double t_near = slab_entry(nodes_[near_child].box, ray.origin, inv_dir, d, best_t);
    const double t_far = slab_entry(nodes_[far_child].box, ray.origin, inv_dir, d, best_t);
    // Push far first so near is popped first.
    if (t_far >= 0.0) stack[top++] = far_child;
    if (t_near >= 0.0) stack[top++] = near_child;
  }
  if (!found) return std::nullopt;
  return make_hit(ray, best_t, best_tri);
}

bool SpatialIndex::check_structure() const {
  if (nodes_.empty()) return vertices_.empty();
  std::vector<int> seen(vertices_.size(), 0);
  std::vector<std::uint32_t> stack{0};
  while (!stack.empty()) {
    const std::uint32_t idx = stack.back();
    stack.pop_back();
    const Node& node = nodes_[idx];
    if (node.count > 0) {
      for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
        const std::uint32_t tri = order_[i];
        ++seen[tri];
        for (const auto& v : vertices_[tri]) {
          if (!node.box.contains(v)) return false;
        }
      }
      continue;
    }
    for (std::uint32_t child : {idx + 1, node.first}) {
      const Aabb& cb = nodes_[child].box;
      if (!node.box.contains(cb.lo) || !node.box.contains(cb.hi)) return false;
      stack.push_back(child);
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; });
}

std::vector<std::optional<Hit>> cast_rays(const SpatialIndex& index, std::span<const Ray> rays) {
  std::vector<std::optional<Hit>> out(rays.size());
  const auto n = static_cast<std::int64_t>(rays.size());
#pragma omp parallel for schedule(dynamic, 512)
  for (std::int64_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = index.intersect_nearest(rays[static_cast<std::size_t>(i)]);
  }
  return out;
}

std::vector<std::optional<Hit>> cast_rays_serial(const SpatialIndex& index,
                                                 std::span<const Ray> rays) {
  std::vector<std::optional<Hit>> out;
  out.reserve(rays.size());
  for (const auto& r : rays) out.push_back(index.intersect_nearest(r));
  return out;
}

}  // namespace elidar
