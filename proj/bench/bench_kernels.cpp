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

// OpenMP kernels against their serial references. With one hardware thread
// the pairs should run at the same rate; the ratio is the parallel speedup.

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "elidar/dataset.hpp"
#include "elidar/pointops.hpp"
#include "elidar/raycast.hpp"
#include "elidar/scene.hpp"
#include "elidar/sensor.hpp"

namespace {

using namespace elidar;

std::vector<Vec3> positions(const PointCloudFrame& frame) {
  std::vector<Vec3> out;
  out.reserve(frame.points.size());
  for (const auto& p : frame.points) out.push_back(p.position);
  return out;
}

struct Fixture {
  SceneConfig scene;
  TriangleMesh clutter;
  SpatialIndex index;
  std::vector<Ray> rays;
  std::vector<Vec3> cloud;
};

// Demo frame 0 padded with small random triangles to 50k in total.
const Fixture& fixture() {
  static const Fixture f = [] {
    Fixture out;
    out.scene = parse_scene(read_text(std::string(ELIDAR_SOURCE_DIR) + "/data/demo_scene.cfg"));
    const FrameGeometry geometry = geometry_at(out.scene, 0);
    std::vector<const TriangleMesh*> meshes = geometry.meshes();
    std::size_t triangles = 0;
    for (const auto* m : meshes) triangles += m->triangle_count();
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> pos(-30.0, 30.0), h(0.0, 3.0), d(-0.3, 0.3);
    while (triangles + out.clutter.triangle_count() < 50'000) {
      const Vec3 c{pos(rng), pos(rng), h(rng)};
      const auto base = static_cast<std::uint32_t>(out.clutter.vertices.size());
      out.clutter.vertices.insert(out.clutter.vertices.end(),
                                  {c, c + Vec3{d(rng), d(rng), d(rng)}, c + Vec3{d(rng), d(rng), d(rng)}});
      out.clutter.add_triangle(base, base + 1, base + 2, -1, 0.3);
    }
    meshes.push_back(&out.clutter);
    out.index = SpatialIndex(meshes);
    out.rays = generate_rays(out.scene.sensors.at(0));
    const PointCloudFrame frame =
        simulate_frame(SpatialIndex(geometry.meshes()), out.scene.sensors, 0,
                       out.scene.frame_rate, out.scene.seed);
    out.cloud = positions(frame);
    return out;
  }();
  return f;
}

template <auto Kernel>
void BM_CastRays(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(f.index, f.rays));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.rays.size()));
  state.counters["triangles"] = static_cast<double>(f.index.triangle_count());
}
BENCHMARK(BM_CastRays<cast_rays>)->Name("cast_rays/openmp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CastRays<cast_rays_serial>)->Name("cast_rays/serial")->Unit(benchmark::kMillisecond);

template <auto Kernel>
void BM_Fps(benchmark::State& state) {
  const Fixture& f = fixture();
  const auto k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(f.cloud, k, 0));
  // One distance update per point per pick.
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(k * f.cloud.size()));
  state.counters["points"] = static_cast<double>(f.cloud.size());
}
BENCHMARK(BM_Fps<furthest_point_sampling>)->Name("fps/openmp")->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Fps<furthest_point_sampling_serial>)->Name("fps/serial")->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

template <auto Kernel>
void BM_SimulateFrame(benchmark::State& state) {
  const Fixture& f = fixture();
  const FrameGeometry geometry = geometry_at(f.scene, 0);
  const SpatialIndex index(geometry.meshes());
  std::size_t rays = 0;
  for (const auto& s : f.scene.sensors) rays += s.ray_count();
  for (auto _ : state) {
    benchmark::DoNotOptimize(Kernel(index, f.scene.sensors, 0, f.scene.frame_rate, f.scene.seed));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rays));
}
BENCHMARK(BM_SimulateFrame<simulate_frame>)->Name("simulate_frame/openmp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateFrame<simulate_frame_serial>)->Name("simulate_frame/serial")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
