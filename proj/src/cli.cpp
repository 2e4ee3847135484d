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

#include "elidar/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>

#include <omp.h>

#include <CLI11.hpp>

#include "elidar/dataset.hpp"
#include "elidar/detect.hpp"
#include "elidar/errors.hpp"
#include "elidar/eval.hpp"
#include "elidar/pointops.hpp"
#include "elidar/scene.hpp"

namespace elidar::cli {

namespace fs = std::filesystem;

namespace {

// Refuses to reuse a non-empty output path unless forced.
void ensure_fresh_dir(const fs::path& dir, bool force) {
  if (fs::exists(dir) && !fs::is_directory(dir)) {
    throw DataError(dir.string() + " exists and is not a directory");
  }
  if (fs::exists(dir) && !fs::is_empty(dir) && !force) {
    throw DataError(dir.string() + " is not empty (use --force to overwrite)");
  }
}

void ensure_fresh_file(const fs::path& file, bool force) {
  if (fs::exists(file) && !force) {
    throw DataError(file.string() + " exists (use --force to overwrite)");
  }
}

std::vector<Vec3> positions(const PointCloudFrame& frame) {
  std::vector<Vec3> out;
  out.reserve(frame.points.size());
  for (const auto& p : frame.points) out.push_back(p.position);
  return out;
}

PointCloudFrame load_frame(const fs::path& path) {
  if (!fs::exists(path)) throw DataError("missing file " + path.string());
  return read_frame_file(path);
}

struct GenerateArgs {
  std::string scene;
  std::string out;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  int min_points = kDefaultMinPoints;
  bool force = false;
};

int do_generate(const GenerateArgs& a, std::ostream& out) {
  const fs::path scene_path(a.scene);
  if (!fs::exists(scene_path)) throw DataError("missing scene file " + scene_path.string());
  SceneConfig scene;
  try {
    scene = parse_scene(read_text(scene_path));
  } catch (const ParseError& e) {
    throw DataError(scene_path.string() + ": " + e.what());
  }
  if (a.seed) scene.seed = *a.seed;
  const fs::path dir(a.out);
  ensure_fresh_dir(dir, a.force);
  if (a.force && fs::exists(dir)) {
    for (auto name : {kPointsDir, kLabelsDir, kManifestName, kStatsName, kSceneCopyName}) {
      fs::remove_all(dir / name);
    }
  }
  const DatasetStats stats = generate_dataset(scene, dir, {a.jobs, a.min_points});
  out << "generated " << stats.frames << " frames (" << stats.sensor_clouds << " sensor sweeps, "
      << stats.points << " points, " << stats.boxes_per_class.at("Vehicle") << " vehicle and "
      << stats.boxes_per_class.at("Pedestrian") << " pedestrian boxes) into " << dir.string()
      << "\n";
  return kSuccess;
}

struct DetectArgs {
  std::string data;
  std::string out;
  int jobs = 1;
  bool force = false;
  DetectorParams params;
};

int do_detect(const DetectArgs& a, std::ostream& out) {
  const fs::path data(a.data);
  const DatasetManifest manifest = read_manifest(data);
  const fs::path dir(a.out);
  ensure_fresh_dir(dir, a.force);
  fs::create_directories(dir);
  std::vector<std::size_t> counts(static_cast<std::size_t>(manifest.frame_count), 0);
  std::exception_ptr error;
  std::mutex mu;
#pragma omp parallel for num_threads(std::max(1, a.jobs)) schedule(dynamic, 1)
  for (int f = 0; f < manifest.frame_count; ++f) {
    try {
      const PointCloudFrame frame = load_frame(data / kPointsDir / (frame_stem(f) + ".bin"));
      const auto pts = positions(frame);
      DetectorParams params = a.params;
      const auto dets = detect_points(pts, params);
      write_text(dir / (frame_stem(f) + ".txt"), encode_labels(dets));
      counts[static_cast<std::size_t>(f)] = dets.size();
    } catch (...) {
      std::lock_guard lock(mu);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  std::size_t total = 0;
  for (auto c : counts) total += c;
  out << "wrote " << total << " detections for " << manifest.frame_count << " frames into "
      << dir.string() << "\n";
  return kSuccess;
}

struct EvalArgs {
  std::string gt;
  std::string pred;
  std::string iou_kind = "bev";
  double iou_vehicle = 0.5;
  double iou_ped = 0.25;
  std::string report;
  bool allow_missing = false;
  bool force = false;
};

std::string frame_list(const std::vector<int>& frames) {
  std::string s;
  for (std::size_t i = 0; i < frames.size() && i < 20; ++i) {
    if (i > 0) s += ", ";
    s += frame_stem(frames[i]);
  }
  if (frames.size() > 20) s += ", ... (" + std::to_string(frames.size()) + " total)";
  return s;
}

int do_eval(const EvalArgs& a, std::ostream& out) {
  MatchConfig config;
  config.iou_kind = a.iou_kind == "3d" ? IouKind::k3d : IouKind::kBev;
  config.iou_threshold_vehicle = a.iou_vehicle;
  config.iou_threshold_pedestrian = a.iou_ped;
  const fs::path gt_dir(a.gt);
  const fs::path pred_dir(a.pred);
  for (const auto& d : {gt_dir, pred_dir}) {
    if (!fs::is_directory(d)) throw DataError("missing directory " + d.string());
  }
  const auto gt_files = list_label_files(label_directory(gt_dir));
  const auto pred_files = list_label_files(label_directory(pred_dir));
  if (!a.allow_missing) {
    std::vector<int> missing_pred;
    std::vector<int> missing_gt;
    for (const auto& [f, _] : gt_files) {
      if (!pred_files.contains(f)) missing_pred.push_back(f);
    }
    for (const auto& [f, _] : pred_files) {
      if (!gt_files.contains(f)) missing_gt.push_back(f);
    }
    if (!missing_pred.empty() || !missing_gt.empty()) {
      std::string msg = "frame sets differ:";
      if (!missing_pred.empty()) msg += " predictions missing for frames " + frame_list(missing_pred) + ";";
      if (!missing_gt.empty()) msg += " ground truth missing for frames " + frame_list(missing_gt) + ";";
      throw DataError(msg + " (use --allow-missing to treat absent predictions as empty)");
    }
  }
  if (!a.report.empty()) ensure_fresh_file(a.report, a.force);
  const EvalReport report = evaluate_dataset(gt_dir, pred_dir, config);
  out << format_report_table(report);
  if (!a.report.empty()) {
    write_text(a.report, format_report_json(report));
    out << "report written to " << a.report << "\n";
  }
  return kSuccess;
}

int do_stats(const std::string& data, std::ostream& out, std::ostream& err) {
  const DatasetStats stats = compute_stats(fs::path(data));
  out << format_stats(stats);
  for (const auto& p : stats.problems) err << p << "\n";
  return stats.problems.empty() ? kSuccess : kDataError;
}

int do_sample_fps(const std::string& in, std::size_t k, std::size_t start, const std::string& out_path,
                  bool force, std::ostream& out) {
  const PointCloudFrame frame = load_frame(in);
  const auto pts = positions(frame);
  if (pts.empty()) throw DataError(in + " has no points");
  if (start >= pts.size()) throw DataError("--start beyond point count");
  const auto idx = furthest_point_sampling(pts, k, start);
  std::string text;
  for (std::size_t i : idx) text += std::to_string(i) + "\n";
  if (out_path.empty()) {
    out << text;
  } else {
    ensure_fresh_file(out_path, force);
    write_text(out_path, text);
    out << "sampled " << idx.size() << " of " << pts.size() << " points into " << out_path << "\n";
  }
  return kSuccess;
}

struct VoxelArgs {
  std::string in;
  std::vector<double> voxel_size{0.1, 0.1, 0.15};
  std::vector<double> range_min{-75.0, -75.0, -3.0};
  std::vector<double> range_max{75.0, 75.0, 5.0};
  std::size_t max_points = 32;
  std::size_t max_voxels = 40000;
  std::string out;
  bool force = false;
};

int do_voxelize(const VoxelArgs& a, std::ostream& out) {
  const PointCloudFrame frame = load_frame(a.in);
  const auto pts = positions(frame);
  VoxelGridParams params;
  params.voxel_size = {a.voxel_size[0], a.voxel_size[1], a.voxel_size[2]};
  params.range_min = {a.range_min[0], a.range_min[1], a.range_min[2]};
  params.range_max = {a.range_max[0], a.range_max[1], a.range_max[2]};
  params.max_points_per_voxel = a.max_points;
  params.max_voxels = a.max_voxels;
  VoxelGrid grid;
  try {
    grid = voxelize(pts, params);
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
  std::size_t kept = 0;
  for (const auto& v : grid.voxels) kept += v.indices.size();
  out << "points " << pts.size() << ", in range " << grid.in_range_points << ", voxels "
      << grid.voxels.size() << ", kept " << kept << ", dropped by voxel limit "
      << grid.dropped_by_voxel_limit << "\n";
  if (!a.out.empty()) {
    ensure_fresh_file(a.out, a.force);
    // One voxel per line: ix iy iz count idx...
    std::string text;
    for (const auto& v : grid.voxels) {
      text += std::to_string(v.coord[0]) + " " + std::to_string(v.coord[1]) + " " +
              std::to_string(v.coord[2]) + " " + std::to_string(v.count);
      for (std::size_t i : v.indices) text += " " + std::to_string(i);
      text += "\n";
    }
    write_text(a.out, text);
  }
  return kSuccess;
}

int do_export_ply(const std::string& in, const std::string& out_path, bool force, std::ostream& out) {
  const PointCloudFrame frame = load_frame(in);
  ensure_fresh_file(out_path, force);
  write_text(out_path, format_ply(frame));
  out << "wrote " << frame.points.size() << " points to " << out_path << "\n";
  return kSuccess;
}

}  // namespace

std::string format_ply(const PointCloudFrame& frame) {
  std::string s;
  s += "ply\nformat ascii 1.0\ncomment elidar point cloud\n";
  s += "element vertex " + std::to_string(frame.points.size()) + "\n";
  s += "property float x\nproperty float y\nproperty float z\n";
  s += "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  s += "property float intensity\nproperty int object_id\nend_header\n";
  char buf[160];
  for (const auto& p : frame.points) {
    const int gray = static_cast<int>(std::lround(255.0 * std::clamp(p.intensity, 0.0, 1.0)));
    std::snprintf(buf, sizeof buf, "%.6g %.6g %.6g %d %d %d %.6g %d\n", p.position.x, p.position.y,
                  p.position.z, gray, gray, gray, p.intensity, p.object_id);
    s += buf;
  }
  return s;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Elevated-LiDAR dataset synthesis, baseline detection and evaluation", "elidar"};
  app.require_subcommand(1);
  const int default_jobs = std::max(1, omp_get_num_procs());

  GenerateArgs gen;
  gen.jobs = default_jobs;
  auto* generate = app.add_subcommand("generate", "Simulate, annotate and write a dataset");
  generate->add_option("--scene", gen.scene, "Scene config document")->required();
  generate->add_option("--out", gen.out, "Output dataset directory")->required();
  generate->add_option("--seed", gen.seed, "Override the scene seed");
  generate->add_option("--jobs", gen.jobs, "Frames simulated concurrently")->check(CLI::PositiveNumber);
  generate->add_option("--min-points", gen.min_points, "Minimum points for a labeled object")
      ->check(CLI::NonNegativeNumber);
  generate->add_flag("--force", gen.force, "Overwrite an existing output directory");

  DetectArgs det;
  det.jobs = default_jobs;
  auto* detect = app.add_subcommand("detect", "Run the baseline detector over a dataset");
  detect->add_option("--data", det.data, "Dataset directory")->required();
  detect->add_option("--out", det.out, "Prediction output directory")->required();
  detect->add_option("--jobs", det.jobs, "Frames processed concurrently")->check(CLI::PositiveNumber);
  detect->add_option("--inlier-threshold", det.params.inlier_threshold, "Ground inlier distance (m)");
  detect->add_option("--ransac-iterations", det.params.ransac_iterations, "RANSAC iterations");
  detect->add_option("--seed", det.params.seed, "RANSAC seed");
  detect->add_option("--cluster-radius", det.params.cluster_radius, "Clustering radius (m)");
  detect->add_option("--min-cluster-size", det.params.min_cluster_size, "Smallest kept cluster");
  detect->add_flag("--force", det.force, "Overwrite an existing output directory");

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Evaluate predictions against ground truth");
  eval->add_option("--gt", ev.gt, "Ground-truth dataset or label directory")->required();
  eval->add_option("--pred", ev.pred, "Prediction directory")->required();
  eval->add_option("--iou-kind", ev.iou_kind, "bev or 3d")->check(CLI::IsMember({"bev", "3d"}));
  eval->add_option("--iou-vehicle", ev.iou_vehicle, "Vehicle IoU threshold")->check(CLI::Range(1e-9, 1.0));
  eval->add_option("--iou-ped", ev.iou_ped, "Pedestrian IoU threshold")->check(CLI::Range(1e-9, 1.0));
  eval->add_option("--report", ev.report, "Write the JSON report here");
  eval->add_flag("--allow-missing", ev.allow_missing, "Treat absent prediction files as empty");
  eval->add_flag("--force", ev.force, "Overwrite --report");

  std::string stats_dir;
  auto* stats = app.add_subcommand("stats", "Recount a dataset from disk");
  stats->add_option("--data", stats_dir, "Dataset directory")->required();

  std::string fps_in;
  std::size_t fps_k = kDefaultKeypoints;
  std::size_t fps_start = 0;
  std::string fps_out;
  bool fps_force = false;
  auto* fps = app.add_subcommand("sample-fps", "Furthest point sampling of one frame");
  fps->add_option("--in", fps_in, "Frame .bin file")->required();
  fps->add_option("--k", fps_k, "Number of keypoints")->check(CLI::PositiveNumber);
  fps->add_option("--start", fps_start, "Start index");
  fps->add_option("--out", fps_out, "Write indices here instead of stdout");
  fps->add_flag("--force", fps_force, "Overwrite --out");

  VoxelArgs vox;
  auto* voxel = app.add_subcommand("voxelize", "Voxelize one frame");
  voxel->add_option("--in", vox.in, "Frame .bin file")->required();
  voxel->add_option("--voxel-size", vox.voxel_size, "vx vy vz")->expected(3);
  voxel->add_option("--range-min", vox.range_min, "x y z")->expected(3);
  voxel->add_option("--range-max", vox.range_max, "x y z")->expected(3);
  voxel->add_option("--max-points", vox.max_points, "Points kept per voxel");
  voxel->add_option("--max-voxels", vox.max_voxels, "Voxels kept");
  voxel->add_option("--out", vox.out, "Write voxel listing here");
  voxel->add_flag("--force", vox.force, "Overwrite --out");

  std::string ply_in;
  std::string ply_out;
  bool ply_force = false;
  auto* ply = app.add_subcommand("export-ply", "Export one frame as PLY");
  ply->add_option("--in", ply_in, "Frame .bin file")->required();
  ply->add_option("--out", ply_out, "PLY file")->required();
  ply->add_flag("--force", ply_force, "Overwrite --out");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsageError;
  }

  try {
    if (generate->parsed()) return do_generate(gen, out);
    if (detect->parsed()) return do_detect(det, out);
    if (eval->parsed()) return do_eval(ev, out);
    if (stats->parsed()) return do_stats(stats_dir, out, err);
    if (fps->parsed()) return do_sample_fps(fps_in, fps_k, fps_start, fps_out, fps_force, out);
    if (voxel->parsed()) return do_voxelize(vox, out);
    if (ply->parsed()) return do_export_ply(ply_in, ply_out, ply_force, out);
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  err << "error: no subcommand\n";
  return kUsageError;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace elidar::cli
