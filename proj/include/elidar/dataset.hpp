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

#ifndef ELIDAR_DATASET_HPP_
#define ELIDAR_DATASET_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "elidar/annotate.hpp"
#include "elidar/detect.hpp"
#include "elidar/scene.hpp"
#include "elidar/sensor.hpp"

namespace elidar {

inline constexpr std::string_view kFormatVersion = "1";
inline constexpr std::string_view kManifestName = "manifest.json";
inline constexpr std::string_view kStatsName = "stats.json";
inline constexpr std::string_view kSceneCopyName = "scene.cfg";
inline constexpr std::string_view kPointsDir = "points";
inline constexpr std::string_view kLabelsDir = "labels";

using Bytes = std::vector<std::uint8_t>;

struct EncodedFrame {
  Bytes points;  // 16 bytes per point: x, y, z, intensity as little-endian float32
  Bytes ids;     // 4 bytes per point: object id as little-endian int32
};

EncodedFrame encode_frame(const PointCloudFrame& frame);

// Inverse of encode_frame. Without `ids` every object id is kUnknownId.
// Sensor, channel and azimuth fields are not stored and decode as 0.
// Throws DataError naming the offending byte offset.
PointCloudFrame decode_frame(std::span<const std::uint8_t> points,
                             std::optional<std::span<const std::uint8_t>> ids = std::nullopt);

// `class cx cy cz l w h yaw num_points object_id [score]`, 6 decimals.
std::string encode_labels(std::span<const BoundingBox3D> boxes);
std::string encode_labels(std::span<const Detection> detections);

struct LabelLine {
  BoundingBox3D box;
  std::optional<double> score;
};

// Throws ParseError carrying the line number.
std::vector<LabelLine> decode_labels(std::string_view text, bool expect_scores);
std::vector<BoundingBox3D> to_boxes(const std::vector<LabelLine>& lines);
std::vector<Detection> to_detections(const std::vector<LabelLine>& lines);

// "000042".
std::string frame_stem(int frame_index);

Bytes read_bytes(const std::filesystem::path& path);
std::string read_text(const std::filesystem::path& path);
void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> data);
void write_text(const std::filesystem::path& path, std::string_view text);

// `dir/labels` when it exists, else `dir`.
std::filesystem::path label_directory(const std::filesystem::path& dir);

// NNNNNN.txt files keyed by frame index. Throws DataError if `dir` is not a
// directory.
std::map<int, std::filesystem::path> list_label_files(const std::filesystem::path& dir);

// DataError messages name the file and line.
std::vector<LabelLine> read_label_file(const std::filesystem::path& path, bool expect_scores);

// Reads `path` (.bin) and its .id sidecar when present.
PointCloudFrame read_frame_file(const std::filesystem::path& path);

struct ManifestObject {
  std::int32_t object_id = 0;
  ObjectClass object_class = ObjectClass::kVehicle;
  Subtype subtype = Subtype::kCar;
};

struct DatasetManifest {
  std::string format_version = std::string(kFormatVersion);
  std::string scene_name;
  int frame_count = 0;
  double frame_rate = 0.0;
  std::uint64_t seed = 0;
  std::vector<SensorModel> sensors;
  std::vector<ManifestObject> objects;
  int min_points = kDefaultMinPoints;
  // Contiguous 70 / 15 / 15 split by frame index.
  std::vector<int> train, val, test;
};

DatasetManifest make_manifest(const SceneConfig& scene, int min_points);
std::string format_manifest(const DatasetManifest& manifest);
DatasetManifest parse_manifest(std::string_view text);
DatasetManifest read_manifest(const std::filesystem::path& dataset_dir);

// Per-frame contribution to the dataset statistics.
struct FrameTally {
  int frame_index = 0;
  std::uint64_t points = 0;
  std::map<std::string, std::uint64_t> points_per_class;
  std::map<std::string, std::uint64_t> boxes_per_class;
};

FrameTally tally_frame(int frame_index, std::span<const std::int32_t> object_ids,
                       std::span<const BoundingBox3D> boxes, const DatasetManifest& manifest);

struct DatasetStats {
  std::uint64_t frames = 0;
  std::uint64_t sensors = 0;
  std::uint64_t sensor_clouds = 0;  // frames x sensors
  std::uint64_t points = 0;
  std::map<std::string, std::uint64_t> points_per_class;
  std::map<std::string, std::uint64_t> boxes_per_class;
  std::uint64_t min_points_per_frame = 0;
  double mean_points_per_frame = 0.0;
  std::uint64_t max_points_per_frame = 0;
  std::vector<std::string> problems;  // missing or corrupt files
};

DatasetStats summarize(std::span<const FrameTally> tallies, const DatasetManifest& manifest);

// Recounts a dataset directory from disk. Missing or corrupt files are
// listed in `problems`; a missing manifest throws DataError.
DatasetStats compute_stats(const std::filesystem::path& dataset_dir);

std::string format_stats(const DatasetStats& stats);

struct GenerateOptions {
  int jobs = 1;
  int min_points = kDefaultMinPoints;
};

// Simulates, annotates and writes `scene` into `out_dir` (created if
// needed). Frame files first, then stats, then the manifest.
DatasetStats generate_dataset(const SceneConfig& scene, const std::filesystem::path& out_dir,
                              const GenerateOptions& options);

}  // namespace elidar

#endif  // ELIDAR_DATASET_HPP_
