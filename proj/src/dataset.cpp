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

#include "elidar/dataset.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <mutex>

#include <json.hpp>

#include "elidar/errors.hpp"

namespace elidar {

namespace fs = std::filesystem;

namespace {

void put_u32(Bytes& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 24));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_f32(Bytes& out, double v) { put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v))); }

float get_f32(const std::uint8_t* p) { return std::bit_cast<float>(get_u32(p)); }

}  // namespace

EncodedFrame encode_frame(const PointCloudFrame& frame) {
  EncodedFrame out;
  out.points.reserve(frame.points.size() * 16);
  out.ids.reserve(frame.points.size() * 4);
  for (const auto& p : frame.points) {
    put_f32(out.points, p.position.x);
    put_f32(out.points, p.position.y);
    put_f32(out.points, p.position.z);
    put_f32(out.points, p.intensity);
    put_u32(out.ids, std::bit_cast<std::uint32_t>(p.object_id));
  }
  return out;
}

PointCloudFrame decode_frame(std::span<const std::uint8_t> points,
                             std::optional<std::span<const std::uint8_t>> ids) {
  if (points.size() % 16 != 0) {
    throw DataError("point data length " + std::to_string(points.size()) +
                    " is not a multiple of 16; truncated record at byte offset " +
                    std::to_string(points.size() - points.size() % 16));
  }
  const std::size_t n = points.size() / 16;
  if (ids && ids->size() != 4 * n) {
    throw DataError("id data length " + std::to_string(ids->size()) + " does not match " +
                    std::to_string(n) + " points; mismatch at byte offset " +
                    std::to_string(std::min(ids->size(), 4 * n)));
  }
  PointCloudFrame frame;
  frame.points.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t* rec = points.data() + 16 * i;
    PointRecord& p = frame.points[i];
    p.position = {get_f32(rec), get_f32(rec + 4), get_f32(rec + 8)};
    p.intensity = get_f32(rec + 12);
    p.object_id = ids ? std::bit_cast<std::int32_t>(get_u32(ids->data() + 4 * i)) : kUnknownId;
    p.sensor_id = 0;
  }
  return frame;
}

namespace {

void append_fixed(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  if (std::strcmp(buf, "-0.000000") == 0) std::strcpy(buf, "0.000000");
  out += buf;
}

void append_box(std::string& out, const BoundingBox3D& b) {
  out += to_string(b.object_class);
  for (double v : {b.center.x, b.center.y, b.center.z, b.length, b.width, b.height, b.yaw}) {
    out += ' ';
    append_fixed(out, v);
  }
  out += ' ';
  out += std::to_string(b.num_points);
  out += ' ';
  out += std::to_string(b.object_id);
}

}  // namespace

std::string encode_labels(std::span<const BoundingBox3D> boxes) {
  std::string out;
  for (const auto& b : boxes) {
    append_box(out, b);
    out += '\n';
  }
  return out;
}

std::string encode_labels(std::span<const Detection> detections) {
  std::string out;
  for (const auto& d : detections) {
    append_box(out, d.box);
    out += ' ';
    append_fixed(out, d.score);
    out += '\n';
  }
  return out;
}

namespace {

template <typename T>
T parse_field(std::string_view tok, std::size_t line, std::size_t field) {
  T value{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line, 0, "field " + std::to_string(field) + ": invalid number '" +
                                  std::string(tok) + "'");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) {
      throw ParseError(line, 0, "field " + std::to_string(field) + ": non-finite value");
    }
  }
  return value;
}

}  // namespace

std::vector<LabelLine> decode_labels(std::string_view text, bool expect_scores) {
  std::vector<LabelLine> out;
  const std::size_t arity = expect_scores ? 11 : 10;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string_view> toks;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      const std::size_t s = i;
      while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
      if (i > s) toks.push_back(line.substr(s, i - s));
    }
    if (toks.empty()) continue;
    if (toks.size() != arity) {
      throw ParseError(line_no, 0, "expected " + std::to_string(arity) + " fields, found " +
                                       std::to_string(toks.size()));
    }
    LabelLine rec;
    if (toks[0] == "Vehicle") {
      rec.box.object_class = ObjectClass::kVehicle;
    } else if (toks[0] == "Pedestrian") {
      rec.box.object_class = ObjectClass::kPedestrian;
    } else {
      throw ParseError(line_no, 0, "unknown class '" + std::string(toks[0]) + "'");
    }
    rec.box.center = {parse_field<double>(toks[1], line_no, 2), parse_field<double>(toks[2], line_no, 3),
                      parse_field<double>(toks[3], line_no, 4)};
    rec.box.length = parse_field<double>(toks[4], line_no, 5);
    rec.box.width = parse_field<double>(toks[5], line_no, 6);
    rec.box.height = parse_field<double>(toks[6], line_no, 7);
    rec.box.yaw = parse_field<double>(toks[7], line_no, 8);
    rec.box.num_points = parse_field<int>(toks[8], line_no, 9);
    rec.box.object_id = parse_field<std::int32_t>(toks[9], line_no, 10);
    if (!(rec.box.length > 0.0 && rec.box.width > 0.0 && rec.box.height > 0.0)) {
      throw ParseError(line_no, 0, "box dimensions must be positive");
    }
    if (rec.box.num_points < 0) throw ParseError(line_no, 0, "negative point count");
    if (expect_scores) {
      rec.score = parse_field<double>(toks[10], line_no, 11);
      if (*rec.score < 0.0 || *rec.score > 1.0) throw ParseError(line_no, 0, "score outside [0,1]");
    }
    out.push_back(rec);
  }
  return out;
}

std::vector<BoundingBox3D> to_boxes(const std::vector<LabelLine>& lines) {
  std::vector<BoundingBox3D> out;
  out.reserve(lines.size());
  for (const auto& l : lines) out.push_back(l.box);
  return out;
}

std::vector<Detection> to_detections(const std::vector<LabelLine>& lines) {
  std::vector<Detection> out;
  out.reserve(lines.size());
  for (const auto& l : lines) out.push_back({l.box, l.score.value_or(1.0)});
  return out;
}

std::string frame_stem(int frame_index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%06d", frame_index);
  return buf;
}

Bytes read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_bytes(const fs::path& path, std::span<const std::uint8_t> data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw DataError("write failed for " + path.string());
}

void write_text(const fs::path& path, std::string_view text) {
  write_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

fs::path label_directory(const fs::path& dir) {
  const fs::path sub = dir / kLabelsDir;
  return fs::is_directory(sub) ? sub : dir;
}

namespace {

// Frame index for names like "000123.ext", else -1.
int parse_stem(const fs::path& path, std::string_view extension) {
  if (path.extension() != extension) return -1;
  const std::string stem = path.stem().string();
  if (stem.size() != 6 || !std::all_of(stem.begin(), stem.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return -1;
  }
  return std::stoi(stem);
}

}  // namespace

std::map<int, fs::path> list_label_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw DataError("not a directory: " + dir.string());
  std::map<int, fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const int f = parse_stem(entry.path(), ".txt");
    if (f >= 0) out[f] = entry.path();
  }
  return out;
}

std::vector<LabelLine> read_label_file(const fs::path& path, bool expect_scores) {
  const std::string text = read_text(path);
  try {
    return decode_labels(text, expect_scores);
  } catch (const ParseError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

PointCloudFrame read_frame_file(const fs::path& path) {
  const Bytes points = read_bytes(path);
  fs::path id_path = path;
  id_path.replace_extension(".id");
  PointCloudFrame frame;
  try {
    if (fs::exists(id_path)) {
      const Bytes ids = read_bytes(id_path);
      frame = decode_frame(points, std::span<const std::uint8_t>(ids));
    } else {
      frame = decode_frame(points);
    }
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  const int f = parse_stem(path, ".bin");
  frame.frame_index = std::max(f, 0);
  return frame;
}

// ---------------------------------------------------------------------------
// Manifest.

DatasetManifest make_manifest(const SceneConfig& scene, int min_points) {
  DatasetManifest m;
  m.scene_name = scene.name;
  m.frame_count = scene.frame_count();
  m.frame_rate = scene.frame_rate;
  m.seed = scene.seed;
  m.sensors = scene.sensors;
  m.min_points = min_points;
  for (const auto& o : scene.objects) m.objects.push_back({o.object_id, o.object_class, o.subtype});
  const int train_end = static_cast<int>(std::floor(0.70 * m.frame_count));
  const int val_end = static_cast<int>(std::floor(0.85 * m.frame_count));
  for (int f = 0; f < m.frame_count; ++f) {
    (f < train_end ? m.train : (f < val_end ? m.val : m.test)).push_back(f);
  }
  return m;
}

std::string format_manifest(const DatasetManifest& m) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["format_version"] = m.format_version;
  doc["scene"] = m.scene_name;
  doc["frame_count"] = m.frame_count;
  doc["frame_rate"] = m.frame_rate;
  doc["seed"] = m.seed;
  doc["min_points"] = m.min_points;
  doc["files"] = {{"points", std::string(kPointsDir) + "/NNNNNN.bin"},
                  {"ids", std::string(kPointsDir) + "/NNNNNN.id"},
                  {"labels", std::string(kLabelsDir) + "/NNNNNN.txt"}};
  ordered_json sensors = ordered_json::array();
  for (const auto& s : m.sensors) {
    ordered_json j;
    j["id"] = s.sensor_id;
    j["position"] = {s.position.x, s.position.y, s.position.z};
    j["yaw"] = s.yaw;
    j["pitch"] = s.pitch;
    j["channels"] = s.channels;
    j["azimuth_steps"] = s.azimuth_steps;
    j["max_range"] = s.max_range;
    j["range_noise_sigma"] = s.range_noise_sigma;
    j["dropout_prob"] = s.dropout_prob;
    j["intensity_exponent"] = s.intensity_exponent;
    sensors.push_back(j);
  }
  doc["sensors"] = sensors;
  ordered_json objects = ordered_json::array();
  for (const auto& o : m.objects) {
    objects.push_back({{"id", o.object_id},
                       {"class", std::string(to_string(o.object_class))},
                       {"subtype", std::string(to_string(o.subtype))}});
  }
  doc["objects"] = objects;
  doc["splits"] = {{"train", m.train}, {"val", m.val}, {"test", m.test}};
  return doc.dump(2) + "\n";
}

DatasetManifest parse_manifest(std::string_view text) {
  DatasetManifest m;
  try {
    const auto doc = nlohmann::json::parse(text);
    m.format_version = doc.at("format_version").get<std::string>();
    if (m.format_version != kFormatVersion) {
      throw DataError("unsupported dataset format version '" + m.format_version + "'");
    }
    m.scene_name = doc.at("scene").get<std::string>();
    m.frame_count = doc.at("frame_count").get<int>();
    m.frame_rate = doc.at("frame_rate").get<double>();
    m.seed = doc.at("seed").get<std::uint64_t>();
    m.min_points = doc.value("min_points", kDefaultMinPoints);
    for (const auto& j : doc.at("sensors")) {
      SensorModel s;
      s.sensor_id = j.at("id").get<std::int32_t>();
      const auto pos = j.at("position").get<std::vector<double>>();
      if (pos.size() != 3) throw DataError("sensor position needs 3 values");
      s.position = {pos[0], pos[1], pos[2]};
      s.yaw = j.at("yaw").get<double>();
      s.pitch = j.at("pitch").get<double>();
      s.channels = j.at("channels").get<std::vector<double>>();
      s.azimuth_steps = j.at("azimuth_steps").get<int>();
      s.max_range = j.at("max_range").get<double>();
      s.range_noise_sigma = j.at("range_noise_sigma").get<double>();
      s.dropout_prob = j.at("dropout_prob").get<double>();
      s.intensity_exponent = j.at("intensity_exponent").get<int>();
      m.sensors.push_back(std::move(s));
    }
    for (const auto& j : doc.at("objects")) {
      ManifestObject o;
      o.object_id = j.at("id").get<std::int32_t>();
      const auto cls = parse_object_class(j.at("class").get<std::string>());
      const auto sub = parse_subtype(j.at("subtype").get<std::string>());
      if (!cls || !sub) throw DataError("bad object class or subtype in manifest");
      o.object_class = *cls;
      o.subtype = *sub;
      m.objects.push_back(o);
    }
    const auto& splits = doc.at("splits");
    m.train = splits.at("train").get<std::vector<int>>();
    m.val = splits.at("val").get<std::vector<int>>();
    m.test = splits.at("test").get<std::vector<int>>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

DatasetManifest read_manifest(const fs::path& dataset_dir) {
  const fs::path path = dataset_dir / kManifestName;
  if (!fs::exists(path)) throw DataError("missing manifest: " + path.string());
  try {
    return parse_manifest(read_text(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Statistics.

namespace {

const char* id_class_name(std::int32_t id, const std::map<std::int32_t, ObjectClass>& classes) {
  if (id == kGroundId) return "Ground";
  if (id == kStaticPropId) return "Static";
  const auto it = classes.find(id);
  if (it == classes.end()) return "Unknown";
  return it->second == ObjectClass::kVehicle ? "Vehicle" : "Pedestrian";
}

std::map<std::string, std::uint64_t> zero_point_classes() {
  return {{"Ground", 0}, {"Pedestrian", 0}, {"Static", 0}, {"Unknown", 0}, {"Vehicle", 0}};
}

std::map<std::string, std::uint64_t> zero_box_classes() { return {{"Pedestrian", 0}, {"Vehicle", 0}}; }

}  // namespace

FrameTally tally_frame(int frame_index, std::span<const std::int32_t> object_ids,
                       std::span<const BoundingBox3D> boxes, const DatasetManifest& manifest) {
  std::map<std::int32_t, ObjectClass> classes;
  for (const auto& o : manifest.objects) classes[o.object_id] = o.object_class;
  FrameTally t;
  t.frame_index = frame_index;
  t.points = object_ids.size();
  t.points_per_class = zero_point_classes();
  t.boxes_per_class = zero_box_classes();
  for (std::int32_t id : object_ids) ++t.points_per_class[id_class_name(id, classes)];
  for (const auto& b : boxes) ++t.boxes_per_class[std::string(to_string(b.object_class))];
  return t;
}

DatasetStats summarize(std::span<const FrameTally> tallies, const DatasetManifest& manifest) {
  DatasetStats s;
  s.frames = tallies.size();
  s.sensors = manifest.sensors.size();
  s.sensor_clouds = s.frames * s.sensors;
  s.points_per_class = zero_point_classes();
  s.boxes_per_class = zero_box_classes();
  if (tallies.empty()) return s;
  s.min_points_per_frame = std::numeric_limits<std::uint64_t>::max();
  for (const auto& t : tallies) {
    s.points += t.points;
    s.min_points_per_frame = std::min(s.min_points_per_frame, t.points);
    s.max_points_per_frame = std::max(s.max_points_per_frame, t.points);
    for (const auto& [k, v] : t.points_per_class) s.points_per_class[k] += v;
    for (const auto& [k, v] : t.boxes_per_class) s.boxes_per_class[k] += v;
  }
  s.mean_points_per_frame = static_cast<double>(s.points) / static_cast<double>(s.frames);
  return s;
}

DatasetStats compute_stats(const fs::path& dataset_dir) {
  const DatasetManifest manifest = read_manifest(dataset_dir);
  std::vector<FrameTally> tallies;
  std::vector<std::string> problems;
  for (int f = 0; f < manifest.frame_count; ++f) {
    const std::string stem = frame_stem(f);
    const fs::path bin = dataset_dir / kPointsDir / (stem + ".bin");
    const fs::path id = dataset_dir / kPointsDir / (stem + ".id");
    const fs::path label = dataset_dir / kLabelsDir / (stem + ".txt");
    bool ok = true;
    for (const auto& p : {bin, id, label}) {
      if (!fs::exists(p)) {
        problems.push_back("missing " + p.string());
        ok = false;
      }
    }
    if (!ok) continue;
    try {
      const PointCloudFrame frame = read_frame_file(bin);
      const auto boxes = to_boxes(read_label_file(label, false));
      std::vector<std::int32_t> ids;
      ids.reserve(frame.points.size());
      for (const auto& p : frame.points) ids.push_back(p.object_id);
      tallies.push_back(tally_frame(f, ids, boxes, manifest));
    } catch (const DataError& e) {
      problems.push_back(std::string("corrupt: ") + e.what());
    }
  }
  DatasetStats stats = summarize(tallies, manifest);
  stats.problems = std::move(problems);
  return stats;
}

std::string format_stats(const DatasetStats& s) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["frames"] = s.frames;
  doc["sensors"] = s.sensors;
  doc["sensor_clouds"] = s.sensor_clouds;
  doc["points"] = s.points;
  doc["points_per_class"] = s.points_per_class;
  doc["boxes_per_class"] = s.boxes_per_class;
  doc["points_per_frame"] = {{"min", s.min_points_per_frame},
                             {"mean", s.mean_points_per_frame},
                             {"max", s.max_points_per_frame}};
  if (!s.problems.empty()) doc["problems"] = s.problems;
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Generation.

DatasetStats generate_dataset(const SceneConfig& scene, const fs::path& out_dir,
                              const GenerateOptions& options) {
  validate(scene);
  fs::create_directories(out_dir / kPointsDir);
  fs::create_directories(out_dir / kLabelsDir);
  const DatasetManifest manifest = make_manifest(scene, options.min_points);
  std::vector<FrameTally> tallies(static_cast<std::size_t>(scene.frame_count()));

  for_each_frame(scene, options.jobs, [&](const FrameGeometry& geometry, const PointCloudFrame& frame) {
    const auto boxes = annotate_frame(scene, geometry, frame, options.min_points);
    const EncodedFrame enc = encode_frame(frame);
    const std::string stem = frame_stem(frame.frame_index);
    write_bytes(out_dir / kPointsDir / (stem + ".bin"), enc.points);
    write_bytes(out_dir / kPointsDir / (stem + ".id"), enc.ids);
    write_text(out_dir / kLabelsDir / (stem + ".txt"), encode_labels(boxes));
    std::vector<std::int32_t> ids;
    ids.reserve(frame.points.size());
    for (const auto& p : frame.points) ids.push_back(p.object_id);
    tallies[static_cast<std::size_t>(frame.frame_index)] =
        tally_frame(frame.frame_index, ids, boxes, manifest);
  });

  const DatasetStats stats = summarize(tallies, manifest);
  write_text(out_dir / kSceneCopyName, format_scene(scene));
  write_text(out_dir / kStatsName, format_stats(stats));
  write_text(out_dir / kManifestName, format_manifest(manifest));
  return stats;
}

}  // namespace elidar
