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

#include "elidar/scene.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>
#include <stdexcept>
#include <utility>

#include "elidar/errors.hpp"

namespace elidar {

Trajectory::Trajectory(std::vector<Keyframe> keyframes) : keyframes_(std::move(keyframes)) {
  if (keyframes_.empty()) throw ValidationError("trajectory needs at least one keyframe");
  for (std::size_t i = 0; i < keyframes_.size(); ++i) {
    auto& k = keyframes_[i];
    if (!std::isfinite(k.time) || !is_finite(k.pose.position) || !std::isfinite(k.pose.yaw)) {
      throw ValidationError("keyframe " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && !(k.time > keyframes_[i - 1].time)) {
      throw ValidationError("keyframe times must be strictly increasing (keyframe " +
                            std::to_string(i) + ")");
    }
    k.pose.yaw = normalize_angle(k.pose.yaw);
  }
}

Pose pose_at(const Trajectory& trajectory, double t) {
  const auto& ks = trajectory.keyframes();
  if (t <= ks.front().time) return ks.front().pose;
  if (t >= ks.back().time) return ks.back().pose;
  const auto hi = std::upper_bound(ks.begin(), ks.end(), t,
                                   [](double v, const Keyframe& k) { return v < k.time; });
  const auto lo = hi - 1;
  if (lo->time == t) return lo->pose;
  const double s = (t - lo->time) / (hi->time - lo->time);
  const Vec3& a = lo->pose.position;
  const Vec3& b = hi->pose.position;
  Pose p;
  p.position = {a.x + s * (b.x - a.x), a.y + s * (b.y - a.y), a.z + s * (b.z - a.z)};
  p.yaw = normalize_angle(lo->pose.yaw + s * normalize_angle(hi->pose.yaw - lo->pose.yaw));
  return p;
}

int SceneConfig::frame_count() const {
  // The slack absorbs products like 2.3 * 10 = 22.999999999999996.
  return static_cast<int>(std::floor(duration * frame_rate + 1e-9));
}

const ObjectSpec* SceneConfig::find_object(std::int32_t object_id) const {
  for (const auto& o : objects) {
    if (o.object_id == object_id) return &o;
  }
  return nullptr;
}

ObjectClass class_of(Subtype subtype) {
  switch (subtype) {
    case Subtype::kAdult:
    case Subtype::kChild:
      return ObjectClass::kPedestrian;
    default:
      return ObjectClass::kVehicle;
  }
}

Dims default_dims(Subtype subtype) {
  constexpr double kChildScale = 0.65;
  switch (subtype) {
    case Subtype::kCar: return {4.5, 1.8, 1.5};
    case Subtype::kSuv: return {4.8, 1.9, 1.8};
    case Subtype::kBus: return {12.0, 2.5, 3.2};
    case Subtype::kTruck: return {8.0, 2.5, 3.5};
    case Subtype::kAdult: return {0.35, 0.6, 1.7};
    case Subtype::kChild: return {0.35 * kChildScale, 0.6 * kChildScale, 1.7 * kChildScale};
  }
  return {};
}

std::string_view to_string(ObjectClass c) {
  return c == ObjectClass::kVehicle ? "Vehicle" : "Pedestrian";
}

std::string_view to_string(Subtype s) {
  switch (s) {
    case Subtype::kCar: return "car";
    case Subtype::kSuv: return "suv";
    case Subtype::kBus: return "bus";
    case Subtype::kTruck: return "truck";
    case Subtype::kAdult: return "adult";
    case Subtype::kChild: return "child";
  }
  return "";
}

std::optional<ObjectClass> parse_object_class(std::string_view text) {
  if (text == "vehicle" || text == "Vehicle") return ObjectClass::kVehicle;
  if (text == "pedestrian" || text == "Pedestrian") return ObjectClass::kPedestrian;
  return std::nullopt;
}

std::optional<Subtype> parse_subtype(std::string_view text) {
  for (Subtype s : {Subtype::kCar, Subtype::kSuv, Subtype::kBus, Subtype::kTruck,
                    Subtype::kAdult, Subtype::kChild}) {
    if (text == to_string(s)) return s;
  }
  return std::nullopt;
}

void validate(const SceneConfig& scene) {
  if (!(scene.duration > 0.0) || !std::isfinite(scene.duration)) {
    throw ValidationError("duration must be positive");
  }
  if (!(scene.frame_rate > 0.0) || !std::isfinite(scene.frame_rate)) {
    throw ValidationError("frame_rate must be positive");
  }
  if (scene.frame_count() < 1) throw ValidationError("scene has no frames");
  if (!(scene.ground_reflectivity >= 0.0 && scene.ground_reflectivity <= 1.0)) {
    throw ValidationError("ground_reflectivity outside [0,1]");
  }
  std::set<std::int32_t> ids;
  for (const auto& o : scene.objects) {
    const std::string tag = "object " + std::to_string(o.object_id);
    if (o.object_id < 1) throw ValidationError(tag + ": dynamic object ids must be >= 1");
    if (!ids.insert(o.object_id).second) throw ValidationError(tag + ": duplicate object id");
    if (!(o.nominal_dims.length > 0.0 && o.nominal_dims.width > 0.0 && o.nominal_dims.height > 0.0)) {
      throw ValidationError(tag + ": dims must be positive");
    }
    if (!(o.reflectivity >= 0.0 && o.reflectivity <= 1.0)) {
      throw ValidationError(tag + ": reflectivity outside [0,1]");
    }
    if (class_of(o.subtype) != o.object_class) {
      throw ValidationError(tag + ": subtype does not belong to class");
    }
    if (o.trajectory.keyframes().empty()) throw ValidationError(tag + ": missing keyframes");
    if (!(o.gait.frequency_hz >= 0.0) || !std::isfinite(o.gait.amplitude_rad)) {
      throw ValidationError(tag + ": bad gait");
    }
  }
  std::set<std::int32_t> sensor_ids;
  for (const auto& s : scene.sensors) {
    validate(s);
    if (!sensor_ids.insert(s.sensor_id).second) {
      throw ValidationError("duplicate sensor id " + std::to_string(s.sensor_id));
    }
  }
  for (const auto& p : scene.static_props) {
    if (!(p.reflectivity >= 0.0 && p.reflectivity <= 1.0)) {
      throw ValidationError("prop reflectivity outside [0,1]");
    }
  }
}

// ---------------------------------------------------------------------------
// Geometry.

namespace {

TriangleMesh vehicle_mesh(const Dims& d) {
  // Body over the full footprint from the ground clearance up to 60 % height;
  // cabin on the rear two thirds from there to the roof. Four wheels set in
  // under the body carry it down to z = 0.
  const double hl = 0.5 * d.length;
  const double hw = 0.5 * d.width;
  const double clearance = std::min(0.3, 0.15 * d.height);
  TriangleMesh m = make_box({-hl, -hw, clearance}, {hl, hw, 0.6 * d.height});
  m.append(make_box({-hl, -hw, 0.6 * d.height}, {-hl + 2.0 * d.length / 3.0, hw, d.height}));
  const double wheel_l = std::min(0.6, 0.1 * d.length);
  const double wheel_w = 0.1 * d.width;
  const double axle = hl - 0.2 * d.length;
  const double inset = 0.1 * d.width;
  for (double x : {-axle, axle}) {
    for (double side : {-1.0, 1.0}) {
      const double y_out = side * (hw - inset);
      const double y_in = side * (hw - inset - wheel_w);
      m.append(make_box({x - 0.5 * wheel_l, std::min(y_in, y_out), 0.0},
                        {x + 0.5 * wheel_l, std::max(y_in, y_out), clearance}));
    }
  }
  return m;
}

TriangleMesh pedestrian_mesh(const Dims& d, double amplitude, double phase) {
  const double h = d.height;
  const double w = d.width;
  const double hip_z = 0.47 * h;
  const double shoulder_z = 0.80 * h;
  const double torso_r = 0.5 * d.length;
  const double head_r = 0.065 * h;
  const double leg_r = 0.1 * w;
  const double leg_y = 0.15 * w;
  const double arm_r = 0.075 * w;
  const double arm_y = 0.5 * w - arm_r;
  const double arm_len = 0.36 * h;

  TriangleMesh m;
  const double torso_lo = hip_z + 0.5 * torso_r;
  const double torso_hi = std::max(torso_lo + 1e-3, 0.82 * h - torso_r);
  m.append(make_capsule({0.0, 0.0, torso_lo}, {0.0, 0.0, torso_hi}, torso_r, 3, 10));
  m.append(make_sphere({0.0, 0.0, h - head_r}, head_r, 6, 10));

  // Left limbs sit at +y. A leg swinging by angle a moves its foot forward by
  // hip_z * sin(a) while staying on the ground; arms swing in antiphase to
  // the leg on the same side.
  const double swing = amplitude * std::sin(phase);
  for (int side : {+1, -1}) {
    const double leg_angle = side * swing;
    const double arm_angle = -side * swing;
    m.append(make_slanted_cylinder({hip_z * std::sin(leg_angle), side * leg_y, 0.0},
                                   {0.0, side * leg_y, hip_z}, leg_r, 8));
    m.append(make_slanted_cylinder(
        {arm_len * std::sin(arm_angle), side * arm_y, shoulder_z - arm_len * std::cos(arm_angle)},
        {0.0, side * arm_y, shoulder_z}, arm_r, 8));
  }
  return m;
}

double ground_half_extent(const SceneConfig& scene) {
  double extent = 50.0;
  for (const auto& s : scene.sensors) {
    extent = std::max(extent, std::max(std::abs(s.position.x), std::abs(s.position.y)) +
                                  s.max_range + 10.0);
  }
  return extent;
}

}  // namespace

TriangleMesh object_mesh(const ObjectSpec& object, double phase) {
  if (object.object_class == ObjectClass::kVehicle) return vehicle_mesh(object.nominal_dims);
  return pedestrian_mesh(object.nominal_dims, object.gait.amplitude_rad, phase);
}

std::vector<const TriangleMesh*> FrameGeometry::meshes() const {
  std::vector<const TriangleMesh*> out;
  out.reserve(objects.size() + 1);
  out.push_back(&static_mesh);
  for (const auto& o : objects) out.push_back(&o.mesh);
  return out;
}

FrameGeometry geometry_at(const SceneConfig& scene, int frame_index) {
  if (frame_index < 0 || frame_index >= scene.frame_count()) {
    throw std::out_of_range("frame index " + std::to_string(frame_index) + " outside [0, " +
                            std::to_string(scene.frame_count()) + ")");
  }
  FrameGeometry g;
  g.frame_index = frame_index;
  g.time = scene.frame_time(frame_index);

  g.static_mesh = make_ground(ground_half_extent(scene));
  g.static_mesh.tag(kGroundId, scene.ground_reflectivity);
  for (const auto& prop : scene.static_props) {
    TriangleMesh m = prop.mesh;
    m.tag(kStaticPropId, prop.reflectivity);
    g.static_mesh.append(m);
  }

  g.objects.reserve(scene.objects.size());
  for (const auto& o : scene.objects) {
    ObjectInstance inst;
    inst.object_id = o.object_id;
    inst.pose = pose_at(o.trajectory, g.time);
    const double phase = 2.0 * std::numbers::pi * o.gait.frequency_hz * g.time;
    inst.mesh = object_mesh(o, phase);
    inst.mesh.tag(o.object_id, o.reflectivity);
    inst.mesh.transform(inst.pose.yaw, inst.pose.position);
    g.objects.push_back(std::move(inst));
  }
  return g;
}

// ---------------------------------------------------------------------------
// Scene-config document.

namespace {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

struct Line {
  std::size_t number;
  std::vector<Token> tokens;
};

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view raw = text.substr(pos, end - pos);
    ++number;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    Line line{number, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
      const std::size_t start = i;
      while (i < raw.size() && !std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
      if (i > start) line.tokens.push_back({raw.substr(start, i - start), start + 1});
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    pos = end + 1;
  }
  return lines;
}

template <typename T>
T parse_number(const Line& line, std::size_t index) {
  if (index >= line.tokens.size()) {
    const auto& last = line.tokens.back();
    throw ParseError(line.number, last.column + last.text.size(),
                     "expected a value after '" + std::string(line.tokens.front().text) + "'");
  }
  const Token& tok = line.tokens[index];
  T value{};
  const char* first = tok.text.data();
  const char* last = first + tok.text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError(line.number, tok.column, "invalid number '" + std::string(tok.text) + "'");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) {
      throw ParseError(line.number, tok.column, "non-finite number '" + std::string(tok.text) + "'");
    }
  }
  return value;
}

void expect_arity(const Line& line, std::size_t values) {
  if (line.tokens.size() != values + 1) {
    const Token& at = line.tokens.size() > values + 1 ? line.tokens[values + 1] : line.tokens.back();
    throw ParseError(line.number, at.column,
                     "'" + std::string(line.tokens.front().text) + "' takes " +
                         std::to_string(values) + " value(s)");
  }
}

double number1(const Line& line) {
  expect_arity(line, 1);
  return parse_number<double>(line, 1);
}

Vec3 number3(const Line& line, std::size_t first = 1) {
  return {parse_number<double>(line, first), parse_number<double>(line, first + 1),
          parse_number<double>(line, first + 2)};
}

[[noreturn]] void unknown_key(const Line& line, std::string_view block) {
  throw ParseError(line.number, line.tokens.front().column,
                   "unknown key '" + std::string(line.tokens.front().text) + "' in " +
                       std::string(block));
}

bool is_block_end(const Line& line) {
  return line.tokens.size() == 1 && line.tokens.front().text == "}";
}

void expect_block_open(const Line& line) {
  if (line.tokens.size() != 2 || line.tokens[1].text != "{") {
    const Token& at = line.tokens.size() >= 2 ? line.tokens[1] : line.tokens.front();
    throw ParseError(line.number, at.column, "expected '{' after block name");
  }
}

ObjectSpec parse_object(const std::vector<Line>& lines, std::size_t& i) {
  const Line& header = lines[i];
  expect_block_open(header);
  ObjectSpec o;
  std::optional<std::int32_t> id;
  std::optional<Subtype> subtype;
  std::optional<ObjectClass> object_class;
  std::optional<Dims> dims;
  std::optional<Gait> gait;
  std::vector<Keyframe> keyframes;
  for (++i; i < lines.size(); ++i) {
    const Line& line = lines[i];
    if (is_block_end(line)) break;
    const std::string_view key = line.tokens.front().text;
    if (key == "id") {
      expect_arity(line, 1);
      id = parse_number<std::int32_t>(line, 1);
    } else if (key == "subtype") {
      expect_arity(line, 1);
      subtype = parse_subtype(line.tokens[1].text);
      if (!subtype) throw ParseError(line.number, line.tokens[1].column, "unknown subtype");
    } else if (key == "class") {
      expect_arity(line, 1);
      object_class = parse_object_class(line.tokens[1].text);
      if (!object_class) throw ParseError(line.number, line.tokens[1].column, "unknown class");
    } else if (key == "dims") {
      expect_arity(line, 3);
      const Vec3 v = number3(line);
      dims = Dims{v.x, v.y, v.z};
    } else if (key == "reflectivity") {
      o.reflectivity = number1(line);
    } else if (key == "gait") {
      if (line.tokens.size() == 2 && line.tokens[1].text == "walking") {
        gait = kWalkingGait;
      } else if (line.tokens.size() == 2 && line.tokens[1].text == "running") {
        gait = kRunningGait;
      } else {
        expect_arity(line, 2);
        gait = Gait{parse_number<double>(line, 1), deg_to_rad(parse_number<double>(line, 2))};
      }
    } else if (key == "keyframe") {
      expect_arity(line, 5);
      Keyframe k;
      k.time = parse_number<double>(line, 1);
      k.pose.position = number3(line, 2);
      k.pose.yaw = deg_to_rad(parse_number<double>(line, 5));
      keyframes.push_back(k);
    } else {
      unknown_key(line, "object block");
    }
  }
  if (i == lines.size()) throw ParseError(header.number, 0, "unterminated object block");
  if (!id) throw ParseError(header.number, 0, "object block without 'id'");
  if (!subtype) {
    if (!object_class) throw ParseError(header.number, 0, "object block without 'subtype'");
    subtype = *object_class == ObjectClass::kVehicle ? Subtype::kCar : Subtype::kAdult;
  }
  o.object_id = *id;
  o.subtype = *subtype;
  o.object_class = class_of(*subtype);
  if (object_class && *object_class != o.object_class) {
    throw ValidationError("object " + std::to_string(o.object_id) +
                          ": class does not match subtype");
  }
  o.nominal_dims = dims.value_or(default_dims(o.subtype));
  o.gait = gait.value_or(o.object_class == ObjectClass::kPedestrian ? kWalkingGait : Gait{0.0, 0.0});
  try {
    o.trajectory = Trajectory(std::move(keyframes));
  } catch (const ValidationError& e) {
    throw ValidationError("object " + std::to_string(o.object_id) + ": " + e.what());
  }
  return o;
}

SensorModel parse_sensor(const std::vector<Line>& lines, std::size_t& i) {
  const Line& header = lines[i];
  expect_block_open(header);
  SensorModel s = default_sensor(0, {0.0, 0.0, 5.0});
  bool have_id = false;
  for (++i; i < lines.size(); ++i) {
    const Line& line = lines[i];
    if (is_block_end(line)) break;
    const std::string_view key = line.tokens.front().text;
    if (key == "id") {
      expect_arity(line, 1);
      s.sensor_id = parse_number<std::int32_t>(line, 1);
      have_id = true;
    } else if (key == "position") {
      expect_arity(line, 3);
      s.position = number3(line);
    } else if (key == "yaw") {
      s.yaw = deg_to_rad(number1(line));
    } else if (key == "pitch") {
      s.pitch = deg_to_rad(number1(line));
    } else if (key == "channels") {
      expect_arity(line, 3);
      const int count = parse_number<int>(line, 1);
      if (count < 1) throw ParseError(line.number, line.tokens[1].column, "channel count must be >= 1");
      s.channels = uniform_channels(count, parse_number<double>(line, 2), parse_number<double>(line, 3));
    } else if (key == "elevations") {
      if (line.tokens.size() < 2) throw ParseError(line.number, 0, "'elevations' needs values");
      s.channels.clear();
      for (std::size_t k = 1; k < line.tokens.size(); ++k) {
        s.channels.push_back(deg_to_rad(parse_number<double>(line, k)));
      }
    } else if (key == "azimuth_steps") {
      expect_arity(line, 1);
      s.azimuth_steps = parse_number<int>(line, 1);
    } else if (key == "max_range") {
      s.max_range = number1(line);
    } else if (key == "range_noise") {
      s.range_noise_sigma = number1(line);
    } else if (key == "dropout") {
      s.dropout_prob = number1(line);
    } else if (key == "intensity_exponent") {
      expect_arity(line, 1);
      s.intensity_exponent = parse_number<int>(line, 1);
    } else {
      unknown_key(line, "sensor block");
    }
  }
  if (i == lines.size()) throw ParseError(header.number, 0, "unterminated sensor block");
  if (!have_id) throw ParseError(header.number, 0, "sensor block without 'id'");
  return s;
}

StaticProp parse_prop(const std::vector<Line>& lines, std::size_t& i) {
  const Line& header = lines[i];
  expect_block_open(header);
  StaticProp p;
  TriangleMesh explicit_mesh;
  for (++i; i < lines.size(); ++i) {
    const Line& line = lines[i];
    if (is_block_end(line)) break;
    const std::string_view key = line.tokens.front().text;
    if (key == "reflectivity") {
      p.reflectivity = number1(line);
    } else if (key == "box") {
      expect_arity(line, 6);
      const Vec3 lo = number3(line, 1);
      const Vec3 hi = number3(line, 4);
      if (!(lo.x < hi.x && lo.y < hi.y && lo.z < hi.z)) {
        throw ParseError(line.number, line.tokens[1].column, "box corners must satisfy lo < hi");
      }
      p.mesh.append(make_box(lo, hi));
    } else if (key == "vertex") {
      expect_arity(line, 3);
      explicit_mesh.vertices.push_back(number3(line));
    } else if (key == "triangle") {
      expect_arity(line, 3);
      std::array<std::uint32_t, 3> t{};
      for (int k = 0; k < 3; ++k) {
        t[static_cast<std::size_t>(k)] = parse_number<std::uint32_t>(line, static_cast<std::size_t>(k + 1));
        if (t[static_cast<std::size_t>(k)] >= explicit_mesh.vertices.size()) {
          throw ParseError(line.number, line.tokens[static_cast<std::size_t>(k + 1)].column,
                           "vertex index out of range");
        }
      }
      explicit_mesh.add_triangle(t[0], t[1], t[2], kStaticPropId, 0.0);
    } else {
      unknown_key(line, "prop block");
    }
  }
  if (i == lines.size()) throw ParseError(header.number, 0, "unterminated prop block");
  p.mesh.append(explicit_mesh);
  p.mesh.tag(kStaticPropId, p.reflectivity);
  if (p.mesh.empty()) throw ParseError(header.number, 0, "prop block has no geometry");
  p.mesh.validate();
  return p;
}

}  // namespace

SceneConfig parse_scene(std::string_view text) {
  const std::vector<Line> lines = tokenize(text);
  SceneConfig scene;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const Line& line = lines[i];
    const std::string_view key = line.tokens.front().text;
    if (key == "name") {
      expect_arity(line, 1);
      scene.name = std::string(line.tokens[1].text);
    } else if (key == "duration") {
      scene.duration = number1(line);
    } else if (key == "frame_rate") {
      scene.frame_rate = number1(line);
    } else if (key == "seed") {
      expect_arity(line, 1);
      scene.seed = parse_number<std::uint64_t>(line, 1);
    } else if (key == "ground_reflectivity") {
      scene.ground_reflectivity = number1(line);
    } else if (key == "object") {
      scene.objects.push_back(parse_object(lines, i));
    } else if (key == "sensor") {
      scene.sensors.push_back(parse_sensor(lines, i));
    } else if (key == "prop") {
      scene.static_props.push_back(parse_prop(lines, i));
    } else if (key == "}") {
      throw ParseError(line.number, line.tokens.front().column, "unmatched '}'");
    } else {
      unknown_key(line, "scene");
    }
  }
  validate(scene);
  return scene;
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string format_scene(const SceneConfig& scene) {
  std::string out;
  auto line = [&out](std::initializer_list<std::string> parts) {
    bool first = true;
    for (const auto& p : parts) {
      if (!first) out += ' ';
      out += p;
      first = false;
    }
    out += '\n';
  };
  const auto d = fmt_double;
  line({"name", scene.name});
  line({"duration", d(scene.duration)});
  line({"frame_rate", d(scene.frame_rate)});
  line({"seed", std::to_string(scene.seed)});
  line({"ground_reflectivity", d(scene.ground_reflectivity)});
  for (const auto& o : scene.objects) {
    out += "\nobject {\n";
    line({"id", std::to_string(o.object_id)});
    line({"subtype", std::string(to_string(o.subtype))});
    line({"dims", d(o.nominal_dims.length), d(o.nominal_dims.width), d(o.nominal_dims.height)});
    line({"reflectivity", d(o.reflectivity)});
    if (o.object_class == ObjectClass::kPedestrian) {
      line({"gait", d(o.gait.frequency_hz), d(rad_to_deg(o.gait.amplitude_rad))});
    }
    for (const auto& k : o.trajectory.keyframes()) {
      line({"keyframe", d(k.time), d(k.pose.position.x), d(k.pose.position.y),
            d(k.pose.position.z), d(rad_to_deg(k.pose.yaw))});
    }
    out += "}\n";
  }
  for (const auto& s : scene.sensors) {
    out += "\nsensor {\n";
    line({"id", std::to_string(s.sensor_id)});
    line({"position", d(s.position.x), d(s.position.y), d(s.position.z)});
    line({"yaw", d(rad_to_deg(s.yaw))});
    line({"pitch", d(rad_to_deg(s.pitch))});
    out += "elevations";
    for (double e : s.channels) out += ' ' + d(rad_to_deg(e));
    out += '\n';
    line({"azimuth_steps", std::to_string(s.azimuth_steps)});
    line({"max_range", d(s.max_range)});
    line({"range_noise", d(s.range_noise_sigma)});
    line({"dropout", d(s.dropout_prob)});
    line({"intensity_exponent", std::to_string(s.intensity_exponent)});
    out += "}\n";
  }
  for (const auto& p : scene.static_props) {
    out += "\nprop {\n";
    line({"reflectivity", d(p.reflectivity)});
    for (const auto& v : p.mesh.vertices) line({"vertex", d(v.x), d(v.y), d(v.z)});
    for (const auto& t : p.mesh.triangles) {
      line({"triangle", std::to_string(t[0]), std::to_string(t[1]), std::to_string(t[2])});
    }
    out += "}\n";
  }
  return out;
}

}  // namespace elidar
