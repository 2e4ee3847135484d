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

#ifndef ELIDAR_EVAL_HPP_
#define ELIDAR_EVAL_HPP_

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "elidar/annotate.hpp"
#include "elidar/detect.hpp"

namespace elidar {

enum class IouKind { kBev, k3d };

std::string_view to_string(IouKind kind);  // "bev" / "3d"

// Footprint corners, counter-clockwise.
std::array<std::array<double, 2>, 4> footprint(const BoundingBox3D& box);

// Area of the intersection of two convex counter-clockwise polygons
// (Sutherland-Hodgman clipping).
double convex_intersection_area(std::span<const std::array<double, 2>> subject,
                                std::span<const std::array<double, 2>> clip);

double iou_bev(const BoundingBox3D& a, const BoundingBox3D& b);
double iou_3d(const BoundingBox3D& a, const BoundingBox3D& b);
double iou(const BoundingBox3D& a, const BoundingBox3D& b, IouKind kind);

struct MatchConfig {
  IouKind iou_kind = IouKind::kBev;
  double iou_threshold_vehicle = 0.5;
  double iou_threshold_pedestrian = 0.25;

  double threshold(ObjectClass c) const {
    return c == ObjectClass::kVehicle ? iou_threshold_vehicle : iou_threshold_pedestrian;
  }
};

inline constexpr int kRecallPoints = 40;

struct FrameMatch {
  std::vector<bool> true_positive;  // parallel to the detections
  std::size_t unmatched_gt = 0;
};

// Greedy matching of one class within one frame. Detections are visited by
// descending score (input order on ties); each claims the unclaimed ground
// truth with the highest IoU (lowest index on ties) when that IoU reaches
// `threshold`.
FrameMatch match_frame(std::span<const Detection> detections,
                       std::span<const BoundingBox3D> ground_truth, IouKind kind,
                       double threshold);

struct ScoredFlag {
  double score = 0.0;
  bool true_positive = false;
};

// 40-point interpolated AP. Predictions sharing a score enter the curve
// together. Absent when gt_count == 0.
std::optional<double> average_precision(std::span<const ScoredFlag> predictions,
                                        std::size_t gt_count);

struct OperatingPoint {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::optional<double> score_threshold;  // absent with no predictions
};

double f1_score(double precision, double recall);

// Max-F1 cutoff over all distinct scores (higher cutoff on ties). Absent
// when gt_count == 0.
std::optional<OperatingPoint> prf_at_operating_point(std::span<const ScoredFlag> predictions,
                                                     std::size_t gt_count);

struct ClassReport {
  ObjectClass object_class = ObjectClass::kVehicle;
  std::size_t gt_count = 0;
  double iou_threshold = 0.0;
  std::optional<double> ap;
  std::optional<OperatingPoint> operating_point;
};

struct EvalReport {
  IouKind iou_kind = IouKind::kBev;
  std::size_t frames = 0;
  std::vector<ClassReport> classes;  // Pedestrian, Vehicle

  const ClassReport& get(ObjectClass c) const;
};

// Frame index -> boxes. Frames missing from `predictions` have no detections.
EvalReport evaluate(const std::map<int, std::vector<BoundingBox3D>>& ground_truth,
                    const std::map<int, std::vector<Detection>>& predictions,
                    const MatchConfig& config);

// Reads NNNNNN.txt label files. Throws DataError naming file and line on
// unparseable content.
EvalReport evaluate_dataset(const std::filesystem::path& gt_dir,
                            const std::filesystem::path& pred_dir, const MatchConfig& config);

// Plain-text table laid out like a class x metric results table.
std::string format_report_table(const EvalReport& report);

// JSON document; per-class keys: class, ap, precision, recall, f1, tp, fp,
// fn, gt_count, score_threshold.
std::string format_report_json(const EvalReport& report);

}  // namespace elidar

#endif  // ELIDAR_EVAL_HPP_
