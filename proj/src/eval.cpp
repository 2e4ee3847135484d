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

#include "elidar/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <tuple>

#include <json.hpp>

#include "elidar/dataset.hpp"
#include "elidar/errors.hpp"

namespace elidar {

std::string_view to_string(IouKind kind) { return kind == IouKind::kBev ? "bev" : "3d"; }

std::array<std::array<double, 2>, 4> footprint(const BoundingBox3D& box) {
  const double c = std::cos(box.yaw);
  const double s = std::sin(box.yaw);
  const double hl = 0.5 * box.length;
  const double hw = 0.5 * box.width;
  std::array<std::array<double, 2>, 4> out{};
  const double local[4][2] = {{hl, hw}, {-hl, hw}, {-hl, -hw}, {hl, -hw}};
  for (int i = 0; i < 4; ++i) {
    out[static_cast<std::size_t>(i)] = {box.center.x + c * local[i][0] - s * local[i][1],
                                        box.center.y + s * local[i][0] + c * local[i][1]};
  }
  return out;
}

namespace {

using Point2 = std::array<double, 2>;

inline double side(const Point2& a, const Point2& b, const Point2& p) {
  return (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
}

double polygon_area(std::span<const Point2> poly) {
  double twice = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2& p = poly[i];
    const Point2& q = poly[(i + 1) % poly.size()];
    twice += p[0] * q[1] - q[0] * p[1];
  }
  return 0.5 * std::abs(twice);
}

}  // namespace

double convex_intersection_area(std::span<const Point2> subject, std::span<const Point2> clip) {
  std::vector<Point2> poly(subject.begin(), subject.end());
  std::vector<Point2> next;
  for (std::size_t e = 0; e < clip.size() && !poly.empty(); ++e) {
    const Point2& a = clip[e];
    const Point2& b = clip[(e + 1) % clip.size()];
    next.clear();
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Point2& p = poly[i];
      const Point2& q = poly[(i + 1) % poly.size()];
      const double sp = side(a, b, p);
      const double sq = side(a, b, q);
      if (sp >= 0.0) next.push_back(p);
      if ((sp >= 0.0) != (sq >= 0.0)) {
        const double s = sp / (sp - sq);
        next.push_back({p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])});
      }
    }
    poly.swap(next);
  }
  return poly.size() < 3 ? 0.0 : polygon_area(poly);
}

namespace {

bool precedes(const BoundingBox3D& a, const BoundingBox3D& b) {
  return std::tie(a.center.x, a.center.y, a.length, a.width, a.yaw) <
         std::tie(b.center.x, b.center.y, b.length, b.width, b.yaw);
}

// Clips in a canonical argument order so the area is bit-symmetric.
double bev_intersection(const BoundingBox3D& first, const BoundingBox3D& second) {
  const bool swap = precedes(second, first);
  const BoundingBox3D& a = swap ? second : first;
  const BoundingBox3D& b = swap ? first : second;
  // Cheap reject on circumscribed circles.
  const double ra = 0.5 * std::hypot(a.length, a.width);
  const double rb = 0.5 * std::hypot(b.length, b.width);
  if (std::hypot(a.center.x - b.center.x, a.center.y - b.center.y) > ra + rb) return 0.0;
  const auto pa = footprint(a);
  const auto pb = footprint(b);
  return convex_intersection_area(pa, pb);
}

}  // namespace

double iou_bev(const BoundingBox3D& a, const BoundingBox3D& b) {
  const double inter = bev_intersection(a, b);
  if (inter <= 0.0) return 0.0;
  const double uni = a.length * a.width + b.length * b.width - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double iou_3d(const BoundingBox3D& a, const BoundingBox3D& b) {
  const double z_lo = std::max(a.center.z - 0.5 * a.height, b.center.z - 0.5 * b.height);
  const double z_hi = std::min(a.center.z + 0.5 * a.height, b.center.z + 0.5 * b.height);
  if (z_hi <= z_lo) return 0.0;
  const double inter = bev_intersection(a, b) * (z_hi - z_lo);
  if (inter <= 0.0) return 0.0;
  const double uni = a.length * a.width * a.height + b.length * b.width * b.height - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double iou(const BoundingBox3D& a, const BoundingBox3D& b, IouKind kind) {
  return kind == IouKind::kBev ? iou_bev(a, b) : iou_3d(a, b);
}

FrameMatch match_frame(std::span<const Detection> detections,
                       std::span<const BoundingBox3D> ground_truth, IouKind kind,
                       double threshold) {
  FrameMatch result;
  result.true_positive.assign(detections.size(), false);
  std::vector<std::size_t> order(detections.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return detections[a].score > detections[b].score;
  });
  std::vector<bool> claimed(ground_truth.size(), false);
  for (std::size_t d : order) {
    double best_iou = -1.0;
    std::size_t best_gt = ground_truth.size();
    for (std::size_t g = 0; g < ground_truth.size(); ++g) {
      if (claimed[g]) continue;
      const double v = iou(detections[d].box, ground_truth[g], kind);
      if (v > best_iou) {
        best_iou = v;
        best_gt = g;
      }
    }
    if (best_gt < ground_truth.size() && best_iou >= threshold) {
      claimed[best_gt] = true;
      result.true_positive[d] = true;
    }
  }
  result.unmatched_gt =
      static_cast<std::size_t>(std::count(claimed.begin(), claimed.end(), false));
  return result;
}

namespace {

struct CurvePoint {
  double score;
  std::size_t tp;
  std::size_t fp;
};

// Cumulative counts at each distinct score, descending.
std::vector<CurvePoint> pr_curve(std::span<const ScoredFlag> predictions) {
  std::vector<ScoredFlag> sorted(predictions.begin(), predictions.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const ScoredFlag& a, const ScoredFlag& b) { return a.score > b.score; });
  std::vector<CurvePoint> curve;
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    (sorted[i].true_positive ? tp : fp) += 1;
    if (i + 1 == sorted.size() || sorted[i + 1].score != sorted[i].score) {
      curve.push_back({sorted[i].score, tp, fp});
    }
  }
  return curve;
}

}  // namespace

std::optional<double> average_precision(std::span<const ScoredFlag> predictions,
                                        std::size_t gt_count) {
  if (gt_count == 0) return std::nullopt;
  const auto curve = pr_curve(predictions);
  double sum = 0.0;
  for (int i = 1; i <= kRecallPoints; ++i) {
    double best = 0.0;
    for (const auto& c : curve) {
      // recall = tp / gt >= i / 40, compared exactly in integers.
      if (c.tp * kRecallPoints >= static_cast<std::size_t>(i) * gt_count) {
        best = std::max(best, static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp));
      }
    }
    sum += best;
  }
  return sum / kRecallPoints;
}

double f1_score(double precision, double recall) {
  const double denom = precision + recall;
  return denom > 0.0 ? 2.0 * precision * recall / denom : 0.0;
}

std::optional<OperatingPoint> prf_at_operating_point(std::span<const ScoredFlag> predictions,
                                                     std::size_t gt_count) {
  if (gt_count == 0) return std::nullopt;
  OperatingPoint best;
  best.fn = gt_count;
  bool have = false;
  for (const auto& c : pr_curve(predictions)) {
    OperatingPoint op;
    op.tp = c.tp;
    op.fp = c.fp;
    op.fn = gt_count - c.tp;
    op.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    op.recall = static_cast<double>(c.tp) / static_cast<double>(gt_count);
    op.f1 = f1_score(op.precision, op.recall);
    op.score_threshold = c.score;
    // F1 = 2tp / (2tp + fp + fn); compared as exact fractions.
    const auto num = [](const OperatingPoint& o) { return 2 * o.tp; };
    const auto den = [](const OperatingPoint& o) { return 2 * o.tp + o.fp + o.fn; };
    if (!have || num(op) * den(best) > num(best) * den(op)) {
      best = op;
      have = true;
    }
  }
  return best;
}

const ClassReport& EvalReport::get(ObjectClass c) const {
  for (const auto& r : classes) {
    if (r.object_class == c) return r;
  }
  throw std::out_of_range("class missing from report");
}

EvalReport evaluate(const std::map<int, std::vector<BoundingBox3D>>& ground_truth,
                    const std::map<int, std::vector<Detection>>& predictions,
                    const MatchConfig& config) {
  std::set<int> frame_set;
  for (const auto& [f, _] : ground_truth) frame_set.insert(f);
  for (const auto& [f, _] : predictions) frame_set.insert(f);
  const std::vector<int> frames(frame_set.begin(), frame_set.end());

  EvalReport report;
  report.iou_kind = config.iou_kind;
  report.frames = frames.size();
  static const std::vector<BoundingBox3D> kNoBoxes;
  static const std::vector<Detection> kNoDetections;

  for (ObjectClass cls : {ObjectClass::kPedestrian, ObjectClass::kVehicle}) {
    const double threshold = config.threshold(cls);
    std::vector<std::vector<ScoredFlag>> per_frame(frames.size());
    std::vector<std::size_t> gt_per_frame(frames.size(), 0);
    const auto nframes = static_cast<std::int64_t>(frames.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t fi = 0; fi < nframes; ++fi) {
      const int f = frames[static_cast<std::size_t>(fi)];
      const auto git = ground_truth.find(f);
      const auto pit = predictions.find(f);
      const auto& gts = git == ground_truth.end() ? kNoBoxes : git->second;
      const auto& dets = pit == predictions.end() ? kNoDetections : pit->second;
      std::vector<BoundingBox3D> g;
      std::vector<Detection> d;
      for (const auto& b : gts) {
        if (b.object_class == cls) g.push_back(b);
      }
      for (const auto& x : dets) {
        if (x.box.object_class == cls) d.push_back(x);
      }
      const FrameMatch m = match_frame(d, g, config.iou_kind, threshold);
      auto& flags = per_frame[static_cast<std::size_t>(fi)];
      for (std::size_t k = 0; k < d.size(); ++k) flags.push_back({d[k].score, m.true_positive[k]});
      gt_per_frame[static_cast<std::size_t>(fi)] = g.size();
    }
    std::vector<ScoredFlag> all;
    ClassReport cr;
    cr.object_class = cls;
    cr.iou_threshold = threshold;
    for (std::size_t fi = 0; fi < frames.size(); ++fi) {
      all.insert(all.end(), per_frame[fi].begin(), per_frame[fi].end());
      cr.gt_count += gt_per_frame[fi];
    }
    cr.ap = average_precision(all, cr.gt_count);
    cr.operating_point = prf_at_operating_point(all, cr.gt_count);
    report.classes.push_back(cr);
  }
  return report;
}

EvalReport evaluate_dataset(const std::filesystem::path& gt_dir,
                            const std::filesystem::path& pred_dir, const MatchConfig& config) {
  std::map<int, std::vector<BoundingBox3D>> gt;
  for (const auto& [frame, path] : list_label_files(label_directory(gt_dir))) {
    gt[frame] = to_boxes(read_label_file(path, false));
  }
  std::map<int, std::vector<Detection>> pred;
  for (const auto& [frame, path] : list_label_files(label_directory(pred_dir))) {
    pred[frame] = to_detections(read_label_file(path, true));
  }
  return evaluate(gt, pred, config);
}

namespace {

std::string percent(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * *v);
  return buf;
}

}  // namespace

std::string format_report_table(const EvalReport& report) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "Detection results (%zu frames, IoU %s: Pedestrian %.2f, Vehicle %.2f, AP R%d)\n",
                report.frames, std::string(to_string(report.iou_kind)).c_str(),
                report.get(ObjectClass::kPedestrian).iou_threshold,
                report.get(ObjectClass::kVehicle).iou_threshold, kRecallPoints);
  out += buf;
  auto row = [&](const std::string& name, const std::string& ped, const std::string& veh) {
    std::snprintf(buf, sizeof buf, "| %-15s | %-12s | %-12s |\n", name.c_str(), ped.c_str(), veh.c_str());
    out += buf;
  };
  const ClassReport& p = report.get(ObjectClass::kPedestrian);
  const ClassReport& v = report.get(ObjectClass::kVehicle);
  auto metric = [](const ClassReport& r, double OperatingPoint::*field) -> std::optional<double> {
    if (!r.operating_point) return std::nullopt;
    return (*r.operating_point).*field;
  };
  auto counts = [](const ClassReport& r) {
    if (!r.operating_point) return std::string("n/a");
    return std::to_string(r.operating_point->tp) + "/" + std::to_string(r.operating_point->fp) +
           "/" + std::to_string(r.operating_point->fn);
  };
  auto cutoff = [](const ClassReport& r) {
    if (!r.operating_point || !r.operating_point->score_threshold) return std::string("n/a");
    char b[32];
    std::snprintf(b, sizeof b, "%.4f", *r.operating_point->score_threshold);
    return std::string(b);
  };
  row("Class", "Pedestrians", "Vehicles");
  row("AP", percent(p.ap), percent(v.ap));
  row("Precision", percent(metric(p, &OperatingPoint::precision)),
      percent(metric(v, &OperatingPoint::precision)));
  row("Recall", percent(metric(p, &OperatingPoint::recall)),
      percent(metric(v, &OperatingPoint::recall)));
  row("F1-Score", percent(metric(p, &OperatingPoint::f1)), percent(metric(v, &OperatingPoint::f1)));
  row("TP/FP/FN", counts(p), counts(v));
  row("GT boxes", std::to_string(p.gt_count), std::to_string(v.gt_count));
  row("Score cutoff", cutoff(p), cutoff(v));
  return out;
}

std::string format_report_json(const EvalReport& report) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["iou_kind"] = std::string(to_string(report.iou_kind));
  doc["ap_recall_points"] = kRecallPoints;
  doc["operating_point_policy"] = "max-f1";
  doc["frames"] = report.frames;
  ordered_json thresholds;
  for (const auto& r : report.classes) {
    thresholds[std::string(to_string(r.object_class))] = r.iou_threshold;
  }
  doc["iou_thresholds"] = thresholds;
  ordered_json classes = ordered_json::array();
  for (const auto& r : report.classes) {
    ordered_json c;
    c["class"] = std::string(to_string(r.object_class));
    c["ap"] = r.ap ? ordered_json(*r.ap) : ordered_json(nullptr);
    const auto& op = r.operating_point;
    c["precision"] = op ? ordered_json(op->precision) : ordered_json(nullptr);
    c["recall"] = op ? ordered_json(op->recall) : ordered_json(nullptr);
    c["f1"] = op ? ordered_json(op->f1) : ordered_json(nullptr);
    c["tp"] = op ? op->tp : 0;
    c["fp"] = op ? op->fp : 0;
    c["fn"] = op ? op->fn : r.gt_count;
    c["gt_count"] = r.gt_count;
    c["score_threshold"] =
        op && op->score_threshold ? ordered_json(*op->score_threshold) : ordered_json(nullptr);
    classes.push_back(c);
  }
  doc["classes"] = classes;
  return doc.dump(2) + "\n";
}

}  // namespace elidar
