#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <limits>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "mondrian/assignment.hpp"
#include "mondrian/error.hpp"
#include "mondrian/geometry.hpp"
#include "mondrian/grid.hpp"

namespace mondrian {

inline long long count_non_empty(const TypedGrid& grid, const Rect& r) {
  long long n = 0;
  for (int y = std::max(0, r.y0); y <= std::min(grid.rows() - 1, r.y1); ++y)
    for (int x = std::max(0, r.x0); x <= std::min(grid.cols() - 1, r.x1); ++x)
      n += grid.empty_at(x, y) ? 0 : 1;
  return n;
}

inline bool intersect(const Rect& a, const Rect& b, Rect& out) {
  out = {std::max(a.x0, b.x0), std::max(a.y0, b.y0), std::min(a.x1, b.x1), std::min(a.y1, b.y1)};
  return out.valid();
}

/// Jaccard index of the non-empty cells covered by two rectangles. Two empty
/// cell sets agree vacuously.
inline double iou(const TypedGrid& grid, const Rect& predicted, const Rect& target) {
  long long p = count_non_empty(grid, predicted);
  long long t = count_non_empty(grid, target);
  Rect both;
  long long common = intersect(predicted, target, both) ? count_non_empty(grid, both) : 0;
  long long uni = p + t - common;
  if (uni == 0) return 1.0;
  return static_cast<double>(common) / static_cast<double>(uni);
}

/// Jaccard index of rectangle areas, ignoring cell content.
inline double box_iou(const Rect& a, const Rect& b) {
  Rect both;
  long long common = intersect(a, b, both) ? both.area() : 0;
  return static_cast<double>(common) / static_cast<double>(a.area() + b.area() - common);
}

/// Largest absolute corner-coordinate difference.
inline double eob(const Rect& p, const Rect& t) {
  return std::max({std::abs(p.x0 - t.x0), std::abs(p.y0 - t.y0), std::abs(p.x1 - t.x1),
                   std::abs(p.y1 - t.y1)});
}

struct RegionScore {
  double iou = 0.0;
  double eob = 0.0;
  int best_prediction = -1;  // index of the prediction with the highest IoU
};

/// Best IoU and lowest EoB over all predictions, per gold region. With no
/// predictions the EoB is the larger grid dimension.
inline std::vector<RegionScore> region_score(std::span<const Rect> predicted,
                                             std::span<const Rect> gold, const TypedGrid& grid) {
  std::vector<RegionScore> out;
  out.reserve(gold.size());
  for (const Rect& t : gold) {
    RegionScore s;
    if (predicted.empty()) {
      s.eob = std::max(grid.rows(), grid.cols());
    } else {
      s.eob = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < predicted.size(); ++i) {
        double v = iou(grid, predicted[i], t);
        if (v > s.iou || s.best_prediction < 0) {
          s.iou = v;
          s.best_prediction = static_cast<int>(i);
        }
        s.eob = std::min(s.eob, eob(predicted[i], t));
      }
    }
    out.push_back(s);
  }
  return out;
}

/// Fraction of scores that pass each threshold (>= t, or <= t for error
/// scores such as EoB).
inline std::vector<double> detection_curve(std::span<const double> scores,
                                           std::span<const double> thresholds,
                                           bool higher_is_better = true) {
  std::vector<double> curve;
  curve.reserve(thresholds.size());
  for (double t : thresholds) {
    if (scores.empty()) {
      curve.push_back(0.0);
      continue;
    }
    std::size_t pass = 0;
    for (double s : scores) pass += higher_is_better ? (s >= t) : (s <= t);
    curve.push_back(static_cast<double>(pass) / static_cast<double>(scores.size()));
  }
  return curve;
}

struct BinaryReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  bool precision_defined = true;
  bool recall_defined = true;
};

/// Binary metrics for "file has more than one region".
inline BinaryReport multiregion_classification(std::span<const int> predicted_counts,
                                               std::span<const int> gold_counts) {
  if (predicted_counts.size() != gold_counts.size()) {
    throw Error(ErrorCode::InvalidArgument, "prediction and gold counts differ in length");
  }
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i = 0; i < gold_counts.size(); ++i) {
    bool p = predicted_counts[i] > 1;
    bool g = gold_counts[i] > 1;
    if (p && g) ++tp;
    else if (p) ++fp;
    else if (g) ++fn;
    else ++tn;
  }
  BinaryReport r;
  std::size_t total = tp + fp + fn + tn;
  r.accuracy = total ? static_cast<double>(tp + tn) / total : 0.0;
  r.precision_defined = tp + fp > 0;
  r.precision = r.precision_defined ? static_cast<double>(tp) / (tp + fp) : 0.0;
  r.recall_defined = tp + fn > 0;
  r.recall = r.recall_defined ? static_cast<double>(tp) / (tp + fn) : 0.0;
  return r;
}

struct VMeasure {
  double homogeneity = 1.0;
  double completeness = 1.0;
  double v_measure = 1.0;
};

/// Homogeneity, completeness and their harmonic mean, from conditional
/// entropies of the contingency table.
template <class PredLabel, class GoldLabel>
VMeasure vmeasure(std::span<const PredLabel> predicted, std::span<const GoldLabel> gold) {
  if (predicted.size() != gold.size()) {
    throw Error(ErrorCode::InvalidArgument, "partitions cover different item sets");
  }
  VMeasure out;
  const double n = static_cast<double>(gold.size());
  if (gold.empty()) return out;

  std::map<PredLabel, int> pred_ids;
  std::map<GoldLabel, int> gold_ids;
  for (const auto& p : predicted) pred_ids.emplace(p, static_cast<int>(pred_ids.size()));
  for (const auto& g : gold) gold_ids.emplace(g, static_cast<int>(gold_ids.size()));
  std::vector<std::vector<double>> table(gold_ids.size(), std::vector<double>(pred_ids.size(), 0));
  std::vector<double> gold_sizes(gold_ids.size(), 0), pred_sizes(pred_ids.size(), 0);
  for (std::size_t i = 0; i < gold.size(); ++i) {
    int c = gold_ids[gold[i]];
    int k = pred_ids[predicted[i]];
    table[c][k] += 1;
    gold_sizes[c] += 1;
    pred_sizes[k] += 1;
  }

  auto entropy = [n](const std::vector<double>& sizes) {
    double h = 0.0;
    for (double s : sizes)
      if (s > 0) h -= (s / n) * std::log(s / n);
    return h;
  };
  double h_gold = entropy(gold_sizes);
  double h_pred = entropy(pred_sizes);
  double h_gold_given_pred = 0.0;
  double h_pred_given_gold = 0.0;
  for (std::size_t c = 0; c < gold_sizes.size(); ++c) {
    for (std::size_t k = 0; k < pred_sizes.size(); ++k) {
      double a = table[c][k];
      if (a <= 0) continue;
      h_gold_given_pred -= (a / n) * std::log(a / pred_sizes[k]);
      h_pred_given_gold -= (a / n) * std::log(a / gold_sizes[c]);
    }
  }
  out.homogeneity = h_gold == 0.0 ? 1.0 : 1.0 - h_gold_given_pred / h_gold;
  out.completeness = h_pred == 0.0 ? 1.0 : 1.0 - h_pred_given_gold / h_pred;
  double sum = out.homogeneity + out.completeness;
  out.v_measure = sum == 0.0 ? 0.0 : 2.0 * out.homogeneity * out.completeness / sum;
  return out;
}

template <class PredLabel, class GoldLabel>
VMeasure vmeasure(const std::vector<PredLabel>& predicted, const std::vector<GoldLabel>& gold) {
  return vmeasure(std::span<const PredLabel>(predicted), std::span<const GoldLabel>(gold));
}

struct EditReport {
  int distance = 0;
  int resizes = 0;
  int additions = 0;
  int deletions = 0;
};

/// User edits needed to turn predicted rectangles into gold ones. Predictions
/// and golds are paired one-to-one maximizing total IoU; pairs with zero IoU
/// are not considered matched. A matched inexact pair costs one resize, a
/// missing gold costs an addition plus a resize, a spurious prediction one
/// deletion. IoU is computed on non-empty cells when a grid is supplied and on
/// box areas otherwise.
inline EditReport edit_distance(std::span<const Rect> predicted, std::span<const Rect> gold,
                                const TypedGrid* grid = nullptr) {
  std::vector<std::vector<double>> w(predicted.size(), std::vector<double>(gold.size(), 0.0));
  for (std::size_t i = 0; i < predicted.size(); ++i)
    for (std::size_t j = 0; j < gold.size(); ++j)
      w[i][j] = grid ? iou(*grid, predicted[i], gold[j]) : box_iou(predicted[i], gold[j]);

  Assignment match = max_weight_matching(w);
  EditReport r;
  std::vector<char> gold_hit(gold.size(), 0);
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    int j = match.row_to_col.empty() ? -1 : match.row_to_col[i];
    if (j >= 0 && (w[i][j] > 0.0 || predicted[i] == gold[j])) {
      gold_hit[j] = 1;
      if (!(predicted[i] == gold[j])) ++r.resizes;
    } else {
      ++r.deletions;
    }
  }
  for (char hit : gold_hit) r.additions += hit ? 0 : 1;
  r.distance = r.resizes + 2 * r.additions + r.deletions;
  return r;
}

/// Share of non-empty cells inside a box.
inline double region_density(const TypedGrid& grid, const Rect& r) {
  Rect clipped;
  if (!intersect(r, Rect{0, 0, grid.cols() - 1, grid.rows() - 1}, clipped)) return 0.0;
  return static_cast<double>(count_non_empty(grid, clipped)) / static_cast<double>(clipped.area());
}

/// Shannon entropy (nats) of the syntactic types of the non-empty cells in a box.
inline double region_type_entropy(const TypedGrid& grid, const Rect& r) {
  std::map<SyntacticType, double> counts;
  double total = 0;
  for (int y = std::max(0, r.y0); y <= std::min(grid.rows() - 1, r.y1); ++y)
    for (int x = std::max(0, r.x0); x <= std::min(grid.cols() - 1, r.x1); ++x)
      if (!grid.empty_at(x, y)) {
        counts[grid.type_at(x, y)] += 1;
        total += 1;
      }
  double h = 0.0;
  for (const auto& [type, c] : counts) h -= (c / total) * std::log(c / total);
  return h;
}

}  // namespace mondrian
