#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mondrian/error.hpp"
#include "mondrian/fingerprint.hpp"
#include "mondrian/geometry.hpp"
#include "mondrian/grid.hpp"
#include "mondrian/metrics.hpp"
#include "mondrian/segment.hpp"

namespace mondrian {

/// Weights of the three element-distance terms and the clustering radius.
/// A region may consist of a single element, so no element is ever noise.
struct ClusterParams {
  double alpha = 1.0;    // geometric distance
  double beta = 0.5;     // size difference
  double gamma = 1.0;    // misalignment
  double epsilon = 1.5;  // radius, cell units
  int min_points = 1;

  void validate() const {
    if (alpha < 0 || beta < 0 || gamma < 0) {
      throw Error(ErrorCode::InvalidArgument, "distance weights must be non-negative");
    }
    if (!(epsilon > 0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
    if (min_points != 1) throw Error(ErrorCode::InvalidArgument, "min_points is fixed to 1");
  }
};

struct Region {
  int id = 0;
  std::vector<Element> elements;
  Rect boundary;
  Fingerprint fingerprint;
};

/// Union-find with path halving and union by size.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

inline double size_difference(const Rect& a, const Rect& b) {
  double sa = static_cast<double>(a.area());
  double sb = static_cast<double>(b.area());
  return 1.0 - std::min(sa, sb) / std::max(sa, sb);
}

/// Smaller of the summed row offsets and summed column offsets of the two
/// corner pairs; zero when the rectangles line up along either axis.
inline double misalignment(const Rect& a, const Rect& b) {
  int h = std::abs(a.y0 - b.y0) + std::abs(a.y1 - b.y1);
  int v = std::abs(a.x0 - b.x0) + std::abs(a.x1 - b.x1);
  return std::min(h, v);
}

inline double element_distance(const Rect& a, const Rect& b, const ClusterParams& p) {
  double geo = relation(a, b, true).distance;
  return p.alpha * geo + p.beta * size_difference(a, b) + p.gamma * misalignment(a, b);
}

inline double element_distance(const Element& a, const Element& b, const ClusterParams& p) {
  return element_distance(a.box, b.box, p);
}

namespace detail {

inline std::vector<Region> regions_from_sets(std::span<const Element> elements,
                                             DisjointSets& sets) {
  std::vector<std::vector<Element>> groups;
  std::vector<int> slot(elements.size(), -1);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    std::size_t root = sets.find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[slot[root]].push_back(elements[i]);
  }
  std::vector<Region> regions;
  regions.reserve(groups.size());
  for (auto& g : groups) {
    std::sort(g.begin(), g.end(),
              [](const Element& a, const Element& b) { return a.box < b.box; });
    Region r;
    r.boundary = g.front().box;
    for (const auto& e : g) r.boundary = bounding_box(r.boundary, e.box);
    r.elements = std::move(g);
    regions.push_back(std::move(r));
  }
  std::sort(regions.begin(), regions.end(), [](const Region& a, const Region& b) {
    if (a.boundary != b.boundary) return a.boundary < b.boundary;
    return a.elements.front().box < b.elements.front().box;
  });
  for (std::size_t i = 0; i < regions.size(); ++i) regions[i].id = static_cast<int>(i);
  return regions;
}

}  // namespace detail

/// Density clustering with a single-element minimum: regions are the
/// connected components of the graph linking elements within the radius.
/// Fingerprints are left empty; see attach_fingerprints.
inline std::vector<Region> detect_regions(std::span<const Element> elements,
                                          const ClusterParams& p) {
  p.validate();
  DisjointSets sets(elements.size());
  for (std::size_t i = 0; i < elements.size(); ++i)
    for (std::size_t j = i + 1; j < elements.size(); ++j)
      if (element_distance(elements[i], elements[j], p) <= p.epsilon) sets.unite(i, j);
  return detail::regions_from_sets(elements, sets);
}

inline void attach_fingerprints(std::vector<Region>& regions, const TypedGrid& grid) {
  for (auto& r : regions) r.fingerprint = fingerprint(grid, r.boundary);
}

/// Full per-file pipeline: segmentation, clustering, fingerprinting.
inline std::vector<Region> detect_file(const TypedGrid& grid, const ClusterParams& p) {
  auto elements = segment_file(grid);
  auto regions = detect_regions(elements, p);
  attach_fingerprints(regions, grid);
  return regions;
}

inline std::vector<Rect> boundaries(const std::vector<Region>& regions) {
  std::vector<Rect> out;
  out.reserve(regions.size());
  for (const auto& r : regions) out.push_back(r.boundary);
  return out;
}

/// 0.1..2.0 by 0.1, 3..10 by 1, 20..100 by 10.
inline std::vector<double> default_radius_grid() {
  std::vector<double> radii;
  for (int i = 1; i <= 20; ++i) radii.push_back(i / 10.0);
  for (int i = 3; i <= 10; ++i) radii.push_back(i);
  for (int i = 20; i <= 100; i += 10) radii.push_back(i);
  return radii;
}

struct RadiusClustering {
  double epsilon = 0.0;
  std::vector<Region> regions;
};

/// Clusters at every radius of an ascending grid, stopping after the first
/// radius that yields a single region.
inline std::vector<RadiusClustering> sweep_radius(std::span<const Element> elements,
                                                  const ClusterParams& weights,
                                                  std::span<const double> radii) {
  if (radii.empty()) throw Error(ErrorCode::InvalidArgument, "radius grid is empty");
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (!(radii[i] > radii[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "radius grid must be ascending");
    }
  }
  struct Pair {
    double d;
    std::size_t a, b;
  };
  std::vector<Pair> pairs;
  pairs.reserve(elements.size() * (elements.size() > 0 ? elements.size() - 1 : 0) / 2);
  for (std::size_t i = 0; i < elements.size(); ++i)
    for (std::size_t j = i + 1; j < elements.size(); ++j)
      pairs.push_back({element_distance(elements[i], elements[j], weights), i, j});
  std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) { return x.d < y.d; });

  std::vector<RadiusClustering> out;
  DisjointSets sets(elements.size());
  std::size_t components = elements.size();
  std::size_t next = 0;
  for (double r : radii) {
    ClusterParams p = weights;
    p.epsilon = r;
    p.validate();
    while (next < pairs.size() && pairs[next].d <= r) {
      if (sets.unite(pairs[next].a, pairs[next].b)) --components;
      ++next;
    }
    out.push_back({r, detail::regions_from_sets(elements, sets)});
    if (components <= 1) break;
  }
  return out;
}

struct RadiusChoice {
  double epsilon = 1.5;
  double mean_iou = 0.0;  // only meaningful when chosen against gold regions
};

/// With gold regions, the radius whose clustering maximizes the mean best IoU
/// per gold region (smallest radius on ties). Without gold, the static default.
inline RadiusChoice select_radius(std::span<const RadiusClustering> sweep, const TypedGrid& grid,
                                  std::optional<std::span<const Rect>> gold,
                                  double static_radius = 1.5) {
  RadiusChoice best{static_radius, 0.0};
  if (!gold || sweep.empty()) return best;
  bool first = true;
  for (const auto& step : sweep) {
    auto predicted = boundaries(step.regions);
    auto scores = region_score(predicted, *gold, grid);
    double mean = 0.0;
    for (const auto& s : scores) mean += s.iou;
    mean = scores.empty() ? 0.0 : mean / static_cast<double>(scores.size());
    if (first || mean > best.mean_iou) {
      best = {step.epsilon, mean};
      first = false;
    }
  }
  return best;
}

}  // namespace mondrian
