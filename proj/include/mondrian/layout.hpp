#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <utility>
#include <vector>

#include "mondrian/assignment.hpp"
#include "mondrian/cluster.hpp"
#include "mondrian/error.hpp"
#include "mondrian/fingerprint.hpp"
#include "mondrian/geometry.hpp"

namespace mondrian {

using Matrix = std::vector<std::vector<double>>;

/// Complete graph over the regions of one file, edges labeled with the
/// spatial relation of the region boundaries.
struct LayoutGraph {
  std::vector<int> region_ids;
  std::vector<Rect> boundaries;
  std::vector<Fingerprint> fingerprints;
  std::vector<std::vector<SpatialRelation>> edges;  // symmetric; diagonal unused

  std::size_t size() const noexcept { return boundaries.size(); }
  std::size_t degree() const noexcept { return size() == 0 ? 0 : size() - 1; }
  std::size_t edge_count() const noexcept { return size() * degree() / 2; }
};

inline LayoutGraph build_layout(std::vector<Rect> boundaries, std::vector<Fingerprint> fingerprints,
                                std::vector<int> region_ids = {}) {
  if (boundaries.empty()) throw Error(ErrorCode::EmptyLayout, "a layout needs at least one region");
  if (fingerprints.size() != boundaries.size()) {
    throw Error(ErrorCode::InvalidArgument, "one fingerprint per region boundary required");
  }
  LayoutGraph g;
  if (region_ids.empty()) {
    for (std::size_t i = 0; i < boundaries.size(); ++i) region_ids.push_back(static_cast<int>(i));
  }
  g.region_ids = std::move(region_ids);
  g.boundaries = std::move(boundaries);
  g.fingerprints = std::move(fingerprints);
  const std::size_t n = g.size();
  g.edges.assign(n, std::vector<SpatialRelation>(n));
  for (std::size_t i = 0; i < n; ++i) {
    g.edges[i][i] = relation(g.boundaries[i], g.boundaries[i], true);
    for (std::size_t j = i + 1; j < n; ++j) {
      g.edges[i][j] = relation(g.boundaries[i], g.boundaries[j], true);
      g.edges[j][i] = g.edges[i][j];
    }
  }
  return g;
}

inline LayoutGraph build_layout(const std::vector<Region>& regions) {
  std::vector<Rect> boxes;
  std::vector<Fingerprint> fps;
  std::vector<int> ids;
  for (const auto& r : regions) {
    boxes.push_back(r.boundary);
    fps.push_back(r.fingerprint);
    ids.push_back(r.id);
  }
  return build_layout(std::move(boxes), std::move(fps), std::move(ids));
}

/// Zero for different directions; otherwise one minus the normalized
/// Euclidean length of the relative (magnitude, distance) differences.
inline double edge_similarity(const SpatialRelation& e1, const SpatialRelation& e2) {
  if (e1.direction != e2.direction) return 0.0;
  double m = std::abs(e1.magnitude - e2.magnitude) / std::max({e1.magnitude, e2.magnitude, 1.0});
  double d = std::abs(e1.distance - e2.distance) / std::max({e1.distance, e2.distance, 1.0});
  return 1.0 - std::sqrt(m * m + d * d) / std::sqrt(2.0);
}

struct FloodParams {
  double stop_threshold = 0.1;
  int max_iterations = 10;
};

struct FloodResult {
  Matrix sigma;
  int iterations = 0;
  double last_change = 0.0;
};

/// Region similarity of every node pair.
inline Matrix initial_similarity(const LayoutGraph& a, const LayoutGraph& b) {
  Matrix s(a.size(), std::vector<double>(b.size(), 0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      s[i][j] = region_similarity(a.fingerprints[i], b.fingerprints[j]);
  return s;
}

namespace detail {

inline void normalize_by_max(Matrix& m) {
  double top = 0.0;
  for (const auto& row : m)
    for (double v : row) top = std::max(top, v);
  if (top <= 0.0) return;
  for (auto& row : m)
    for (double& v : row) v /= top;
}

inline double frobenius_distance(const Matrix& a, const Matrix& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) {
      double d = a[i][j] - b[i][j];
      s += d * d;
    }
  return std::sqrt(s);
}

}  // namespace detail

/// Similarity flooding over two complete layout graphs. Each node pair (i, j)
/// starts from sim0 and, per neighbor m of i, absorbs the score of the
/// neighbor pair (m, n*) where n* is the neighbor of j whose edge best matches
/// edge (i, m). Contributions are damped by 2^|deg(i) - deg(j)| and the matrix
/// is max-normalized after every step.
inline FloodResult flood(const LayoutGraph& ga, const LayoutGraph& gb, const Matrix& sim0,
                         const FloodParams& params = {}) {
  if (params.max_iterations < 1 || !(params.stop_threshold > 0)) {
    throw Error(ErrorCode::InvalidArgument, "flooding needs a positive threshold and iterations");
  }
  const std::size_t u = ga.size();
  const std::size_t v = gb.size();
  if (sim0.size() != u || (u > 0 && sim0[0].size() != v)) {
    throw Error(ErrorCode::InvalidArgument, "initial similarity has the wrong shape");
  }

  // phi[(i*u + m)][(j*v + n)]: similarity of edge (i, m) in A and edge (j, n) in B
  std::vector<std::vector<double>> phi(u * u, std::vector<double>(v * v, 0.0));
  for (std::size_t i = 0; i < u; ++i)
    for (std::size_t m = 0; m < u; ++m) {
      if (i == m) continue;
      for (std::size_t j = 0; j < v; ++j)
        for (std::size_t n = 0; n < v; ++n)
          if (j != n) phi[i * u + m][j * v + n] = edge_similarity(ga.edges[i][m], gb.edges[j][n]);
    }
  const double damping = std::ldexp(
      1.0, -std::abs(static_cast<int>(ga.degree()) - static_cast<int>(gb.degree())));

  FloodResult result;
  Matrix prev = sim0;
  detail::normalize_by_max(prev);
  for (int k = 1; k <= params.max_iterations; ++k) {
    Matrix next = sim0;
    for (std::size_t i = 0; i < u; ++i) {
      for (std::size_t j = 0; j < v; ++j) {
        double flow = 0.0;
        for (std::size_t m = 0; m < u; ++m) {
          if (m == i) continue;
          const auto& row = phi[i * u + m];
          double best_phi = -1.0;
          double best_sigma = 0.0;
          for (std::size_t n = 0; n < v; ++n) {
            if (n == j) continue;
            double f = row[j * v + n];
            if (f > best_phi || (f == best_phi && prev[m][n] > best_sigma)) {
              best_phi = f;
              best_sigma = prev[m][n];
            }
          }
          if (best_phi > 0.0) flow += best_phi * best_sigma;
        }
        next[i][j] += flow * damping;
      }
    }
    detail::normalize_by_max(next);
    result.last_change = detail::frobenius_distance(next, prev);
    result.iterations = k;
    prev = std::move(next);
    if (result.last_change < params.stop_threshold) break;
  }
  result.sigma = std::move(prev);
  return result;
}

struct DirectedMatch {
  double score = 0.0;
  std::vector<int> a_to_b;  // node of A -> matched node of B, -1 if unmatched
};

/// Flood A against B, then score the maximum-weight matching on the final
/// similarities, counting unmatched nodes as zero.
inline DirectedMatch directed_similarity(const LayoutGraph& ga, const LayoutGraph& gb,
                                         const FloodParams& params = {}) {
  FloodResult fr = flood(ga, gb, initial_similarity(ga, gb), params);
  Assignment match = max_weight_matching(fr.sigma);
  DirectedMatch d;
  d.a_to_b = match.row_to_col;
  d.score = match.total / static_cast<double>(std::max(ga.size(), gb.size()));
  return d;
}

struct LayoutMatch {
  double score = 0.0;
  double forward = 0.0;
  double backward = 0.0;
  std::vector<std::pair<int, int>> region_pairs;  // (region id in A, region id in B)
};

/// Symmetric layout similarity: mean of both flooding directions.
inline LayoutMatch layout_similarity(const LayoutGraph& ga, const LayoutGraph& gb,
                                     const FloodParams& params = {}) {
  DirectedMatch fwd = directed_similarity(ga, gb, params);
  DirectedMatch bwd = directed_similarity(gb, ga, params);
  LayoutMatch out;
  out.forward = fwd.score;
  out.backward = bwd.score;
  out.score = std::clamp((fwd.score + bwd.score) / 2.0, 0.0, 1.0);
  for (std::size_t i = 0; i < fwd.a_to_b.size(); ++i)
    if (fwd.a_to_b[i] >= 0) out.region_pairs.emplace_back(ga.region_ids[i], gb.region_ids[fwd.a_to_b[i]]);
  return out;
}

/// Upper bound on layout similarity from node counts alone.
inline double node_count_bound(std::size_t u, std::size_t v) {
  if (u == 0 || v == 0) return 0.0;
  return static_cast<double>(std::min(u, v)) / static_cast<double>(std::max(u, v));
}

}  // namespace mondrian
