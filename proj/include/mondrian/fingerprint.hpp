#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

#include "mondrian/geometry.hpp"
#include "mondrian/grid.hpp"

namespace mondrian {

inline constexpr std::size_t kBinsPerChannel = 64;
inline constexpr std::size_t kFingerprintBins = 3 * kBinsPerChannel;

/// Per-channel color histogram of a region, concatenated R|G|B and
/// normalized to unit total mass.
struct Fingerprint {
  std::array<double, kFingerprintBins> bins{};
  long long cell_count = 0;

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

inline void add_color(Fingerprint& fp, ColorRGB c, double weight = 1.0) {
  constexpr int kWidth = 256 / static_cast<int>(kBinsPerChannel);
  fp.bins[c.r / kWidth] += weight;
  fp.bins[kBinsPerChannel + c.g / kWidth] += weight;
  fp.bins[2 * kBinsPerChannel + c.b / kWidth] += weight;
}

inline void normalize(Fingerprint& fp) {
  double total = 0.0;
  for (double v : fp.bins) total += v;
  if (total > 0.0) {
    for (double& v : fp.bins) v /= total;
  }
}

/// Histogram over every cell inside the box, empty cells included.
inline Fingerprint fingerprint(const TypedGrid& grid, const Rect& box) {
  Fingerprint fp;
  for (int y = std::max(0, box.y0); y <= std::min(grid.rows() - 1, box.y1); ++y) {
    for (int x = std::max(0, box.x0); x <= std::min(grid.cols() - 1, box.x1); ++x) {
      add_color(fp, color_of(grid.type_at(x, y)));
      ++fp.cell_count;
    }
  }
  normalize(fp);
  return fp;
}

/// Pearson correlation of two histograms with negative values clamped to 0.
inline double region_similarity(const Fingerprint& a, const Fingerprint& b) {
  auto constant = [](const Fingerprint& f) {
    return std::all_of(f.bins.begin(), f.bins.end(), [&](double v) { return v == f.bins[0]; });
  };
  if (constant(a) || constant(b)) return a.bins == b.bins ? 1.0 : 0.0;
  constexpr double n = static_cast<double>(kFingerprintBins);
  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < kFingerprintBins; ++i) {
    mean_a += a.bins[i];
    mean_b += b.bins[i];
  }
  mean_a /= n;
  mean_b /= n;
  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (std::size_t i = 0; i < kFingerprintBins; ++i) {
    double da = a.bins[i] - mean_a;
    double db = b.bins[i] - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a <= 0.0 || var_b <= 0.0) return a.bins == b.bins ? 1.0 : 0.0;
  if (a.bins == b.bins) return 1.0;
  return std::clamp(cov / std::sqrt(var_a * var_b), 0.0, 1.0);
}

}  // namespace mondrian
