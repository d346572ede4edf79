#pragma once

// Seeded generators and brute-force oracles shared by the unit and
// acceptance suites. Oracles deliberately avoid the library's own helpers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mondrian/mondrian.hpp"

namespace fixtures {

using mondrian::Rect;
using mondrian::TypedGrid;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(gen_); }
  std::mt19937_64& engine() { return gen_; }

  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(uniform(0, static_cast<int>(v.size()) - 1))];
  }

 private:
  std::mt19937_64 gen_;
};

inline std::vector<std::string> random_mask(Rng& rng, int max_rows, int max_cols) {
  int rows = rng.uniform(1, max_rows);
  int cols = rng.uniform(1, max_cols);
  double density = rng.real(0.05, 0.95);
  std::vector<std::string> mask(rows, std::string(cols, '.'));
  for (auto& row : mask)
    for (auto& c : row)
      if (rng.chance(density)) c = '#';
  return mask;
}

inline std::set<std::pair<int, int>> non_empty_cells(const TypedGrid& g) {
  std::set<std::pair<int, int>> out;
  for (int y = 0; y < g.rows(); ++y)
    for (int x = 0; x < g.cols(); ++x)
      if (!g.empty_at(x, y)) out.insert({x, y});
  return out;
}

inline std::set<std::pair<int, int>> cells_of(const Rect& r) {
  std::set<std::pair<int, int>> out;
  for (int y = r.y0; y <= r.y1; ++y)
    for (int x = r.x0; x <= r.x1; ++x) out.insert({x, y});
  return out;
}

/// Non-overlapping random rectangles inside a width x height canvas.
inline std::vector<mondrian::Element> random_elements(Rng& rng, int n, int width, int height,
                                                      int max_side = 6) {
  std::vector<mondrian::Element> out;
  std::vector<std::vector<char>> used(height, std::vector<char>(width, 0));
  int attempts = 0;
  while (static_cast<int>(out.size()) < n && attempts < 200 * n) {
    ++attempts;
    int w = rng.uniform(1, max_side);
    int h = rng.uniform(1, max_side);
    int x0 = rng.uniform(0, width - w);
    int y0 = rng.uniform(0, height - h);
    bool free = true;
    for (int y = y0; y < y0 + h && free; ++y)
      for (int x = x0; x < x0 + w && free; ++x) free = !used[y][x];
    if (!free) continue;
    for (int y = y0; y < y0 + h; ++y)
      for (int x = x0; x < x0 + w; ++x) used[y][x] = 1;
    out.push_back({{x0, y0, x0 + w - 1, y0 + h - 1}, static_cast<int>(out.size())});
  }
  return out;
}

// --- oracles ----------------------------------------------------------------

/// Number of empty lines between two rectangles along one axis, found by
/// scanning cell coordinates rather than by formula.
inline int axis_gap(int a0, int a1, int b0, int b1) {
  int best = 1 << 30;
  for (int i = a0; i <= a1; ++i)
    for (int j = b0; j <= b1; ++j) best = std::min(best, std::max(0, std::abs(i - j) - 1));
  return best;
}

/// Element distance computed from first principles.
inline double brute_distance(const Rect& a, const Rect& b, double alpha, double beta,
                             double gamma) {
  bool rows_shared = std::max(a.y0, b.y0) <= std::min(a.y1, b.y1);
  bool cols_shared = std::max(a.x0, b.x0) <= std::min(a.x1, b.x1);
  int gx = axis_gap(a.x0, a.x1, b.x0, b.x1);
  int gy = axis_gap(a.y0, a.y1, b.y0, b.y1);
  double geo = 0;
  if (rows_shared && cols_shared) geo = 0;
  else if (rows_shared) geo = gx;
  else if (cols_shared) geo = gy;
  else geo = std::hypot(gx, gy);
  double sa = static_cast<double>(cells_of(a).size());
  double sb = static_cast<double>(cells_of(b).size());
  double size = 1.0 - std::min(sa, sb) / std::max(sa, sb);
  int h = std::abs(a.y0 - b.y0) + std::abs(a.y1 - b.y1);
  int v = std::abs(a.x0 - b.x0) + std::abs(a.x1 - b.x1);
  return alpha * geo + beta * size + gamma * std::min(h, v);
}

/// Connected components of the graph joining items whose pairwise distance is
/// at most the threshold, found by breadth-first search. Each component is a
/// sorted list of item indices; the list of components is sorted.
template <class Distance>
std::vector<std::vector<std::size_t>> threshold_components(std::size_t n, double threshold,
                                                           Distance&& distance) {
  std::vector<int> label(n, -1);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    std::vector<std::size_t> comp;
    std::queue<std::size_t> q;
    q.push(s);
    label[s] = static_cast<int>(out.size());
    while (!q.empty()) {
      std::size_t i = q.front();
      q.pop();
      comp.push_back(i);
      for (std::size_t j = 0; j < n; ++j)
        if (label[j] < 0 && distance(i, j) <= threshold) {
          label[j] = label[s];
          q.push(j);
        }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Regions as sorted groups of element indices, for comparison with an oracle.
inline std::vector<std::vector<std::size_t>> groups_of(
    const std::vector<mondrian::Region>& regions, const std::vector<mondrian::Element>& elements) {
  std::vector<std::vector<std::size_t>> out;
  for (const auto& r : regions) {
    std::vector<std::size_t> g;
    for (const auto& e : r.elements) {
      for (std::size_t i = 0; i < elements.size(); ++i)
        if (elements[i].box == e.box) g.push_back(i);
    }
    std::sort(g.begin(), g.end());
    out.push_back(std::move(g));
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Homogeneity, completeness and v-measure from item-by-item counting.
inline mondrian::VMeasure brute_vmeasure(const std::vector<int>& pred, const std::vector<int>& gold) {
  const double n = static_cast<double>(gold.size());
  auto count_where = [&](auto&& pred_fn) {
    double c = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) c += pred_fn(i) ? 1 : 0;
    return c;
  };
  std::set<int> classes(gold.begin(), gold.end());
  std::set<int> clusters(pred.begin(), pred.end());
  double h_c = 0, h_k = 0, h_c_k = 0, h_k_c = 0;
  for (int c : classes) {
    double p = count_where([&](std::size_t i) { return gold[i] == c; }) / n;
    h_c -= p * std::log(p);
  }
  for (int k : clusters) {
    double p = count_where([&](std::size_t i) { return pred[i] == k; }) / n;
    h_k -= p * std::log(p);
  }
  for (int c : classes)
    for (int k : clusters) {
      double joint = count_where([&](std::size_t i) { return gold[i] == c && pred[i] == k; });
      if (joint == 0) continue;
      double in_k = count_where([&](std::size_t i) { return pred[i] == k; });
      double in_c = count_where([&](std::size_t i) { return gold[i] == c; });
      h_c_k -= joint / n * std::log(joint / in_k);
      h_k_c -= joint / n * std::log(joint / in_c);
    }
  mondrian::VMeasure v;
  v.homogeneity = h_c == 0 ? 1.0 : 1.0 - h_c_k / h_c;
  v.completeness = h_k == 0 ? 1.0 : 1.0 - h_k_c / h_k;
  v.v_measure = v.homogeneity + v.completeness == 0
                    ? 0.0
                    : 2 * v.homogeneity * v.completeness / (v.homogeneity + v.completeness);
  return v;
}

/// Jaccard index of the non-empty cell sets inside two rectangles.
inline double brute_iou(const TypedGrid& g, const Rect& p, const Rect& t) {
  std::set<std::pair<int, int>> a, b, both, either;
  for (const auto& c : cells_of(p))
    if (g.contains(c.first, c.second) && !g.empty_at(c.first, c.second)) a.insert(c);
  for (const auto& c : cells_of(t))
    if (g.contains(c.first, c.second) && !g.empty_at(c.first, c.second)) b.insert(c);
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(both, both.end()));
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::inserter(either, either.end()));
  if (either.empty()) return 1.0;
  return static_cast<double>(both.size()) / static_cast<double>(either.size());
}

/// Maximum total weight over all injective row->column maps (rows <= 8).
inline double brute_matching(const std::vector<std::vector<double>>& w) {
  if (w.empty() || w[0].empty()) return 0.0;
  std::size_t rows = w.size(), cols = w[0].size();
  double best = 0;
  std::vector<int> assign(rows, -1);
  std::vector<char> used(cols, 0);
  auto rec = [&](auto&& self, std::size_t i, double acc) -> void {
    if (i == rows) {
      best = std::max(best, acc);
      return;
    }
    self(self, i + 1, acc);  // leave row unmatched
    for (std::size_t j = 0; j < cols; ++j) {
      if (used[j]) continue;
      used[j] = 1;
      self(self, i + 1, acc + w[i][j]);
      used[j] = 0;
    }
  };
  rec(rec, 0, 0.0);
  return best;
}

// --- synthetic census-style corpus -------------------------------------------

enum class Kind { Int, Float, Date, Time, Upper, Lower, Title };

struct TableSpec {
  int col = 0;       // left column of the table
  int body_rows = 0;
  std::vector<Kind> columns;  // first column is the row label column
};

struct TemplateSpec {
  std::string title;
  std::vector<std::vector<TableSpec>> bands;  // tables sharing a vertical band sit side by side
  std::string footnote;
};

inline std::string literal(Rng& rng, Kind k) {
  static const std::vector<std::string> upper = {"NE", "MW", "SO", "WE", "PR", "DC", "USA"};
  static const std::vector<std::string> lower = {"total", "rural", "urban", "other", "n/a"};
  static const std::vector<std::string> title = {"Alabama", "New York", "Texas", "Ohio",
                                                 "North Dakota", "Maine", "Utah"};
  switch (k) {
    case Kind::Int: return std::to_string(rng.uniform(0, 999999));
    case Kind::Float: return std::to_string(rng.uniform(0, 999)) + "." + std::to_string(rng.uniform(10, 99));
    case Kind::Date:
      return std::to_string(rng.uniform(1, 28)) + "/" + std::to_string(rng.uniform(1, 12)) + "/" +
             std::to_string(rng.uniform(10, 29));
    case Kind::Time: return std::to_string(rng.uniform(0, 23)) + ":" + std::to_string(rng.uniform(10, 59));
    case Kind::Upper: return rng.pick(upper);
    case Kind::Lower: return rng.pick(lower);
    case Kind::Title: return rng.pick(title);
  }
  return "";
}

/// Header cells stay in one case class so renames never change the type.
inline std::string header(Rng& rng, std::size_t column) {
  static const std::vector<std::string> words = {"Population", "Households", "Median Income",
                                                 "Area", "Change", "Estimate", "Margin",
                                                 "Births", "Deaths", "Migration"};
  if (column == 0) return rng.chance(0.5) ? "Geography" : "Region";
  return rng.pick(words);
}

inline std::vector<TemplateSpec> census_templates() {
  using K = Kind;
  return {
      // three tables stacked in the first columns
      {"Annual Estimates Of The Resident Population",
       {{{0, 6, {K::Title, K::Int, K::Int, K::Int}}},
        {{0, 4, {K::Title, K::Float, K::Float}}},
        {{0, 8, {K::Upper, K::Int, K::Int, K::Int, K::Int, K::Int}}}},
       "source: population estimates program"},
      // two tables side by side above a wide one
      {"Housing Unit Estimates",
       {{{0, 3, {K::Title, K::Int, K::Int}}, {5, 3, {K::Upper, K::Float}}},
        {{0, 10, {K::Title, K::Date, K::Int, K::Float, K::Int, K::Int, K::Int}}}},
       "note: figures may not add to totals"},
      // staircase: each table below and to the right of the previous one
      {"Components Of Change",
       {{{0, 6, {K::Title, K::Int, K::Int, K::Int}}},
        {{6, 2, {K::Upper, K::Upper, K::Int}}},
        {{11, 5, {K::Title, K::Float}}}},
       "source: vital statistics"},
      // three tables in one band
      {"Monthly Postcensal Estimates",
       {{{0, 7, {K::Date, K::Int, K::Int}}, {5, 7, {K::Date, K::Float}}, {9, 3, {K::Title, K::Time, K::Int}}}},
       "release: provisional"},
      // two tables side by side, the third under the right one only
      {"Selected Economic Characteristics",
       {{{0, 5, {K::Title, K::Lower, K::Int, K::Float, K::Float}}, {7, 9, {K::Title, K::Int}}},
        {{7, 4, {K::Upper, K::Float, K::Float, K::Float, K::Float}}}},
       "margins of error are not shown"},
  };
}

struct CorpusFile {
  std::string id;
  std::string csv;
  int template_id = 0;
  std::vector<Rect> regions;  // gold boundaries: title, tables, footnote
};

/// One file of a template: values perturbed, headers renamed within their case
/// class, and every region shifted by up to two rows against the others.
inline CorpusFile census_file(const TemplateSpec& spec, int template_id, const std::string& id,
                              Rng& rng) {
  std::vector<std::vector<std::string>> cells;
  auto put = [&](int x, int y, std::string v) {
    if (static_cast<int>(cells.size()) <= y) cells.resize(y + 1);
    if (static_cast<int>(cells[y].size()) <= x) cells[y].resize(x + 1);
    cells[y][x] = std::move(v);
  };
  CorpusFile f{id, "", template_id, {}};
  int y = 0;
  put(0, y, spec.title);
  f.regions.push_back({0, y, 0, y});
  y += 1;
  for (const auto& band : spec.bands) {
    y += 4 + rng.uniform(-2, 2);
    int band_height = 0;
    for (const auto& t : band) {
      int width = static_cast<int>(t.columns.size());
      for (int c = 0; c < width; ++c) put(t.col + c, y, header(rng, c));
      for (int r = 0; r < t.body_rows; ++r)
        for (int c = 0; c < width; ++c) put(t.col + c, y + 1 + r, literal(rng, t.columns[c]));
      f.regions.push_back({t.col, y, t.col + width - 1, y + t.body_rows});
      band_height = std::max(band_height, t.body_rows + 1);
    }
    y += band_height;
  }
  y += 4 + rng.uniform(-2, 2);
  put(0, y, spec.footnote);
  f.regions.push_back({0, y, 0, y});
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) f.csv += ',';
      f.csv += mondrian::csv_escape(row[c]);
    }
    f.csv += '\n';
  }
  return f;
}

inline std::vector<CorpusFile> census_corpus(std::uint64_t seed, int files_per_template = 6) {
  Rng rng(seed);
  std::vector<CorpusFile> out;
  auto specs = census_templates();
  for (std::size_t t = 0; t < specs.size(); ++t)
    for (int k = 0; k < files_per_template; ++k) {
      std::string id = "t" + std::to_string(t) + "_f" + std::to_string(k) + ".csv";
      out.push_back(census_file(specs[t], static_cast<int>(t), id, rng));
    }
  return out;
}

inline mondrian::FileLayout layout_of(const CorpusFile& f, const mondrian::ClusterParams& p = {}) {
  auto grid = mondrian::parse_csv(f.csv, {}, f.id);
  return {f.id, mondrian::build_layout(mondrian::detect_file(grid, p))};
}

}  // namespace fixtures
