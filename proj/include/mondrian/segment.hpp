#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <utility>
#include <vector>

#include "mondrian/geometry.hpp"
#include "mondrian/grid.hpp"

namespace mondrian {

/// 4-connected set of non-empty cells, stored in row-major order.
struct Component {
  int id = 0;
  std::vector<CellCoord> cells;
};

/// Rectangle of non-empty cells; the clustering atom.
struct Element {
  Rect box;
  int component_id = 0;

  friend bool operator==(const Element&, const Element&) = default;
};

inline std::vector<Rect> boxes_of(const std::vector<Element>& elements) {
  std::vector<Rect> out;
  out.reserve(elements.size());
  for (const auto& e : elements) out.push_back(e.box);
  return out;
}

inline bool is_apparently_separated(const std::vector<Element>& elements) {
  auto boxes = boxes_of(elements);
  return is_apparently_separated(std::span<const Rect>(boxes));
}

/// Labels 4-connected components of non-empty cells. Ids follow the row-major
/// position of each component's first cell.
inline std::vector<Component> connected_components(const TypedGrid& grid) {
  const int rows = grid.rows();
  const int cols = grid.cols();
  std::vector<int> label(grid.size(), -1);
  std::vector<Component> components;
  std::deque<CellCoord> queue;
  constexpr int dx[] = {1, -1, 0, 0};
  constexpr int dy[] = {0, 0, 1, -1};

  for (int y = 0; y < rows; ++y) {
    for (int x = 0; x < cols; ++x) {
      std::size_t k = static_cast<std::size_t>(y) * cols + x;
      if (grid.empty_at(x, y) || label[k] >= 0) continue;
      Component comp;
      comp.id = static_cast<int>(components.size());
      label[k] = comp.id;
      queue.push_back({x, y});
      while (!queue.empty()) {
        CellCoord c = queue.front();
        queue.pop_front();
        comp.cells.push_back(c);
        for (int d = 0; d < 4; ++d) {
          int nx = c.x + dx[d];
          int ny = c.y + dy[d];
          if (!grid.contains(nx, ny) || grid.empty_at(nx, ny)) continue;
          std::size_t nk = static_cast<std::size_t>(ny) * cols + nx;
          if (label[nk] >= 0) continue;
          label[nk] = comp.id;
          queue.push_back({nx, ny});
        }
      }
      std::sort(comp.cells.begin(), comp.cells.end());
      components.push_back(std::move(comp));
    }
  }
  return components;
}

/// Rectilinear partition by vertical cuts: every column of the component is
/// split into maximal vertical runs, and runs with identical row extents in
/// consecutive columns are merged into one rectangle. Output is sorted by
/// top-left corner.
inline std::vector<Element> partition(const Component& component) {
  // column -> sorted row indices
  std::map<int, std::vector<int>> columns;
  for (const auto& c : component.cells) columns[c.x].push_back(c.y);

  std::vector<Element> done;
  // open rectangles keyed by (y0, y1), valid while they reach column x-1
  std::map<std::pair<int, int>, Rect> open;
  int prev_x = 0;
  bool first = true;
  for (auto& [x, ys] : columns) {
    std::sort(ys.begin(), ys.end());
    std::vector<std::pair<int, int>> runs;
    for (std::size_t i = 0; i < ys.size();) {
      std::size_t j = i;
      while (j + 1 < ys.size() && ys[j + 1] == ys[j] + 1) ++j;
      runs.emplace_back(ys[i], ys[j]);
      i = j + 1;
    }
    std::map<std::pair<int, int>, Rect> next;
    bool contiguous = !first && x == prev_x + 1;
    for (const auto& run : runs) {
      auto it = contiguous ? open.find(run) : open.end();
      if (it != open.end()) {
        Rect r = it->second;
        r.x1 = x;
        next.emplace(run, r);
        open.erase(it);
      } else {
        next.emplace(run, Rect{x, run.first, x, run.second});
      }
    }
    for (auto& [key, r] : open) done.push_back({r, component.id});
    open = std::move(next);
    prev_x = x;
    first = false;
  }
  for (auto& [key, r] : open) done.push_back({r, component.id});
  std::sort(done.begin(), done.end(),
            [](const Element& a, const Element& b) { return a.box < b.box; });
  return done;
}

/// Concatenated partitions of every component, in component order.
inline std::vector<Element> segment_file(const TypedGrid& grid) {
  std::vector<Element> out;
  for (const auto& comp : connected_components(grid)) {
    auto parts = partition(comp);
    out.insert(out.end(), parts.begin(), parts.end());
  }
  return out;
}

/// Number of reflex (concave) polygon vertices of a cell set, counting a
/// diagonal pinch point twice.
inline int concave_vertex_count(const std::vector<CellCoord>& cells) {
  if (cells.empty()) return 0;
  int minx = cells[0].x, maxx = cells[0].x, miny = cells[0].y, maxy = cells[0].y;
  for (const auto& c : cells) {
    minx = std::min(minx, c.x);
    maxx = std::max(maxx, c.x);
    miny = std::min(miny, c.y);
    maxy = std::max(maxy, c.y);
  }
  int w = maxx - minx + 3;
  int h = maxy - miny + 3;
  std::vector<char> in(static_cast<std::size_t>(w) * h, 0);
  for (const auto& c : cells) in[static_cast<std::size_t>(c.y - miny + 1) * w + (c.x - minx + 1)] = 1;
  auto at = [&](int x, int y) { return in[static_cast<std::size_t>(y) * w + x] != 0; };
  int count = 0;
  // vertex (vx, vy) sits at the top-left corner of padded cell (vx, vy)
  for (int vy = 1; vy < h; ++vy) {
    for (int vx = 1; vx < w; ++vx) {
      bool tl = at(vx - 1, vy - 1), tr = at(vx, vy - 1);
      bool bl = at(vx - 1, vy), br = at(vx, vy);
      int filled = tl + tr + bl + br;
      if (filled == 3) ++count;
      else if (filled == 2 && tl == br) count += 2;
    }
  }
  return count;
}

}  // namespace mondrian
