#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <span>
#include <string>

#include "mondrian/error.hpp"

namespace mondrian {

/// Axis-aligned rectangle of cells with inclusive bounds.
struct Rect {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  int width() const noexcept { return x1 - x0 + 1; }
  int height() const noexcept { return y1 - y0 + 1; }
  long long area() const noexcept { return static_cast<long long>(width()) * height(); }
  bool valid() const noexcept { return x0 <= x1 && y0 <= y1; }
  bool contains(int x, int y) const noexcept {
    return x >= x0 && x <= x1 && y >= y0 && y <= y1;
  }

  friend bool operator==(const Rect&, const Rect&) = default;
  friend auto operator<=>(const Rect& a, const Rect& b) {
    if (a.y0 != b.y0) return a.y0 <=> b.y0;
    if (a.x0 != b.x0) return a.x0 <=> b.x0;
    if (a.y1 != b.y1) return a.y1 <=> b.y1;
    return a.x1 <=> b.x1;
  }
};

inline Rect bounding_box(const Rect& a, const Rect& b) {
  return {std::min(a.x0, b.x0), std::min(a.y0, b.y0), std::max(a.x1, b.x1),
          std::max(a.y1, b.y1)};
}

inline Rect translated(Rect r, int dx, int dy) {
  return {r.x0 + dx, r.y0 + dy, r.x1 + dx, r.y1 + dy};
}

enum class Direction { V, H, N, O };

inline const char* to_string(Direction d) {
  switch (d) {
    case Direction::V: return "V";
    case Direction::H: return "H";
    case Direction::N: return "N";
    case Direction::O: return "O";
  }
  return "N";
}

/// Alignment direction, magnitude and distance between two rectangles.
struct SpatialRelation {
  Direction direction = Direction::N;
  double magnitude = 0.0;
  double distance = 0.0;

  friend bool operator==(const SpatialRelation&, const SpatialRelation&) = default;
};

namespace detail {

// Length of the shared index range; <= 0 when the ranges are disjoint.
inline int shared_span(int a0, int a1, int b0, int b1) {
  return std::min(a1, b1) - std::max(a0, b0) + 1;
}

}  // namespace detail

/// V when rows are shared, H when columns are shared, O when both (only
/// permitted for region boundaries), N otherwise. Distances count the empty
/// lines between the rectangles along the free axis.
inline SpatialRelation relation(const Rect& a, const Rect& b, bool allow_overlap) {
  int rows = detail::shared_span(a.y0, a.y1, b.y0, b.y1);
  int cols = detail::shared_span(a.x0, a.x1, b.x0, b.x1);
  bool vertical = rows >= 1;
  bool horizontal = cols >= 1;

  if (vertical && horizontal) {
    if (!allow_overlap) {
      throw Error(ErrorCode::IllegalOverlap, "elements must not overlap");
    }
    return {Direction::O, static_cast<double>(rows) * cols, 0.0};
  }
  if (vertical) return {Direction::V, static_cast<double>(rows), static_cast<double>(std::abs(cols))};
  if (horizontal) return {Direction::H, static_cast<double>(cols), static_cast<double>(std::abs(rows))};
  double dv = std::abs(cols);
  double dh = std::abs(rows);
  return {Direction::N, 0.0, std::sqrt(dv * dv + dh * dh)};
}

enum class PairLayout { Separated, Adjacent, Overlapping };

inline const char* to_string(PairLayout p) {
  switch (p) {
    case PairLayout::Separated: return "separated";
    case PairLayout::Adjacent: return "adjacent";
    case PairLayout::Overlapping: return "overlapping";
  }
  return "separated";
}

/// Taxonomy of two region boundaries. Boxes that touch only at a corner
/// (N direction, zero distance) count as adjacent.
inline PairLayout classify_pair(const Rect& r1, const Rect& r2) {
  SpatialRelation rel = relation(r1, r2, true);
  if (rel.direction == Direction::O) return PairLayout::Overlapping;
  if (rel.distance > 0.0) return PairLayout::Separated;
  return PairLayout::Adjacent;
}

/// True when a multi-element region has a node whose every incident edge
/// has a positive distance.
inline bool is_apparently_separated(std::span<const Rect> elements) {
  if (elements.size() < 2) return false;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    bool isolated = true;
    for (std::size_t j = 0; j < elements.size() && isolated; ++j) {
      if (i != j && relation(elements[i], elements[j], true).distance <= 0.0) isolated = false;
    }
    if (isolated) return true;
  }
  return false;
}

}  // namespace mondrian
