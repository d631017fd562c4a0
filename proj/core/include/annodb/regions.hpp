#pragma once

#include <cstddef>
#include <set>
#include <utility>
#include <vector>

#include "annodb/catalog.hpp"

namespace annodb {

// A cell address: row identity and column ordinal.
struct Cell {
  Rid rid = 0;
  std::size_t column = 0;

  auto operator<=>(const Cell&) const = default;
};

using CellSet = std::set<Cell>;

// Closed rectangle over column ordinals [col_lo, col_hi] and rids [rid_lo, rid_hi].
struct Rect {
  std::size_t col_lo = 0;
  std::size_t col_hi = 0;
  Rid rid_lo = 0;
  Rid rid_hi = 0;

  bool contains(const Cell& c) const {
    return c.column >= col_lo && c.column <= col_hi && c.rid >= rid_lo && c.rid <= rid_hi;
  }
  bool intersects(const Rect& o) const {
    return col_lo <= o.col_hi && o.col_lo <= col_hi && rid_lo <= o.rid_hi && o.rid_lo <= rid_hi;
  }
  std::size_t cell_count() const {
    return (col_hi - col_lo + 1) * static_cast<std::size_t>(rid_hi - rid_lo + 1);
  }

  auto operator<=>(const Rect&) const = default;
};

// Greedy maximal-rectangle sweep: per column, contiguous rid runs; then runs
// with identical rid intervals in adjacent columns merge. Output is disjoint,
// sorted by (col_lo, rid_lo), and covers exactly `cells`.
std::vector<Rect> decompose_regions(const CellSet& cells);

// All cells covered by `rects`.
CellSet expand(const std::vector<Rect>& rects);

// Cells covered by `rects` restricted to rows that currently exist in `table`.
CellSet expand_live(const std::vector<Rect>& rects, const Table& table);

bool any_contains(const std::vector<Rect>& rects, const Cell& cell);

}  // namespace annodb
