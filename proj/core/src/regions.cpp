#include "annodb/regions.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace annodb {

std::vector<Rect> decompose_regions(const CellSet& cells) {
  // Column-major sweep: CellSet is ordered by (rid, column), so regroup.
  std::map<std::size_t, std::vector<Rid>> by_column;
  for (const Cell& c : cells) by_column[c.column].push_back(c.rid);

  std::vector<Rect> done;
  // Rects still open for extension to the next column, keyed by rid interval.
  std::map<std::pair<Rid, Rid>, Rect> open;
  std::size_t prev_column = 0;
  bool first = true;
  for (auto& [column, rids] : by_column) {
    std::sort(rids.begin(), rids.end());
    std::vector<std::pair<Rid, Rid>> runs;
    for (Rid r : rids) {
      if (!runs.empty() && runs.back().second + 1 == r) {
        runs.back().second = r;
      } else {
        runs.emplace_back(r, r);
      }
    }
    bool adjacent = !first && column == prev_column + 1;
    std::map<std::pair<Rid, Rid>, Rect> next_open;
    for (const auto& run : runs) {
      auto it = adjacent ? open.find(run) : open.end();
      if (it != open.end()) {
        Rect r = it->second;
        r.col_hi = column;
        open.erase(it);
        next_open.emplace(run, r);
      } else {
        next_open.emplace(run, Rect{column, column, run.first, run.second});
      }
    }
    for (auto& [key, rect] : open) done.push_back(rect);
    open = std::move(next_open);
    prev_column = column;
    first = false;
  }
  for (auto& [key, rect] : open) done.push_back(rect);
  std::sort(done.begin(), done.end(), [](const Rect& a, const Rect& b) {
    return std::tie(a.col_lo, a.rid_lo) < std::tie(b.col_lo, b.rid_lo);
  });
  return done;
}

CellSet expand(const std::vector<Rect>& rects) {
  CellSet out;
  for (const Rect& r : rects) {
    for (Rid rid = r.rid_lo; rid <= r.rid_hi; ++rid) {
      for (std::size_t c = r.col_lo; c <= r.col_hi; ++c) out.insert(Cell{rid, c});
    }
  }
  return out;
}

CellSet expand_live(const std::vector<Rect>& rects, const Table& table) {
  CellSet out;
  const auto& rows = table.rows();
  for (const Rect& r : rects) {
    for (auto it = rows.lower_bound(r.rid_lo); it != rows.end() && it->first <= r.rid_hi; ++it) {
      for (std::size_t c = r.col_lo; c <= r.col_hi; ++c) out.insert(Cell{it->first, c});
    }
  }
  return out;
}

bool any_contains(const std::vector<Rect>& rects, const Cell& cell) {
  return std::any_of(rects.begin(), rects.end(), [&](const Rect& r) { return r.contains(cell); });
}

}  // namespace annodb
