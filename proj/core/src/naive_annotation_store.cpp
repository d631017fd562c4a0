#include "annodb/naive_annotation_store.hpp"

#include <algorithm>

#include "annodb/error.hpp"

namespace annodb {

std::vector<Aid> NaiveAnnotationStore::add(const std::vector<std::string>& tables, const std::string& body,
                                           const CellSet& target) {
  if (target.empty()) raise(ErrorCode::kEmptyTarget, "annotation target selects no cells");
  std::vector<Aid> aids;
  for (const std::string& table : tables) {
    Aid aid = next_aid_++;
    meta_[aid] = Meta{table, body, aid, false};
    for (const Cell& c : target) entries_.push_back(Entry{aid, table, c});
    aids.push_back(aid);
  }
  return aids;
}

std::set<Aid> NaiveAnnotationStore::annotations_at(const Cell& cell, const LookupOptions& opts) const {
  std::set<Aid> out;
  for (const Entry& e : entries_) {
    if (!(e.cell == cell)) continue;
    const Meta& m = meta_.at(e.aid);
    if (m.archived && !opts.include_archived) continue;
    if (!opts.tables.empty() && !opts.tables.count(m.table)) continue;
    out.insert(e.aid);
  }
  return out;
}

std::size_t NaiveAnnotationStore::flip(const Table& owner, const std::vector<std::string>& tables,
                                       const CellSet& target, const std::optional<TimeWindow>& window,
                                       bool archived) {
  if (window) window->validate();
  std::size_t count = 0;
  for (auto& [aid, meta] : meta_) {
    if (meta.archived == archived) continue;
    if (std::find(tables.begin(), tables.end(), meta.table) == tables.end()) continue;
    if (window) {
      AnnotationRecord probe;
      probe.ts_seq = meta.ts_seq;
      if (!window->contains(probe)) continue;
    }
    bool any_live = false;
    bool all_inside = true;
    for (const Entry& e : entries_) {
      if (e.aid != aid || !owner.contains(e.cell.rid)) continue;
      any_live = true;
      if (!target.count(e.cell)) {
        all_inside = false;
        break;
      }
    }
    if (any_live && all_inside) {
      meta.archived = archived;
      ++count;
    }
  }
  return count;
}

std::size_t NaiveAnnotationStore::archive(const Table& owner, const std::vector<std::string>& tables,
                                          const CellSet& target, const std::optional<TimeWindow>& window) {
  return flip(owner, tables, target, window, true);
}

std::size_t NaiveAnnotationStore::restore(const Table& owner, const std::vector<std::string>& tables,
                                          const CellSet& target, const std::optional<TimeWindow>& window) {
  return flip(owner, tables, target, window, false);
}

std::size_t NaiveAnnotationStore::entry_count(Aid aid) const {
  return static_cast<std::size_t>(
      std::count_if(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.aid == aid; }));
}

}  // namespace annodb
