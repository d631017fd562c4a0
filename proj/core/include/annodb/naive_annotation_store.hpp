#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "annodb/annotation_store.hpp"

namespace annodb {

// Reference store that keeps one entry per annotated cell, mirroring the
// "annotation column next to every data column" layout. It exists to check
// the compact store: both must answer every lookup identically.
class NaiveAnnotationStore {
 public:
  struct Entry {
    Aid aid = 0;
    std::string table;
    Cell cell;
  };

  // Assigns aids in the same sequence the compact store does.
  std::vector<Aid> add(const std::vector<std::string>& tables, const std::string& body, const CellSet& target);

  std::set<Aid> annotations_at(const Cell& cell, const LookupOptions& opts = {}) const;

  std::size_t archive(const Table& owner, const std::vector<std::string>& tables, const CellSet& target,
                      const std::optional<TimeWindow>& window);
  std::size_t restore(const Table& owner, const std::vector<std::string>& tables, const CellSet& target,
                      const std::optional<TimeWindow>& window);

  // Number of stored per-cell entries.
  std::size_t entry_count() const { return entries_.size(); }
  std::size_t entry_count(Aid aid) const;

 private:
  struct Meta {
    std::string table;
    std::string body;
    std::int64_t ts_seq = 0;
    bool archived = false;
  };

  std::size_t flip(const Table& owner, const std::vector<std::string>& tables, const CellSet& target,
                   const std::optional<TimeWindow>& window, bool archived);

  std::vector<Entry> entries_;
  std::map<Aid, Meta> meta_;
  Aid next_aid_ = 1;
};

}  // namespace annodb
