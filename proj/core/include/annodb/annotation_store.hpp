#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "annodb/catalog.hpp"
#include "annodb/regions.hpp"
#include "annodb/value.hpp"

namespace annodb {

using Aid = std::int64_t;

enum class AnnotationCategory { kComment, kProvenance, kSystem };

std::string_view category_name(AnnotationCategory category);

// Name of the engine-maintained annotation table that surfaces outdated cells.
inline constexpr std::string_view kOutdatedTable = "_outdated";

struct AnnotationTableDef {
  std::string owner;
  std::string name;
  AnnotationCategory category = AnnotationCategory::kComment;
  std::vector<std::string> required_tags;  // XML elements every body must contain
  std::vector<std::string> writers;        // empty = anyone may add
  bool operator==(const AnnotationTableDef&) const = default;
};

struct AnnotationRecord {
  Aid aid = 0;
  std::string owner;  // user table
  std::string table;  // annotation table
  std::string body;   // well-formed XML
  std::vector<Rect> rects;
  std::int64_t ts_seq = 0;
  std::string ts_iso;
  bool archived = false;
  bool operator==(const AnnotationRecord&) const = default;
};

struct AnnotationTable {
  AnnotationTableDef def;
  std::vector<AnnotationRecord> records;  // aid order
};

// Inclusive time window over annotation timestamps. INT bounds compare the
// sequence number; TEXT bounds compare ISO-8601 UTC strings.
struct TimeWindow {
  Value lo;
  Value hi;

  // Raises kInvertedRange when lo > hi, kTypeMismatch on mixed/unsupported bounds.
  void validate() const;
  bool contains(const AnnotationRecord& record) const;
};

struct LookupOptions {
  bool include_archived = false;
  std::set<std::string> tables;  // annotation table names; empty = all
};

using AnnotationTableKey = std::pair<std::string, std::string>;  // (owner, name)

// Compact annotation storage: each annotation is one record holding the
// rectangles that decompose its target cells.
class AnnotationStore {
 public:
  // `by_engine` permits SYSTEM tables and names starting with '_'.
  void create_table(AnnotationTableDef def, const Catalog& catalog, bool by_engine = false);
  std::size_t drop_table(const std::string& owner, const std::string& name);

  bool has_table(const std::string& owner, const std::string& name) const;
  const AnnotationTable& table(const std::string& owner, const std::string& name) const;
  const std::map<AnnotationTableKey, AnnotationTable>& tables() const { return tables_; }
  std::vector<const AnnotationTable*> tables_of(const std::string& owner) const;

  // Adds one record per named annotation table over `target`; returns the aids.
  std::vector<Aid> add(const std::string& owner, const std::vector<std::string>& names,
                       const std::string& body, const CellSet& target, const std::string& user,
                       const std::string& ts_iso);

  // Engine-only: adds a record to a SYSTEM table without writer/tag checks.
  Aid add_system(const std::string& owner, const std::string& name, const std::string& body,
                 std::vector<Rect> rects, const std::string& ts_iso);

  // Records whose regions contain `cell`, in aid order.
  std::vector<const AnnotationRecord*> annotations_at(const std::string& owner, const Cell& cell,
                                                      const LookupOptions& opts = {}) const;

  // Archives every live record of the named tables whose live cells are
  // non-empty and lie inside `target` (and whose timestamp is in `window`).
  std::size_t archive(const Table& owner, const std::vector<std::string>& names, const CellSet& target,
                      const std::optional<TimeWindow>& window);
  std::size_t restore(const Table& owner, const std::vector<std::string>& names, const CellSet& target,
                      const std::optional<TimeWindow>& window);

  const AnnotationRecord* record(Aid aid) const;
  // Sets the archived flag of one record; returns true when it changed.
  bool set_archived(Aid aid, bool archived);
  // Replaces the regions of a record (engine-maintained tables only).
  void set_rects(Aid aid, std::vector<Rect> rects);

  // Records whose regions no longer cover any live row.
  std::vector<const AnnotationRecord*> orphaned(const Catalog& catalog) const;

  Aid next_aid() const { return next_aid_; }
  std::int64_t next_ts_seq() const { return next_ts_seq_; }

  // Loader entry points.
  void load_table(AnnotationTableDef def);
  void load_record(AnnotationRecord record);
  void set_counters(Aid next_aid, std::int64_t next_ts_seq);

 private:
  AnnotationTable& mutable_table(const std::string& owner, const std::string& name);
  std::size_t set_archived_where(const Table& owner, const std::vector<std::string>& names,
                                 const CellSet& target, const std::optional<TimeWindow>& window,
                                 bool archived);
  void reindex();

  std::map<AnnotationTableKey, AnnotationTable> tables_;
  std::map<Aid, std::pair<AnnotationTableKey, std::size_t>> index_;
  Aid next_aid_ = 1;
  std::int64_t next_ts_seq_ = 1;
};

// Checks body structure against a table's constraints and writer list.
void check_annotation_allowed(const AnnotationTableDef& def, const std::string& body,
                              const std::string& user);

}  // namespace annodb
