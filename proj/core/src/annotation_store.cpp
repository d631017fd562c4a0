#include "annodb/annotation_store.hpp"

#include <algorithm>

#include "annodb/error.hpp"
#include "annodb/xml.hpp"

namespace annodb {

std::string_view category_name(AnnotationCategory category) {
  switch (category) {
    case AnnotationCategory::kComment: return "COMMENT";
    case AnnotationCategory::kProvenance: return "PROVENANCE";
    case AnnotationCategory::kSystem: return "SYSTEM";
  }
  return "COMMENT";
}

void TimeWindow::validate() const {
  bool ints = lo.is_int() && hi.is_int();
  bool texts = lo.is_text() && hi.is_text();
  if (!ints && !texts) {
    raise(ErrorCode::kTypeMismatch, "BETWEEN bounds must both be sequence numbers or both ISO-8601 text");
  }
  if (compare_total(lo, hi) > 0) {
    raise(ErrorCode::kInvertedRange, lo.to_string() + " is after " + hi.to_string());
  }
}

bool TimeWindow::contains(const AnnotationRecord& record) const {
  if (lo.is_int()) return record.ts_seq >= lo.as_int() && record.ts_seq <= hi.as_int();
  return record.ts_iso >= lo.as_text() && record.ts_iso <= hi.as_text();
}

void check_annotation_allowed(const AnnotationTableDef& def, const std::string& body,
                              const std::string& user) {
  if (def.category == AnnotationCategory::kSystem) {
    raise(ErrorCode::kSystemTable, def.owner + "." + def.name + " is maintained by the engine");
  }
  if (!def.writers.empty() &&
      std::find(def.writers.begin(), def.writers.end(), user) == def.writers.end()) {
    raise(ErrorCode::kWriterForbidden, "user " + user + " may not write to " + def.owner + "." + def.name);
  }
  std::vector<xml::Element> elements = xml::parse(body);
  for (const std::string& tag : def.required_tags) {
    bool found = std::any_of(elements.begin(), elements.end(),
                             [&](const xml::Element& e) { return e.name == tag; });
    if (!found) {
      raise(ErrorCode::kMissingRequiredTag, def.owner + "." + def.name + " requires <" + tag + ">");
    }
  }
}

void AnnotationStore::create_table(AnnotationTableDef def, const Catalog& catalog, bool by_engine) {
  if (!catalog.has_table(def.owner)) raise(ErrorCode::kUnknownTable, def.owner);
  if (def.name.empty()) raise(ErrorCode::kInvalidQuery, "annotation table name must not be empty");
  if (!by_engine) {
    if (def.category == AnnotationCategory::kSystem) {
      raise(ErrorCode::kSystemTable, "SYSTEM annotation tables are created by the engine only");
    }
    if (def.name.front() == '_') {
      raise(ErrorCode::kSystemTable, "annotation table names starting with '_' are reserved");
    }
  }
  AnnotationTableKey key{def.owner, def.name};
  if (tables_.count(key)) raise(ErrorCode::kDuplicate, def.owner + "." + def.name);
  tables_.emplace(std::move(key), AnnotationTable{std::move(def), {}});
}

std::size_t AnnotationStore::drop_table(const std::string& owner, const std::string& name) {
  auto it = tables_.find({owner, name});
  if (it == tables_.end()) raise(ErrorCode::kUnknownAnnotationTable, owner + "." + name);
  if (it->second.def.category == AnnotationCategory::kSystem) {
    raise(ErrorCode::kSystemTable, owner + "." + name + " cannot be dropped");
  }
  std::size_t n = it->second.records.size();
  tables_.erase(it);
  reindex();
  return n;
}

bool AnnotationStore::has_table(const std::string& owner, const std::string& name) const {
  return tables_.count({owner, name}) != 0;
}

const AnnotationTable& AnnotationStore::table(const std::string& owner, const std::string& name) const {
  auto it = tables_.find({owner, name});
  if (it == tables_.end()) raise(ErrorCode::kUnknownAnnotationTable, owner + "." + name);
  return it->second;
}

AnnotationTable& AnnotationStore::mutable_table(const std::string& owner, const std::string& name) {
  auto it = tables_.find({owner, name});
  if (it == tables_.end()) raise(ErrorCode::kUnknownAnnotationTable, owner + "." + name);
  return it->second;
}

std::vector<const AnnotationTable*> AnnotationStore::tables_of(const std::string& owner) const {
  std::vector<const AnnotationTable*> out;
  for (auto it = tables_.lower_bound({owner, std::string()}); it != tables_.end() && it->first.first == owner; ++it) {
    out.push_back(&it->second);
  }
  return out;
}

std::vector<Aid> AnnotationStore::add(const std::string& owner, const std::vector<std::string>& names,
                                      const std::string& body, const CellSet& target,
                                      const std::string& user, const std::string& ts_iso) {
  if (names.empty()) raise(ErrorCode::kInvalidQuery, "no annotation table named");
  for (const std::string& name : names) check_annotation_allowed(table(owner, name).def, body, user);
  if (target.empty()) raise(ErrorCode::kEmptyTarget, "annotation target selects no cells");
  std::vector<Rect> rects = decompose_regions(target);
  std::vector<Aid> aids;
  for (const std::string& name : names) {
    AnnotationTable& t = mutable_table(owner, name);
    AnnotationRecord rec;
    rec.aid = next_aid_++;
    rec.owner = owner;
    rec.table = name;
    rec.body = body;
    rec.rects = rects;
    rec.ts_seq = next_ts_seq_++;
    rec.ts_iso = ts_iso;
    index_[rec.aid] = {{owner, name}, t.records.size()};
    aids.push_back(rec.aid);
    t.records.push_back(std::move(rec));
  }
  return aids;
}

Aid AnnotationStore::add_system(const std::string& owner, const std::string& name, const std::string& body,
                                std::vector<Rect> rects, const std::string& ts_iso) {
  AnnotationTable& t = mutable_table(owner, name);
  xml::parse(body);
  AnnotationRecord rec;
  rec.aid = next_aid_++;
  rec.owner = owner;
  rec.table = name;
  rec.body = body;
  rec.rects = std::move(rects);
  rec.ts_seq = next_ts_seq_++;
  rec.ts_iso = ts_iso;
  index_[rec.aid] = {{owner, name}, t.records.size()};
  t.records.push_back(std::move(rec));
  return t.records.back().aid;
}

std::vector<const AnnotationRecord*> AnnotationStore::annotations_at(const std::string& owner,
                                                                     const Cell& cell,
                                                                     const LookupOptions& opts) const {
  std::vector<const AnnotationRecord*> out;
  for (const AnnotationTable* t : tables_of(owner)) {
    if (!opts.tables.empty() && !opts.tables.count(t->def.name)) continue;
    for (const AnnotationRecord& r : t->records) {
      if (r.archived && !opts.include_archived) continue;
      if (any_contains(r.rects, cell)) out.push_back(&r);
    }
  }
  std::sort(out.begin(), out.end(), [](const AnnotationRecord* a, const AnnotationRecord* b) { return a->aid < b->aid; });
  return out;
}

std::size_t AnnotationStore::set_archived_where(const Table& owner, const std::vector<std::string>& names,
                                                const CellSet& target,
                                                const std::optional<TimeWindow>& window, bool archived) {
  if (window) window->validate();
  std::size_t count = 0;
  for (const std::string& name : names) {
    AnnotationTable& t = mutable_table(owner.name(), name);
    for (AnnotationRecord& r : t.records) {
      if (r.archived == archived) continue;
      if (window && !window->contains(r)) continue;
      CellSet live = expand_live(r.rects, owner);
      if (live.empty()) continue;
      if (!std::includes(target.begin(), target.end(), live.begin(), live.end())) continue;
      r.archived = archived;
      ++count;
    }
  }
  return count;
}

std::size_t AnnotationStore::archive(const Table& owner, const std::vector<std::string>& names,
                                     const CellSet& target, const std::optional<TimeWindow>& window) {
  return set_archived_where(owner, names, target, window, true);
}

std::size_t AnnotationStore::restore(const Table& owner, const std::vector<std::string>& names,
                                     const CellSet& target, const std::optional<TimeWindow>& window) {
  return set_archived_where(owner, names, target, window, false);
}

const AnnotationRecord* AnnotationStore::record(Aid aid) const {
  auto it = index_.find(aid);
  if (it == index_.end()) return nullptr;
  return &tables_.at(it->second.first).records[it->second.second];
}

bool AnnotationStore::set_archived(Aid aid, bool archived) {
  auto it = index_.find(aid);
  if (it == index_.end()) return false;
  AnnotationRecord& r = tables_.at(it->second.first).records[it->second.second];
  if (r.archived == archived) return false;
  r.archived = archived;
  return true;
}

void AnnotationStore::set_rects(Aid aid, std::vector<Rect> rects) {
  auto it = index_.find(aid);
  if (it == index_.end()) raise(ErrorCode::kInvalidQuery, "no annotation a" + std::to_string(aid));
  tables_.at(it->second.first).records[it->second.second].rects = std::move(rects);
}

std::vector<const AnnotationRecord*> AnnotationStore::orphaned(const Catalog& catalog) const {
  std::vector<const AnnotationRecord*> out;
  for (const auto& [key, t] : tables_) {
    if (t.def.category == AnnotationCategory::kSystem) continue;
    const Table& owner = catalog.table(key.first);
    for (const AnnotationRecord& r : t.records) {
      if (expand_live(r.rects, owner).empty()) out.push_back(&r);
    }
  }
  return out;
}

void AnnotationStore::load_table(AnnotationTableDef def) {
  AnnotationTableKey key{def.owner, def.name};
  if (tables_.count(key)) raise(ErrorCode::kCorruptFormat, "duplicate annotation table " + def.owner + "." + def.name);
  tables_.emplace(std::move(key), AnnotationTable{std::move(def), {}});
}

void AnnotationStore::load_record(AnnotationRecord record) {
  AnnotationTable& t = mutable_table(record.owner, record.table);
  if (index_.count(record.aid)) raise(ErrorCode::kCorruptFormat, "duplicate aid " + std::to_string(record.aid));
  index_[record.aid] = {{record.owner, record.table}, t.records.size()};
  t.records.push_back(std::move(record));
}

void AnnotationStore::set_counters(Aid next_aid, std::int64_t next_ts_seq) {
  next_aid_ = next_aid;
  next_ts_seq_ = next_ts_seq;
}

void AnnotationStore::reindex() {
  index_.clear();
  for (const auto& [key, t] : tables_) {
    for (std::size_t i = 0; i < t.records.size(); ++i) index_[t.records[i].aid] = {key, i};
  }
}

}  // namespace annodb
