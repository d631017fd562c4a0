#include "annodb/catalog.hpp"

#include <set>

#include "annodb/error.hpp"

namespace annodb {

std::optional<std::size_t> TableDef::column_index(std::string_view column) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].name == column) return i;
  }
  return std::nullopt;
}

const Row* Table::find(Rid rid) const {
  auto it = rows_.find(rid);
  return it == rows_.end() ? nullptr : &it->second;
}

Catalog::Catalog(const Catalog& other) : tables_(other.tables_) {}

Catalog& Catalog::operator=(const Catalog& other) {
  tables_ = other.tables_;
  return *this;
}

void validate_table_def(const TableDef& def) {
  if (def.name.empty()) raise(ErrorCode::kBadColumn, "table name must not be empty");
  if (def.columns.empty()) raise(ErrorCode::kBadColumn, "table " + def.name + " needs at least one column");
  std::set<std::string> seen;
  for (const ColumnSpec& c : def.columns) {
    if (c.name.empty()) raise(ErrorCode::kBadColumn, "empty column name in " + def.name);
    if (c.name == "_rid") raise(ErrorCode::kBadColumn, "_rid is reserved for row identities");
    if (!seen.insert(c.name).second) {
      raise(ErrorCode::kBadColumn, "duplicate column " + c.name + " in " + def.name);
    }
  }
}

void Catalog::create_table(TableDef def) {
  validate_table_def(def);
  if (has_table(def.name)) raise(ErrorCode::kDuplicateTable, def.name);
  std::string name = def.name;
  tables_.emplace(std::move(name), Table(std::move(def)));
}

bool Catalog::has_table(std::string_view name) const { return tables_.find(name) != tables_.end(); }

const Table& Catalog::table(std::string_view name) const {
  auto it = tables_.find(name);
  if (it == tables_.end()) raise(ErrorCode::kUnknownTable, std::string(name));
  return it->second;
}

Table& Catalog::mutable_table(std::string_view name) {
  auto it = tables_.find(name);
  if (it == tables_.end()) raise(ErrorCode::kUnknownTable, std::string(name));
  return it->second;
}

namespace {

std::vector<Value> checked_tuple(const TableDef& def, const std::vector<Value>& tuple) {
  if (tuple.size() != def.columns.size()) {
    raise(ErrorCode::kTypeMismatch, def.name + " expects " + std::to_string(def.columns.size()) +
                                        " values, got " + std::to_string(tuple.size()));
  }
  std::vector<Value> out;
  out.reserve(tuple.size());
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    out.push_back(coerce_for_column(tuple[i], def.columns[i].type, def.columns[i].name));
  }
  return out;
}

}  // namespace

std::vector<Rid> Catalog::insert_rows(std::string_view table,
                                      const std::vector<std::vector<Value>>& tuples) {
  Table& t = mutable_table(table);
  // Type-check everything before mutating so a bad tuple inserts nothing.
  std::vector<std::vector<Value>> checked;
  checked.reserve(tuples.size());
  for (const auto& tuple : tuples) checked.push_back(checked_tuple(t.def_, tuple));
  std::vector<Rid> rids;
  rids.reserve(checked.size());
  for (auto& values : checked) {
    Rid rid = t.next_rid_++;
    t.rows_.emplace(rid, Row{rid, std::move(values)});
    rids.push_back(rid);
  }
  return rids;
}

void Catalog::restore_row(std::string_view table, Rid rid, const std::vector<Value>& values) {
  Table& t = mutable_table(table);
  if (rid < 1 || rid >= t.next_rid_) {
    raise(ErrorCode::kInvalidQuery, "rid " + std::to_string(rid) + " was never allocated in " + t.name());
  }
  if (t.contains(rid)) {
    raise(ErrorCode::kInvalidQuery, "rid " + std::to_string(rid) + " is live in " + t.name());
  }
  t.rows_.emplace(rid, Row{rid, checked_tuple(t.def_, values)});
}

std::vector<CellChange> Catalog::update_cells(std::string_view table, const RowPredicate& predicate,
                                              const std::vector<ColumnAssignment>& assignments) {
  Table& t = mutable_table(table);
  std::vector<ColumnAssignment> checked;
  for (const ColumnAssignment& a : assignments) {
    if (a.column >= t.def_.columns.size()) {
      raise(ErrorCode::kUnknownColumn, "column ordinal " + std::to_string(a.column) + " in " + t.name());
    }
    const ColumnSpec& spec = t.def_.columns[a.column];
    checked.push_back({a.column, coerce_for_column(a.value, spec.type, spec.name)});
  }
  // Evaluate the predicate on the pre-update state of every row first.
  std::vector<Rid> matched;
  for (const auto& [rid, row] : t.rows_) {
    if (predicate(row)) matched.push_back(rid);
  }
  std::vector<CellChange> changes;
  for (Rid rid : matched) {
    Row& row = t.rows_.at(rid);
    for (const ColumnAssignment& a : checked) {
      Value& cell = row.values[a.column];
      if (cell == a.value) continue;
      changes.push_back(CellChange{rid, a.column, cell, a.value});
      cell = a.value;
    }
  }
  if (hook_) hook_(t.name(), changes);
  return changes;
}

std::vector<Row> Catalog::delete_rows(std::string_view table, const RowPredicate& predicate) {
  Table& t = mutable_table(table);
  std::vector<Row> captured;
  for (auto it = t.rows_.begin(); it != t.rows_.end();) {
    if (predicate(it->second)) {
      captured.push_back(std::move(it->second));
      it = t.rows_.erase(it);
    } else {
      ++it;
    }
  }
  return captured;
}

void Catalog::write_cell(std::string_view table, Rid rid, std::size_t column, const Value& value) {
  Table& t = mutable_table(table);
  auto it = t.rows_.find(rid);
  if (it == t.rows_.end()) raise(ErrorCode::kInvalidQuery, "no row " + std::to_string(rid) + " in " + t.name());
  const ColumnSpec& spec = t.def_.columns.at(column);
  it->second.values[column] = coerce_for_column(value, spec.type, spec.name);
}

void Catalog::load_table(TableDef def, std::vector<Row> rows, Rid next_rid) {
  validate_table_def(def);
  Table t(std::move(def));
  for (Row& r : rows) {
    if (r.rid < 1 || r.rid >= next_rid) {
      raise(ErrorCode::kCorruptFormat, "rid " + std::to_string(r.rid) + " outside allocated range");
    }
    Rid rid = r.rid;
    r.values = checked_tuple(t.def_, r.values);
    if (!t.rows_.emplace(rid, std::move(r)).second) {
      raise(ErrorCode::kCorruptFormat, "duplicate rid " + std::to_string(rid));
    }
  }
  t.next_rid_ = next_rid;
  std::string name = t.name();
  tables_[name] = std::move(t);
}

}  // namespace annodb
