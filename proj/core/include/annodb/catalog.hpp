#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "annodb/value.hpp"

namespace annodb {

using Rid = std::int64_t;

struct ColumnSpec {
  std::string name;
  ColumnType type = ColumnType::kText;
  bool operator==(const ColumnSpec&) const = default;
};

struct TableDef {
  std::string name;
  std::vector<ColumnSpec> columns;

  // Ordinal of `column`, or nullopt.
  std::optional<std::size_t> column_index(std::string_view column) const;
  bool operator==(const TableDef&) const = default;
};

struct Row {
  Rid rid = 0;
  std::vector<Value> values;
  bool operator==(const Row&) const = default;
};

// A cell whose stored value changed, with its before and after images.
struct CellChange {
  Rid rid = 0;
  std::size_t column = 0;
  Value before;
  Value after;
  bool operator==(const CellChange&) const = default;
};

class Table {
 public:
  Table() = default;
  explicit Table(TableDef def) : def_(std::move(def)) {}

  const TableDef& def() const { return def_; }
  const std::string& name() const { return def_.name; }

  // Rows in rid order.
  const std::map<Rid, Row>& rows() const { return rows_; }
  const Row* find(Rid rid) const;
  bool contains(Rid rid) const { return rows_.count(rid) != 0; }
  std::size_t size() const { return rows_.size(); }

  // Next rid to hand out; rids below it were allocated at some point.
  Rid next_rid() const { return next_rid_; }
  Rid max_rid() const { return next_rid_ - 1; }

 private:
  friend class Catalog;

  TableDef def_;
  std::map<Rid, Row> rows_;
  Rid next_rid_ = 1;
};

using RowPredicate = std::function<bool(const Row&)>;
using ChangeHook = std::function<void(const std::string& table, std::span<const CellChange>)>;

// Row storage for user tables. Rids are assigned at insert, strictly
// increasing per table and never reused. `update_cells` fires the change hook
// once per call with exactly the cells whose value changed.
class Catalog {
 public:
  Catalog() = default;
  Catalog(const Catalog& other);
  Catalog& operator=(const Catalog& other);
  Catalog(Catalog&&) noexcept = default;
  Catalog& operator=(Catalog&&) noexcept = default;

  void create_table(TableDef def);
  bool has_table(std::string_view name) const;
  const Table& table(std::string_view name) const;
  const std::map<std::string, Table, std::less<>>& tables() const { return tables_; }

  std::vector<Rid> insert_rows(std::string_view table, const std::vector<std::vector<Value>>& tuples);

  // Re-inserts a row under a previously allocated rid that is not live.
  void restore_row(std::string_view table, Rid rid, const std::vector<Value>& values);

  struct ColumnAssignment {
    std::size_t column = 0;
    Value value;
  };
  std::vector<CellChange> update_cells(std::string_view table, const RowPredicate& predicate,
                                       const std::vector<ColumnAssignment>& assignments);

  // Removes matching rows and returns them in rid order.
  std::vector<Row> delete_rows(std::string_view table, const RowPredicate& predicate);

  // Writes one cell without firing the change hook (dependency recomputation).
  void write_cell(std::string_view table, Rid rid, std::size_t column, const Value& value);

  // The hook is not copied along with the catalog.
  void set_change_hook(ChangeHook hook) { hook_ = std::move(hook); }

  // Loader entry point: installs a table with explicit rows and rid counter.
  void load_table(TableDef def, std::vector<Row> rows, Rid next_rid);

 private:
  Table& mutable_table(std::string_view name);

  std::map<std::string, Table, std::less<>> tables_;
  ChangeHook hook_;
};

// Validates a definition: at least one column, unique names, no reserved names.
void validate_table_def(const TableDef& def);

}  // namespace annodb
