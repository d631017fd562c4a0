#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "annodb/annotation_store.hpp"
#include "annodb/ast.hpp"
#include "annodb/catalog.hpp"
#include "annodb/regions.hpp"

namespace annodb {

// A stored cell a result value was read from.
struct SourceCell {
  std::string table;
  Cell cell;
  auto operator<=>(const SourceCell&) const = default;
};

struct OutputColumn {
  std::string name;
  std::string qualifier;  // FROM binding the column came from, if any
  std::string table;      // source table, if any
  bool operator==(const OutputColumn&) const = default;
};

// Data values plus, per column, the annotations it carries and the stored
// cells it was computed from. Equality of tuples for grouping and set
// operations looks at `values` only.
struct AnnotatedTuple {
  std::vector<Value> values;
  std::vector<std::set<Aid>> anns;
  std::vector<std::set<SourceCell>> lineage;
  std::vector<Rid> row_ids;  // one per FROM binding; empty after projection
  bool operator==(const AnnotatedTuple&) const = default;
};

struct AnnotatedRelation {
  std::vector<OutputColumn> columns;
  std::vector<std::string> bindings;  // aligned with AnnotatedTuple::row_ids
  std::vector<AnnotatedTuple> tuples;

  // Every aid appearing anywhere in the relation.
  std::set<Aid> aids() const;
  // Ordinal of the column `ref` names. Raises kUnknownColumn, or kInvalidQuery
  // when the reference is ambiguous.
  std::size_t resolve(const ast::ColumnRef& ref) const;
};

// What a query reads. `outdated` reports the dependency bit of a stored cell
// and may be left empty when no bitmaps exist.
struct QueryContext {
  const Catalog& catalog;
  const AnnotationStore& annotations;
  std::function<bool(const std::string& table, const Cell& cell)> outdated;
};

AnnotatedRelation execute_select(const QueryContext& ctx, const ast::AnnSelect& query);

std::set<Aid> annotation_union(const std::set<Aid>& a, const std::set<Aid>& b);

AnnotatedRelation select_where(const AnnotatedRelation& rel, const ast::Expr& cond);
AnnotatedRelation apply_awhere(const QueryContext& ctx, const AnnotatedRelation& rel, const ast::AnnExpr& cond);
AnnotatedRelation apply_filter(const QueryContext& ctx, const AnnotatedRelation& rel, const ast::AnnExpr& cond);
AnnotatedRelation project(const AnnotatedRelation& rel, const std::vector<ast::ColumnRef>& columns,
                          const std::vector<ast::Promote>& promotes);

// Merges tuples that agree on their data values: values of the first member,
// per-column annotation and lineage unions.
AnnotatedTuple combine_group(const std::vector<AnnotatedTuple>& members);

// Adds the `_outdated` annotation of the source table to every column whose
// lineage includes an outdated cell. `tables` limits the overlay when given.
AnnotatedRelation outdated_overlay(const QueryContext& ctx, AnnotatedRelation rel,
                                   const std::optional<std::set<std::string>>& tables = std::nullopt);

// The aid of the `_outdated` record attached to `table`, if one exists.
std::optional<Aid> outdated_aid(const AnnotationStore& store, const std::string& table);

// Stored cells of `table` that contribute to the relation.
CellSet target_cells(const AnnotatedRelation& rel, const std::string& table);

}  // namespace annodb
