#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "annodb/ast.hpp"
#include "annodb/catalog.hpp"
#include "annodb/procedures.hpp"
#include "annodb/query.hpp"

namespace annodb {

struct ColumnKey {
  std::string table;
  std::string column;
  auto operator<=>(const ColumnKey&) const = default;
};

std::string to_string(const ColumnKey& key);

// Target columns derive from source columns through a procedure. Rows are
// linked by an equi-join on `link`, or by row identity within one table when
// `link` is empty.
struct DependencyRule {
  std::string id;
  std::string source_table;
  std::vector<std::string> source_columns;
  std::string target_table;
  std::vector<std::string> target_columns;
  std::optional<ast::LinkKeys> link;
  std::string procedure;
  bool executable = false;
  bool invertible = false;
  std::vector<std::string> derived_from;  // base rule ids along a chain; empty for base rules
  bool operator==(const DependencyRule&) const = default;
};

// A single cell-to-cell dependency.
struct DependencyEdge {
  SourceCell source;
  SourceCell target;
  std::string procedure;
  bool executable = false;
  bool operator==(const DependencyEdge&) const = default;
};

struct PropagationResult {
  std::vector<SourceCell> recomputed;
  std::vector<SourceCell> outdated;
  std::vector<std::string> failures;
};

// Per table, per column name: bit i is the outdated flag of rid i + 1.
using BitmapSet = std::map<std::string, std::map<std::string, std::vector<bool>>>;

class DependencyEngine {
 public:
  // Validates and stores a base rule. Returns warnings (same target column
  // fed by different procedures). Raises kCycleDetected, kUnknownProcedure,
  // kArityMismatch, kUnknownTable, kUnknownColumn, kDuplicate.
  std::vector<std::string> add_rule(const Catalog& catalog, const ProcedureRegistry& procedures, DependencyRule rule);
  void drop_rule(const std::string& id);
  const std::vector<DependencyRule>& rules() const { return rules_; }

  // Compositions of two or more rules along the rule graph.
  std::vector<DependencyRule> derived_rules() const;

  std::set<ColumnKey> attribute_closure(const Catalog& catalog, const ColumnKey& column) const;
  std::set<ColumnKey> procedure_closure(const std::string& procedure) const;

  void add_edge(DependencyEdge edge);
  const std::vector<DependencyEdge>& edges() const { return edges_; }

  // Re-executes or marks everything downstream of the changed cells.
  PropagationResult on_data_change(Catalog& catalog, const ProcedureRegistry& procedures, const std::string& table,
                                   std::span<const CellChange> changes);
  // Re-evaluates every cell computed by `procedure` and what depends on it.
  PropagationResult on_procedure_change(Catalog& catalog, const ProcedureRegistry& procedures,
                                        const std::string& procedure);

  // Clears the bits of the given cells; returns how many were set.
  std::size_t validate_cells(const std::string& table, const std::string& column, const std::vector<Rid>& rids);

  bool is_outdated(const std::string& table, const std::string& column, Rid rid) const;
  void set_outdated(const std::string& table, const std::string& column, Rid rid, bool value);

  const BitmapSet& bitmaps() const { return bits_; }
  // Bitmap of one column padded or cut to `length` bits.
  std::vector<bool> bitmap(const std::string& table, const std::string& column, std::size_t length) const;
  void load_bitmap(const std::string& table, const std::string& column, std::vector<bool> bits);
  void load_rule(DependencyRule rule) { rules_.push_back(std::move(rule)); }

  // Forgets rules, edges and bits that mention `table`.
  void drop_table(const std::string& table);

 private:
  struct Step;
  PropagationResult propagate(Catalog& catalog, const ProcedureRegistry& procedures, std::vector<Step> seeds);

  std::vector<DependencyRule> rules_;
  std::vector<DependencyEdge> edges_;
  BitmapSet bits_;
};

// Every column reachable from `start` through rule edges (start excluded).
std::set<ColumnKey> reachable_columns(const std::vector<DependencyRule>& rules, const ColumnKey& start);

}  // namespace annodb
