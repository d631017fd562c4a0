#pragma once

#include <functional>
#include <optional>

#include "annodb/annotation_store.hpp"
#include "annodb/ast.hpp"

namespace annodb {

// Supplies column values (and, inside a group, aggregate values) to the
// evaluator. Resolvers raise kUnknownColumn for names they cannot bind.
struct EvalScope {
  std::function<Value(const ast::ColumnRef&)> column;
  std::function<Value(const ast::Aggregate&)> aggregate;  // empty outside GROUP BY
};

// Scalar value of an expression. Predicates yield INT 1/0 or NULL.
Value eval_value(const ast::Expr& expr, const EvalScope& scope);

// Three-valued truth of a predicate; nullopt is SQL UNKNOWN.
std::optional<bool> eval_condition(const ast::Expr& expr, const EvalScope& scope);

// Whether one annotation satisfies one atom.
bool ann_atom_matches(const ast::AnnAtom& atom, const AnnotationRecord& record);

// Boolean combination of atoms, each decided by `atom_holds`.
bool eval_ann_condition(const ast::AnnExpr& expr, const std::function<bool(const ast::AnnAtom&)>& atom_holds);

// Condition checked against a single record (FILTER).
bool ann_record_matches(const ast::AnnExpr& expr, const AnnotationRecord& record);

// Aggregate over the values of its argument; NULLs are skipped.
Value compute_aggregate(ast::AggregateFunc func, const std::vector<Value>& inputs, bool count_star);

bool contains_aggregate(const ast::Expr& expr);

}  // namespace annodb
