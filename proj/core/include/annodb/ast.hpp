#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "annodb/box.hpp"
#include "annodb/value.hpp"

// Abstract syntax for A-SQL: a core SQL subset plus annotation, dependency and
// approval commands. Every node supports structural equality so that
// parse(render(s)) == s can be checked directly.
namespace annodb::ast {

// ---------------------------------------------------------------------------
// Data expressions (WHERE, HAVING, ON, projection items)

struct Expr;

struct ColumnRef {
  std::string qualifier;  // table name or alias; empty when unqualified
  std::string name;       // "_rid" addresses the row identity

  bool operator==(const ColumnRef&) const = default;
};

struct Literal {
  Value value;
  bool operator==(const Literal&) const = default;
};

enum class AggregateFunc { kCount, kMin, kMax, kSum };

struct Aggregate {
  AggregateFunc func = AggregateFunc::kCount;
  std::optional<ColumnRef> argument;  // nullopt means COUNT(*)
  bool operator==(const Aggregate&) const = default;
};

enum class CompareOp { kEq, kNe, kLt, kLe, kGt, kGe, kLike };

struct Comparison {
  CompareOp op = CompareOp::kEq;
  Box<Expr> lhs;
  Box<Expr> rhs;
  bool operator==(const Comparison&) const = default;
};

enum class LogicOp { kAnd, kOr };

struct Logical {
  LogicOp op = LogicOp::kAnd;
  Box<Expr> lhs;
  Box<Expr> rhs;
  bool operator==(const Logical&) const = default;
};

struct Not {
  Box<Expr> operand;
  bool operator==(const Not&) const = default;
};

struct IsNull {
  Box<Expr> operand;
  bool negated = false;
  bool operator==(const IsNull&) const = default;
};

struct Expr {
  std::variant<ColumnRef, Literal, Aggregate, Comparison, Logical, Not, IsNull> node;
  bool operator==(const Expr&) const = default;
};

Expr column(std::string qualifier, std::string name);
Expr column(std::string name);
Expr literal(Value v);
Expr compare(CompareOp op, Expr lhs, Expr rhs);
Expr conjunction(Expr lhs, Expr rhs);
Expr disjunction(Expr lhs, Expr rhs);
Expr negation(Expr operand);

// ---------------------------------------------------------------------------
// Annotation conditions (AWHERE, AHAVING, FILTER)

struct AnnExpr;

enum class AnnField { kValue, kTable, kTs, kTag };

struct AnnAtom {
  AnnField field = AnnField::kValue;
  std::string tag;  // element name for kTag
  CompareOp op = CompareOp::kEq;
  Value literal;
  bool operator==(const AnnAtom&) const = default;
};

struct AnnLogical {
  LogicOp op = LogicOp::kAnd;
  Box<AnnExpr> lhs;
  Box<AnnExpr> rhs;
  bool operator==(const AnnLogical&) const = default;
};

struct AnnNot {
  Box<AnnExpr> operand;
  bool operator==(const AnnNot&) const = default;
};

struct AnnExpr {
  std::variant<AnnAtom, AnnLogical, AnnNot> node;
  bool operator==(const AnnExpr&) const = default;
};

AnnExpr ann_atom(AnnField field, CompareOp op, Value literal, std::string tag = {});

// ---------------------------------------------------------------------------
// SELECT

struct Star {
  std::string qualifier;  // empty for bare *
  bool operator==(const Star&) const = default;
};

struct SelectItem {
  std::variant<Star, Expr> item;
  std::string alias;
  bool operator==(const SelectItem&) const = default;
};

struct TableRef {
  std::string name;
  std::string alias;
  bool operator==(const TableRef&) const = default;

  const std::string& binding() const { return alias.empty() ? name : alias; }
};

struct FromItem {
  TableRef table;
  std::optional<Expr> join_on;  // set for "JOIN t ON cond"; comma items leave it empty
  bool operator==(const FromItem&) const = default;
};

// An annotation table reference "owner.name" or a bare "name".
struct AnnTableName {
  std::string owner;
  std::string name;
  bool operator==(const AnnTableName&) const = default;
};

struct AnnotationClause {
  bool all = false;                  // ANNOTATION(*)
  std::vector<AnnTableName> tables;  // ANNOTATION(a, T.b, _outdated)
  bool operator==(const AnnotationClause&) const = default;
};

struct Promote {
  std::vector<ColumnRef> sources;
  ColumnRef target;
  bool operator==(const Promote&) const = default;
};

struct SelectCore {
  bool distinct = false;
  std::vector<SelectItem> items;
  std::vector<FromItem> from;
  std::optional<AnnotationClause> annotation;
  std::optional<Expr> where;
  std::optional<AnnExpr> awhere;
  std::vector<ColumnRef> group_by;
  std::optional<Expr> having;
  std::optional<AnnExpr> ahaving;
  std::optional<AnnExpr> filter;
  std::vector<Promote> promotes;
  bool operator==(const SelectCore&) const = default;
};

enum class SetOp { kUnion, kIntersect, kExcept };

struct SetOperand {
  SetOp op = SetOp::kUnion;
  SelectCore core;
  bool operator==(const SetOperand&) const = default;
};

// A compound select: head (op operand)*, evaluated left to right.
struct AnnSelect {
  SelectCore head;
  std::vector<SetOperand> tail;
  bool operator==(const AnnSelect&) const = default;
};

// ---------------------------------------------------------------------------
// Core DML / DDL

struct ColumnDef {
  std::string name;
  ColumnType type = ColumnType::kText;
  bool operator==(const ColumnDef&) const = default;
};

struct CreateTable {
  std::string name;
  std::vector<ColumnDef> columns;
  bool operator==(const CreateTable&) const = default;
};

struct Insert {
  std::string table;
  std::vector<std::string> columns;  // empty means all columns in order; may name _rid
  std::vector<std::vector<Value>> rows;
  bool operator==(const Insert&) const = default;
};

struct Assignment {
  std::string column;
  Value value;
  bool operator==(const Assignment&) const = default;
};

struct Update {
  std::string table;
  std::vector<Assignment> assignments;
  std::optional<Expr> where;
  bool operator==(const Update&) const = default;
};

struct Delete {
  std::string table;
  std::optional<Expr> where;
  bool operator==(const Delete&) const = default;
};

// ---------------------------------------------------------------------------
// Annotation commands

enum class AnnCategory { kComment, kProvenance, kSystem };

struct CreateAnnotationTable {
  std::string owner;
  std::string name;
  AnnCategory category = AnnCategory::kComment;
  std::vector<std::string> required_tags;
  std::vector<std::string> writers;
  bool operator==(const CreateAnnotationTable&) const = default;
};

struct DropAnnotationTable {
  std::string owner;
  std::string name;
  bool operator==(const DropAnnotationTable&) const = default;
};

struct AddAnnotation {
  std::vector<AnnTableName> tables;
  std::string body;
  std::variant<AnnSelect, Insert, Update, Delete> target;
  bool operator==(const AddAnnotation&) const = default;
};

struct TimeRange {
  Value lo;  // ISO-8601 text or INT sequence number
  Value hi;
  bool operator==(const TimeRange&) const = default;
};

struct ArchiveAnnotation {
  std::vector<AnnTableName> tables;
  std::optional<TimeRange> range;
  AnnSelect target;
  bool operator==(const ArchiveAnnotation&) const = default;
};

struct RestoreAnnotation {
  std::vector<AnnTableName> tables;
  std::optional<TimeRange> range;
  AnnSelect target;
  bool operator==(const RestoreAnnotation&) const = default;
};

struct VacuumAnnotations {
  bool operator==(const VacuumAnnotations&) const = default;
};

// ---------------------------------------------------------------------------
// Dependency commands

struct LinkKeys {
  std::string source_column;
  std::string target_column;
  bool operator==(const LinkKeys&) const = default;
};

struct CreateDependencyRule {
  std::string id;
  std::string source_table;
  std::vector<std::string> source_columns;
  std::string target_table;
  std::vector<std::string> target_columns;
  std::optional<LinkKeys> link;  // nullopt means LINK BY ROW (same table, same rid)
  std::string procedure;
  bool executable = false;
  bool invertible = false;
  bool operator==(const CreateDependencyRule&) const = default;
};

struct DropDependencyRule {
  std::string id;
  bool operator==(const DropDependencyRule&) const = default;
};

// Cell-to-cell dependency resolved against the rows matching each WHERE at
// creation time.
struct AddDependencyEdge {
  std::string source_table;
  std::string source_column;
  std::optional<Expr> source_where;
  std::string target_table;
  std::string target_column;
  std::optional<Expr> target_where;
  std::string procedure;
  bool executable = false;
  bool operator==(const AddDependencyEdge&) const = default;
};

struct Validate {
  std::string table;
  std::vector<std::string> columns;
  std::optional<Expr> where;
  std::vector<Assignment> assignments;
  bool operator==(const Validate&) const = default;
};

struct RegisterProcedure {
  std::string name;
  std::string builtin;
  std::size_t arity = 1;
  bool operator==(const RegisterProcedure&) const = default;
};

// ---------------------------------------------------------------------------
// Approval commands

struct StartContentApproval {
  std::string table;
  std::vector<std::string> columns;  // empty means every column
  std::vector<std::string> approvers;
  bool operator==(const StartContentApproval&) const = default;
};

struct EndContentApproval {
  std::string table;
  bool operator==(const EndContentApproval&) const = default;
};

struct Approve {
  std::int64_t op_id = 0;
  bool operator==(const Approve&) const = default;
};

struct Disapprove {
  std::int64_t op_id = 0;
  bool force = false;
  bool operator==(const Disapprove&) const = default;
};

struct ListPending {
  std::string approver;  // empty means all
  bool operator==(const ListPending&) const = default;
};

struct SetUser {
  std::string name;
  bool operator==(const SetUser&) const = default;
};

using StatementNode =
    std::variant<CreateTable, Insert, Update, Delete, AnnSelect, CreateAnnotationTable,
                 DropAnnotationTable, AddAnnotation, ArchiveAnnotation, RestoreAnnotation,
                 VacuumAnnotations, CreateDependencyRule, DropDependencyRule, AddDependencyEdge,
                 Validate, RegisterProcedure, StartContentApproval, EndContentApproval, Approve,
                 Disapprove, ListPending, SetUser>;

struct Statement {
  StatementNode node;
  bool operator==(const Statement&) const = default;
};

}  // namespace annodb::ast
