#include "annodb/expression.hpp"

#include "annodb/error.hpp"
#include "annodb/xml.hpp"

namespace annodb {

namespace ast {

Expr column(std::string qualifier, std::string name) {
  return Expr{ColumnRef{std::move(qualifier), std::move(name)}};
}
Expr column(std::string name) { return column({}, std::move(name)); }
Expr literal(Value v) { return Expr{Literal{std::move(v)}}; }
Expr compare(CompareOp op, Expr lhs, Expr rhs) {
  return Expr{Comparison{op, Box<Expr>(std::move(lhs)), Box<Expr>(std::move(rhs))}};
}
Expr conjunction(Expr lhs, Expr rhs) {
  return Expr{Logical{LogicOp::kAnd, Box<Expr>(std::move(lhs)), Box<Expr>(std::move(rhs))}};
}
Expr disjunction(Expr lhs, Expr rhs) {
  return Expr{Logical{LogicOp::kOr, Box<Expr>(std::move(lhs)), Box<Expr>(std::move(rhs))}};
}
Expr negation(Expr operand) { return Expr{Not{Box<Expr>(std::move(operand))}}; }

AnnExpr ann_atom(AnnField field, CompareOp op, Value literal, std::string tag) {
  return AnnExpr{AnnAtom{field, std::move(tag), op, std::move(literal)}};
}

}  // namespace ast

namespace {

std::optional<bool> compare_values(ast::CompareOp op, const Value& a, const Value& b) {
  if (op == ast::CompareOp::kLike) {
    if (a.is_null() || b.is_null()) return std::nullopt;
    if (!a.is_text() || !b.is_text()) raise(ErrorCode::kTypeMismatch, "LIKE needs text operands");
    return like_match(a.as_text(), b.as_text());
  }
  std::optional<int> c = compare_sql(a, b);
  if (!c) return std::nullopt;
  switch (op) {
    case ast::CompareOp::kEq: return *c == 0;
    case ast::CompareOp::kNe: return *c != 0;
    case ast::CompareOp::kLt: return *c < 0;
    case ast::CompareOp::kLe: return *c <= 0;
    case ast::CompareOp::kGt: return *c > 0;
    case ast::CompareOp::kGe: return *c >= 0;
    case ast::CompareOp::kLike: break;
  }
  return std::nullopt;
}

Value truth_value(std::optional<bool> b) {
  if (!b) return Value();
  return Value(static_cast<std::int64_t>(*b ? 1 : 0));
}

}  // namespace

Value eval_value(const ast::Expr& expr, const EvalScope& scope) {
  if (const auto* c = std::get_if<ast::ColumnRef>(&expr.node)) return scope.column(*c);
  if (const auto* l = std::get_if<ast::Literal>(&expr.node)) return l->value;
  if (const auto* a = std::get_if<ast::Aggregate>(&expr.node)) {
    if (!scope.aggregate) raise(ErrorCode::kInvalidQuery, "aggregate used outside of a grouped select");
    return scope.aggregate(*a);
  }
  return truth_value(eval_condition(expr, scope));
}

std::optional<bool> eval_condition(const ast::Expr& expr, const EvalScope& scope) {
  return std::visit(
      [&](const auto& node) -> std::optional<bool> {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, ast::Comparison>) {
          return compare_values(node.op, eval_value(*node.lhs, scope), eval_value(*node.rhs, scope));
        } else if constexpr (std::is_same_v<T, ast::Logical>) {
          std::optional<bool> l = eval_condition(*node.lhs, scope);
          if (node.op == ast::LogicOp::kAnd) {
            if (l == false) return false;
            std::optional<bool> r = eval_condition(*node.rhs, scope);
            if (r == false) return false;
            if (l && r) return true;
            return std::nullopt;
          }
          if (l == true) return true;
          std::optional<bool> r = eval_condition(*node.rhs, scope);
          if (r == true) return true;
          if (l && r) return false;
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, ast::Not>) {
          std::optional<bool> v = eval_condition(*node.operand, scope);
          if (!v) return std::nullopt;
          return !*v;
        } else if constexpr (std::is_same_v<T, ast::IsNull>) {
          bool is_null = eval_value(*node.operand, scope).is_null();
          return node.negated ? !is_null : is_null;
        } else {
          Value v = eval_value(ast::Expr{node}, scope);
          if (v.is_null()) return std::nullopt;
          if (v.is_int()) return v.as_int() != 0;
          if (v.is_float()) return v.as_float() != 0.0;
          raise(ErrorCode::kTypeMismatch, "text value used as a condition");
        }
      },
      expr.node);
}

bool ann_atom_matches(const ast::AnnAtom& atom, const AnnotationRecord& record) {
  Value subject;
  switch (atom.field) {
    case ast::AnnField::kValue: subject = record.body; break;
    case ast::AnnField::kTable: subject = record.table; break;
    case ast::AnnField::kTs:
      if (atom.literal.is_int()) {
        subject = static_cast<std::int64_t>(record.ts_seq);
      } else {
        subject = record.ts_iso;
      }
      break;
    case ast::AnnField::kTag: {
      std::optional<std::string> text = xml::well_formed(record.body) ? xml::tag_text(record.body, atom.tag)
                                                                      : std::nullopt;
      if (!text) return false;
      subject = *text;
      break;
    }
  }
  return compare_values(atom.op, subject, atom.literal).value_or(false);
}

bool eval_ann_condition(const ast::AnnExpr& expr, const std::function<bool(const ast::AnnAtom&)>& atom_holds) {
  return std::visit(
      [&](const auto& node) -> bool {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, ast::AnnAtom>) {
          return atom_holds(node);
        } else if constexpr (std::is_same_v<T, ast::AnnLogical>) {
          bool l = eval_ann_condition(*node.lhs, atom_holds);
          if (node.op == ast::LogicOp::kAnd) return l && eval_ann_condition(*node.rhs, atom_holds);
          return l || eval_ann_condition(*node.rhs, atom_holds);
        } else {
          return !eval_ann_condition(*node.operand, atom_holds);
        }
      },
      expr.node);
}

bool ann_record_matches(const ast::AnnExpr& expr, const AnnotationRecord& record) {
  return eval_ann_condition(expr, [&](const ast::AnnAtom& a) { return ann_atom_matches(a, record); });
}

Value compute_aggregate(ast::AggregateFunc func, const std::vector<Value>& inputs, bool count_star) {
  if (func == ast::AggregateFunc::kCount) {
    if (count_star) return Value(static_cast<std::int64_t>(inputs.size()));
    std::int64_t n = 0;
    for (const Value& v : inputs) n += v.is_null() ? 0 : 1;
    return Value(n);
  }
  Value best;
  bool any_float = false;
  std::int64_t isum = 0;
  double fsum = 0;
  for (const Value& v : inputs) {
    if (v.is_null()) continue;
    if (func == ast::AggregateFunc::kSum) {
      if (!v.is_numeric()) raise(ErrorCode::kTypeMismatch, "SUM over text");
      if (v.is_float()) any_float = true;
      if (v.is_int()) isum += v.as_int();
      fsum += v.as_number();
      best = Value(0);
      continue;
    }
    if (best.is_null()) {
      best = v;
      continue;
    }
    if (v.is_text() != best.is_text()) raise(ErrorCode::kTypeMismatch, "MIN/MAX over mixed types");
    int c = compare_total(v, best);
    if ((func == ast::AggregateFunc::kMin && c < 0) || (func == ast::AggregateFunc::kMax && c > 0)) best = v;
  }
  if (func == ast::AggregateFunc::kSum) {
    if (best.is_null()) return Value();
    return any_float ? Value(fsum) : Value(isum);
  }
  return best;
}

bool contains_aggregate(const ast::Expr& expr) {
  return std::visit(
      [](const auto& node) -> bool {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, ast::Aggregate>) {
          return true;
        } else if constexpr (std::is_same_v<T, ast::Comparison> || std::is_same_v<T, ast::Logical>) {
          return contains_aggregate(*node.lhs) || contains_aggregate(*node.rhs);
        } else if constexpr (std::is_same_v<T, ast::Not> || std::is_same_v<T, ast::IsNull>) {
          return contains_aggregate(*node.operand);
        } else {
          return false;
        }
      },
      expr.node);
}

}  // namespace annodb
