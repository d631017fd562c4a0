#include "annodb/render.hpp"

#include <cctype>
#include <sstream>

#include "annodb/parser.hpp"

namespace annodb {

using namespace ast;

namespace {

bool plain_identifier(const std::string& name) {
  if (name.empty()) return false;
  unsigned char first = static_cast<unsigned char>(name[0]);
  if (!(std::isalpha(first) || first == '_')) return false;
  for (char c : name) {
    unsigned char u = static_cast<unsigned char>(c);
    if (!(std::isalnum(u) || u == '_')) return false;
  }
  return !is_reserved_word(name);
}

std::string quote(const std::string& text, char q) {
  std::string out(1, q);
  for (char c : text) {
    out.push_back(c);
    if (c == q) out.push_back(q);
  }
  out.push_back(q);
  return out;
}

// Users may be written as identifiers or string literals.
std::string render_user(const std::string& name) {
  return plain_identifier(name) ? name : quote(name, '\'');
}

template <typename T, typename F>
std::string join(const std::vector<T>& items, F&& f, const char* sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i != 0) out += sep;
    out += f(items[i]);
  }
  return out;
}

std::string ident_list(const std::vector<std::string>& names) {
  return "(" + join(names, [](const std::string& s) { return render_identifier(s); }) + ")";
}

std::string user_list(const std::vector<std::string>& users) {
  return "(" + join(users, render_user) + ")";
}

std::string render_column_ref(const ColumnRef& c) {
  if (c.qualifier.empty()) return render_identifier(c.name);
  return render_identifier(c.qualifier) + "." + render_identifier(c.name);
}

// Precedence levels: OR=1, AND=2, NOT=3, predicate=4, primary=5.
int precedence(const Expr& e) {
  return std::visit(
      [](const auto& n) -> int {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Logical>) {
          return n.op == LogicOp::kOr ? 1 : 2;
        } else if constexpr (std::is_same_v<T, Not>) {
          return 3;
        } else if constexpr (std::is_same_v<T, Comparison> || std::is_same_v<T, IsNull>) {
          return 4;
        } else {
          return 5;
        }
      },
      e.node);
}

std::string render_at(const Expr& e, int min_prec);

std::string wrap(const Expr& e, int min_prec) {
  std::string s = render_expr(e);
  return precedence(e) < min_prec ? "(" + s + ")" : s;
}

std::string render_at(const Expr& e, int min_prec) { return wrap(e, min_prec); }

std::string aggregate_name(AggregateFunc f) {
  switch (f) {
    case AggregateFunc::kCount: return "COUNT";
    case AggregateFunc::kMin: return "MIN";
    case AggregateFunc::kMax: return "MAX";
    case AggregateFunc::kSum: return "SUM";
  }
  return "COUNT";
}

int ann_precedence(const AnnExpr& e) {
  if (const auto* l = std::get_if<AnnLogical>(&e.node)) return l->op == LogicOp::kOr ? 1 : 2;
  if (std::holds_alternative<AnnNot>(e.node)) return 3;
  return 5;
}

std::string ann_wrap(const AnnExpr& e, int min_prec) {
  std::string s = render_ann_expr(e);
  return ann_precedence(e) < min_prec ? "(" + s + ")" : s;
}

std::string render_ann_table(const AnnTableName& n) {
  if (n.owner.empty()) return render_identifier(n.name);
  return render_identifier(n.owner) + "." + render_identifier(n.name);
}

std::string render_core(const SelectCore& c) {
  std::string out = "SELECT ";
  if (c.distinct) out += "DISTINCT ";
  out += join(c.items, [](const SelectItem& item) {
    std::string s;
    if (const auto* star = std::get_if<Star>(&item.item)) {
      s = star->qualifier.empty() ? "*" : render_identifier(star->qualifier) + ".*";
    } else {
      s = render_expr(std::get<Expr>(item.item));
    }
    if (!item.alias.empty()) s += " AS " + render_identifier(item.alias);
    return s;
  });
  if (!c.from.empty()) {
    out += " FROM ";
    for (std::size_t i = 0; i < c.from.size(); ++i) {
      const FromItem& f = c.from[i];
      std::string t = render_identifier(f.table.name);
      if (!f.table.alias.empty()) t += " " + render_identifier(f.table.alias);
      if (i == 0) {
        out += t;
      } else if (f.join_on) {
        out += " JOIN " + t + " ON " + render_expr(*f.join_on);
      } else {
        out += ", " + t;
      }
    }
    if (c.annotation) {
      out += " ANNOTATION(";
      out += c.annotation->all ? "*" : join(c.annotation->tables, render_ann_table);
      out += ")";
    }
  }
  if (c.where) out += " WHERE " + render_expr(*c.where);
  if (c.awhere) out += " AWHERE " + render_ann_expr(*c.awhere);
  if (!c.group_by.empty()) out += " GROUP BY " + join(c.group_by, render_column_ref);
  if (c.having) out += " HAVING " + render_expr(*c.having);
  if (c.ahaving) out += " AHAVING " + render_ann_expr(*c.ahaving);
  if (c.filter) out += " FILTER " + render_ann_expr(*c.filter);
  if (!c.promotes.empty()) {
    out += " PROMOTE " + join(c.promotes, [](const Promote& p) {
      std::string srcs = p.sources.size() == 1 ? render_column_ref(p.sources[0])
                                               : "(" + join(p.sources, render_column_ref) + ")";
      return srcs + " TO " + render_column_ref(p.target);
    });
  }
  return out;
}

std::string render_values(const std::vector<std::vector<Value>>& rows) {
  return join(rows, [](const std::vector<Value>& row) {
    return "(" + join(row, render_literal) + ")";
  });
}

std::string render_assignments(const std::vector<Assignment>& as) {
  return join(as, [](const Assignment& a) {
    return render_identifier(a.column) + " = " + render_literal(a.value);
  });
}

std::string render_insert(const Insert& i) {
  std::string out = "INSERT INTO " + render_identifier(i.table);
  if (!i.columns.empty()) out += " " + ident_list(i.columns);
  out += " VALUES " + render_values(i.rows);
  return out;
}

std::string render_update(const Update& u) {
  std::string out = "UPDATE " + render_identifier(u.table) + " SET " + render_assignments(u.assignments);
  if (u.where) out += " WHERE " + render_expr(*u.where);
  return out;
}

std::string render_delete(const Delete& d) {
  std::string out = "DELETE FROM " + render_identifier(d.table);
  if (d.where) out += " WHERE " + render_expr(*d.where);
  return out;
}

std::string render_lifecycle(const char* verb, const std::vector<AnnTableName>& tables,
                             const std::optional<TimeRange>& range, const AnnSelect& target) {
  std::string out = std::string(verb) + " ANNOTATION FROM " + join(tables, render_ann_table);
  if (range) out += " BETWEEN " + render_literal(range->lo) + " AND " + render_literal(range->hi);
  out += " ON (" + render_select(target) + ")";
  return out;
}

std::string category_name(AnnCategory c) {
  switch (c) {
    case AnnCategory::kComment: return "COMMENT";
    case AnnCategory::kProvenance: return "PROVENANCE";
    case AnnCategory::kSystem: return "SYSTEM";
  }
  return "COMMENT";
}

std::string render_body(const StatementNode& node) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, CreateTable>) {
          return "CREATE TABLE " + render_identifier(s.name) + " (" +
                 join(s.columns, [](const ColumnDef& c) {
                   return render_identifier(c.name) + " " + std::string(column_type_name(c.type));
                 }) +
                 ")";
        } else if constexpr (std::is_same_v<T, Insert>) {
          return render_insert(s);
        } else if constexpr (std::is_same_v<T, Update>) {
          return render_update(s);
        } else if constexpr (std::is_same_v<T, Delete>) {
          return render_delete(s);
        } else if constexpr (std::is_same_v<T, AnnSelect>) {
          return render_select(s);
        } else if constexpr (std::is_same_v<T, CreateAnnotationTable>) {
          std::string out = "CREATE ANNOTATION TABLE " + render_identifier(s.name) + " ON " +
                            render_identifier(s.owner) + " CATEGORY " + category_name(s.category);
          if (!s.required_tags.empty()) out += " REQUIRED TAGS " + ident_list(s.required_tags);
          if (!s.writers.empty()) out += " WRITERS " + user_list(s.writers);
          return out;
        } else if constexpr (std::is_same_v<T, DropAnnotationTable>) {
          return "DROP ANNOTATION TABLE " + render_identifier(s.name) + " ON " + render_identifier(s.owner);
        } else if constexpr (std::is_same_v<T, AddAnnotation>) {
          std::string target = std::visit(
              [](const auto& t) -> std::string {
                using U = std::decay_t<decltype(t)>;
                if constexpr (std::is_same_v<U, AnnSelect>) {
                  return render_select(t);
                } else if constexpr (std::is_same_v<U, Insert>) {
                  return render_insert(t);
                } else if constexpr (std::is_same_v<U, Update>) {
                  return render_update(t);
                } else {
                  return render_delete(t);
                }
              },
              s.target);
          return "ADD ANNOTATION TO " + join(s.tables, render_ann_table) + " VALUE " +
                 quote(s.body, '\'') + " ON (" + target + ")";
        } else if constexpr (std::is_same_v<T, ArchiveAnnotation>) {
          return render_lifecycle("ARCHIVE", s.tables, s.range, s.target);
        } else if constexpr (std::is_same_v<T, RestoreAnnotation>) {
          return render_lifecycle("RESTORE", s.tables, s.range, s.target);
        } else if constexpr (std::is_same_v<T, VacuumAnnotations>) {
          return "VACUUM ANNOTATIONS";
        } else if constexpr (std::is_same_v<T, CreateDependencyRule>) {
          std::string out = "CREATE DEPENDENCY RULE " + render_identifier(s.id) + " SOURCE " +
                            render_identifier(s.source_table) + ident_list(s.source_columns) +
                            " TARGET " + render_identifier(s.target_table) + ident_list(s.target_columns) +
                            " LINK BY ";
          if (s.link) {
            out += render_identifier(s.source_table) + "." + render_identifier(s.link->source_column) +
                   " = " + render_identifier(s.target_table) + "." +
                   render_identifier(s.link->target_column);
          } else {
            out += "ROW";
          }
          out += " USING PROCEDURE " + quote(s.procedure, '\'') + " EXECUTABLE " +
                 (s.executable ? "DB" : "EXTERNAL") + " INVERTIBLE " + (s.invertible ? "YES" : "NO");
          return out;
        } else if constexpr (std::is_same_v<T, DropDependencyRule>) {
          return "DROP DEPENDENCY RULE " + render_identifier(s.id);
        } else if constexpr (std::is_same_v<T, AddDependencyEdge>) {
          std::string out = "ADD DEPENDENCY EDGE FROM " + render_identifier(s.source_table) + "(" +
                            render_identifier(s.source_column) + ")";
          if (s.source_where) out += " WHERE " + render_expr(*s.source_where);
          out += " TO " + render_identifier(s.target_table) + "(" + render_identifier(s.target_column) + ")";
          if (s.target_where) out += " WHERE " + render_expr(*s.target_where);
          out += " USING PROCEDURE " + quote(s.procedure, '\'') + " EXECUTABLE " +
                 (s.executable ? "DB" : "EXTERNAL");
          return out;
        } else if constexpr (std::is_same_v<T, Validate>) {
          std::string out = "VALIDATE " + render_identifier(s.table) + ident_list(s.columns);
          if (s.where) out += " WHERE " + render_expr(*s.where);
          if (!s.assignments.empty()) out += " SET " + render_assignments(s.assignments);
          return out;
        } else if constexpr (std::is_same_v<T, RegisterProcedure>) {
          return "REGISTER PROCEDURE " + quote(s.name, '\'') + " AS BUILTIN " + quote(s.builtin, '\'') +
                 " ARITY " + std::to_string(s.arity);
        } else if constexpr (std::is_same_v<T, StartContentApproval>) {
          std::string out = "START CONTENT APPROVAL ON " + render_identifier(s.table);
          if (!s.columns.empty()) out += " COLUMNS " + ident_list(s.columns);
          out += " APPROVED BY " + user_list(s.approvers);
          return out;
        } else if constexpr (std::is_same_v<T, EndContentApproval>) {
          return "END CONTENT APPROVAL ON " + render_identifier(s.table);
        } else if constexpr (std::is_same_v<T, Approve>) {
          return "APPROVE " + std::to_string(s.op_id);
        } else if constexpr (std::is_same_v<T, Disapprove>) {
          return "DISAPPROVE " + std::to_string(s.op_id) + (s.force ? " FORCE" : "");
        } else if constexpr (std::is_same_v<T, ListPending>) {
          return s.approver.empty() ? "LIST PENDING" : "LIST PENDING FOR " + render_user(s.approver);
        } else {
          static_assert(std::is_same_v<T, SetUser>);
          return "SET USER " + render_user(s.name);
        }
      },
      node);
}

}  // namespace

std::string render_identifier(const std::string& name) {
  return plain_identifier(name) ? name : quote(name, '"');
}

std::string render_literal(const Value& value) {
  if (value.is_null()) return "NULL";
  if (value.is_text()) return quote(value.as_text(), '\'');
  return value.to_string();
}

std::string render_compare_op(CompareOp op) {
  switch (op) {
    case CompareOp::kEq: return "=";
    case CompareOp::kNe: return "<>";
    case CompareOp::kLt: return "<";
    case CompareOp::kLe: return "<=";
    case CompareOp::kGt: return ">";
    case CompareOp::kGe: return ">=";
    case CompareOp::kLike: return "LIKE";
  }
  return "=";
}

std::string render_expr(const Expr& expr) {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ColumnRef>) {
          return render_column_ref(n);
        } else if constexpr (std::is_same_v<T, Literal>) {
          return render_literal(n.value);
        } else if constexpr (std::is_same_v<T, Aggregate>) {
          return aggregate_name(n.func) + "(" + (n.argument ? render_column_ref(*n.argument) : "*") + ")";
        } else if constexpr (std::is_same_v<T, Comparison>) {
          return render_at(*n.lhs, 5) + " " + render_compare_op(n.op) + " " + render_at(*n.rhs, 5);
        } else if constexpr (std::is_same_v<T, Logical>) {
          int p = n.op == LogicOp::kOr ? 1 : 2;
          return render_at(*n.lhs, p) + (n.op == LogicOp::kOr ? " OR " : " AND ") + render_at(*n.rhs, p + 1);
        } else if constexpr (std::is_same_v<T, Not>) {
          return "NOT " + render_at(*n.operand, 3);
        } else {
          return render_at(*n.operand, 5) + (n.negated ? " IS NOT NULL" : " IS NULL");
        }
      },
      expr.node);
}

std::string render_ann_expr(const AnnExpr& expr) {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, AnnAtom>) {
          std::string field;
          switch (n.field) {
            case AnnField::kValue: field = "VALUE"; break;
            case AnnField::kTable: field = "TABLE"; break;
            case AnnField::kTs: field = "TS"; break;
            case AnnField::kTag: field = "TAG(" + quote(n.tag, '\'') + ")"; break;
          }
          return field + " " + render_compare_op(n.op) + " " + render_literal(n.literal);
        } else if constexpr (std::is_same_v<T, AnnLogical>) {
          int p = n.op == LogicOp::kOr ? 1 : 2;
          return ann_wrap(*n.lhs, p) + (n.op == LogicOp::kOr ? " OR " : " AND ") + ann_wrap(*n.rhs, p + 1);
        } else {
          return "NOT " + ann_wrap(*n.operand, 3);
        }
      },
      expr.node);
}

std::string render_select(const AnnSelect& select) {
  std::string out = render_core(select.head);
  for (const SetOperand& operand : select.tail) {
    switch (operand.op) {
      case SetOp::kUnion: out += " UNION "; break;
      case SetOp::kIntersect: out += " INTERSECT "; break;
      case SetOp::kExcept: out += " EXCEPT "; break;
    }
    out += render_core(operand.core);
  }
  return out;
}

std::string render_statement(const Statement& stmt) { return render_body(stmt.node) + ";"; }

}  // namespace annodb
