#include "annodb/parser.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdlib>
#include <string>

#include "annodb/error.hpp"
#include "annodb/lexer.hpp"

namespace annodb {

using namespace ast;

namespace {

constexpr std::array kReserved = {
    "SELECT", "FROM",  "WHERE",     "AWHERE", "GROUP",  "BY",     "HAVING", "AHAVING",
    "FILTER", "PROMOTE", "TO",      "ANNOTATION", "UNION", "INTERSECT", "EXCEPT", "DISTINCT",
    "AND",    "OR",    "NOT",       "LIKE",   "IS",     "NULL",   "JOIN",   "INNER",
    "ON",     "AS",    "VALUES",    "SET",    "INTO",   "BETWEEN", "USING",
};

constexpr std::array kStatementStarts = {
    "CREATE",  "DROP",     "INSERT",   "UPDATE",     "DELETE", "SELECT", "ADD",
    "ARCHIVE", "RESTORE",  "VACUUM",   "VALIDATE",   "REGISTER", "START", "END",
    "APPROVE", "DISAPPROVE", "LIST",   "SET",
};

class Parser {
 public:
  explicit Parser(std::string_view input) : tokens_(tokenize(input)) {}

  bool at_end() const { return peek().kind == TokenKind::kEnd; }

  Statement statement() {
    const Token& first = peek();
    if (first.kind != TokenKind::kIdentifier) {
      fail_expected({"statement keyword"});
    }
    Statement stmt = dispatch();
    expect_symbol(";");
    return stmt;
  }

  Expr standalone_expression() {
    Expr e = expression();
    if (!at_end()) fail_expected({"end of expression"});
    return e;
  }

  void expect_end() {
    if (!at_end()) fail_expected({"end of input"});
  }

 private:
  // ---- token helpers -----------------------------------------------------

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }

  const Token& next() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }

  bool is_keyword(std::string_view kw, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == TokenKind::kIdentifier && keyword_equals(t.text, kw);
  }

  bool is_symbol(std::string_view sym, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == TokenKind::kSymbol && t.text == sym;
  }

  bool accept_keyword(std::string_view kw) {
    if (!is_keyword(kw)) return false;
    next();
    return true;
  }

  bool accept_symbol(std::string_view sym) {
    if (!is_symbol(sym)) return false;
    next();
    return true;
  }

  [[noreturn]] void fail_expected(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string found;
    switch (t.kind) {
      case TokenKind::kEnd: found = "end of input"; break;
      case TokenKind::kString: found = "string literal"; break;
      case TokenKind::kInteger:
      case TokenKind::kFloat: found = "number " + t.text; break;
      default: found = "'" + t.text + "'"; break;
    }
    throw SyntaxError("unexpected " + found, t.line, t.column, std::move(expected));
  }

  void expect_keyword(std::string_view kw) {
    if (!accept_keyword(kw)) fail_expected({std::string(kw)});
  }

  void expect_symbol(std::string_view sym) {
    if (!accept_symbol(sym)) fail_expected({"'" + std::string(sym) + "'"});
  }

  // Identifier: bare non-reserved word or "quoted".
  bool at_identifier(std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    if (t.kind == TokenKind::kQuotedIdentifier) return true;
    return t.kind == TokenKind::kIdentifier && !is_reserved_word(t.text);
  }

  std::string identifier(const char* what = "identifier") {
    if (!at_identifier()) fail_expected({what});
    return next().text;
  }

  std::vector<std::string> identifier_list_in_parens(const char* what = "identifier") {
    expect_symbol("(");
    std::vector<std::string> out;
    do {
      out.push_back(identifier(what));
    } while (accept_symbol(","));
    expect_symbol(")");
    return out;
  }

  // User names may be identifiers or string literals.
  std::string user_name() {
    if (peek().kind == TokenKind::kString) return next().text;
    return identifier("user name");
  }

  std::vector<std::string> user_list() {
    std::vector<std::string> out;
    if (accept_symbol("(")) {
      do {
        out.push_back(user_name());
      } while (accept_symbol(","));
      expect_symbol(")");
    } else {
      out.push_back(user_name());
    }
    return out;
  }

  std::string string_literal(const char* what = "string literal") {
    if (peek().kind != TokenKind::kString) fail_expected({what});
    return next().text;
  }

  std::int64_t integer_literal() {
    bool negative = accept_symbol("-");
    if (peek().kind != TokenKind::kInteger) fail_expected({"integer"});
    const Token& t = next();
    return parse_int(t, negative);
  }

  static std::int64_t parse_int(const Token& t, bool negative) {
    std::string text = (negative ? "-" : "") + t.text;
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw SyntaxError("integer literal out of range", t.line, t.column, {});
    }
    return v;
  }

  static double parse_float(const Token& t, bool negative) {
    std::string text = (negative ? "-" : "") + t.text;
    // strtod handles overflow to inf, which from_chars rejects.
    char* end = nullptr;
    double d = std::strtod(text.c_str(), &end);
    return d;
  }

  bool at_literal() const {
    const Token& t = peek();
    if (t.kind == TokenKind::kString || t.kind == TokenKind::kInteger ||
        t.kind == TokenKind::kFloat) {
      return true;
    }
    if (is_keyword("NULL")) return true;
    if (is_symbol("-")) {
      const Token& n = peek(1);
      return n.kind == TokenKind::kInteger || n.kind == TokenKind::kFloat;
    }
    return false;
  }

  Value literal_value() {
    if (accept_keyword("NULL")) return Value();
    if (peek().kind == TokenKind::kString) return Value(next().text);
    bool negative = accept_symbol("-");
    const Token& t = peek();
    if (t.kind == TokenKind::kInteger) {
      next();
      return Value(parse_int(t, negative));
    }
    if (t.kind == TokenKind::kFloat) {
      next();
      return Value(parse_float(t, negative));
    }
    fail_expected({"literal"});
  }

  // ---- statements --------------------------------------------------------

  Statement dispatch() {
    const Token& first = peek();
    if (is_keyword("SELECT")) return {select()};
    if (accept_keyword("CREATE")) {
      if (accept_keyword("TABLE")) return {create_table()};
      if (accept_keyword("ANNOTATION")) {
        expect_keyword("TABLE");
        return {create_annotation_table()};
      }
      if (accept_keyword("DEPENDENCY")) {
        expect_keyword("RULE");
        return {create_dependency_rule()};
      }
      fail_expected({"TABLE", "ANNOTATION", "DEPENDENCY"});
    }
    if (accept_keyword("DROP")) {
      if (accept_keyword("ANNOTATION")) {
        expect_keyword("TABLE");
        DropAnnotationTable d;
        d.name = identifier("annotation table name");
        expect_keyword("ON");
        d.owner = identifier("table name");
        return {std::move(d)};
      }
      if (accept_keyword("DEPENDENCY")) {
        expect_keyword("RULE");
        return {DropDependencyRule{identifier("rule id")}};
      }
      fail_expected({"ANNOTATION", "DEPENDENCY"});
    }
    if (is_keyword("INSERT")) return {insert()};
    if (is_keyword("UPDATE")) return {update()};
    if (is_keyword("DELETE")) return {delete_stmt()};
    if (accept_keyword("ADD")) {
      if (accept_keyword("ANNOTATION")) return {add_annotation()};
      if (accept_keyword("DEPENDENCY")) {
        expect_keyword("EDGE");
        return {add_dependency_edge()};
      }
      fail_expected({"ANNOTATION", "DEPENDENCY"});
    }
    if (accept_keyword("ARCHIVE")) {
      expect_keyword("ANNOTATION");
      ArchiveAnnotation a;
      lifecycle(a.tables, a.range, a.target);
      return {std::move(a)};
    }
    if (accept_keyword("RESTORE")) {
      expect_keyword("ANNOTATION");
      RestoreAnnotation r;
      lifecycle(r.tables, r.range, r.target);
      return {std::move(r)};
    }
    if (accept_keyword("VACUUM")) {
      expect_keyword("ANNOTATIONS");
      return {VacuumAnnotations{}};
    }
    if (accept_keyword("VALIDATE")) return {validate()};
    if (accept_keyword("REGISTER")) return {register_procedure()};
    if (accept_keyword("START")) {
      expect_keyword("CONTENT");
      expect_keyword("APPROVAL");
      expect_keyword("ON");
      StartContentApproval s;
      s.table = identifier("table name");
      if (accept_keyword("COLUMNS")) s.columns = identifier_list_in_parens("column name");
      expect_keyword("APPROVED");
      expect_keyword("BY");
      s.approvers = user_list();
      return {std::move(s)};
    }
    if (accept_keyword("END")) {
      expect_keyword("CONTENT");
      expect_keyword("APPROVAL");
      expect_keyword("ON");
      return {EndContentApproval{identifier("table name")}};
    }
    if (accept_keyword("APPROVE")) return {Approve{integer_literal()}};
    if (accept_keyword("DISAPPROVE")) {
      Disapprove d;
      d.op_id = integer_literal();
      d.force = accept_keyword("FORCE");
      return {d};
    }
    if (accept_keyword("LIST")) {
      expect_keyword("PENDING");
      ListPending l;
      if (accept_keyword("FOR")) l.approver = user_name();
      return {std::move(l)};
    }
    if (accept_keyword("SET")) {
      expect_keyword("USER");
      return {SetUser{user_name()}};
    }
    throw SyntaxError("unknown statement keyword '" + first.text + "'", first.line, first.column,
                      std::vector<std::string>(kStatementStarts.begin(), kStatementStarts.end()),
                      ErrorCode::kUnknownKeyword);
  }

  CreateTable create_table() {
    CreateTable c;
    c.name = identifier("table name");
    expect_symbol("(");
    do {
      ColumnDef col;
      col.name = identifier("column name");
      const Token& t = peek();
      std::optional<ColumnType> type;
      if (t.kind == TokenKind::kIdentifier) type = parse_column_type(t.text);
      if (!type) fail_expected({"TEXT", "INT", "FLOAT"});
      next();
      col.type = *type;
      c.columns.push_back(std::move(col));
    } while (accept_symbol(","));
    expect_symbol(")");
    return c;
  }

  CreateAnnotationTable create_annotation_table() {
    CreateAnnotationTable c;
    c.name = identifier("annotation table name");
    expect_keyword("ON");
    c.owner = identifier("table name");
    if (accept_keyword("CATEGORY")) {
      if (accept_keyword("COMMENT")) {
        c.category = AnnCategory::kComment;
      } else if (accept_keyword("PROVENANCE")) {
        c.category = AnnCategory::kProvenance;
      } else if (accept_keyword("SYSTEM")) {
        c.category = AnnCategory::kSystem;
      } else {
        fail_expected({"COMMENT", "PROVENANCE", "SYSTEM"});
      }
    }
    if (accept_keyword("REQUIRED")) {
      expect_keyword("TAGS");
      c.required_tags = identifier_list_in_parens("tag name");
    }
    if (accept_keyword("WRITERS")) c.writers = user_list();
    return c;
  }

  CreateDependencyRule create_dependency_rule() {
    CreateDependencyRule r;
    r.id = identifier("rule id");
    expect_keyword("SOURCE");
    r.source_table = identifier("table name");
    r.source_columns = identifier_list_in_parens("column name");
    expect_keyword("TARGET");
    r.target_table = identifier("table name");
    r.target_columns = identifier_list_in_parens("column name");
    expect_keyword("LINK");
    expect_keyword("BY");
    if (!accept_keyword("ROW")) {
      LinkKeys link;
      std::string lt = identifier("table name");
      expect_symbol(".");
      link.source_column = identifier("column name");
      expect_symbol("=");
      std::string rt = identifier("table name");
      expect_symbol(".");
      link.target_column = identifier("column name");
      if (lt != r.source_table || rt != r.target_table) {
        const Token& t = peek();
        throw SyntaxError("LINK BY must read <source table>.<column> = <target table>.<column>",
                          t.line, t.column, {});
      }
      r.link = std::move(link);
    }
    expect_keyword("USING");
    expect_keyword("PROCEDURE");
    r.procedure = string_literal("procedure name");
    executable_clause(r.executable);
    expect_keyword("INVERTIBLE");
    if (accept_keyword("YES")) {
      r.invertible = true;
    } else if (accept_keyword("NO")) {
      r.invertible = false;
    } else {
      fail_expected({"YES", "NO"});
    }
    return r;
  }

  void executable_clause(bool& executable) {
    expect_keyword("EXECUTABLE");
    if (accept_keyword("DB")) {
      executable = true;
    } else if (accept_keyword("EXTERNAL")) {
      executable = false;
    } else {
      fail_expected({"DB", "EXTERNAL"});
    }
  }

  AddDependencyEdge add_dependency_edge() {
    AddDependencyEdge e;
    expect_keyword("FROM");
    e.source_table = identifier("table name");
    expect_symbol("(");
    e.source_column = identifier("column name");
    expect_symbol(")");
    if (accept_keyword("WHERE")) e.source_where = expression();
    expect_keyword("TO");
    e.target_table = identifier("table name");
    expect_symbol("(");
    e.target_column = identifier("column name");
    expect_symbol(")");
    if (accept_keyword("WHERE")) e.target_where = expression();
    expect_keyword("USING");
    expect_keyword("PROCEDURE");
    e.procedure = string_literal("procedure name");
    executable_clause(e.executable);
    return e;
  }

  Insert insert() {
    expect_keyword("INSERT");
    expect_keyword("INTO");
    Insert ins;
    ins.table = identifier("table name");
    if (is_symbol("(")) ins.columns = identifier_list_in_parens("column name");
    expect_keyword("VALUES");
    do {
      expect_symbol("(");
      std::vector<Value> row;
      do {
        row.push_back(literal_value());
      } while (accept_symbol(","));
      expect_symbol(")");
      ins.rows.push_back(std::move(row));
    } while (accept_symbol(","));
    return ins;
  }

  std::vector<Assignment> assignments() {
    std::vector<Assignment> out;
    do {
      Assignment a;
      a.column = identifier("column name");
      expect_symbol("=");
      a.value = literal_value();
      out.push_back(std::move(a));
    } while (accept_symbol(","));
    return out;
  }

  Update update() {
    expect_keyword("UPDATE");
    Update u;
    u.table = identifier("table name");
    expect_keyword("SET");
    u.assignments = assignments();
    if (accept_keyword("WHERE")) u.where = expression();
    return u;
  }

  Delete delete_stmt() {
    expect_keyword("DELETE");
    expect_keyword("FROM");
    Delete d;
    d.table = identifier("table name");
    if (accept_keyword("WHERE")) d.where = expression();
    return d;
  }

  AnnTableName ann_table_name() {
    AnnTableName n;
    std::string first = at_identifier() ? next().text : std::string();
    if (first.empty()) fail_expected({"annotation table name"});
    if (accept_symbol(".")) {
      n.owner = std::move(first);
      n.name = identifier("annotation table name");
    } else {
      n.name = std::move(first);
    }
    return n;
  }

  std::vector<AnnTableName> ann_table_list() {
    std::vector<AnnTableName> out;
    do {
      out.push_back(ann_table_name());
    } while (accept_symbol(","));
    return out;
  }

  AddAnnotation add_annotation() {
    AddAnnotation a{{}, {}, AnnSelect{}};
    expect_keyword("TO");
    a.tables = ann_table_list();
    expect_keyword("VALUE");
    a.body = string_literal("annotation body");
    expect_keyword("ON");
    expect_symbol("(");
    if (is_keyword("SELECT")) {
      a.target = select();
    } else if (is_keyword("INSERT")) {
      a.target = insert();
    } else if (is_keyword("UPDATE")) {
      a.target = update();
    } else if (is_keyword("DELETE")) {
      a.target = delete_stmt();
    } else {
      fail_expected({"SELECT", "INSERT", "UPDATE", "DELETE"});
    }
    expect_symbol(")");
    return a;
  }

  void lifecycle(std::vector<AnnTableName>& tables, std::optional<TimeRange>& range,
                 AnnSelect& target) {
    expect_keyword("FROM");
    tables = ann_table_list();
    if (accept_keyword("BETWEEN")) {
      TimeRange r;
      r.lo = literal_value();
      expect_keyword("AND");
      r.hi = literal_value();
      range = std::move(r);
    }
    expect_keyword("ON");
    expect_symbol("(");
    target = select();
    expect_symbol(")");
  }

  Validate validate() {
    Validate v;
    v.table = identifier("table name");
    v.columns = identifier_list_in_parens("column name");
    if (accept_keyword("WHERE")) v.where = expression();
    if (accept_keyword("SET")) v.assignments = assignments();
    return v;
  }

  RegisterProcedure register_procedure() {
    expect_keyword("PROCEDURE");
    RegisterProcedure r;
    r.name = string_literal("procedure name");
    expect_keyword("AS");
    expect_keyword("BUILTIN");
    r.builtin = string_literal("builtin name");
    expect_keyword("ARITY");
    std::int64_t arity = integer_literal();
    if (arity < 0) {
      const Token& t = peek();
      throw SyntaxError("ARITY must be non-negative", t.line, t.column, {});
    }
    r.arity = static_cast<std::size_t>(arity);
    return r;
  }

  // ---- SELECT ------------------------------------------------------------

  AnnSelect select() {
    AnnSelect s;
    s.head = select_core();
    for (;;) {
      SetOp op;
      if (accept_keyword("UNION")) {
        op = SetOp::kUnion;
      } else if (accept_keyword("INTERSECT")) {
        op = SetOp::kIntersect;
      } else if (accept_keyword("EXCEPT")) {
        op = SetOp::kExcept;
      } else {
        break;
      }
      s.tail.push_back(SetOperand{op, select_core()});
    }
    return s;
  }

  SelectCore select_core() {
    expect_keyword("SELECT");
    SelectCore c;
    c.distinct = accept_keyword("DISTINCT");
    do {
      c.items.push_back(select_item());
    } while (accept_symbol(","));
    if (accept_keyword("FROM")) {
      c.from.push_back(FromItem{table_ref(), std::nullopt});
      for (;;) {
        if (accept_symbol(",")) {
          c.from.push_back(FromItem{table_ref(), std::nullopt});
        } else if (is_keyword("JOIN") || (is_keyword("INNER") && is_keyword("JOIN", 1))) {
          accept_keyword("INNER");
          expect_keyword("JOIN");
          TableRef t = table_ref();
          expect_keyword("ON");
          c.from.push_back(FromItem{std::move(t), expression()});
        } else {
          break;
        }
      }
      if (accept_keyword("ANNOTATION")) {
        AnnotationClause clause;
        expect_symbol("(");
        if (accept_symbol("*")) {
          clause.all = true;
        } else {
          clause.tables = ann_table_list();
        }
        expect_symbol(")");
        c.annotation = std::move(clause);
      }
    }
    if (accept_keyword("WHERE")) c.where = expression();
    if (accept_keyword("AWHERE")) c.awhere = ann_expression();
    if (accept_keyword("GROUP")) {
      expect_keyword("BY");
      do {
        c.group_by.push_back(column_ref());
      } while (accept_symbol(","));
    }
    if (accept_keyword("HAVING")) c.having = expression();
    if (accept_keyword("AHAVING")) c.ahaving = ann_expression();
    if (accept_keyword("FILTER")) c.filter = ann_expression();
    if (accept_keyword("PROMOTE")) {
      do {
        Promote p;
        if (accept_symbol("(")) {
          do {
            p.sources.push_back(column_ref());
          } while (accept_symbol(","));
          expect_symbol(")");
        } else {
          p.sources.push_back(column_ref());
        }
        expect_keyword("TO");
        p.target = column_ref();
        c.promotes.push_back(std::move(p));
      } while (accept_symbol(","));
    }
    return c;
  }

  SelectItem select_item() {
    SelectItem item{Star{}, {}};
    if (accept_symbol("*")) return item;
    if (at_identifier() && is_symbol(".", 1) && is_symbol("*", 2)) {
      std::string q = next().text;
      next();
      next();
      item.item = Star{std::move(q)};
      return item;
    }
    item.item = expression();
    if (accept_keyword("AS")) {
      item.alias = identifier("alias");
    } else if (at_identifier()) {
      item.alias = next().text;
    }
    return item;
  }

  TableRef table_ref() {
    TableRef t;
    t.name = identifier("table name");
    if (accept_keyword("AS")) {
      t.alias = identifier("alias");
    } else if (at_identifier()) {
      t.alias = next().text;
    }
    return t;
  }

  ColumnRef column_ref() {
    ColumnRef ref;
    std::string first = identifier("column name");
    if (accept_symbol(".")) {
      ref.qualifier = std::move(first);
      ref.name = identifier("column name");
    } else {
      ref.name = std::move(first);
    }
    return ref;
  }

  // ---- data expressions --------------------------------------------------

  Expr expression() {
    Expr lhs = and_expression();
    while (accept_keyword("OR")) lhs = disjunction(std::move(lhs), and_expression());
    return lhs;
  }

  Expr and_expression() {
    Expr lhs = not_expression();
    while (accept_keyword("AND")) lhs = conjunction(std::move(lhs), not_expression());
    return lhs;
  }

  Expr not_expression() {
    if (accept_keyword("NOT")) return negation(not_expression());
    return predicate();
  }

  std::optional<CompareOp> comparison_operator() {
    const Token& t = peek();
    if (t.kind != TokenKind::kSymbol) {
      if (accept_keyword("LIKE")) return CompareOp::kLike;
      return std::nullopt;
    }
    CompareOp op;
    if (t.text == "=") {
      op = CompareOp::kEq;
    } else if (t.text == "<>" || t.text == "!=") {
      op = CompareOp::kNe;
    } else if (t.text == "<") {
      op = CompareOp::kLt;
    } else if (t.text == "<=") {
      op = CompareOp::kLe;
    } else if (t.text == ">") {
      op = CompareOp::kGt;
    } else if (t.text == ">=") {
      op = CompareOp::kGe;
    } else {
      return std::nullopt;
    }
    next();
    return op;
  }

  Expr predicate() {
    Expr lhs = primary();
    if (auto op = comparison_operator()) return compare(*op, std::move(lhs), primary());
    if (is_keyword("NOT") && is_keyword("LIKE", 1)) {
      next();
      next();
      return negation(compare(CompareOp::kLike, std::move(lhs), primary()));
    }
    if (accept_keyword("IS")) {
      bool negated = accept_keyword("NOT");
      expect_keyword("NULL");
      return Expr{IsNull{Box<Expr>(std::move(lhs)), negated}};
    }
    return lhs;
  }

  static std::optional<AggregateFunc> aggregate_name(const Token& t) {
    if (t.kind != TokenKind::kIdentifier) return std::nullopt;
    if (keyword_equals(t.text, "COUNT")) return AggregateFunc::kCount;
    if (keyword_equals(t.text, "MIN")) return AggregateFunc::kMin;
    if (keyword_equals(t.text, "MAX")) return AggregateFunc::kMax;
    if (keyword_equals(t.text, "SUM")) return AggregateFunc::kSum;
    return std::nullopt;
  }

  Expr primary() {
    if (accept_symbol("(")) {
      Expr e = expression();
      expect_symbol(")");
      return e;
    }
    if (at_literal()) return literal(literal_value());
    if (auto func = aggregate_name(peek()); func && is_symbol("(", 1)) {
      next();
      next();
      Aggregate agg;
      agg.func = *func;
      if (*func == AggregateFunc::kCount && accept_symbol("*")) {
        agg.argument = std::nullopt;
      } else {
        agg.argument = column_ref();
      }
      expect_symbol(")");
      return Expr{agg};
    }
    if (at_identifier()) return Expr{column_ref()};
    fail_expected({"literal", "column", "'('"});
  }

  // ---- annotation conditions ---------------------------------------------

  AnnExpr ann_expression() {
    AnnExpr lhs = ann_and();
    while (accept_keyword("OR")) {
      lhs = AnnExpr{AnnLogical{LogicOp::kOr, Box<AnnExpr>(std::move(lhs)), Box<AnnExpr>(ann_and())}};
    }
    return lhs;
  }

  AnnExpr ann_and() {
    AnnExpr lhs = ann_not();
    while (accept_keyword("AND")) {
      lhs = AnnExpr{AnnLogical{LogicOp::kAnd, Box<AnnExpr>(std::move(lhs)), Box<AnnExpr>(ann_not())}};
    }
    return lhs;
  }

  AnnExpr ann_not() {
    if (accept_keyword("NOT")) return AnnExpr{AnnNot{Box<AnnExpr>(ann_not())}};
    if (accept_symbol("(")) {
      AnnExpr e = ann_expression();
      expect_symbol(")");
      return e;
    }
    AnnAtom atom;
    if (accept_keyword("VALUE")) {
      atom.field = AnnField::kValue;
    } else if (accept_keyword("TABLE")) {
      atom.field = AnnField::kTable;
    } else if (accept_keyword("TS")) {
      atom.field = AnnField::kTs;
    } else if (accept_keyword("TAG")) {
      atom.field = AnnField::kTag;
      expect_symbol("(");
      atom.tag = string_literal("tag name");
      expect_symbol(")");
    } else {
      fail_expected({"VALUE", "TABLE", "TS", "TAG", "NOT", "'('"});
    }
    bool negate = false;
    std::optional<CompareOp> op;
    if (is_keyword("NOT") && is_keyword("LIKE", 1)) {
      next();
      next();
      negate = true;
      op = CompareOp::kLike;
    } else {
      op = comparison_operator();
    }
    if (!op) fail_expected({"comparison operator"});
    atom.op = *op;
    if (!at_literal()) fail_expected({"literal"});
    atom.literal = literal_value();
    AnnExpr out{std::move(atom)};
    if (negate) return AnnExpr{AnnNot{Box<AnnExpr>(std::move(out))}};
    return out;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

bool is_reserved_word(std::string_view word) {
  return std::any_of(kReserved.begin(), kReserved.end(),
                     [&](const char* kw) { return keyword_equals(word, kw); });
}

Statement parse_statement(std::string_view input) {
  Parser p(input);
  Statement s = p.statement();
  p.expect_end();
  return s;
}

std::vector<Statement> parse_script(std::string_view input) {
  std::vector<Statement> out;
  std::optional<Parser> parser;
  try {
    parser.emplace(input);
  } catch (SyntaxError& e) {
    // Attribute lexer errors to the statement containing the bad byte.
    std::size_t index = 0;
    std::size_t line = e.line();
    std::size_t col = e.column();
    std::size_t cur_line = 1, cur_col = 1;
    for (char c : input) {
      if (cur_line == line && cur_col == col) break;
      if (c == ';') ++index;
      if (c == '\n') {
        ++cur_line;
        cur_col = 1;
      } else {
        ++cur_col;
      }
    }
    e.set_statement_index(index);
    throw;
  }
  while (!parser->at_end()) {
    try {
      out.push_back(parser->statement());
    } catch (SyntaxError& e) {
      e.set_statement_index(out.size());
      throw;
    }
  }
  return out;
}

Expr parse_expression(std::string_view input) { return Parser(input).standalone_expression(); }

}  // namespace annodb
