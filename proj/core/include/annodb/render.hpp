#pragma once

#include <string>

#include "annodb/ast.hpp"

namespace annodb {

// Canonical single-statement text ending in ';'.
// parse_statement(render_statement(s)) == s for every well-formed s.
std::string render_statement(const ast::Statement& stmt);

std::string render_select(const ast::AnnSelect& select);
std::string render_expr(const ast::Expr& expr);
std::string render_ann_expr(const ast::AnnExpr& expr);
std::string render_literal(const Value& value);
std::string render_identifier(const std::string& name);
std::string render_compare_op(ast::CompareOp op);

}  // namespace annodb
