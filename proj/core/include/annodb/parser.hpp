#pragma once

#include <string_view>
#include <vector>

#include "annodb/ast.hpp"

namespace annodb {

// Parses exactly one `;`-terminated statement. Trailing whitespace and `--`
// comments are ignored; anything else after the `;` is a SyntaxError.
ast::Statement parse_statement(std::string_view input);

// Parses zero or more `;`-terminated statements. A SyntaxError carries the
// zero-based index of the failing statement.
std::vector<ast::Statement> parse_script(std::string_view input);

// Parses a standalone data expression (no trailing `;`).
ast::Expr parse_expression(std::string_view input);

// True for words that cannot be used as bare identifiers.
bool is_reserved_word(std::string_view word);

}  // namespace annodb
