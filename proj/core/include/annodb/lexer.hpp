#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace annodb {

enum class TokenKind {
  kIdentifier,        // bare word; keywords are recognized by the parser
  kQuotedIdentifier,  // "double quoted"
  kString,            // 'single quoted', '' escapes a quote
  kInteger,
  kFloat,
  kSymbol,            // ( ) , . ; * = <> != < <= > >= + -
  kEnd,
};

struct Token {
  TokenKind kind = TokenKind::kEnd;
  std::string text;  // identifier/symbol text, unescaped string body, or number spelling
  std::size_t offset = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

// Splits A-SQL text into tokens. `--` starts a comment running to end of line.
// Malformed input (unterminated string, stray byte) raises SyntaxError.
std::vector<Token> tokenize(std::string_view input);

// True when `word` equals `keyword` ignoring ASCII case.
bool keyword_equals(std::string_view word, std::string_view keyword);

}  // namespace annodb
