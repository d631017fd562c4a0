#include "annodb/lexer.hpp"

#include <cctype>

#include "annodb/error.hpp"

namespace annodb {

bool keyword_equals(std::string_view word, std::string_view keyword) {
  if (word.size() != keyword.size()) return false;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (std::toupper(static_cast<unsigned char>(word[i])) !=
        std::toupper(static_cast<unsigned char>(keyword[i]))) {
      return false;
    }
  }
  return true;
}

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class Lexer {
 public:
  explicit Lexer(std::string_view input) : in_(input) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space_and_comments();
      Token tok;
      tok.offset = pos_;
      tok.line = line_;
      tok.column = col_;
      if (pos_ >= in_.size()) {
        tok.kind = TokenKind::kEnd;
        out.push_back(std::move(tok));
        return out;
      }
      char c = in_[pos_];
      if (is_ident_start(c)) {
        std::size_t start = pos_;
        while (pos_ < in_.size() && is_ident_char(in_[pos_])) advance();
        tok.kind = TokenKind::kIdentifier;
        tok.text = std::string(in_.substr(start, pos_ - start));
      } else if (is_digit(c)) {
        lex_number(tok);
      } else if (c == '\'') {
        tok.kind = TokenKind::kString;
        tok.text = lex_quoted('\'', tok);
      } else if (c == '"') {
        tok.kind = TokenKind::kQuotedIdentifier;
        tok.text = lex_quoted('"', tok);
        if (tok.text.empty()) fail("empty quoted identifier", tok);
      } else {
        lex_symbol(tok);
      }
      out.push_back(std::move(tok));
    }
  }

 private:
  void advance() {
    if (in_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  [[noreturn]] void fail(const std::string& message, const Token& at) {
    throw SyntaxError(message, at.line, at.column, {});
  }

  void skip_space_and_comments() {
    while (pos_ < in_.size()) {
      char c = in_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '-' && pos_ + 1 < in_.size() && in_[pos_ + 1] == '-') {
        while (pos_ < in_.size() && in_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  void lex_number(Token& tok) {
    std::size_t start = pos_;
    bool is_float = false;
    while (pos_ < in_.size() && is_digit(in_[pos_])) advance();
    if (pos_ + 1 < in_.size() && in_[pos_] == '.' && is_digit(in_[pos_ + 1])) {
      is_float = true;
      advance();
      while (pos_ < in_.size() && is_digit(in_[pos_])) advance();
    }
    if (pos_ < in_.size() && (in_[pos_] == 'e' || in_[pos_] == 'E')) {
      std::size_t save = pos_;
      std::size_t save_line = line_, save_col = col_;
      advance();
      if (pos_ < in_.size() && (in_[pos_] == '+' || in_[pos_] == '-')) advance();
      if (pos_ < in_.size() && is_digit(in_[pos_])) {
        is_float = true;
        while (pos_ < in_.size() && is_digit(in_[pos_])) advance();
      } else {
        pos_ = save;
        line_ = save_line;
        col_ = save_col;
      }
    }
    if (pos_ < in_.size() && is_ident_start(in_[pos_])) fail("malformed number", tok);
    tok.kind = is_float ? TokenKind::kFloat : TokenKind::kInteger;
    tok.text = std::string(in_.substr(start, pos_ - start));
  }

  std::string lex_quoted(char quote, const Token& tok) {
    std::string body;
    advance();  // opening quote
    for (;;) {
      if (pos_ >= in_.size()) {
        fail(quote == '\'' ? "unterminated string literal" : "unterminated quoted identifier", tok);
      }
      char c = in_[pos_];
      if (c == quote) {
        if (pos_ + 1 < in_.size() && in_[pos_ + 1] == quote) {
          body.push_back(quote);
          advance();
          advance();
          continue;
        }
        advance();
        return body;
      }
      body.push_back(c);
      advance();
    }
  }

  void lex_symbol(Token& tok) {
    tok.kind = TokenKind::kSymbol;
    char c = in_[pos_];
    char next = pos_ + 1 < in_.size() ? in_[pos_ + 1] : '\0';
    auto take = [&](std::size_t n) {
      tok.text = std::string(in_.substr(pos_, n));
      for (std::size_t i = 0; i < n; ++i) advance();
    };
    switch (c) {
      case '(': case ')': case ',': case '.': case ';': case '*': case '=': case '+': case '-':
        take(1);
        return;
      case '<':
        take(next == '>' || next == '=' ? 2 : 1);
        return;
      case '>':
        take(next == '=' ? 2 : 1);
        return;
      case '!':
        if (next == '=') {
          take(2);
          return;
        }
        break;
      default:
        break;
    }
    std::string shown;
    if (std::isprint(static_cast<unsigned char>(c))) {
      shown = std::string("'") + c + "'";
    } else {
      static const char* hex = "0123456789abcdef";
      unsigned char u = static_cast<unsigned char>(c);
      shown = std::string("byte 0x") + hex[u >> 4] + hex[u & 15];
    }
    fail("unexpected character " + shown, tok);
  }

  std::string_view in_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view input) { return Lexer(input).run(); }

}  // namespace annodb
