#include "annodb/splitter.hpp"

#include <cctype>

namespace annodb::cli {

namespace {

bool blank(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    if (std::isspace(static_cast<unsigned char>(s[i]))) {
      ++i;
    } else if (s.substr(i, 2) == "--") {
      while (i < s.size() && s[i] != '\n') ++i;
    } else {
      return false;
    }
  }
  return true;
}

}  // namespace

SplitResult split_input(std::string_view text) {
  SplitResult out;
  std::size_t start = 0;
  std::size_t line = 1;
  std::size_t start_line = 1;
  bool at_statement_start = true;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (at_statement_start) {
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (c == '\n') ++line;
        ++i;
        continue;
      }
      if (text.substr(i, 2) == "--") {
        while (i < text.size() && text[i] != '\n') ++i;
        continue;
      }
      if (c == '\\') {
        std::size_t end = text.find('\n', i);
        if (end == std::string_view::npos) end = text.size();
        std::string cmd(text.substr(i, end - i));
        while (!cmd.empty() && std::isspace(static_cast<unsigned char>(cmd.back()))) cmd.pop_back();
        out.chunks.push_back({cmd, true, line});
        i = end;
        start = i;
        continue;
      }
      at_statement_start = false;
      start = i;
      start_line = line;
    }
    if (c == '\n') {
      ++line;
      ++i;
    } else if (c == '\'' || c == '"') {
      ++i;
      while (i < text.size()) {
        if (text[i] == '\n') ++line;
        if (text[i] == c) {
          if (i + 1 < text.size() && text[i + 1] == c) {
            i += 2;
            continue;
          }
          break;
        }
        ++i;
      }
      ++i;
    } else if (text.substr(i, 2) == "--") {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (c == ';') {
      ++i;
      out.chunks.push_back({std::string(text.substr(start, i - start)), false, start_line});
      at_statement_start = true;
      start = i;
    } else {
      ++i;
    }
  }
  if (!at_statement_start) {
    std::string_view rest = text.substr(start);
    if (!blank(rest)) out.rest = std::string(rest);
  }
  return out;
}

}  // namespace annodb::cli
