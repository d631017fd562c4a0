#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace annodb::cli {

// A unit of script input: an A-SQL statement (including its ';') or a
// backslash meta-command line.
struct Chunk {
  std::string text;
  bool meta = false;
  std::size_t line = 1;  // where the chunk starts
};

struct SplitResult {
  std::vector<Chunk> chunks;
  std::string rest;  // an unterminated trailing statement, if any
};

// Splits on ';' outside quotes and comments. Meta-commands are recognised only
// at the start of a statement and run to the end of their line.
SplitResult split_input(std::string_view text);

}  // namespace annodb::cli
