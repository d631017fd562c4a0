#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace annodb::rle {

// Run-length form of a bit vector: the value of the first run, then run
// lengths alternating between that value and its complement.
struct Runs {
  bool first = false;
  std::vector<std::uint64_t> lengths;

  bool operator==(const Runs&) const = default;
};

Runs encode(const std::vector<bool>& bits);

// Raises kMalformedRuns on a zero-length run.
std::vector<bool> decode(const Runs& runs);

// Text form used in bitmap files: "first=<0|1>;runs=<n1,n2,...>".
std::string to_text(const Runs& runs);
Runs from_text(std::string_view text);

}  // namespace annodb::rle
