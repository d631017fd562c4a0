#include "annodb/rle.hpp"

#include <charconv>

#include "annodb/error.hpp"

namespace annodb::rle {

Runs encode(const std::vector<bool>& bits) {
  Runs out;
  if (bits.empty()) return out;
  out.first = bits.front();
  bool current = out.first;
  std::uint64_t length = 0;
  for (bool b : bits) {
    if (b == current) {
      ++length;
    } else {
      out.lengths.push_back(length);
      current = b;
      length = 1;
    }
  }
  out.lengths.push_back(length);
  return out;
}

std::vector<bool> decode(const Runs& runs) {
  std::vector<bool> bits;
  bool value = runs.first;
  for (std::uint64_t length : runs.lengths) {
    if (length == 0) raise(ErrorCode::kMalformedRuns, "run of length 0");
    bits.insert(bits.end(), length, value);
    value = !value;
  }
  return bits;
}

std::string to_text(const Runs& runs) {
  std::string out = runs.first ? "first=1;runs=" : "first=0;runs=";
  for (std::size_t i = 0; i < runs.lengths.size(); ++i) {
    if (i != 0) out.push_back(',');
    out += std::to_string(runs.lengths[i]);
  }
  return out;
}

Runs from_text(std::string_view text) {
  constexpr std::string_view kFirst = "first=";
  constexpr std::string_view kRuns = ";runs=";
  if (text.substr(0, kFirst.size()) != kFirst || text.size() < kFirst.size() + 1 + kRuns.size()) {
    raise(ErrorCode::kMalformedRuns, "expected first=<0|1>;runs=...");
  }
  char bit = text[kFirst.size()];
  if (bit != '0' && bit != '1') raise(ErrorCode::kMalformedRuns, "first bit must be 0 or 1");
  if (text.substr(kFirst.size() + 1, kRuns.size()) != kRuns) raise(ErrorCode::kMalformedRuns, "missing runs=");
  Runs out;
  out.first = bit == '1';
  std::string_view rest = text.substr(kFirst.size() + 1 + kRuns.size());
  while (!rest.empty()) {
    std::size_t comma = rest.find(',');
    std::string_view item = rest.substr(0, comma);
    std::uint64_t n = 0;
    auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), n);
    if (ec != std::errc() || p != item.data() + item.size() || item.empty()) {
      raise(ErrorCode::kMalformedRuns, "bad run length '" + std::string(item) + "'");
    }
    if (n == 0) raise(ErrorCode::kMalformedRuns, "run of length 0");
    out.lengths.push_back(n);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
    if (rest.empty()) raise(ErrorCode::kMalformedRuns, "trailing comma");
  }
  return out;
}

}  // namespace annodb::rle
