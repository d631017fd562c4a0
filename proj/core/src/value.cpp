#include "annodb/value.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <vector>

#include "annodb/error.hpp"

namespace annodb {

std::string_view column_type_name(ColumnType type) {
  switch (type) {
    case ColumnType::kText: return "TEXT";
    case ColumnType::kInt: return "INT";
    case ColumnType::kFloat: return "FLOAT";
  }
  return "TEXT";
}

std::optional<ColumnType> parse_column_type(std::string_view name) {
  std::string upper;
  for (char c : name) upper.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (upper == "TEXT") return ColumnType::kText;
  if (upper == "INT" || upper == "INTEGER") return ColumnType::kInt;
  if (upper == "FLOAT" || upper == "REAL" || upper == "DOUBLE") return ColumnType::kFloat;
  return std::nullopt;
}

std::optional<ColumnType> Value::type() const {
  if (is_text()) return ColumnType::kText;
  if (is_int()) return ColumnType::kInt;
  if (is_float()) return ColumnType::kFloat;
  return std::nullopt;
}

std::string format_float(double d) {
  if (std::isnan(d)) return "nan";
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, d);
  std::string out(buf, end);
  if (out.find_first_of(".eE") == std::string::npos) out += ".0";
  return out;
}

std::string Value::to_string() const {
  if (is_null()) return "NULL";
  if (is_text()) return as_text();
  if (is_int()) return std::to_string(as_int());
  return format_float(as_float());
}

namespace {

int rank(const Value& v) {
  if (v.is_null()) return 0;
  if (v.is_numeric()) return 1;
  return 2;
}

int three_way(double a, double b) { return a < b ? -1 : (a > b ? 1 : 0); }

}  // namespace

int compare_total(const Value& a, const Value& b) {
  int ra = rank(a);
  int rb = rank(b);
  if (ra != rb) return ra < rb ? -1 : 1;
  if (ra == 0) return 0;
  if (ra == 1) {
    if (a.is_int() && b.is_int()) return a.as_int() < b.as_int() ? -1 : (a.as_int() > b.as_int() ? 1 : 0);
    return three_way(a.as_number(), b.as_number());
  }
  int c = a.as_text().compare(b.as_text());
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

std::optional<int> compare_sql(const Value& a, const Value& b) {
  if (a.is_null() || b.is_null()) return std::nullopt;
  if (a.is_text() != b.is_text()) {
    raise(ErrorCode::kTypeMismatch, "cannot compare " + std::string(column_type_name(*a.type())) +
                                        " with " + std::string(column_type_name(*b.type())));
  }
  return compare_total(a, b);
}

bool value_fits(const Value& value, ColumnType type) {
  if (value.is_null()) return true;
  switch (type) {
    case ColumnType::kText: return value.is_text();
    case ColumnType::kInt: return value.is_int();
    case ColumnType::kFloat: return value.is_numeric();
  }
  return false;
}

Value coerce_for_column(const Value& value, ColumnType type, std::string_view column) {
  if (!value_fits(value, type)) {
    raise(ErrorCode::kTypeMismatch, "value " + value.to_string() + " does not fit column " +
                                        std::string(column) + " " + std::string(column_type_name(type)));
  }
  if (type == ColumnType::kFloat && value.is_int()) return Value(static_cast<double>(value.as_int()));
  return value;
}

bool like_match(std::string_view text, std::string_view pattern) {
  // Iterative wildcard match with single-star backtracking.
  std::size_t t = 0, p = 0;
  std::size_t star_p = std::string_view::npos, star_t = 0;
  while (t < text.size()) {
    if (p < pattern.size() && (pattern[p] == '_' || pattern[p] == text[t])) {
      ++t;
      ++p;
    } else if (p < pattern.size() && pattern[p] == '%') {
      star_p = p++;
      star_t = t;
    } else if (star_p != std::string_view::npos) {
      p = star_p + 1;
      t = ++star_t;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '%') ++p;
  return p == pattern.size();
}

}  // namespace annodb
