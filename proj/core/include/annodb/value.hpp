#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace annodb {

enum class ColumnType { kText, kInt, kFloat };

std::string_view column_type_name(ColumnType type);
std::optional<ColumnType> parse_column_type(std::string_view name);

struct Null {
  bool operator==(const Null&) const = default;
};

// A cell value: NULL, TEXT, INT or FLOAT.
class Value {
 public:
  Value() = default;
  Value(Null) {}
  Value(std::string text) : data_(std::move(text)) {}
  Value(const char* text) : data_(std::string(text)) {}
  Value(std::int64_t i) : data_(i) {}
  Value(int i) : data_(static_cast<std::int64_t>(i)) {}
  Value(double d) : data_(d) {}

  bool is_null() const { return std::holds_alternative<Null>(data_); }
  bool is_text() const { return std::holds_alternative<std::string>(data_); }
  bool is_int() const { return std::holds_alternative<std::int64_t>(data_); }
  bool is_float() const { return std::holds_alternative<double>(data_); }
  bool is_numeric() const { return is_int() || is_float(); }

  const std::string& as_text() const { return std::get<std::string>(data_); }
  std::int64_t as_int() const { return std::get<std::int64_t>(data_); }
  double as_float() const { return std::get<double>(data_); }
  double as_number() const { return is_int() ? static_cast<double>(as_int()) : as_float(); }

  // Type of a non-null value.
  std::optional<ColumnType> type() const;

  // Exact structural equality: same alternative, same payload.
  bool operator==(const Value& other) const = default;

  // Human-readable rendering; NULL renders as "NULL", text unquoted.
  std::string to_string() const;

 private:
  std::variant<Null, std::string, std::int64_t, double> data_;
};

// Total order used for grouping, set operations and DISTINCT. NULL sorts
// first and equals only NULL; INT and FLOAT compare numerically; numbers sort
// before text.
int compare_total(const Value& a, const Value& b);

struct ValueLess {
  bool operator()(const Value& a, const Value& b) const { return compare_total(a, b) < 0; }
};

// SQL comparison. Returns nullopt when either side is NULL. Mismatched types
// (other than INT/FLOAT widening) raise kTypeMismatch.
std::optional<int> compare_sql(const Value& a, const Value& b);

// Whether `value` may be stored in a column of `type` (NULL always fits).
bool value_fits(const Value& value, ColumnType type);

// Converts a value for storage into a column of `type`, widening INT to FLOAT.
// Raises kTypeMismatch otherwise.
Value coerce_for_column(const Value& value, ColumnType type, std::string_view column);

// SQL LIKE with % and _ wildcards; no escape character.
bool like_match(std::string_view text, std::string_view pattern);

// Shortest round-trippable decimal text of a double that always re-lexes as a
// float literal (contains '.', 'e' or is non-finite).
std::string format_float(double d);

}  // namespace annodb
