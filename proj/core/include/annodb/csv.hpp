#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "annodb/catalog.hpp"

namespace annodb {

// One parsed CSV field. `quoted` distinguishes "" (empty text) from an empty
// unquoted field (NULL).
struct CsvField {
  std::string text;
  bool quoted = false;
};

struct CsvRecord {
  std::vector<CsvField> fields;
  std::size_t line = 0;  // 1-based line where the record starts
};

// RFC-4180 reader. Accepts LF or CRLF record separators.
std::vector<CsvRecord> parse_csv(std::string_view text);

std::string csv_escape(const Value& value);

// Imports rows into `table`; the header must name the columns exactly, in order.
std::size_t import_csv(Catalog& catalog, std::string_view table, std::istream& in);
std::size_t import_csv(Catalog& catalog, std::string_view table, const std::filesystem::path& file);

std::size_t export_csv(const Catalog& catalog, std::string_view table, std::ostream& out);
std::size_t export_csv(const Catalog& catalog, std::string_view table, const std::filesystem::path& file);

// Parses CSV rows for `def` without inserting them.
std::vector<std::vector<Value>> read_csv_rows(const TableDef& def, std::string_view text);

}  // namespace annodb
