#include "annodb/csv.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "annodb/error.hpp"

namespace annodb {

std::vector<CsvRecord> parse_csv(std::string_view text) {
  std::vector<CsvRecord> records;
  std::size_t i = 0;
  std::size_t line = 1;
  while (i < text.size()) {
    CsvRecord rec;
    rec.line = line;
    for (;;) {
      CsvField field;
      if (i < text.size() && text[i] == '"') {
        field.quoted = true;
        ++i;
        for (;;) {
          if (i >= text.size()) raise(ErrorCode::kRaggedRow, "unterminated quoted field at line " + std::to_string(rec.line));
          char c = text[i];
          if (c == '"') {
            if (i + 1 < text.size() && text[i + 1] == '"') {
              field.text.push_back('"');
              i += 2;
              continue;
            }
            ++i;
            break;
          }
          if (c == '\n') ++line;
          field.text.push_back(c);
          ++i;
        }
        if (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
          raise(ErrorCode::kRaggedRow, "garbage after quoted field at line " + std::to_string(line));
        }
      } else {
        while (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
          field.text.push_back(text[i]);
          ++i;
        }
      }
      rec.fields.push_back(std::move(field));
      if (i < text.size() && text[i] == ',') {
        ++i;
        continue;
      }
      break;
    }
    if (i < text.size() && text[i] == '\r') ++i;
    if (i < text.size() && text[i] == '\n') {
      ++i;
      ++line;
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::string csv_escape(const Value& value) {
  if (value.is_null()) return {};
  std::string text = value.to_string();
  bool needs_quotes = value.is_text() &&
                      (text.empty() || text.find_first_of(",\"\r\n") != std::string::npos);
  if (!needs_quotes) return text;
  std::string out = "\"";
  for (char c : text) {
    out.push_back(c);
    if (c == '"') out.push_back('"');
  }
  out.push_back('"');
  return out;
}

namespace {

Value parse_field(const CsvField& field, const ColumnSpec& spec, std::size_t line) {
  if (!field.quoted && field.text.empty()) return Value();
  const std::string& t = field.text;
  switch (spec.type) {
    case ColumnType::kText:
      return Value(t);
    case ColumnType::kInt: {
      std::int64_t v = 0;
      auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
      if (ec != std::errc() || p != t.data() + t.size()) {
        raise(ErrorCode::kTypeMismatch, "line " + std::to_string(line) + ": '" + t + "' is not an INT for " + spec.name);
      }
      return Value(v);
    }
    case ColumnType::kFloat: {
      char* end = nullptr;
      double d = std::strtod(t.c_str(), &end);
      if (t.empty() || end != t.c_str() + t.size()) {
        raise(ErrorCode::kTypeMismatch, "line " + std::to_string(line) + ": '" + t + "' is not a FLOAT for " + spec.name);
      }
      return Value(d);
    }
  }
  return Value();
}

std::string slurp(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::vector<std::vector<Value>> read_csv_rows(const TableDef& def, std::string_view text) {
  std::vector<CsvRecord> records = parse_csv(text);
  if (records.empty()) raise(ErrorCode::kHeaderMismatch, "missing header row");
  const CsvRecord& header = records.front();
  bool ok = header.fields.size() == def.columns.size();
  for (std::size_t i = 0; ok && i < header.fields.size(); ++i) {
    ok = header.fields[i].text == def.columns[i].name;
  }
  if (!ok) {
    std::string expected;
    for (const ColumnSpec& c : def.columns) expected += (expected.empty() ? "" : ",") + c.name;
    raise(ErrorCode::kHeaderMismatch, "header must be " + expected);
  }
  std::vector<std::vector<Value>> rows;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const CsvRecord& rec = records[r];
    if (rec.fields.size() != def.columns.size()) {
      raise(ErrorCode::kRaggedRow, "line " + std::to_string(rec.line) + " has " +
                                       std::to_string(rec.fields.size()) + " fields, expected " +
                                       std::to_string(def.columns.size()));
    }
    std::vector<Value> row;
    for (std::size_t c = 0; c < rec.fields.size(); ++c) {
      row.push_back(parse_field(rec.fields[c], def.columns[c], rec.line));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::size_t import_csv(Catalog& catalog, std::string_view table, std::istream& in) {
  const TableDef& def = catalog.table(table).def();
  auto rows = read_csv_rows(def, slurp(in));
  catalog.insert_rows(table, rows);
  return rows.size();
}

std::size_t import_csv(Catalog& catalog, std::string_view table, const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) raise(ErrorCode::kIo, "cannot open " + file.string());
  return import_csv(catalog, table, in);
}

std::size_t export_csv(const Catalog& catalog, std::string_view table, std::ostream& out) {
  const Table& t = catalog.table(table);
  for (std::size_t i = 0; i < t.def().columns.size(); ++i) {
    if (i != 0) out << ',';
    out << t.def().columns[i].name;
  }
  out << '\n';
  for (const auto& [rid, row] : t.rows()) {
    for (std::size_t i = 0; i < row.values.size(); ++i) {
      if (i != 0) out << ',';
      out << csv_escape(row.values[i]);
    }
    out << '\n';
  }
  return t.size();
}

std::size_t export_csv(const Catalog& catalog, std::string_view table, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrorCode::kIo, "cannot write " + file.string());
  return export_csv(catalog, table, out);
}

}  // namespace annodb
