#include "annodb/output.hpp"

#include <algorithm>
#include <sstream>

#include "annodb/csv.hpp"
#include "json.hpp"

namespace annodb::cli {

using nlohmann::json;

std::optional<OutputMode> parse_output_mode(const std::string& name) {
  if (name == "table") return OutputMode::kTable;
  if (name == "csv") return OutputMode::kCsv;
  if (name == "jsonl") return OutputMode::kJsonl;
  return std::nullopt;
}

namespace {

json value_json(const Value& v) {
  if (v.is_null()) return nullptr;
  if (v.is_text()) return v.as_text();
  if (v.is_int()) return v.as_int();
  return v.as_float();
}

std::string markers(const std::set<Aid>& aids) {
  std::string out;
  for (Aid a : aids) out += "[a" + std::to_string(a) + "]";
  return out;
}

std::string join_aids(const std::set<Aid>& aids) {
  std::string out;
  for (Aid a : aids) out += (out.empty() ? "a" : ";a") + std::to_string(a);
  return out;
}

std::string render_table(const AnnotatedRelation& rel, const AnnotationStore& store) {
  std::size_t n = rel.columns.size();
  std::vector<std::vector<std::string>> cells;
  std::vector<std::size_t> width(n, 0);
  for (std::size_t c = 0; c < n; ++c) width[c] = rel.columns[c].name.size();
  for (const AnnotatedTuple& t : rel.tuples) {
    std::vector<std::string> row;
    for (std::size_t c = 0; c < n; ++c) {
      std::string s = t.values[c].to_string();
      if (!t.anns[c].empty()) s += " " + markers(t.anns[c]);
      width[c] = std::max(width[c], s.size());
      row.push_back(std::move(s));
    }
    cells.push_back(std::move(row));
  }
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < n; ++c) {
      out << (c == 0 ? "" : " | ") << row[c] << std::string(width[c] - row[c].size(), ' ');
    }
    out << "\n";
  };
  std::vector<std::string> header;
  for (const OutputColumn& c : rel.columns) header.push_back(c.name);
  if (n > 0) {
    line(header);
    for (std::size_t c = 0; c < n; ++c) out << (c == 0 ? "" : "-+-") << std::string(width[c], '-');
    out << "\n";
    for (const auto& row : cells) line(row);
  }
  std::size_t rows = rel.tuples.size();
  out << "(" << rows << (rows == 1 ? " row)" : " rows)") << "\n";
  for (Aid a : rel.aids()) {
    const AnnotationRecord* r = store.record(a);
    if (!r) continue;
    out << "  [a" << a << "] " << r->owner << "." << r->table << " " << r->ts_iso << " " << r->body << "\n";
  }
  return out.str();
}

std::string render_csv(const AnnotatedRelation& rel) {
  bool annotated = !rel.aids().empty();
  std::ostringstream out;
  std::vector<std::string> header;
  for (const OutputColumn& c : rel.columns) header.push_back(csv_escape(Value(c.name)));
  if (annotated) {
    for (const OutputColumn& c : rel.columns) header.push_back(csv_escape(Value(c.name + "_ann")));
  }
  for (std::size_t i = 0; i < header.size(); ++i) out << (i == 0 ? "" : ",") << header[i];
  out << "\n";
  for (const AnnotatedTuple& t : rel.tuples) {
    std::vector<std::string> row;
    for (const Value& v : t.values) row.push_back(csv_escape(v));
    if (annotated) {
      for (const auto& s : t.anns) row.push_back(csv_escape(Value(join_aids(s))));
    }
    for (std::size_t i = 0; i < row.size(); ++i) out << (i == 0 ? "" : ",") << row[i];
    out << "\n";
  }
  return out.str();
}

std::string render_jsonl(const AnnotatedRelation& rel, const AnnotationStore& store) {
  std::ostringstream out;
  json columns = json::array();
  for (const OutputColumn& c : rel.columns) columns.push_back(c.name);
  out << json{{"columns", columns}}.dump() << "\n";
  for (const AnnotatedTuple& t : rel.tuples) {
    json values = json::array();
    for (const Value& v : t.values) values.push_back(value_json(v));
    json anns = json::array();
    for (const auto& s : t.anns) anns.push_back(std::vector<Aid>(s.begin(), s.end()));
    out << json{{"row", values}, {"anns", anns}}.dump() << "\n";
  }
  for (Aid a : rel.aids()) {
    const AnnotationRecord* r = store.record(a);
    if (!r) continue;
    out << json{{"aid", a}, {"owner", r->owner}, {"table", r->table}, {"ts_seq", r->ts_seq}, {"body", r->body}}.dump()
        << "\n";
  }
  return out.str();
}

std::string column_list(const std::string& table, const std::vector<std::string>& columns) {
  std::string out = table + "(";
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i == 0 ? "" : ", ") + columns[i];
  return out + ")";
}

}  // namespace

std::string render_relation(const AnnotatedRelation& rel, const AnnotationStore& store, OutputMode mode) {
  switch (mode) {
    case OutputMode::kTable: return render_table(rel, store);
    case OutputMode::kCsv: return render_csv(rel);
    case OutputMode::kJsonl: return render_jsonl(rel, store);
  }
  return {};
}

std::string render_message(const std::string& message, OutputMode mode, const char* key) {
  if (mode == OutputMode::kJsonl) return json{{key, message}}.dump() + "\n";
  if (std::string_view(key) == "message") return message + "\n";
  return std::string(key) + ": " + message + "\n";
}

std::string describe_rule(const DependencyRule& rule) {
  bool derived = !rule.derived_from.empty();
  std::string out = rule.id + ": " + column_list(rule.source_table, rule.source_columns) + (derived ? " => " : " -> ") +
                    column_list(rule.target_table, rule.target_columns) + " via " + rule.procedure +
                    " [EXEC " + (rule.executable ? "DB" : "EXTERNAL") + ", INV " + (rule.invertible ? "YES" : "NO") +
                    "]";
  if (derived) {
    out += " derived";
  } else if (rule.link) {
    out += " link " + rule.source_table + "." + rule.link->source_column + " = " + rule.target_table + "." +
           rule.link->target_column;
  } else {
    out += " link by row";
  }
  return out;
}

std::string render_rules(const DependencyEngine& deps) {
  std::string out;
  for (const DependencyRule& r : deps.rules()) out += describe_rule(r) + "\n";
  for (const DependencyRule& r : deps.derived_rules()) out += describe_rule(r) + "\n";
  if (!deps.edges().empty()) out += std::to_string(deps.edges().size()) + " cell-level edges\n";
  if (out.empty()) out = "no dependency rules\n";
  return out;
}

}  // namespace annodb::cli
