#include "annodb/storage.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "annodb/error.hpp"
#include "annodb/rle.hpp"
#include "json.hpp"

namespace annodb {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kBitmapHeader = "RLEBM v1";

json to_json(const Value& v) {
  if (v.is_null()) return nullptr;
  if (v.is_text()) return v.as_text();
  if (v.is_int()) return v.as_int();
  return v.as_float();
}

Value value_from_json(const json& j) {
  if (j.is_null()) return Value();
  if (j.is_string()) return Value(j.get<std::string>());
  if (j.is_number_integer()) return Value(j.get<std::int64_t>());
  if (j.is_number_float()) return Value(j.get<double>());
  raise(ErrorCode::kCorruptFormat, "unsupported JSON value " + j.dump());
}

json values_to_json(const std::vector<Value>& values) {
  json a = json::array();
  for (const Value& v : values) a.push_back(to_json(v));
  return a;
}

std::vector<Value> values_from_json(const json& j) {
  std::vector<Value> out;
  for (const json& v : j) out.push_back(value_from_json(v));
  return out;
}

json row_to_json(const CapturedRow& r) {
  return json{{"rid", r.rid}, {"values", values_to_json(r.values)}, {"annotations", r.annotations}};
}

CapturedRow row_from_json(const json& j) {
  return CapturedRow{j.at("rid").get<Rid>(), values_from_json(j.at("values")),
                     j.at("annotations").get<std::vector<Aid>>()};
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) raise(ErrorCode::kCorruptFormat, p.string() + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) raise(ErrorCode::kIo, "cannot write " + tmp.string());
    out << text;
    if (!out) raise(ErrorCode::kIo, "write failed for " + tmp.string());
  }
  fs::rename(tmp, p);
}

template <typename F>
void for_each_json_line(const fs::path& p, F&& f) {
  std::istringstream in(read_file(p));
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      f(json::parse(line));
    } catch (const json::exception& e) {
      raise(ErrorCode::kCorruptFormat, p.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
}

void remove_stale(const fs::path& dir, const std::set<fs::path>& keep) {
  if (!fs::exists(dir)) return;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && !keep.count(entry.path())) fs::remove(entry.path());
  }
}

AnnotationCategory category_from(const std::string& s) {
  if (s == "COMMENT") return AnnotationCategory::kComment;
  if (s == "PROVENANCE") return AnnotationCategory::kProvenance;
  if (s == "SYSTEM") return AnnotationCategory::kSystem;
  raise(ErrorCode::kCorruptFormat, "unknown annotation category " + s);
}

fs::path annotation_file(const fs::path& dir, const std::string& owner, const std::string& name) {
  return dir / "annotations" / (encode_file_name(owner) + "." + encode_file_name(name) + ".jsonl");
}

}  // namespace

std::string encode_file_name(const std::string& name) {
  static const char* kHex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : name) {
    if (std::isalnum(c) || c == '_' || c == '-') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 15]);
    }
  }
  return out;
}

std::string write_bitmap_text(const std::map<std::string, std::vector<bool>>& columns) {
  std::string out = std::string(kBitmapHeader) + "\n";
  for (const auto& [name, bits] : columns) out += "col=" + name + ";" + rle::to_text(rle::encode(bits)) + "\n";
  return out;
}

std::map<std::string, std::vector<bool>> read_bitmap_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kBitmapHeader) raise(ErrorCode::kCorruptFormat, "missing RLEBM v1 header");
  std::map<std::string, std::vector<bool>> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("col=", 0) != 0) raise(ErrorCode::kCorruptFormat, "bad bitmap line '" + line + "'");
    std::size_t semi = line.find(";first=");
    if (semi == std::string::npos) raise(ErrorCode::kCorruptFormat, "bad bitmap line '" + line + "'");
    out[line.substr(4, semi - 4)] = rle::decode(rle::from_text(std::string_view(line).substr(semi + 1)));
  }
  return out;
}

void save(const Database& db, const fs::path& dir) {
  fs::create_directories(dir);
  std::set<fs::path> table_files, annotation_files, bitmap_files, deleted_files;

  json catalog{{"format", "annodb"}, {"version", kFormatVersion}};
  json tables = json::array();
  for (const auto& [name, t] : db.catalog.tables()) {
    json cols = json::array();
    for (const ColumnSpec& c : t.def().columns) {
      cols.push_back({{"name", c.name}, {"type", std::string(column_type_name(c.type))}});
    }
    tables.push_back({{"name", name}, {"columns", cols}, {"next_rid", t.next_rid()}});
    std::string rows;
    for (const auto& [rid, row] : t.rows()) {
      json line = json::object();
      line["_rid"] = rid;
      for (std::size_t i = 0; i < row.values.size(); ++i) line[t.def().columns[i].name] = to_json(row.values[i]);
      rows += line.dump() + "\n";
    }
    fs::path p = dir / "tables" / (encode_file_name(name) + ".rows");
    write_file(p, rows);
    table_files.insert(p);
  }
  catalog["tables"] = tables;

  json ann_tables = json::array();
  for (const auto& [key, t] : db.annotations.tables()) {
    ann_tables.push_back({{"owner", t.def.owner},
                          {"name", t.def.name},
                          {"category", std::string(category_name(t.def.category))},
                          {"required_tags", t.def.required_tags},
                          {"writers", t.def.writers}});
    std::string lines;
    for (const AnnotationRecord& r : t.records) {
      json rects = json::array();
      for (const Rect& x : r.rects) rects.push_back({x.col_lo, x.col_hi, x.rid_lo, x.rid_hi});
      json line{{"aid", r.aid},       {"body", r.body},     {"rects", rects},
                {"ts_seq", r.ts_seq}, {"ts_iso", r.ts_iso}, {"archived", r.archived}};
      lines += line.dump() + "\n";
    }
    fs::path p = annotation_file(dir, key.first, key.second);
    write_file(p, lines);
    annotation_files.insert(p);
  }
  catalog["annotation_tables"] = ann_tables;
  catalog["counters"] = {{"next_aid", db.annotations.next_aid()},
                         {"next_ts_seq", db.annotations.next_ts_seq()},
                         {"next_op_id", db.approvals.next_op_id()}};
  json procs = json::array();
  for (const auto& [name, p] : db.procedures.definitions()) {
    procs.push_back({{"name", p.name}, {"builtin", p.builtin}, {"arity", p.arity}});
  }
  catalog["procedures"] = procs;
  json scopes = json::array();
  for (const auto& [name, s] : db.approvals.scopes()) {
    scopes.push_back({{"table", s.table}, {"columns", s.columns}, {"approvers", s.approvers}});
  }
  catalog["approval_scopes"] = scopes;

  std::string rules;
  for (const DependencyRule& r : db.dependencies.rules()) {
    json link = nullptr;
    if (r.link) link = {{"source", r.link->source_column}, {"target", r.link->target_column}};
    rules += json{{"id", r.id},
                  {"source_table", r.source_table},
                  {"source_columns", r.source_columns},
                  {"target_table", r.target_table},
                  {"target_columns", r.target_columns},
                  {"link", link},
                  {"procedure", r.procedure},
                  {"executable", r.executable},
                  {"invertible", r.invertible}}
                 .dump() +
             "\n";
  }
  write_file(dir / "deps" / "rules.jsonl", rules);
  std::string edges;
  for (const DependencyEdge& e : db.dependencies.edges()) {
    auto cell = [&](const SourceCell& s) {
      return json{{"table", s.table},
                  {"rid", s.cell.rid},
                  {"column", db.catalog.table(s.table).def().columns.at(s.cell.column).name}};
    };
    edges += json{{"source", cell(e.source)}, {"target", cell(e.target)}, {"procedure", e.procedure},
                  {"executable", e.executable}}
                 .dump() +
             "\n";
  }
  write_file(dir / "deps" / "edges.jsonl", edges);

  for (const auto& [table, columns] : db.dependencies.bitmaps()) {
    if (!db.catalog.has_table(table)) continue;
    auto length = static_cast<std::size_t>(db.catalog.table(table).max_rid());
    std::map<std::string, std::vector<bool>> normalized;
    for (const auto& [column, bits] : columns) normalized[column] = db.dependencies.bitmap(table, column, length);
    fs::path p = dir / "deps" / "bitmaps" / (encode_file_name(table) + ".rle");
    write_file(p, write_bitmap_text(normalized));
    bitmap_files.insert(p);
  }

  std::string log;
  for (const UpdateLogEntry& e : db.approvals.entries()) {
    json before = json::array(), after = json::array();
    for (const CapturedRow& r : e.before) before.push_back(row_to_json(r));
    for (const CapturedRow& r : e.after) after.push_back(row_to_json(r));
    log += json{{"op_id", e.op_id},
                {"user", e.user},
                {"ts", e.ts},
                {"table", e.table},
                {"kind", std::string(dml_kind_name(e.kind))},
                {"statement", e.statement},
                {"inverse", e.inverse},
                {"before", before},
                {"after", after},
                {"ann_seq_mark", e.ann_seq_mark},
                {"attached", e.attached},
                {"approvers", e.approvers},
                {"status", std::string(status_name(e.status))},
                {"decided_by", e.decided_by},
                {"decided_ts", e.decided_ts}}
               .dump() +
           "\n";
  }
  write_file(dir / "approval" / "log.jsonl", log);

  for (const auto& [table, rows] : db.deleted) {
    std::string lines;
    for (const CapturedRow& r : rows) lines += row_to_json(r).dump() + "\n";
    fs::path p = dir / "logs" / "deleted" / (encode_file_name(table) + ".jsonl");
    write_file(p, lines);
    deleted_files.insert(p);
  }

  write_file(dir / "catalog.json", catalog.dump(2) + "\n");
  remove_stale(dir / "tables", table_files);
  remove_stale(dir / "annotations", annotation_files);
  remove_stale(dir / "deps" / "bitmaps", bitmap_files);
  remove_stale(dir / "logs" / "deleted", deleted_files);
}

Database open_or_create(const fs::path& dir) {
  Database db;
  fs::path catalog_path = dir / "catalog.json";
  if (!fs::exists(catalog_path)) {
    if (fs::exists(dir) && !fs::is_directory(dir)) raise(ErrorCode::kIo, dir.string() + " is not a directory");
    fs::create_directories(dir);
    return db;
  }
  json catalog;
  try {
    catalog = json::parse(read_file(catalog_path));
  } catch (const json::exception& e) {
    raise(ErrorCode::kCorruptFormat, catalog_path.string() + ": " + e.what());
  }
  try {
    if (catalog.value("format", "") != "annodb") raise(ErrorCode::kCorruptFormat, "catalog.json: not an annodb catalog");
    if (catalog.at("version").get<int>() != kFormatVersion) {
      raise(ErrorCode::kVersionMismatch, "catalog.json has version " + catalog.at("version").dump() +
                                             ", expected " + std::to_string(kFormatVersion));
    }
    for (const json& t : catalog.at("tables")) {
      TableDef def{t.at("name").get<std::string>(), {}};
      for (const json& c : t.at("columns")) {
        std::optional<ColumnType> type = parse_column_type(c.at("type").get<std::string>());
        if (!type) raise(ErrorCode::kCorruptFormat, "catalog.json: bad column type " + c.at("type").dump());
        def.columns.push_back({c.at("name").get<std::string>(), *type});
      }
      fs::path p = dir / "tables" / (encode_file_name(def.name) + ".rows");
      std::vector<Row> rows;
      for_each_json_line(p, [&](const json& line) {
        Row r{line.at("_rid").get<Rid>(), {}};
        for (const ColumnSpec& c : def.columns) r.values.push_back(value_from_json(line.at(c.name)));
        if (line.size() != def.columns.size() + 1) raise(ErrorCode::kCorruptFormat, p.string() + ": unexpected fields");
        rows.push_back(std::move(r));
      });
      db.catalog.load_table(std::move(def), std::move(rows), t.at("next_rid").get<Rid>());
    }
    for (const json& a : catalog.at("annotation_tables")) {
      AnnotationTableDef def{a.at("owner").get<std::string>(), a.at("name").get<std::string>(),
                             category_from(a.at("category").get<std::string>()),
                             a.at("required_tags").get<std::vector<std::string>>(),
                             a.at("writers").get<std::vector<std::string>>()};
      if (!db.catalog.has_table(def.owner)) raise(ErrorCode::kCorruptFormat, "annotation table on unknown " + def.owner);
      fs::path p = annotation_file(dir, def.owner, def.name);
      std::string owner = def.owner, name = def.name;
      db.annotations.load_table(std::move(def));
      for_each_json_line(p, [&](const json& line) {
        AnnotationRecord r;
        r.aid = line.at("aid").get<Aid>();
        r.owner = owner;
        r.table = name;
        r.body = line.at("body").get<std::string>();
        for (const json& x : line.at("rects")) {
          if (x.size() != 4) raise(ErrorCode::kCorruptFormat, p.string() + ": rect needs 4 numbers");
          r.rects.push_back({x[0].get<std::size_t>(), x[1].get<std::size_t>(), x[2].get<Rid>(), x[3].get<Rid>()});
        }
        r.ts_seq = line.at("ts_seq").get<std::int64_t>();
        r.ts_iso = line.at("ts_iso").get<std::string>();
        r.archived = line.at("archived").get<bool>();
        db.annotations.load_record(std::move(r));
      });
    }
    const json& counters = catalog.at("counters");
    db.annotations.set_counters(counters.at("next_aid").get<Aid>(), counters.at("next_ts_seq").get<std::int64_t>());
    db.approvals.set_next_op_id(counters.at("next_op_id").get<std::int64_t>());
    for (const json& p : catalog.at("procedures")) {
      db.procedures.define({p.at("name").get<std::string>(), p.at("builtin").get<std::string>(),
                            p.at("arity").get<std::size_t>()});
    }
    for (const json& s : catalog.at("approval_scopes")) {
      db.approvals.load_scope({s.at("table").get<std::string>(), s.at("columns").get<std::vector<std::string>>(),
                               s.at("approvers").get<std::vector<std::string>>()});
    }
  } catch (const json::exception& e) {
    raise(ErrorCode::kCorruptFormat, catalog_path.string() + ": " + e.what());
  }

  auto column_index = [&](const std::string& table, const std::string& column) {
    if (!db.catalog.has_table(table)) raise(ErrorCode::kCorruptFormat, "unknown table " + table);
    std::optional<std::size_t> i = db.catalog.table(table).def().column_index(column);
    if (!i) raise(ErrorCode::kCorruptFormat, "unknown column " + table + "." + column);
    return *i;
  };
  fs::path rules = dir / "deps" / "rules.jsonl";
  if (fs::exists(rules)) {
    for_each_json_line(rules, [&](const json& j) {
      DependencyRule r;
      r.id = j.at("id").get<std::string>();
      r.source_table = j.at("source_table").get<std::string>();
      r.source_columns = j.at("source_columns").get<std::vector<std::string>>();
      r.target_table = j.at("target_table").get<std::string>();
      r.target_columns = j.at("target_columns").get<std::vector<std::string>>();
      if (!j.at("link").is_null()) {
        r.link = ast::LinkKeys{j.at("link").at("source").get<std::string>(), j.at("link").at("target").get<std::string>()};
      }
      r.procedure = j.at("procedure").get<std::string>();
      r.executable = j.at("executable").get<bool>();
      r.invertible = j.at("invertible").get<bool>();
      db.dependencies.load_rule(std::move(r));
    });
  }
  fs::path edges = dir / "deps" / "edges.jsonl";
  if (fs::exists(edges)) {
    for_each_json_line(edges, [&](const json& j) {
      auto cell = [&](const json& c) {
        std::string table = c.at("table").get<std::string>();
        return SourceCell{table, Cell{c.at("rid").get<Rid>(), column_index(table, c.at("column").get<std::string>())}};
      };
      db.dependencies.add_edge({cell(j.at("source")), cell(j.at("target")), j.at("procedure").get<std::string>(),
                                j.at("executable").get<bool>()});
    });
  }
  fs::path bitmaps = dir / "deps" / "bitmaps";
  if (fs::exists(bitmaps)) {
    for (const auto& [name, t] : db.catalog.tables()) {
      fs::path p = bitmaps / (encode_file_name(name) + ".rle");
      if (!fs::exists(p)) continue;
      try {
        for (auto& [column, bits] : read_bitmap_text(read_file(p))) {
          column_index(name, column);
          db.dependencies.load_bitmap(name, column, std::move(bits));
        }
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kCorruptFormat) throw;
        raise(ErrorCode::kCorruptFormat, p.string() + ": " + e.what());
      }
    }
  }
  fs::path log = dir / "approval" / "log.jsonl";
  if (fs::exists(log)) {
    for_each_json_line(log, [&](const json& j) {
      UpdateLogEntry e;
      e.op_id = j.at("op_id").get<std::int64_t>();
      e.user = j.at("user").get<std::string>();
      e.ts = j.at("ts").get<std::string>();
      e.table = j.at("table").get<std::string>();
      std::optional<DmlKind> kind = parse_dml_kind(j.at("kind").get<std::string>());
      std::optional<ApprovalStatus> status = parse_status(j.at("status").get<std::string>());
      if (!kind || !status) raise(ErrorCode::kCorruptFormat, log.string() + ": bad kind or status");
      e.kind = *kind;
      e.status = *status;
      e.statement = j.at("statement").get<std::string>();
      e.inverse = j.at("inverse").get<std::string>();
      for (const json& r : j.at("before")) e.before.push_back(row_from_json(r));
      for (const json& r : j.at("after")) e.after.push_back(row_from_json(r));
      e.ann_seq_mark = j.at("ann_seq_mark").get<std::int64_t>();
      e.attached = j.at("attached").get<std::vector<Aid>>();
      e.approvers = j.at("approvers").get<std::vector<std::string>>();
      e.decided_by = j.at("decided_by").get<std::string>();
      e.decided_ts = j.at("decided_ts").get<std::string>();
      db.approvals.load_entry(std::move(e));
    });
  }
  fs::path deleted = dir / "logs" / "deleted";
  if (fs::exists(deleted)) {
    for (const auto& [name, t] : db.catalog.tables()) {
      fs::path p = deleted / (encode_file_name(name) + ".jsonl");
      if (!fs::exists(p)) continue;
      std::vector<CapturedRow>& rows = db.deleted[name];
      for_each_json_line(p, [&](const json& j) { rows.push_back(row_from_json(j)); });
    }
  }
  return db;
}

}  // namespace annodb
