#include "annodb/session.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "annodb/csv.hpp"
#include "annodb/error.hpp"
#include "annodb/parser.hpp"
#include "json.hpp"

namespace annodb::cli {

namespace {

std::vector<std::string> words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::string rect_text(const Rect& r, const TableDef& def) {
  auto col = [&](std::size_t c) { return c < def.columns.size() ? def.columns[c].name : std::to_string(c); };
  std::string cols = r.col_lo == r.col_hi ? col(r.col_lo) : col(r.col_lo) + ".." + col(r.col_hi);
  std::string rows = r.rid_lo == r.rid_hi ? std::to_string(r.rid_lo)
                                          : std::to_string(r.rid_lo) + ".." + std::to_string(r.rid_hi);
  return cols + "@" + rows;
}

}  // namespace

Session::Session(std::filesystem::path dir, Clock clock, OutputMode mode)
    : dir_(std::move(dir)), engine_(std::make_unique<Engine>(open_or_create(dir_), clock)), mode_(mode) {}

void Session::save() { annodb::save(engine_->db(), dir_); }

std::size_t Session::import_csv(const std::string& table, const std::filesystem::path& file) {
  std::size_t n = annodb::import_csv(engine_->db().catalog, table, file);
  save();
  return n;
}

std::string Session::lines(const std::string& text) const {
  if (mode_ != OutputMode::kJsonl) return text;
  std::istringstream in(text);
  std::string out;
  for (std::string line; std::getline(in, line);) out += render_message(line, mode_, "info");
  return out;
}

std::string Session::render(const ExecResult& r) const {
  std::string out;
  for (const std::string& w : r.warnings) out += render_message(w, mode_, "warning");
  if (r.relation) out += render_relation(*r.relation, engine_->db().annotations, mode_);
  if (!r.message.empty()) out += render_message(r.message, mode_);
  return out;
}

std::string Session::eval(const Chunk& chunk) {
  if (chunk.meta) return meta(chunk.text);
  ast::Statement stmt = parse_statement(chunk.text);
  ExecResult r = engine_->execute(stmt);
  if (r.mutated) save();
  return render(r);
}

std::string Session::meta(const std::string& line) {
  std::vector<std::string> w = words(line);
  const std::string& cmd = w.at(0);
  const Database& db = engine_->db();
  auto need = [&](std::size_t n) {
    if (w.size() != n) raise(ErrorCode::kInvalidQuery, "usage: " + cmd + (n == 2 ? " <table>" : " <table> <file>"));
  };
  std::ostringstream out;

  if (cmd == "\\q") {
    finished_ = true;
    return {};
  }
  if (cmd == "\\d" && w.size() == 1) {
    for (const auto& [name, table] : db.catalog.tables()) {
      out << name << " (" << table.size() << " rows";
      std::size_t ann = db.annotations.tables_of(name).size();
      if (ann) out << ", " << ann << " annotation tables";
      out << ")\n";
    }
    if (db.catalog.tables().empty()) out << "no tables\n";
    return lines(out.str());
  }
  if (cmd == "\\d") {
    need(2);
    const Table& t = db.catalog.table(w[1]);
    out << "table " << t.name() << "\n";
    for (const ColumnSpec& c : t.def().columns) out << "  " << c.name << " " << column_type_name(c.type) << "\n";
    for (const AnnotationTable* a : db.annotations.tables_of(t.name())) {
      out << "  annotation " << a->def.name << " " << category_name(a->def.category) << " (" << a->records.size()
          << " records)\n";
    }
    return lines(out.str());
  }
  if (cmd == "\\ann") {
    need(2);
    const TableDef& def = db.catalog.table(w[1]).def();
    for (const AnnotationTable* a : db.annotations.tables_of(def.name)) {
      for (const AnnotationRecord& r : a->records) {
        out << "a" << r.aid << " " << a->def.name << " #" << r.ts_seq << (r.archived ? " archived" : "") << " ";
        for (std::size_t i = 0; i < r.rects.size(); ++i) out << (i ? "," : "") << rect_text(r.rects[i], def);
        if (r.rects.empty()) out << "-";
        out << " " << r.body << "\n";
      }
    }
    return lines(out.str());
  }
  if (cmd == "\\rules") return lines(render_rules(db.dependencies));
  if (cmd == "\\pending") {
    ExecResult r = engine_->execute(ast::Statement{ast::ListPending{}});
    return render(r);
  }
  if (cmd == "\\import") {
    need(3);
    std::size_t n = import_csv(w[1], w[2]);
    return render_message(std::to_string(n) + (n == 1 ? " row imported" : " rows imported"), mode_);
  }
  if (cmd == "\\export") {
    need(3);
    std::size_t n = export_csv(db.catalog, w[1], std::filesystem::path(w[2]));
    return render_message(std::to_string(n) + (n == 1 ? " row exported" : " rows exported"), mode_);
  }
  if (cmd == "\\deleted") {
    need(2);
    db.catalog.table(w[1]);
    auto it = db.deleted.find(w[1]);
    if (it != db.deleted.end()) {
      for (const CapturedRow& row : it->second) {
        out << "rid " << row.rid << ":";
        for (const Value& v : row.values) out << " " << v.to_string();
        for (Aid a : row.annotations) out << " [a" << a << "]";
        out << "\n";
      }
    }
    return lines(out.str());
  }
  if (cmd == "\\outdated") {
    need(2);
    const Table& t = db.catalog.table(w[1]);
    std::size_t n = 0;
    for (const ColumnSpec& c : t.def().columns) {
      for (const auto& [rid, row] : t.rows()) {
        if (db.dependencies.is_outdated(t.name(), c.name, rid)) {
          out << c.name << "@" << rid << "\n";
          ++n;
        }
      }
    }
    out << n << (n == 1 ? " outdated cell" : " outdated cells") << "\n";
    return lines(out.str());
  }
  if (cmd == "\\closure") {
    std::set<ColumnKey> keys;
    if (w.size() == 3 && w[1] == "PROCEDURE") {
      keys = db.dependencies.procedure_closure(w[2]);
    } else if (w.size() == 2) {
      auto dot = w[1].find('.');
      if (dot == std::string::npos) raise(ErrorCode::kInvalidQuery, "usage: \\closure <table>.<column>");
      keys = db.dependencies.attribute_closure(db.catalog, {w[1].substr(0, dot), w[1].substr(dot + 1)});
    } else {
      raise(ErrorCode::kInvalidQuery, "usage: \\closure <table>.<column> | \\closure PROCEDURE <name>");
    }
    for (const ColumnKey& k : keys) out << to_string(k) << "\n";
    return lines(out.str());
  }
  raise(ErrorCode::kInvalidQuery, "unknown meta-command " + cmd);
}

std::string Session::render_error(const std::exception& e, std::size_t line) const {
  std::string text = e.what();
  if (line > 1) text = "statement at line " + std::to_string(line) + ": " + text;
  if (mode_ == OutputMode::kJsonl) {
    nlohmann::json j{{"error", text}};
    if (const auto* ae = dynamic_cast<const Error*>(&e)) j["code"] = std::string(error_code_name(ae->code()));
    return j.dump() + "\n";
  }
  return "error: " + text + "\n";
}

bool Session::run(std::string_view text, std::ostream& out, std::ostream& err, bool stop_on_error) {
  SplitResult split = split_input(text);
  if (!split.rest.empty()) split.chunks.push_back({split.rest, false, 0});
  bool ok = true;
  for (const Chunk& chunk : split.chunks) {
    try {
      out << eval(chunk);
    } catch (const std::exception& e) {
      ok = false;
      out.flush();
      err << render_error(e, chunk.line);
      if (stop_on_error) return false;
    }
    if (finished_) break;
  }
  return ok;
}

}  // namespace annodb::cli
