#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "annodb/parser.hpp"
#include "annodb/regions.hpp"

#ifndef ANNODB_FIXTURE_DIR
#error "ANNODB_FIXTURE_DIR must be defined"
#endif

namespace annodb::fixture {

namespace fs = std::filesystem;

fs::path fixture_path(const std::string& name) {
  fs::path p = fs::path(ANNODB_FIXTURE_DIR) / name;
  if (!p.has_extension()) p += ".asql";
  return p;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

Clock test_clock() { return *Clock::pinned(std::string("2026-01-01T00:00:00Z")); }

void run_script(Engine& engine, const std::string& text) {
  for (const ast::Statement& s : parse_script(text)) engine.execute(s);
}

std::unique_ptr<Engine> make_engine(const std::vector<std::string>& fixtures) {
  auto engine = std::make_unique<Engine>(Database{}, test_clock());
  for (const std::string& f : fixtures) run_script(*engine, read_file(fixture_path(f)));
  return engine;
}

TempDir::TempDir() {
  static std::mt19937_64 rng(std::random_device{}());
  for (;;) {
    path_ = fs::temp_directory_path() / ("annodb-test-" + std::to_string(rng()));
    if (fs::create_directory(path_)) break;
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

const std::vector<std::string> kF1Labels = {"A1", "A2", "A3", "B1", "B2", "B3", "B4", "B5"};

namespace {

CellSet cells(std::initializer_list<std::pair<Rid, std::size_t>> list) {
  CellSet out;
  for (auto [rid, col] : list) out.insert({rid, col});
  return out;
}

CellSet rows(std::initializer_list<Rid> rids, std::size_t ncols) {
  CellSet out;
  for (Rid r : rids) {
    for (std::size_t c = 0; c < ncols; ++c) out.insert({r, c});
  }
  return out;
}

}  // namespace

std::map<std::string, Placement> f1_placements() {
  // Columns: 0 GID, 1 GName, 2 GSequence. DB1 rids: JW0080, JW0055, JW0041,
  // JW0027. DB2 rids: JW0080, JW0055, JW0082, JW0100, JW0014.
  return {
      {"A1", {"DB1_Gene", cells({{1, 1}, {2, 1}})}},
      {"A2", {"DB1_Gene", rows({2, 3}, 3)}},
      {"A3", {"DB1_Gene", cells({{1, 2}})}},
      {"B1", {"DB2_Gene", cells({{1, 0}, {3, 0}})}},
      {"B2", {"DB2_Gene", cells({{2, 1}, {3, 1}})}},
      {"B3", {"DB2_Gene", cells({{1, 2}, {2, 2}, {3, 2}, {4, 2}, {5, 2}})}},
      {"B4", {"DB2_Gene", rows({4}, 3)}},
      {"B5", {"DB2_Gene", rows({1}, 3)}},
  };
}

std::set<std::string> f1_labels(const std::set<Aid>& aids) {
  std::set<std::string> out;
  for (Aid a : aids) {
    out.insert(a >= 1 && a <= static_cast<Aid>(kF1Labels.size()) ? kF1Labels[a - 1] : "a" + std::to_string(a));
  }
  return out;
}

TableSnapshot snapshot(const Database& db, const std::string& table) {
  TableSnapshot s;
  const Table& t = db.catalog.table(table);
  for (const auto& [rid, row] : t.rows()) {
    s.rows[rid] = row.values;
    for (std::size_t c = 0; c < row.values.size(); ++c) {
      std::set<Aid> aids;
      for (const AnnotationRecord* r : db.annotations.annotations_at(table, {rid, c})) aids.insert(r->aid);
      if (!aids.empty()) s.anns[{rid, c}] = aids;
    }
  }
  return s;
}

std::string describe(const TableSnapshot& s) {
  std::ostringstream out;
  for (const auto& [rid, values] : s.rows) {
    out << rid << ":";
    for (std::size_t c = 0; c < values.size(); ++c) {
      out << " " << values[c].to_string();
      auto it = s.anns.find({rid, c});
      if (it != s.anns.end()) {
        for (Aid a : it->second) out << "[a" << a << "]";
      }
    }
    out << "\n";
  }
  return out.str();
}

namespace {

std::string value_text(const Value& v) {
  if (v.is_null()) return "NULL";
  if (v.is_text()) return "'" + v.as_text() + "'";
  if (v.is_int()) return std::to_string(v.as_int());
  return format_float(v.as_float());
}

std::string rows_text(const std::vector<CapturedRow>& rows) {
  std::string out = "[";
  for (const CapturedRow& r : rows) {
    out += "(" + std::to_string(r.rid) + ":";
    for (const Value& v : r.values) out += " " + value_text(v);
    for (Aid a : r.annotations) out += " a" + std::to_string(a);
    out += ")";
  }
  return out + "]";
}

std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (const std::string& x : xs) out += (out.empty() ? "" : ",") + x;
  return out;
}

}  // namespace

std::string dump_database(const Database& db) {
  std::ostringstream out;
  for (const auto& [name, t] : db.catalog.tables()) {
    out << "table " << name << " next_rid=" << t.next_rid() << "\n";
    for (const ColumnSpec& c : t.def().columns) out << "  col " << c.name << " " << column_type_name(c.type) << "\n";
    for (const auto& [rid, row] : t.rows()) {
      out << "  row " << rid;
      for (const Value& v : row.values) out << " " << value_text(v);
      out << "\n";
    }
    for (const ColumnSpec& c : t.def().columns) {
      std::vector<bool> bits = db.dependencies.bitmap(name, c.name, static_cast<std::size_t>(t.max_rid()));
      if (std::find(bits.begin(), bits.end(), true) == bits.end()) continue;
      out << "  bits " << c.name << " ";
      for (bool b : bits) out << (b ? '1' : '0');
      out << "\n";
    }
  }
  for (const auto& [key, at] : db.annotations.tables()) {
    out << "anntable " << key.first << "." << key.second << " " << category_name(at.def.category)
        << " tags=" << join(at.def.required_tags) << " writers=" << join(at.def.writers) << "\n";
    for (const AnnotationRecord& r : at.records) {
      out << "  aid " << r.aid << " seq " << r.ts_seq << " " << r.ts_iso << (r.archived ? " archived" : "") << " "
          << r.body << " rects";
      for (const Rect& x : r.rects) out << " [" << x.col_lo << "," << x.col_hi << "," << x.rid_lo << "," << x.rid_hi << "]";
      out << "\n";
    }
  }
  out << "counters aid=" << db.annotations.next_aid() << " seq=" << db.annotations.next_ts_seq()
      << " op=" << db.approvals.next_op_id() << "\n";
  for (const auto& [name, def] : db.procedures.definitions()) {
    out << "procedure " << name << " " << def.builtin << " " << def.arity << "\n";
  }
  for (const DependencyRule& r : db.dependencies.rules()) {
    out << "rule " << r.id << " " << r.source_table << "(" << join(r.source_columns) << ") " << r.target_table << "("
        << join(r.target_columns) << ") " << (r.link ? r.link->source_column + "=" + r.link->target_column : "row")
        << " " << r.procedure << " " << r.executable << r.invertible << "\n";
  }
  for (const DependencyEdge& e : db.dependencies.edges()) {
    out << "edge " << e.source.table << ":" << e.source.cell.rid << "/" << e.source.cell.column << " " << e.target.table
        << ":" << e.target.cell.rid << "/" << e.target.cell.column << " " << e.procedure << " " << e.executable << "\n";
  }
  for (const auto& [table, scope] : db.approvals.scopes()) {
    out << "scope " << table << " cols=" << join(scope.columns) << " approvers=" << join(scope.approvers) << "\n";
  }
  for (const UpdateLogEntry& e : db.approvals.entries()) {
    out << "op " << e.op_id << " " << e.user << " " << e.ts << " " << e.table << " " << dml_kind_name(e.kind) << " "
        << status_name(e.status) << " by=" << e.decided_by << "@" << e.decided_ts << " mark=" << e.ann_seq_mark
        << "\n  stmt " << e.statement << "\n  inv " << e.inverse << "\n  before " << rows_text(e.before)
        << "\n  after " << rows_text(e.after) << "\n  approvers " << join(e.approvers) << " attached";
    for (Aid a : e.attached) out << " " << a;
    out << "\n";
  }
  for (const auto& [table, rows] : db.deleted) out << "deleted " << table << " " << rows_text(rows) << "\n";
  return out.str();
}

}  // namespace annodb::fixture
