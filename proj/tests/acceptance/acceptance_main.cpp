// Runs the ten acceptance criteria and prints one PASS/FAIL line each.
#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "annodb/error.hpp"
#include "annodb/naive_annotation_store.hpp"
#include "annodb/parser.hpp"
#include "annodb/render.hpp"
#include "annodb/rle.hpp"
#include "annodb/session.hpp"
#include "annodb/storage.hpp"
#include "ast_gen.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace annodb;
using namespace annodb::fixture;
namespace fs = std::filesystem;

namespace {

// Collects failed checks for one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++count_;
  }
  bool ok() const { return count_ == 0; }
  std::string summary() const {
    std::string s;
    for (const std::string& f : failures_) s += (s.empty() ? "" : "; ") + f;
    if (count_ > failures_.size()) s += "; +" + std::to_string(count_ - failures_.size()) + " more";
    return s;
  }

 private:
  std::vector<std::string> failures_;
  std::size_t count_ = 0;
};

using Labels = std::set<std::string>;

std::string show(const Labels& l) {
  std::string s = "{";
  for (const std::string& x : l) s += (s.size() > 1 ? "," : "") + x;
  return s + "}";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string cell_text(Engine& e, const std::string& sql) {
  auto rel = e.query(sql);
  return rel.tuples.empty() ? "<none>" : rel.tuples[0].values.at(0).to_string();
}

// 1. Annotated INTERSECT equals the three-step rewrite over the naive encoding.
void criterion1(Check& c, std::string& note) {
  auto t0 = std::chrono::steady_clock::now();
  auto engine = make_engine({"f1"});
  auto rel = engine->query(
      "SELECT GID,GName,GSequence FROM DB1_Gene INTERSECT SELECT GID,GName,GSequence FROM DB2_Gene ANNOTATION(*);");
  double elapsed = seconds_since(t0);

  std::set<NaiveRow> got;
  for (const auto& t : rel.tuples) {
    NaiveRow r{t.values, {}};
    for (const auto& a : t.anns) r.anns.push_back(f1_labels(a));
    got.insert(r);
  }
  auto placements = f1_placements();
  std::map<std::string, Placement> p1, p2;
  for (const auto& [label, p] : placements) (p.table == "DB1_Gene" ? p1 : p2)[label] = p;
  auto db1 = naive_encode(engine->db().catalog.table("DB1_Gene"), p1);
  auto db2 = naive_encode(engine->db().catalog.table("DB2_Gene"), p2);
  std::set<NaiveRow> expected = naive_three_step(db1, db2);

  std::set<std::string> keys;
  for (const auto& r : got) keys.insert(r.values[0].to_string());
  c.expect(keys == std::set<std::string>{"JW0080", "JW0055"}, "tuples " + show(keys));
  c.expect(got == expected, "differs from three-step rewrite");
  Labels all;
  for (const auto& r : got) {
    for (const auto& a : r.anns) all.insert(a.begin(), a.end());
  }
  c.expect(all.count("A1") && all.count("B5"), "missing union " + show(all));
  c.expect(elapsed < 1.0, "took " + std::to_string(elapsed) + " s");
  note = std::to_string(got.size()) + " tuples, " + std::to_string(elapsed * 1000).substr(0, 5) + " ms";
}

Labels query_labels(Engine& e, const std::string& sql) { return f1_labels(e.query(sql).aids()); }

const char* kSelectJW0080 = "SELECT * FROM DB2_Gene ANNOTATION(GAnnotation) WHERE GID = 'JW0080';";

// 2. Projection, selection and PROMOTE propagate exactly the described sets.
void criterion2(Check& c, std::string&) {
  auto e = make_engine({"f1"});
  Labels proj = query_labels(*e, "SELECT GID FROM DB2_Gene ANNOTATION(GAnnotation);");
  c.expect(proj == Labels{"B1", "B4", "B5"}, "projection " + show(proj));
  Labels sel = query_labels(*e, kSelectJW0080);
  c.expect(sel == Labels{"B1", "B3", "B5"}, "selection " + show(sel));
  Labels plain = query_labels(*e, "SELECT GID FROM DB1_Gene ANNOTATION(GAnnotation) WHERE GID = 'JW0080';");
  Labels promoted =
      query_labels(*e, "SELECT GID FROM DB1_Gene ANNOTATION(GAnnotation) WHERE GID = 'JW0080' PROMOTE GSequence TO GID;");
  c.expect(!plain.count("A3") && promoted.count("A3"), "promote " + show(plain) + " -> " + show(promoted));
}

// 3. The column annotation is one region; the compact store matches the naive one.
void criterion3(Check& c, std::string& note) {
  auto t0 = std::chrono::steady_clock::now();
  auto e = make_engine({"f1"});
  const AnnotationRecord* b3 = e->db().annotations.record(6);
  c.expect(b3 && b3->rects.size() == 1, "B3 region count");
  if (b3 && b3->rects.size() == 1) c.expect(b3->rects[0].cell_count() == 5, "B3 cell count");
  NaiveAnnotationStore naive;
  naive.add({"GAnnotation"}, "<Annotation>obtained from GenoBase</Annotation>", f1_placements()["B3"].cells);
  c.expect(naive.entry_count() == 5, "naive entries " + std::to_string(naive.entry_count()));

  std::mt19937_64 rng(3);
  auto report = dual_store_run(rng, 1000, 40, 6);
  double elapsed = seconds_since(t0);
  c.expect(report.mismatches == 0, std::to_string(report.mismatches) + " mismatching lookups");
  c.expect(elapsed < 30.0, "took " + std::to_string(elapsed) + " s");
  note = "1 region vs 5 entries; " + std::to_string(report.lookups) + " lookups, " +
         std::to_string(report.compact_rects) + " rects vs " + std::to_string(report.naive_entries) + " entries";
}

// 4. Archived annotations stop propagating until restored.
void criterion4(Check& c, std::string&) {
  auto e = make_engine({"f1"});
  run_script(*e, "ARCHIVE ANNOTATION FROM DB2_Gene.GAnnotation ON (SELECT * FROM DB2_Gene WHERE GID = 'JW0080');");
  for (const char* q : {kSelectJW0080, "SELECT GID FROM DB2_Gene ANNOTATION(GAnnotation);",
                        "SELECT * FROM DB2_Gene ANNOTATION(GAnnotation);"}) {
    Labels l = query_labels(*e, q);
    c.expect(!l.count("B5"), std::string("B5 visible in ") + q);
  }
  run_script(*e, "RESTORE ANNOTATION FROM DB2_Gene.GAnnotation ON (SELECT * FROM DB2_Gene WHERE GID = 'JW0080');");
  Labels sel = query_labels(*e, kSelectJW0080);
  c.expect(sel == Labels{"B1", "B3", "B5"}, "after restore " + show(sel));
}

std::string bits_text(const std::vector<bool>& b) {
  std::string s;
  for (bool x : b) s += x ? '1' : '0';
  return s;
}

// 5. Recompute through P, mark through LabExp, list the derived rule.
void criterion5(Check& c, std::string& note) {
  TempDir dir;
  cli::Session s(dir.path(), test_clock());
  std::ostringstream out, err;
  s.run(read_file(fixture_path("f2.asql")), out, err, true);
  Engine& e = s.engine();
  run_script(e,
             "UPDATE Gene SET GSequence = 'ATGTGGTGG' WHERE GID = 'JW0080';\n"
             "UPDATE Gene SET GSequence = 'ATGAAATTT' WHERE GID = 'JW0082';\n");
  c.expect(cell_text(e, "SELECT PSequence FROM Protein WHERE GID = 'JW0080';") == "MWW", "JW0080 PSequence");
  c.expect(cell_text(e, "SELECT PSequence FROM Protein WHERE GID = 'JW0082';") == "MKF", "JW0082 PSequence");
  std::string ps = bits_text(e.db().dependencies.bitmap("Protein", "PSequence", 4));
  std::string pf = bits_text(e.db().dependencies.bitmap("Protein", "PFunction", 4));
  c.expect(ps == "0000", "PSequence bits " + ps);
  c.expect(pf == "1100", "PFunction bits " + pf);
  std::string rules = s.eval({"\\rules", true, 1});
  c.expect(rules.find("Gene(GSequence) => Protein(PFunction)") != std::string::npos &&
               rules.find("[EXEC EXTERNAL, INV NO]") != std::string::npos,
           "derived rule missing from \\rules");
  note = "PSequence " + ps + ", PFunction " + pf;
}

std::vector<DependencyRule> random_dag(std::mt19937_64& rng, Catalog& catalog, DependencyEngine& deps,
                                       std::vector<ColumnKey>& columns) {
  ProcedureRegistry procs;
  for (int t = 0; t < 3; ++t) {
    TableDef def{"T" + std::to_string(t), {{"k", ColumnType::kInt}}};
    for (int col = 0; col < 4; ++col) def.columns.push_back({"c" + std::to_string(col), ColumnType::kText});
    catalog.create_table(def);
    for (int col = 0; col < 4; ++col) columns.push_back({def.name, "c" + std::to_string(col)});
  }
  int n = std::uniform_int_distribution<int>(0, 8)(rng);
  for (int i = 0; i < n; ++i) {
    std::size_t a = std::uniform_int_distribution<std::size_t>(0, columns.size() - 2)(rng);
    std::size_t b = std::uniform_int_distribution<std::size_t>(a + 1, columns.size() - 1)(rng);
    DependencyRule r;
    r.id = "r" + std::to_string(i);
    r.source_table = columns[a].table;
    r.source_columns = {columns[a].column};
    r.target_table = columns[b].table;
    r.target_columns = {columns[b].column};
    if (r.source_table != r.target_table) r.link = ast::LinkKeys{"k", "k"};
    r.procedure = "p" + std::to_string(std::uniform_int_distribution<int>(0, 2)(rng));
    r.executable = false;
    deps.add_rule(catalog, procs, r);
  }
  return deps.rules();
}

// 6. Closures on F2 and on random rule DAGs against brute-force reachability.
void criterion6(Check& c, std::string&) {
  auto e = make_engine({"f2"});
  std::set<ColumnKey> expected{{"Protein", "PSequence"}, {"Protein", "PFunction"}};
  const auto& deps = e->db().dependencies;
  c.expect(deps.attribute_closure(e->db().catalog, {"Gene", "GSequence"}) == expected, "attribute closure");
  c.expect(deps.procedure_closure("P") == expected, "procedure closure");

  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    Catalog catalog;
    DependencyEngine d;
    std::vector<ColumnKey> columns;
    auto rules = random_dag(rng, catalog, d, columns);
    for (const ColumnKey& col : columns) {
      c.expect(d.attribute_closure(catalog, col) == closure_by_fixpoint(rules, col),
               "trial " + std::to_string(trial) + " " + col.table + "." + col.column);
    }
    for (int p = 0; p < 3; ++p) {
      std::string name = "p" + std::to_string(p);
      c.expect(d.procedure_closure(name) == procedure_closure_by_paths(rules, name),
               "trial " + std::to_string(trial) + " procedure " + name);
    }
  }
}

// 7. RLE identity, run counts and bitmap file reload.
void criterion7(Check& c, std::string& note) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 10000; ++i) {
    std::size_t len = std::uniform_int_distribution<std::size_t>(0, 512)(rng);
    // Mix dense noise with long runs so both regimes are covered.
    int stickiness = std::uniform_int_distribution<int>(1, 64)(rng);
    std::vector<bool> bits;
    bool v = rng() & 1;
    for (std::size_t k = 0; k < len; ++k) {
      if (std::uniform_int_distribution<int>(1, stickiness)(rng) == 1) v = rng() & 1;
      bits.push_back(v);
    }
    rle::Runs runs = rle::encode(bits);
    c.expect(rle::decode(runs) == bits, "decode(encode) at vector " + std::to_string(i));
    std::size_t want = bits.empty() ? 0 : change_count(bits) + 1;
    c.expect(runs.lengths.size() == want, "run count at vector " + std::to_string(i));
    c.expect(rle::from_text(rle::to_text(runs)) == runs, "text form at vector " + std::to_string(i));
  }

  auto e = make_engine({"f2"});
  run_script(*e,
             "INSERT INTO Protein VALUES ('JW1', 'a', 'M', 'f'), ('JW2', 'b', 'M', 'f'), ('JW3', 'c', 'M', 'f');\n"
             "UPDATE Protein SET PSequence = 'MK' WHERE GID = 'JW0080' OR GID = 'JW0055' OR GID = 'JW2';\n");
  TempDir dir;
  save(e->db(), dir.path());
  fs::path bitmap = dir.path() / "deps" / "bitmaps" / "Protein.rle";
  c.expect(fs::exists(bitmap), "no Protein.rle written");
  Database back = open_or_create(dir.path());
  // Bitmaps are persisted padded to the table's max rid; compare at that length.
  for (const auto& [table, columns] : e->db().dependencies.bitmaps()) {
    auto length = static_cast<std::size_t>(e->db().catalog.table(table).max_rid());
    for (const auto& [column, bits] : columns) {
      c.expect(back.dependencies.bitmaps().at(table).at(column) == e->db().dependencies.bitmap(table, column, length),
               table + "." + column + " differs after reload");
    }
  }
  TempDir again;
  save(back, again.path());
  c.expect(fs::exists(bitmap) && read_file(again.path() / "deps" / "bitmaps" / "Protein.rle") == read_file(bitmap),
           ".rle file not byte-identical after re-save");
  note = "10000 vectors; " + bits_text(back.dependencies.bitmap("Protein", "PFunction", 7)) + " reloaded";
}

// 8. Apply-then-disapprove restores the monitored table.
void criterion8(Check& c, std::string& note) {
  auto t0 = std::chrono::steady_clock::now();
  auto e = make_engine({"f2"});
  run_script(*e,
             "CREATE ANNOTATION TABLE Notes ON Gene;\n"
             "ADD ANNOTATION TO Gene.Notes VALUE '<Note>row</Note>' ON (SELECT * FROM Gene WHERE GID = 'JW0014');\n"
             "ADD ANNOTATION TO Gene.Notes VALUE '<Note>col</Note>' ON (SELECT GSequence FROM Gene);\n"
             "START CONTENT APPROVAL ON Gene APPROVED BY curator;\n");
  std::mt19937_64 rng(8);
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  const char* letters = "ACGT";
  auto seq = [&] {
    std::string s = "ATG";
    int n = 3 * (1 + pick(5));
    for (int i = 0; i < n; ++i) s += letters[pick(4)];
    return s;
  };
  std::size_t logged = 0, by_kind[3] = {0, 0, 0};
  for (int i = 0; i < 500; ++i) {
    e->set_user("alice");
    const Table& gene = e->db().catalog.table("Gene");
    std::vector<Rid> live;
    for (const auto& [rid, row] : gene.rows()) live.push_back(rid);
    Rid target = live.empty() ? 1 : live[pick(static_cast<int>(live.size()))];
    std::string where = pick(3) == 0 ? "GID = 'JW0055' OR _rid = " + std::to_string(target)
                                     : "_rid = " + std::to_string(target);
    std::string sql;
    switch (pick(3)) {
      case 0: {
        sql = "INSERT INTO Gene VALUES ('JWX" + std::to_string(i) + "', 'n" + std::to_string(i) + "', '" + seq() + "')";
        if (pick(2)) sql += ", ('JWY" + std::to_string(i) + "', NULL, '" + seq() + "')";
        sql += ";";
        break;
      }
      case 1: {
        const char* cols[] = {"GID", "GName", "GSequence"};
        int col = pick(3);
        std::string value = col == 2 ? seq() : "v" + std::to_string(i);
        sql = "UPDATE Gene SET " + std::string(cols[col]) + " = '" + value + "' WHERE " + where + ";";
        break;
      }
      default:
        sql = "DELETE FROM Gene WHERE " + where + ";";
    }
    TableSnapshot before = snapshot(e->db(), "Gene");
    std::optional<std::int64_t> op;
    try {
      op = e->execute_script(sql).back().logged_op;
    } catch (const std::exception& ex) {
      c.expect(false, sql + ": " + ex.what());
      continue;
    }
    if (!op) {
      c.expect(snapshot(e->db(), "Gene") == before, "unlogged statement changed data: " + sql);
      continue;
    }
    ++logged;
    ++by_kind[static_cast<int>(e->db().approvals.entry(*op).kind)];
    e->set_user("curator");
    try {
      e->execute_script("DISAPPROVE " + std::to_string(*op) + ";");
    } catch (const std::exception& ex) {
      c.expect(false, "disapprove " + sql + ": " + ex.what());
      continue;
    }
    TableSnapshot after = snapshot(e->db(), "Gene");
    c.expect(after == before, "snapshot differs after " + sql + "\n" + describe(before) + "---\n" + describe(after));
  }

  // Approvers' own changes are logged but never pending.
  e->set_user("curator");
  std::size_t pending_before = e->db().approvals.pending().size();
  for (int i = 0; i < 20; ++i) {
    run_script(*e, "UPDATE Gene SET GName = 'c" + std::to_string(i) + "' WHERE GID = 'JW0082';");
    run_script(*e, "INSERT INTO Gene VALUES ('JWC" + std::to_string(i) + "', 'x', 'ATG');");
    run_script(*e, "DELETE FROM Gene WHERE GID = 'JWC" + std::to_string(i) + "';");
  }
  c.expect(e->db().approvals.pending().size() == pending_before, "approver DML left pending entries");

  // Disapproving a sequence update reruns P and re-marks LabExp's target.
  run_script(*e, "VALIDATE Protein (PFunction);");
  std::string protein = cell_text(*e, "SELECT PSequence FROM Protein WHERE GID = 'JW0080';");
  e->set_user("alice");
  auto upd = e->execute_script("UPDATE Gene SET GSequence = 'ATGTGGTGG' WHERE GID = 'JW0080';");
  c.expect(cell_text(*e, "SELECT PSequence FROM Protein WHERE GID = 'JW0080';") == "MWW", "update did not recompute");
  run_script(*e, "VALIDATE Protein (PFunction);");
  e->set_user("curator");
  if (upd.back().logged_op) run_script(*e, "DISAPPROVE " + std::to_string(*upd.back().logged_op) + ";");
  c.expect(upd.back().logged_op.has_value(), "sequence update not logged");
  c.expect(cell_text(*e, "SELECT PSequence FROM Protein WHERE GID = 'JW0080';") == protein,
           "disapproval did not recompute PSequence");
  c.expect(e->db().dependencies.is_outdated("Protein", "PFunction", 1), "disapproval did not mark PFunction");
  c.expect(!e->db().dependencies.is_outdated("Protein", "PFunction", 2), "disapproval marked an unrelated row");

  double elapsed = seconds_since(t0);
  c.expect(elapsed < 60.0, "took " + std::to_string(elapsed) + " s");
  note = std::to_string(logged) + " logged (" + std::to_string(by_kind[0]) + " ins, " + std::to_string(by_kind[1]) +
         " upd, " + std::to_string(by_kind[2]) + " del), " + std::to_string(elapsed).substr(0, 4) + " s";
}

std::vector<std::string> nonempty_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

// 9. Goldens, render/parse round trips and fuzzing.
void criterion9(Check& c, std::string& note) {
  fs::path golden = fs::path(ANNODB_FIXTURE_DIR).parent_path() / "golden";
  std::size_t forms = 0;
  for (const char* name : {"annotation_tables", "annotation_commands", "select", "dependency", "approval"}) {
    auto stmts = parse_script(read_file(golden / (std::string(name) + ".asql")));
    auto expected = nonempty_lines(read_file(golden / (std::string(name) + ".expected")));
    c.expect(stmts.size() == expected.size(), std::string(name) + " statement count");
    for (std::size_t i = 0; i < std::min(stmts.size(), expected.size()); ++i) {
      std::string text = render_statement(stmts[i]);
      c.expect(text == expected[i], std::string(name) + ": " + text);
      c.expect(parse_statement(text) == stmts[i], std::string(name) + " round trip: " + text);
      ++forms;
    }
  }
  AstGenerator gen(20260101);
  for (int i = 0; i < 500; ++i) {
    ast::Statement s = gen.statement();
    std::string text = render_statement(s);
    try {
      c.expect(parse_statement(text) == s, "round trip: " + text);
    } catch (const std::exception& ex) {
      c.expect(false, text + ": " + ex.what());
    }
  }
  std::mt19937_64 rng(9);
  AstGenerator mutate(99);
  std::size_t accepted = 0;
  for (int i = 0; i < 100000; ++i) {
    std::string input;
    if (i % 2 == 0) {
      std::size_t len = std::uniform_int_distribution<std::size_t>(0, 96)(rng);
      for (std::size_t k = 0; k < len; ++k) input += static_cast<char>(std::uniform_int_distribution<int>(0, 255)(rng));
    } else {
      input = render_statement(mutate.statement());
      int edits = std::uniform_int_distribution<int>(1, 4)(rng);
      for (int k = 0; k < edits && !input.empty(); ++k) {
        std::size_t at = std::uniform_int_distribution<std::size_t>(0, input.size() - 1)(rng);
        switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
          case 0: input.erase(at, 1); break;
          case 1: input.insert(at, 1, "();,'\"-.*\\"[std::uniform_int_distribution<int>(0, 10)(rng)]); break;
          case 2: input.insert(at, input.substr(0, at)); break;
          default: input.resize(at); break;
        }
      }
    }
    try {
      parse_script(input);
      ++accepted;
    } catch (const Error&) {
    } catch (const std::exception& ex) {
      c.expect(false, std::string("non-annodb exception: ") + ex.what());
    }
  }
  note = std::to_string(forms) + " golden forms, 500 ASTs, 100000 fuzz inputs (" + std::to_string(accepted) + " parsed)";
}

// 10. Save and reopen reproduces every listing.
void criterion10(Check& c, std::string&) {
  auto roundtrip = [&](const Database& db, const std::string& what) {
    TempDir dir;
    save(db, dir.path());
    std::string want = dump_database(db);
    std::string got = dump_database(open_or_create(dir.path()));
    c.expect(got == want, what + " listing differs");
  };
  roundtrip(make_engine({"f1"})->db(), "F1");
  std::mt19937_64 rng(10);
  for (int i = 0; i < 100; ++i) {
    Engine e(Database{}, test_clock());
    try {
      run_script(e, random_database_script(rng));
    } catch (const std::exception& ex) {
      c.expect(false, "random database " + std::to_string(i) + ": " + ex.what());
      continue;
    }
    roundtrip(e.db(), "random database " + std::to_string(i));
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Check&, std::string&)>>> criteria = {
      {"annotated intersect equals manual rewrite", criterion1},
      {"projection, selection and promote propagation", criterion2},
      {"compact region storage", criterion3},
      {"archive and restore", criterion4},
      {"dependency recompute and outdated bits", criterion5},
      {"attribute and procedure closure", criterion6},
      {"run-length encoded bitmaps", criterion7},
      {"content approval round trip", criterion8},
      {"parser goldens, round trip and fuzz", criterion9},
      {"persistence round trip", criterion10},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check check;
    std::string note;
    try {
      criteria[i].second(check, note);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    std::cout << "criterion " << i + 1 << ": " << (check.ok() ? "PASS" : "FAIL") << " " << criteria[i].first;
    if (!check.ok()) std::cout << " [" << check.summary() << "]";
    else if (!note.empty()) std::cout << " (" << note << ")";
    std::cout << std::endl;
    failed += check.ok() ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
