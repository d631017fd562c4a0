#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "annodb/dependency.hpp"
#include "annodb/engine.hpp"

namespace annodb {

// Readable gtest output for keys used in set comparisons.
inline void PrintTo(const ColumnKey& key, std::ostream* os) { *os << to_string(key); }

}  // namespace annodb

namespace annodb::fixture {

std::filesystem::path fixture_path(const std::string& name);
std::string read_file(const std::filesystem::path& path);

Clock test_clock();

// A fresh engine with the named fixture scripts (e.g. "f1") executed in order.
std::unique_ptr<Engine> make_engine(const std::vector<std::string>& fixtures = {});
void run_script(Engine& engine, const std::string& text);

// A scratch directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Fixture F1 labels in the order the script adds them; aid i+1 is kF1Labels[i].
extern const std::vector<std::string> kF1Labels;

// Where each F1 annotation sits, written down from the fixture's prose
// description rather than read back from the store.
struct Placement {
  std::string table;
  CellSet cells;
};
std::map<std::string, Placement> f1_placements();

std::set<std::string> f1_labels(const std::set<Aid>& aids);

// Live rows plus the visible annotations of every live cell.
struct TableSnapshot {
  std::map<Rid, std::vector<Value>> rows;
  std::map<Cell, std::set<Aid>> anns;
  bool operator==(const TableSnapshot&) const = default;
};
TableSnapshot snapshot(const Database& db, const std::string& table);

// Canonical text listing of everything persistent: rows, annotation tables and
// records, procedures, rules, edges, bitmaps, approval scopes and log, delete
// log and counters.
std::string dump_database(const Database& db);

std::string describe(const TableSnapshot& s);

}  // namespace annodb::fixture
