#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "annodb/error.hpp"
#include "annodb/storage.hpp"
#include "oracles.hpp"
#include "support.hpp"
#include "json.hpp"

using namespace annodb;
using namespace annodb::fixture;

namespace {

std::string reload_dump(const Database& db, const TempDir& dir) {
  save(db, dir.path());
  return dump_database(open_or_create(dir.path()));
}

ErrorCode open_error(const std::filesystem::path& p) {
  try {
    open_or_create(p);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "opened";
  return ErrorCode::kSyntax;
}

}  // namespace

TEST(Storage, MissingDirectoryIsEmptyDatabase) {
  TempDir dir;
  Database db = open_or_create(dir.path() / "fresh");
  EXPECT_TRUE(db.catalog.tables().empty());
}

TEST(Storage, FixturesSurviveReopen) {
  for (auto fixtures : std::vector<std::vector<std::string>>{{"f1"}, {"f2"}}) {
    auto engine = make_engine(fixtures);
    TempDir dir;
    EXPECT_EQ(reload_dump(engine->db(), dir), dump_database(engine->db()));
  }
}

TEST(Storage, ApprovalStateSurvivesReopen) {
  auto engine = make_engine({"f2"});
  run_script(*engine,
             "START CONTENT APPROVAL ON Gene APPROVED BY curator;\n"
             "UPDATE Gene SET GSequence = 'ATGATG' WHERE GID = 'JW0080';\n"
             "DELETE FROM Gene WHERE GID = 'JW0014';\n");
  TempDir dir;
  EXPECT_EQ(reload_dump(engine->db(), dir), dump_database(engine->db()));
}

TEST(Storage, SaveIsIdempotent) {
  auto engine = make_engine({"f1"});
  TempDir dir;
  save(engine->db(), dir.path());
  Database once = open_or_create(dir.path());
  save(once, dir.path());
  EXPECT_EQ(dump_database(open_or_create(dir.path())), dump_database(engine->db()));
}

TEST(Storage, RandomDatabasesRoundTrip) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 20; ++i) {
    Engine engine(Database{}, test_clock());
    std::string script = random_database_script(rng);
    run_script(engine, script);
    TempDir dir;
    ASSERT_EQ(reload_dump(engine.db(), dir), dump_database(engine.db())) << script;
  }
}

TEST(Storage, VersionAndCorruption) {
  auto engine = make_engine({"f1"});
  TempDir dir;
  save(engine->db(), dir.path());
  auto catalog = dir.path() / "catalog.json";
  std::string text = read_file(catalog);

  auto j = nlohmann::json::parse(text);
  j["version"] = 99;
  std::ofstream(catalog) << j.dump();
  EXPECT_EQ(open_error(dir.path()), ErrorCode::kVersionMismatch);

  std::ofstream(catalog) << "{not json";
  EXPECT_EQ(open_error(dir.path()), ErrorCode::kCorruptFormat);

  j["version"] = kFormatVersion;
  j["format"] = "other";
  std::ofstream(catalog) << j.dump();
  EXPECT_EQ(open_error(dir.path()), ErrorCode::kCorruptFormat);
}

TEST(Storage, BitmapText) {
  std::map<std::string, std::vector<bool>> cols{{"A", {true, true, false, true}}, {"B", {}}, {"C", {false, false}}};
  std::string text = write_bitmap_text(cols);
  EXPECT_EQ(text.rfind("RLEBM v1\n", 0), 0u);
  EXPECT_EQ(read_bitmap_text(text), cols);
  EXPECT_THROW(read_bitmap_text("nope\n"), Error);
  EXPECT_THROW(read_bitmap_text("RLEBM v1\ncol=A first=1\n"), Error);
}

TEST(Storage, FileNamesAreEscaped) {
  EXPECT_EQ(encode_file_name("Gene"), "Gene");
  EXPECT_NE(encode_file_name("a/b").find('%'), std::string::npos);
  EXPECT_NE(encode_file_name("a b"), encode_file_name("a_b"));
}
