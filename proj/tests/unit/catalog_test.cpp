#include <gtest/gtest.h>

#include "annodb/catalog.hpp"
#include "annodb/error.hpp"

using namespace annodb;

namespace {

Catalog gene_catalog() {
  Catalog c;
  c.create_table({"Gene", {{"GID", ColumnType::kText}, {"Len", ColumnType::kInt}, {"Score", ColumnType::kFloat}}});
  c.insert_rows("Gene", {{"JW0080", 10, 1.5}, {"JW0055", 20, Value()}, {"JW0082", Value(), 2}});
  return c;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kSyntax;
}

}  // namespace

TEST(Catalog, RidsIncreaseAndAreNeverReused) {
  Catalog c = gene_catalog();
  EXPECT_EQ(c.table("Gene").next_rid(), 4);
  c.delete_rows("Gene", [](const Row& r) { return r.rid == 3; });
  auto rids = c.insert_rows("Gene", {{"JW0100", 1, 0.5}});
  EXPECT_EQ(rids, std::vector<Rid>{4});
  EXPECT_FALSE(c.table("Gene").contains(3));
  EXPECT_EQ(c.table("Gene").max_rid(), 4);
}

TEST(Catalog, IntWidensToFloatOnInsert) {
  Catalog c = gene_catalog();
  EXPECT_EQ(c.table("Gene").find(3)->values[2], Value(2.0));
}

TEST(Catalog, SchemaValidation) {
  Catalog c = gene_catalog();
  EXPECT_EQ(code_of([&] { c.create_table({"Gene", {{"x", ColumnType::kText}}}); }), ErrorCode::kDuplicateTable);
  EXPECT_EQ(code_of([&] { c.create_table({"E", {}}); }), ErrorCode::kBadColumn);
  EXPECT_EQ(code_of([&] { c.create_table({"D", {{"a", ColumnType::kText}, {"a", ColumnType::kInt}}}); }),
            ErrorCode::kBadColumn);
  EXPECT_EQ(code_of([&] { c.create_table({"R", {{"_rid", ColumnType::kInt}}}); }), ErrorCode::kBadColumn);
  EXPECT_EQ(code_of([&] { c.table("Nope"); }), ErrorCode::kUnknownTable);
  EXPECT_EQ(code_of([&] { c.insert_rows("Gene", {{"x", 1}}); }), ErrorCode::kTypeMismatch);
  EXPECT_EQ(code_of([&] { c.insert_rows("Gene", {{"x", "1", 1.0}}); }), ErrorCode::kTypeMismatch);
}

TEST(Catalog, UpdateReportsOnlyChangedCellsToHook) {
  Catalog c = gene_catalog();
  std::vector<CellChange> seen;
  int calls = 0;
  c.set_change_hook([&](const std::string& table, std::span<const CellChange> changes) {
    EXPECT_EQ(table, "Gene");
    ++calls;
    seen.assign(changes.begin(), changes.end());
  });
  auto changes = c.update_cells("Gene", [](const Row&) { return true; }, {{1, Value(20)}});
  EXPECT_EQ(calls, 1);
  ASSERT_EQ(changes.size(), 2u);  // JW0055 already had 20
  EXPECT_EQ(changes, seen);
  EXPECT_EQ(changes[0], (CellChange{1, 1, Value(10), Value(20)}));
  EXPECT_EQ(changes[1], (CellChange{3, 1, Value(), Value(20)}));
}

TEST(Catalog, DeleteReturnsRowsInRidOrderAndRestoreReinstates) {
  Catalog c = gene_catalog();
  auto gone = c.delete_rows("Gene", [](const Row& r) { return r.rid != 2; });
  ASSERT_EQ(gone.size(), 2u);
  EXPECT_EQ(gone[0].rid, 1);
  EXPECT_EQ(gone[1].rid, 3);
  c.restore_row("Gene", 1, gone[0].values);
  EXPECT_EQ(*c.table("Gene").find(1), gone[0]);
  EXPECT_THROW(c.restore_row("Gene", 2, gone[0].values), Error);  // live
  EXPECT_THROW(c.restore_row("Gene", 9, gone[0].values), Error);  // never allocated
}

TEST(Catalog, CopiesAreIndependent) {
  Catalog a = gene_catalog();
  Catalog b = a;
  b.insert_rows("Gene", {{"x", 1, 1.0}});
  EXPECT_EQ(a.table("Gene").size(), 3u);
  EXPECT_EQ(b.table("Gene").size(), 4u);
}
