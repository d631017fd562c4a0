#include <gtest/gtest.h>

#include "annodb/annotation_store.hpp"
#include "annodb/error.hpp"
#include "annodb/naive_annotation_store.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace annodb;

namespace {

const char* kTs = "2026-01-01T00:00:00Z";

struct StoreFixture : ::testing::Test {
  StoreFixture() {
    catalog.create_table({"G", {{"GID", ColumnType::kText}, {"GName", ColumnType::kText}, {"GSequence", ColumnType::kText}}});
    catalog.insert_rows("G", {{"a", "x", "s"}, {"b", "y", "t"}, {"c", "z", "u"}, {"d", "w", "v"}, {"e", "q", "r"}});
    store.create_table({"G", "GAnnotation", AnnotationCategory::kComment, {}, {}}, catalog);
  }
  CellSet column(std::size_t c) const {
    CellSet out;
    for (Rid r = 1; r <= 5; ++r) out.insert({r, c});
    return out;
  }
  std::set<Aid> at(Rid rid, std::size_t col, LookupOptions opts = {}) const {
    std::set<Aid> out;
    for (const AnnotationRecord* r : store.annotations_at("G", {rid, col}, opts)) out.insert(r->aid);
    return out;
  }
  Catalog catalog;
  AnnotationStore store;
};

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

TEST_F(StoreFixture, ColumnAnnotationIsOneRegion) {
  auto aids = store.add("G", {"GAnnotation"}, "<Annotation>obtained from GenoBase</Annotation>", column(2), "u", kTs);
  ASSERT_EQ(aids.size(), 1u);
  const AnnotationRecord* r = store.record(aids[0]);
  ASSERT_EQ(r->rects.size(), 1u);
  EXPECT_EQ(r->rects[0].cell_count(), 5u);
  EXPECT_EQ(r->ts_seq, 1);

  NaiveAnnotationStore naive;
  naive.add({"GAnnotation"}, r->body, column(2));
  EXPECT_EQ(naive.entry_count(), 5u);
}

TEST_F(StoreFixture, LookupFollowsRegions) {
  Aid col = store.add("G", {"GAnnotation"}, "<a>col</a>", column(2), "u", kTs)[0];
  Aid row = store.add("G", {"GAnnotation"}, "<a>row</a>", {{1, 0}, {1, 1}, {1, 2}}, "u", kTs)[0];
  EXPECT_EQ(at(1, 2), (std::set<Aid>{col, row}));
  EXPECT_EQ(at(1, 0), (std::set<Aid>{row}));
  EXPECT_TRUE(at(2, 0).empty());
}

TEST_F(StoreFixture, ArchiveUsesContainment) {
  Aid col = store.add("G", {"GAnnotation"}, "<a>col</a>", column(2), "u", kTs)[0];
  Aid cell = store.add("G", {"GAnnotation"}, "<a>cell</a>", {{1, 2}}, "u", kTs)[0];
  const Table& t = catalog.table("G");
  // Only the single-cell annotation lies entirely inside the target.
  EXPECT_EQ(store.archive(t, {"GAnnotation"}, {{1, 2}}, std::nullopt), 1u);
  EXPECT_TRUE(store.record(cell)->archived);
  EXPECT_FALSE(store.record(col)->archived);
  EXPECT_EQ(at(1, 2), (std::set<Aid>{col}));
  LookupOptions all;
  all.include_archived = true;
  EXPECT_EQ(at(1, 2, all), (std::set<Aid>{col, cell}));
  EXPECT_EQ(store.restore(t, {"GAnnotation"}, column(2), std::nullopt), 1u);
  EXPECT_EQ(at(1, 2), (std::set<Aid>{col, cell}));
}

TEST_F(StoreFixture, TimeWindowsOnSequenceAndIso) {
  store.add("G", {"GAnnotation"}, "<a>1</a>", {{1, 0}}, "u", "2026-01-01T00:00:00Z");
  store.add("G", {"GAnnotation"}, "<a>2</a>", {{1, 0}}, "u", "2026-03-01T00:00:00Z");
  store.add("G", {"GAnnotation"}, "<a>3</a>", {{1, 0}}, "u", "2026-06-01T00:00:00Z");
  const Table& t = catalog.table("G");
  EXPECT_EQ(store.archive(t, {"GAnnotation"}, {{1, 0}}, TimeWindow{Value(2), Value(3)}), 2u);
  EXPECT_EQ(at(1, 0), (std::set<Aid>{1}));
  EXPECT_EQ(store.restore(t, {"GAnnotation"}, {{1, 0}},
                          TimeWindow{Value("2026-02-01T00:00:00Z"), Value("2026-04-01T00:00:00Z")}),
            1u);
  EXPECT_EQ(at(1, 0), (std::set<Aid>{1, 2}));
  EXPECT_EQ(code_of([] { TimeWindow{Value(5), Value(2)}.validate(); }), ErrorCode::kInvertedRange);
  EXPECT_EQ(code_of([] { TimeWindow{Value(1), Value("2026-01-01T00:00:00Z")}.validate(); }), ErrorCode::kTypeMismatch);
}

TEST_F(StoreFixture, TableConstraints) {
  store.create_table({"G", "Curated", AnnotationCategory::kProvenance, {"Curator"}, {"alice"}}, catalog);
  EXPECT_EQ(code_of([&] { store.add("G", {"Curated"}, "<a><Curator>x</Curator></a>", {{1, 0}}, "bob", kTs); }),
            ErrorCode::kWriterForbidden);
  EXPECT_EQ(code_of([&] { store.add("G", {"Curated"}, "<a>no curator</a>", {{1, 0}}, "alice", kTs); }),
            ErrorCode::kMissingRequiredTag);
  EXPECT_EQ(code_of([&] { store.add("G", {"GAnnotation"}, "not xml", {{1, 0}}, "alice", kTs); }),
            ErrorCode::kMalformedXml);
  EXPECT_EQ(code_of([&] { store.add("G", {"GAnnotation"}, "<a/>", {}, "alice", kTs); }), ErrorCode::kEmptyTarget);
  EXPECT_EQ(code_of([&] { store.add("G", {"Nope"}, "<a/>", {{1, 0}}, "alice", kTs); }),
            ErrorCode::kUnknownAnnotationTable);
  EXPECT_NO_THROW(store.add("G", {"Curated"}, "<a><Curator>x</Curator></a>", {{1, 0}}, "alice", kTs));
}

TEST_F(StoreFixture, CreateTableErrors) {
  EXPECT_EQ(code_of([&] { store.create_table({"G", "GAnnotation", AnnotationCategory::kComment, {}, {}}, catalog); }),
            ErrorCode::kDuplicate);
  EXPECT_EQ(code_of([&] { store.create_table({"Nope", "x", AnnotationCategory::kComment, {}, {}}, catalog); }),
            ErrorCode::kUnknownTable);
  EXPECT_EQ(code_of([&] { store.create_table({"G", "_outdated", AnnotationCategory::kComment, {}, {}}, catalog); }),
            ErrorCode::kSystemTable);
  EXPECT_EQ(code_of([&] { store.create_table({"G", "sys", AnnotationCategory::kSystem, {}, {}}, catalog); }),
            ErrorCode::kSystemTable);
  EXPECT_NO_THROW(store.create_table({"G", "_outdated", AnnotationCategory::kSystem, {}, {}}, catalog, true));
}

TEST_F(StoreFixture, DropReturnsRecordCount) {
  for (int i = 0; i < 5; ++i) store.add("G", {"GAnnotation"}, "<a/>", {{1, 0}}, "u", kTs);
  EXPECT_EQ(store.drop_table("G", "GAnnotation"), 5u);
  EXPECT_FALSE(store.has_table("G", "GAnnotation"));
  EXPECT_TRUE(at(1, 0).empty());
}

TEST_F(StoreFixture, MultipleTablesGetOneRecordEach) {
  store.create_table({"G", "Other", AnnotationCategory::kComment, {}, {}}, catalog);
  auto aids = store.add("G", {"GAnnotation", "Other"}, "<a/>", {{2, 1}}, "u", kTs);
  ASSERT_EQ(aids.size(), 2u);
  LookupOptions only;
  only.tables = {"Other"};
  EXPECT_EQ(at(2, 1, only), (std::set<Aid>{aids[1]}));
  EXPECT_LT(store.record(aids[0])->ts_seq, store.record(aids[1])->ts_seq);
}

TEST_F(StoreFixture, OrphansAfterRowDeletion) {
  Aid a = store.add("G", {"GAnnotation"}, "<a/>", {{4, 0}}, "u", kTs)[0];
  catalog.delete_rows("G", [](const Row& r) { return r.rid == 4; });
  auto orphans = store.orphaned(catalog);
  ASSERT_EQ(orphans.size(), 1u);
  EXPECT_EQ(orphans[0]->aid, a);
  // Regions are kept so a restored row gets its annotation back.
  EXPECT_EQ(store.record(a)->rects, (std::vector<Rect>{{0, 0, 4, 4}}));
}

TEST(DualStore, RandomOperationsAgree) {
  std::mt19937_64 rng(77);
  auto report = fixture::dual_store_run(rng, 200, 12, 4);
  EXPECT_EQ(report.mismatches, 0u);
  EXPECT_GT(report.lookups, 0u);
  EXPECT_LE(report.compact_rects, report.naive_entries);
}
