#include <gtest/gtest.h>

#include "annodb/error.hpp"
#include "support.hpp"

using namespace annodb;
using namespace annodb::fixture;

namespace {

ErrorCode failure(Engine& e, const std::string& sql) {
  try {
    e.execute_script(sql);
  } catch (const Error& err) {
    return err.code();
  }
  ADD_FAILURE() << "succeeded: " << sql;
  return ErrorCode::kSyntax;
}

std::string message(Engine& e, const std::string& sql) {
  auto results = e.execute_script(sql);
  return results.empty() ? std::string() : results.back().message;
}

std::string protein_of(Engine& e, const std::string& gid, const std::string& col) {
  auto rel = e.query("SELECT " + col + " FROM Protein WHERE GID = '" + gid + "';");
  return rel.tuples.at(0).values.at(0).to_string();
}

struct Approval : ::testing::Test {
  Approval() : engine(make_engine({"f2"})) {
    run_script(*engine, "START CONTENT APPROVAL ON Gene APPROVED BY curator;\nSET USER alice;\n");
    before = snapshot(engine->db(), "Gene");
  }
  void decide(const std::string& verb, std::int64_t op) {
    engine->set_user("curator");
    run_script(*engine, verb + " " + std::to_string(op) + ";");
    engine->set_user("alice");
  }
  std::unique_ptr<Engine> engine;
  TableSnapshot before;
};

}  // namespace

TEST(Engine, DmlMessages) {
  auto e = make_engine();
  EXPECT_EQ(message(*e, "CREATE TABLE T (a INT, b TEXT);"), "table T created");
  EXPECT_EQ(message(*e, "INSERT INTO T VALUES (1, 'x'), (2, 'y');"), "2 rows inserted");
  EXPECT_EQ(message(*e, "UPDATE T SET b = 'z' WHERE a = 1;"), "1 row updated (1 cell changed)");
  EXPECT_EQ(message(*e, "DELETE FROM T WHERE a > 0;"), "2 rows deleted");
  EXPECT_EQ(message(*e, "SET USER bob;"), "user set to bob");
  EXPECT_EQ(e->user(), "bob");
}

TEST(Engine, Errors) {
  auto e = make_engine({"f1"});
  EXPECT_EQ(failure(*e, "SELECT * FROM Nope;"), ErrorCode::kUnknownTable);
  EXPECT_EQ(failure(*e, "SELECT Nope FROM DB1_Gene;"), ErrorCode::kUnknownColumn);
  EXPECT_EQ(failure(*e, "CREATE TABLE DB1_Gene (x INT);"), ErrorCode::kDuplicateTable);
  EXPECT_EQ(failure(*e, "UPDATE DB1_Gene SET _rid = 4;"), ErrorCode::kBadColumn);
  EXPECT_EQ(failure(*e, "DROP DEPENDENCY RULE nope;"), ErrorCode::kUnknownRule);
  EXPECT_EQ(failure(*e, "END CONTENT APPROVAL ON DB1_Gene;"), ErrorCode::kNotMonitored);
}

TEST(Engine, DerivedValuesRecompute) {
  auto e = make_engine({"f2"});
  run_script(*e, "UPDATE Gene SET GSequence = 'ATGTGGTGG' WHERE GID = 'JW0080';");
  EXPECT_EQ(protein_of(*e, "JW0080", "PSequence"), "MWW");
  EXPECT_TRUE(e->db().dependencies.is_outdated("Protein", "PFunction", 1));
  EXPECT_FALSE(e->db().dependencies.is_outdated("Protein", "PFunction", 2));
  EXPECT_EQ(message(*e, "VALIDATE Protein (PFunction) WHERE GID = 'JW0080';"), "1 cell validated");
  EXPECT_FALSE(e->db().dependencies.is_outdated("Protein", "PFunction", 1));
}

TEST(Engine, ExternalRuleLeavesValueAndFlagsTarget) {
  auto e = make_engine({"f2"});
  run_script(*e, "UPDATE Protein SET PSequence = 'MK' WHERE GID = 'JW0055';");
  EXPECT_EQ(protein_of(*e, "JW0055", "PFunction"), "unknown");
  EXPECT_TRUE(e->db().dependencies.is_outdated("Protein", "PFunction", 3));
}

TEST_F(Approval, InsertDisapprovedRestoresSnapshot) {
  auto results = engine->execute_script("INSERT INTO Gene VALUES ('JW9999', 'zzz', 'ATG');");
  ASSERT_TRUE(results.back().logged_op);
  EXPECT_NE(results.back().message.find("(PENDING)"), std::string::npos);
  EXPECT_NE(snapshot(engine->db(), "Gene"), before);
  decide("DISAPPROVE", *results.back().logged_op);
  EXPECT_EQ(snapshot(engine->db(), "Gene"), before) << describe(snapshot(engine->db(), "Gene"));
}

TEST_F(Approval, UpdateDisapprovedRestoresSnapshotAndDerivedValue) {
  std::string protein = protein_of(*engine, "JW0080", "PSequence");
  auto results = engine->execute_script("UPDATE Gene SET GSequence = 'ATGTGG' WHERE GID = 'JW0080';");
  EXPECT_EQ(protein_of(*engine, "JW0080", "PSequence"), "MW");
  decide("DISAPPROVE", *results.back().logged_op);
  EXPECT_EQ(snapshot(engine->db(), "Gene"), before);
  EXPECT_EQ(protein_of(*engine, "JW0080", "PSequence"), protein);
}

TEST_F(Approval, DeleteDisapprovedRestoresRowsAndAnnotations) {
  run_script(*engine,
             "CREATE ANNOTATION TABLE Notes ON Gene;\n"
             "ADD ANNOTATION TO Gene.Notes VALUE '<Note>keep</Note>' ON (SELECT * FROM Gene WHERE GID = 'JW0014');\n");
  engine->set_user("curator");
  for (const auto* p : engine->db().approvals.pending()) run_script(*engine, "APPROVE " + std::to_string(p->op_id) + ";");
  engine->set_user("alice");
  TableSnapshot annotated = snapshot(engine->db(), "Gene");
  auto results = engine->execute_script("DELETE FROM Gene WHERE GID = 'JW0014';");
  decide("DISAPPROVE", *results.back().logged_op);
  EXPECT_EQ(snapshot(engine->db(), "Gene"), annotated) << describe(snapshot(engine->db(), "Gene"));
}

TEST_F(Approval, ApproveKeepsChange) {
  auto results = engine->execute_script("UPDATE Gene SET GName = 'x' WHERE GID = 'JW0082';");
  decide("APPROVE", *results.back().logged_op);
  EXPECT_NE(snapshot(engine->db(), "Gene"), before);
  EXPECT_TRUE(engine->db().approvals.pending().empty());
  EXPECT_EQ(failure(*engine, "SET USER curator; APPROVE " + std::to_string(*results.back().logged_op) + ";"),
            ErrorCode::kNotPending);
}

TEST_F(Approval, ApproverChangesAreLoggedApproved) {
  engine->set_user("curator");
  auto results = engine->execute_script("UPDATE Gene SET GName = 'x' WHERE GID = 'JW0082';");
  ASSERT_TRUE(results.back().logged_op);
  EXPECT_EQ(engine->db().approvals.entry(*results.back().logged_op).status, ApprovalStatus::kApproved);
  EXPECT_TRUE(engine->db().approvals.pending().empty());
}

TEST_F(Approval, NonApproverCannotDecide) {
  auto results = engine->execute_script("DELETE FROM Gene WHERE GID = 'JW0082';");
  EXPECT_EQ(failure(*engine, "APPROVE " + std::to_string(*results.back().logged_op) + ";"), ErrorCode::kNotApprover);
}

TEST_F(Approval, ConflictNeedsForce) {
  auto first = engine->execute_script("UPDATE Gene SET GName = 'x' WHERE GID = 'JW0082';");
  engine->execute_script("UPDATE Gene SET GName = 'y' WHERE GID = 'JW0082';");
  engine->set_user("curator");
  std::string op = std::to_string(*first.back().logged_op);
  EXPECT_EQ(failure(*engine, "DISAPPROVE " + op + ";"), ErrorCode::kInverseConflict);
  auto forced = engine->execute_script("DISAPPROVE " + op + " FORCE;");
  EXPECT_FALSE(forced.back().warnings.empty());
  EXPECT_EQ(engine->query("SELECT GName FROM Gene WHERE GID = 'JW0082';").tuples.at(0).values.at(0).to_string(), "ftsI");
}

TEST_F(Approval, ListPendingFiltersByApprover) {
  engine->execute_script("DELETE FROM Gene WHERE GID = 'JW0082';");
  EXPECT_EQ(engine->execute_script("LIST PENDING;").back().relation->tuples.size(), 1u);
  EXPECT_EQ(engine->execute_script("LIST PENDING FOR curator;").back().relation->tuples.size(), 1u);
  EXPECT_EQ(engine->execute_script("LIST PENDING FOR bob;").back().relation->tuples.size(), 0u);
}

TEST(Engine, UnmonitoredColumnsAreNotLogged) {
  auto e = make_engine({"f2"});
  run_script(*e, "START CONTENT APPROVAL ON Gene COLUMNS (GSequence) APPROVED BY curator;");
  auto r = e->execute_script("UPDATE Gene SET GName = 'q' WHERE GID = 'JW0080';");
  EXPECT_FALSE(r.back().logged_op);
  r = e->execute_script("UPDATE Gene SET GSequence = 'ATG' WHERE GID = 'JW0080';");
  EXPECT_TRUE(r.back().logged_op);
}
