#include <gtest/gtest.h>

#include "annodb/expression.hpp"
#include "annodb/parser.hpp"

using namespace annodb;

namespace {

EvalScope scope_of(std::map<std::string, Value> vars) {
  EvalScope s;
  s.column = [vars](const ast::ColumnRef& ref) { return vars.at(ref.name); };
  return s;
}

std::optional<bool> cond(const std::string& text, std::map<std::string, Value> vars = {}) {
  return eval_condition(parse_expression(text), scope_of(std::move(vars)));
}

AnnotationRecord record(std::string table, std::string body, std::int64_t seq, std::string iso) {
  AnnotationRecord r;
  r.table = std::move(table);
  r.body = std::move(body);
  r.ts_seq = seq;
  r.ts_iso = std::move(iso);
  return r;
}

bool atom(const std::string& cond_text, const AnnotationRecord& r) {
  ast::Statement s = parse_statement("SELECT * FROM T AWHERE " + cond_text + ";");
  return ann_record_matches(*std::get<ast::AnnSelect>(s.node).head.awhere, r);
}

}  // namespace

TEST(Expression, ThreeValuedLogic) {
  std::map<std::string, Value> v{{"n", Value()}, {"a", Value(1)}};
  EXPECT_EQ(cond("n = 1", v), std::nullopt);
  EXPECT_EQ(cond("n = 1 OR a = 1", v), true);
  EXPECT_EQ(cond("n = 1 AND a = 2", v), false);
  EXPECT_EQ(cond("n = 1 AND a = 1", v), std::nullopt);
  EXPECT_EQ(cond("NOT n = 1", v), std::nullopt);
  EXPECT_EQ(cond("n IS NULL AND a IS NOT NULL", v), true);
}

TEST(Expression, ComparisonsAndLike) {
  std::map<std::string, Value> v{{"g", Value("JW0080")}, {"x", Value(2)}, {"f", Value(2.5)}};
  EXPECT_EQ(cond("g = 'JW0080'", v), true);
  EXPECT_EQ(cond("g LIKE 'JW%'", v), true);
  EXPECT_EQ(cond("x < f", v), true);
  EXPECT_EQ(cond("x >= 2 AND x <> 3", v), true);
  EXPECT_EQ(eval_value(parse_expression("x = 2"), scope_of(v)), Value(1));
}

TEST(Expression, Aggregates) {
  std::vector<Value> in{Value(3), Value(), Value(1), Value(5)};
  EXPECT_EQ(compute_aggregate(ast::AggregateFunc::kCount, in, false), Value(3));
  EXPECT_EQ(compute_aggregate(ast::AggregateFunc::kCount, in, true), Value(4));
  EXPECT_EQ(compute_aggregate(ast::AggregateFunc::kSum, in, false), Value(9));
  EXPECT_EQ(compute_aggregate(ast::AggregateFunc::kMin, in, false), Value(1));
  EXPECT_EQ(compute_aggregate(ast::AggregateFunc::kMax, in, false), Value(5));
  EXPECT_EQ(compute_aggregate(ast::AggregateFunc::kSum, {Value(1), Value(0.5)}, false), Value(1.5));
  EXPECT_EQ(compute_aggregate(ast::AggregateFunc::kSum, {Value()}, false), Value());
  EXPECT_EQ(compute_aggregate(ast::AggregateFunc::kMax, {Value("a"), Value("c")}, false), Value("c"));
  EXPECT_TRUE(contains_aggregate(parse_expression("COUNT(*) > 1")));
  EXPECT_FALSE(contains_aggregate(parse_expression("x > 1")));
}

TEST(Expression, AnnotationAtoms) {
  AnnotationRecord r = record("GAnnotation", "<Annotation><Curator>bob</Curator>obtained from GenoBase</Annotation>", 3,
                              "2026-02-01T00:00:00Z");
  EXPECT_TRUE(atom("VALUE LIKE '%GenoBase%'", r));
  EXPECT_FALSE(atom("VALUE LIKE '%Swiss%'", r));
  EXPECT_TRUE(atom("TABLE = 'GAnnotation'", r));
  EXPECT_TRUE(atom("TS > 2", r));
  EXPECT_TRUE(atom("TS >= '2026-01-15T00:00:00Z'", r));
  EXPECT_FALSE(atom("TS < '2026-01-15T00:00:00Z'", r));
  EXPECT_TRUE(atom("TAG('Curator') = 'bob'", r));
  EXPECT_FALSE(atom("TAG('Missing') = 'bob'", r));
  EXPECT_FALSE(atom("TAG('Missing') <> 'bob'", r));
  EXPECT_TRUE(atom("NOT TAG('Missing') = 'bob'", r));
  EXPECT_TRUE(atom("TABLE = 'x' OR TS = 3", r));
}
