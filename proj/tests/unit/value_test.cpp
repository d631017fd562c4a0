#include <gtest/gtest.h>

#include <cmath>

#include "annodb/error.hpp"
#include "annodb/value.hpp"

using namespace annodb;

TEST(Value, TotalOrderPutsNullFirstAndNumbersBeforeText) {
  EXPECT_LT(compare_total(Value(), Value(0)), 0);
  EXPECT_EQ(compare_total(Value(), Value()), 0);
  EXPECT_LT(compare_total(Value(5), Value("a")), 0);
  EXPECT_EQ(compare_total(Value(2), Value(2.0)), 0);
  EXPECT_LT(compare_total(Value(1), Value(1.5)), 0);
  EXPECT_GT(compare_total(Value("b"), Value("a")), 0);
}

TEST(Value, SqlComparisonHandlesNullAndWidening) {
  EXPECT_FALSE(compare_sql(Value(), Value(1)).has_value());
  EXPECT_EQ(compare_sql(Value(3), Value(3.0)), 0);
  EXPECT_LT(*compare_sql(Value("abc"), Value("abd")), 0);
  try {
    compare_sql(Value(1), Value("1"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTypeMismatch);
  }
}

TEST(Value, CoercionWidensIntToFloatOnly) {
  EXPECT_EQ(coerce_for_column(Value(3), ColumnType::kFloat, "c"), Value(3.0));
  EXPECT_EQ(coerce_for_column(Value(), ColumnType::kInt, "c"), Value());
  EXPECT_THROW(coerce_for_column(Value(1.5), ColumnType::kInt, "c"), Error);
  EXPECT_THROW(coerce_for_column(Value("x"), ColumnType::kFloat, "c"), Error);
  EXPECT_TRUE(value_fits(Value("x"), ColumnType::kText));
  EXPECT_FALSE(value_fits(Value(1), ColumnType::kText));
}

TEST(Value, LikeWildcards) {
  EXPECT_TRUE(like_match("obtained from GenoBase", "%GenoBase%"));
  EXPECT_TRUE(like_match("JW0080", "JW00_0"));
  EXPECT_FALSE(like_match("JW0080", "JW00_"));
  EXPECT_TRUE(like_match("", "%"));
  EXPECT_FALSE(like_match("abc", "a%d"));
  EXPECT_TRUE(like_match("a%c", "a%c"));
}

TEST(Value, FloatFormattingRoundTrips) {
  for (double d : {0.0, 1.0, -2.5, 0.1, 1e300, 123456789.125, 3.0e-12}) {
    std::string text = format_float(d);
    EXPECT_NE(text.find_first_of(".eEin"), std::string::npos) << text;
    EXPECT_EQ(std::stod(text), d) << text;
  }
}

TEST(Value, ColumnTypeNames) {
  for (ColumnType t : {ColumnType::kText, ColumnType::kInt, ColumnType::kFloat}) {
    EXPECT_EQ(parse_column_type(column_type_name(t)), t);
  }
  EXPECT_EQ(parse_column_type("int"), ColumnType::kInt);
  EXPECT_FALSE(parse_column_type("BLOB").has_value());
}
