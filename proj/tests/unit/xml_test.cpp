#include <gtest/gtest.h>

#include "annodb/error.hpp"
#include "annodb/xml.hpp"

using namespace annodb;

TEST(Xml, WellFormedness) {
  EXPECT_TRUE(xml::well_formed("<Annotation>obtained from GenoBase</Annotation>"));
  EXPECT_TRUE(xml::well_formed("<a x=\"1\"><b/>text &amp; more<c>d</c></a>"));
  EXPECT_TRUE(xml::well_formed("<?xml version=\"1.0\"?><a><!-- c --></a>"));
  EXPECT_FALSE(xml::well_formed("plain text"));
  EXPECT_FALSE(xml::well_formed("<a><b></a></b>"));
  EXPECT_FALSE(xml::well_formed("<a></a><b></b>"));
  EXPECT_FALSE(xml::well_formed("<a>"));
  EXPECT_FALSE(xml::well_formed(""));
}

TEST(Xml, TagTextTakesFirstMatchIncludingDescendants) {
  std::string body = "<Annotation><Curator>bob</Curator><Note>uses <i>E. coli</i> data</Note><Curator>amy</Curator></Annotation>";
  EXPECT_EQ(xml::tag_text(body, "Curator"), "bob");
  EXPECT_EQ(xml::tag_text(body, "Note"), "uses E. coli data");
  EXPECT_FALSE(xml::tag_text(body, "Missing").has_value());
}

TEST(Xml, ParseRaisesMalformed) {
  try {
    xml::parse("<a>");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedXml);
  }
  auto elems = xml::parse("<r><x>1</x><y>2</y></r>");
  ASSERT_EQ(elems.size(), 3u);
  EXPECT_EQ(elems[0].name, "r");
  EXPECT_EQ(elems[2].text, "2");
}
