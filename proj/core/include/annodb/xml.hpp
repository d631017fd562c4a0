#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace annodb::xml {

struct Element {
  std::string name;
  std::string text;  // concatenated character data of the element and its descendants
};

// Checks that `body` is a well-formed XML document with exactly one root
// element. Returns the elements in document order. Raises kMalformedXml.
std::vector<Element> parse(std::string_view body);

bool well_formed(std::string_view body);

// Text of the first element named `tag`, or nullopt.
std::optional<std::string> tag_text(std::string_view body, std::string_view tag);

}  // namespace annodb::xml
