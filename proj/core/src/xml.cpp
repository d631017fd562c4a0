#include "annodb/xml.hpp"

#include <cctype>

#include "annodb/error.hpp"

namespace annodb::xml {

namespace {

bool name_start(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return std::isalpha(u) || c == '_' || c == ':' || u >= 0x80;
}

bool name_char(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return name_start(c) || std::isdigit(u) || c == '-' || c == '.';
}

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  std::vector<Element> run() {
    skip_misc();
    if (pos_ >= in_.size() || in_[pos_] != '<') fail("expected root element");
    element();
    skip_misc();
    if (pos_ != in_.size()) fail("content after root element");
    return std::move(elements_);
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    raise(ErrorCode::kMalformedXml, why + " at offset " + std::to_string(pos_));
  }

  bool starts_with(std::string_view s) const { return in_.substr(pos_, s.size()) == s; }

  void skip_space() {
    while (pos_ < in_.size() && std::isspace(static_cast<unsigned char>(in_[pos_]))) ++pos_;
  }

  void skip_until(std::string_view end) {
    std::size_t at = in_.find(end, pos_);
    if (at == std::string_view::npos) fail("unterminated construct");
    pos_ = at + end.size();
  }

  // Prolog / epilog: whitespace, comments, processing instructions.
  void skip_misc() {
    for (;;) {
      skip_space();
      if (starts_with("<!--")) {
        pos_ += 4;
        skip_until("-->");
      } else if (starts_with("<?")) {
        pos_ += 2;
        skip_until("?>");
      } else {
        return;
      }
    }
  }

  std::string name() {
    if (pos_ >= in_.size() || !name_start(in_[pos_])) fail("expected name");
    std::size_t start = pos_;
    while (pos_ < in_.size() && name_char(in_[pos_])) ++pos_;
    return std::string(in_.substr(start, pos_ - start));
  }

  std::string reference() {
    // at '&'
    std::size_t semi = in_.find(';', pos_);
    if (semi == std::string_view::npos) fail("unterminated entity reference");
    std::string_view ent = in_.substr(pos_ + 1, semi - pos_ - 1);
    pos_ = semi + 1;
    if (ent == "lt") return "<";
    if (ent == "gt") return ">";
    if (ent == "amp") return "&";
    if (ent == "quot") return "\"";
    if (ent == "apos") return "'";
    if (ent.size() > 1 && ent[0] == '#') {
      unsigned long code = 0;
      bool hex = ent[1] == 'x';
      std::string_view digits = ent.substr(hex ? 2 : 1);
      if (digits.empty()) fail("empty character reference");
      for (char c : digits) {
        int d;
        if (std::isdigit(static_cast<unsigned char>(c))) {
          d = c - '0';
        } else if (hex && std::isxdigit(static_cast<unsigned char>(c))) {
          d = std::tolower(static_cast<unsigned char>(c)) - 'a' + 10;
        } else {
          fail("bad character reference");
        }
        code = code * (hex ? 16 : 10) + static_cast<unsigned long>(d);
        if (code > 0x10FFFF) fail("character reference out of range");
      }
      return encode_utf8(code);
    }
    fail("unknown entity &" + std::string(ent) + ";");
  }

  static std::string encode_utf8(unsigned long cp) {
    std::string out;
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
    return out;
  }

  void attributes() {
    for (;;) {
      bool had_space = pos_ < in_.size() && std::isspace(static_cast<unsigned char>(in_[pos_]));
      skip_space();
      if (pos_ >= in_.size()) fail("unterminated start tag");
      if (in_[pos_] == '>' || starts_with("/>")) return;
      if (!had_space) fail("attributes must be separated by whitespace");
      name();
      skip_space();
      if (pos_ >= in_.size() || in_[pos_] != '=') fail("expected '=' in attribute");
      ++pos_;
      skip_space();
      if (pos_ >= in_.size() || (in_[pos_] != '"' && in_[pos_] != '\'')) fail("expected quoted attribute value");
      char q = in_[pos_++];
      while (pos_ < in_.size() && in_[pos_] != q) {
        if (in_[pos_] == '<') fail("'<' in attribute value");
        if (in_[pos_] == '&') {
          reference();
        } else {
          ++pos_;
        }
      }
      if (pos_ >= in_.size()) fail("unterminated attribute value");
      ++pos_;
    }
  }

  // Parses one element starting at '<'; returns its text content.
  std::string element() {
    ++pos_;  // '<'
    std::string tag = name();
    std::size_t index = elements_.size();
    elements_.push_back(Element{tag, {}});
    attributes();
    if (starts_with("/>")) {
      pos_ += 2;
      return {};
    }
    ++pos_;  // '>'
    std::string text;
    for (;;) {
      if (pos_ >= in_.size()) fail("unclosed element <" + tag + ">");
      char c = in_[pos_];
      if (c == '<') {
        if (starts_with("</")) {
          pos_ += 2;
          std::string closing = name();
          skip_space();
          if (pos_ >= in_.size() || in_[pos_] != '>') fail("malformed end tag");
          ++pos_;
          if (closing != tag) fail("mismatched </" + closing + "> for <" + tag + ">");
          elements_[index].text = text;
          return text;
        }
        if (starts_with("<!--")) {
          pos_ += 4;
          skip_until("-->");
        } else if (starts_with("<![CDATA[")) {
          pos_ += 9;
          std::size_t end = in_.find("]]>", pos_);
          if (end == std::string_view::npos) fail("unterminated CDATA");
          text.append(in_.substr(pos_, end - pos_));
          pos_ = end + 3;
        } else if (starts_with("<?")) {
          pos_ += 2;
          skip_until("?>");
        } else {
          text += element();
        }
      } else if (c == '&') {
        text += reference();
      } else {
        text.push_back(c);
        ++pos_;
      }
    }
  }

  std::string_view in_;
  std::size_t pos_ = 0;
  std::vector<Element> elements_;
};

std::string trim(std::string s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

std::vector<Element> parse(std::string_view body) { return Reader(body).run(); }

bool well_formed(std::string_view body) {
  try {
    parse(body);
    return true;
  } catch (const Error&) {
    return false;
  }
}

std::optional<std::string> tag_text(std::string_view body, std::string_view tag) {
  std::vector<Element> elements;
  try {
    elements = parse(body);
  } catch (const Error&) {
    return std::nullopt;
  }
  for (const Element& e : elements) {
    if (e.name == tag) return trim(e.text);
  }
  return std::nullopt;
}

}  // namespace annodb::xml
