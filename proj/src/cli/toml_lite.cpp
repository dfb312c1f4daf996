#include "mitodet/cli/toml_lite.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "mitodet/core/error.hpp"

namespace mitodet::cli {
namespace {

using json = nlohmann::ordered_json;

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  json document() {
    json doc = json::object();
    for (;;) {
      skip_blank_lines();
      if (done()) return doc;
      const int key_line = line_;
      const std::string key = bare_key();
      skip_inline_space();
      expect('=');
      skip_inline_space();
      json value = parse_value();
      skip_inline_space();
      skip_comment();
      if (!done() && peek() != '\n') error("unexpected text after value");
      if (doc.contains(key)) {
        fail(ErrorKind::kParse, "config line " + std::to_string(key_line) + ": duplicate key '" + key + "'");
      }
      doc[key] = std::move(value);
    }
  }

 private:
  bool done() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }
  char take() {
    const char c = s_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  [[noreturn]] void error(const std::string& what) const { error_at(line_, what); }
  [[noreturn]] static void error_at(int line, const std::string& what) {
    fail(ErrorKind::kParse, "config line " + std::to_string(line) + ": " + what);
  }

  void expect(char c) {
    if (done() || peek() != c) error(std::string("expected '") + c + "'");
    take();
  }

  void skip_inline_space() {
    while (!done() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) take();
  }

  void skip_comment() {
    if (!done() && peek() == '#') {
      while (!done() && peek() != '\n') take();
    }
  }

  void skip_blank_lines() {
    for (;;) {
      skip_inline_space();
      skip_comment();
      if (done() || peek() != '\n') return;
      take();
    }
  }

  // Inside arrays and inline tables newlines and comments are whitespace.
  void skip_any_space() {
    for (;;) {
      skip_inline_space();
      skip_comment();
      if (done() || peek() != '\n') return;
      take();
    }
  }

  std::string bare_key() {
    std::string key;
    while (!done() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-')) {
      key += take();
    }
    if (key.empty()) {
      if (!done() && peek() == '[') error("section headers are not supported");
      error("expected a key");
    }
    return key;
  }

  json parse_value() {
    if (done()) error("missing value");
    const char c = peek();
    if (c == '"') return parse_string();
    if (c == '[') return parse_array();
    if (c == '{') return parse_table();
    if (s_.substr(pos_, 4) == "true") {
      pos_ += 4;
      return true;
    }
    if (s_.substr(pos_, 5) == "false") {
      pos_ += 5;
      return false;
    }
    return parse_number();
  }

  json parse_string() {
    take();
    std::string out;
    for (;;) {
      if (done() || peek() == '\n') error("unterminated string");
      const char c = take();
      if (c == '"') return out;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (done()) error("unterminated string");
      switch (take()) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        default: error("unknown escape sequence");
      }
    }
  }

  json parse_array() {
    const int open_line = line_;
    take();
    json arr = json::array();
    skip_any_space();
    if (!done() && peek() == ']') {
      take();
      return arr;
    }
    for (;;) {
      skip_any_space();
      arr.push_back(parse_value());
      skip_any_space();
      if (done()) error_at(open_line, "unterminated array");
      const char c = take();
      if (c == ']') return arr;
      if (c != ',') error("expected ',' or ']' in array");
      skip_any_space();
      if (!done() && peek() == ']') {
        take();
        return arr;
      }
    }
  }

  json parse_table() {
    const int open_line = line_;
    take();
    json table = json::object();
    skip_inline_space();
    if (!done() && peek() == '}') {
      take();
      return table;
    }
    for (;;) {
      skip_inline_space();
      const std::string key = bare_key();
      skip_inline_space();
      expect('=');
      skip_inline_space();
      if (table.contains(key)) error("duplicate key '" + key + "' in inline table");
      table[key] = parse_value();
      skip_inline_space();
      if (done()) error_at(open_line, "unterminated inline table");
      const char c = take();
      if (c == '}') return table;
      if (c != ',') error("expected ',' or '}' in inline table");
    }
  }

  json parse_number() {
    const std::size_t start = pos_;
    while (!done() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '+' ||
                       peek() == '-' || peek() == '.' || peek() == '_')) {
      ++pos_;
    }
    std::string tok(s_.substr(start, pos_ - start));
    std::erase(tok, '_');
    if (tok.empty()) error("expected a value");
    const bool is_float = tok.find_first_of(".eE") != std::string::npos ||
                          tok == "inf" || tok == "+inf" || tok == "-inf" || tok == "nan";
    const char* first = tok.data() + (tok[0] == '+' ? 1 : 0);
    const char* last = tok.data() + tok.size();
    if (is_float) {
      double v = 0.0;
      const auto r = std::from_chars(first, last, v);
      if (r.ec != std::errc() || r.ptr != last || !std::isfinite(v)) error("invalid number '" + tok + "'");
      return v;
    }
    long long v = 0;
    const auto r = std::from_chars(first, last, v);
    if (r.ec != std::errc() || r.ptr != last) error("invalid value '" + tok + "'");
    return v;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

}  // namespace

json parse_toml_lite(std::string_view text) { return Parser(text).document(); }

std::string format_toml_value(const json& value) {
  if (value.is_string()) return quote(value.get<std::string>());
  if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
  if (value.is_number_integer()) return std::to_string(value.get<long long>());
  if (value.is_number_float()) {
    // Shortest text that parses back to the same double.
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value.get<double>());
    std::string s(buf, res.ptr);
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
  }
  if (value.is_array()) {
    std::string out = "[";
    for (std::size_t i = 0; i < value.size(); ++i) {
      if (i) out += ", ";
      out += format_toml_value(value[i]);
    }
    return out + "]";
  }
  if (value.is_object()) {
    std::string out = "{ ";
    bool first = true;
    for (const auto& [k, v] : value.items()) {
      if (!first) out += ", ";
      first = false;
      out += k + " = " + format_toml_value(v);
    }
    return out + " }";
  }
  fail(ErrorKind::kInvalidArgument, "config: cannot format value " + value.dump());
}

}  // namespace mitodet::cli
