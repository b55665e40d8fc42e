#include "inertia/harness/toml_lite.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "inertia/errors.hpp"

namespace inertia::harness {

namespace {

using nlohmann::json;

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  json parse() {
    json root = json::object();
    json* table = &root;
    while (true) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        ++pos_;
        if (peek() == '[') fail("arrays of tables are not supported");
        skip_ws();
        std::vector<std::string> path = parse_key_path();
        skip_ws();
        expect(']');
        table = &root;
        for (const auto& part : path) table = &descend(*table, part);
        end_of_line();
        continue;
      }
      parse_key_value(*table);
      end_of_line();
    }
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("toml: line " + std::to_string(line_) + ": " + what);
  }

  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return eof() ? '\0' : s_[pos_]; }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void skip_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }

  void skip_comment() {
    if (peek() == '#') {
      while (!eof() && peek() != '\n') ++pos_;
    }
  }

  void skip_blank_lines() {
    while (!eof()) {
      skip_ws();
      skip_comment();
      if (peek() == '\r') ++pos_;
      if (peek() == '\n') {
        ++pos_;
        ++line_;
        continue;
      }
      break;
    }
  }

  // Whitespace, comments and newlines inside arrays / inline tables.
  void skip_insignificant() {
    while (!eof()) {
      skip_ws();
      skip_comment();
      if (peek() == '\r') {
        ++pos_;
      } else if (peek() == '\n') {
        ++pos_;
        ++line_;
      } else {
        break;
      }
    }
  }

  void end_of_line() {
    skip_ws();
    skip_comment();
    if (peek() == '\r') ++pos_;
    if (eof()) return;
    if (peek() != '\n') fail("unexpected trailing characters");
    ++pos_;
    ++line_;
  }

  json& descend(json& table, const std::string& key) {
    if (!table.contains(key)) table[key] = json::object();
    json& child = table[key];
    if (!child.is_object()) fail("key '" + key + "' is not a table");
    return child;
  }

  std::string parse_key_part() {
    if (peek() == '"' || peek() == '\'') return parse_string();
    const std::size_t start = pos_;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' ||
                      peek() == '-')) {
      ++pos_;
    }
    if (pos_ == start) fail("expected a key");
    return std::string(s_.substr(start, pos_ - start));
  }

  std::vector<std::string> parse_key_path() {
    std::vector<std::string> parts{parse_key_part()};
    skip_ws();
    while (peek() == '.') {
      ++pos_;
      skip_ws();
      parts.push_back(parse_key_part());
      skip_ws();
    }
    return parts;
  }

  void parse_key_value(json& table) {
    std::vector<std::string> path = parse_key_path();
    skip_ws();
    expect('=');
    skip_ws();
    json* target = &table;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) target = &descend(*target, path[i]);
    if (target->contains(path.back())) fail("duplicate key '" + path.back() + "'");
    (*target)[path.back()] = parse_value();
  }

  json parse_value() {
    const char c = peek();
    if (c == '"' || c == '\'') return parse_string();
    if (c == '[') return parse_array();
    if (c == '{') return parse_inline_table();
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

  std::string parse_string() {
    const char quote = peek();
    ++pos_;
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      const char c = s_[pos_++];
      if (c == quote) break;
      if (c == '\\' && quote == '"') {
        if (eof()) fail("unterminated escape");
        const char e = s_[pos_++];
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
        continue;
      }
      out += c;
    }
    return out;
  }

  json parse_array() {
    expect('[');
    json arr = json::array();
    skip_insignificant();
    while (peek() != ']') {
      arr.push_back(parse_value());
      skip_insignificant();
      if (peek() == ',') {
        ++pos_;
        skip_insignificant();
      } else if (peek() != ']') {
        fail("expected ',' or ']' in array");
      }
    }
    ++pos_;
    return arr;
  }

  json parse_inline_table() {
    expect('{');
    json obj = json::object();
    skip_insignificant();
    while (peek() != '}') {
      parse_key_value(obj);
      skip_insignificant();
      if (peek() == ',') {
        ++pos_;
        skip_insignificant();
      } else if (peek() != '}') {
        fail("expected ',' or '}' in inline table");
      }
    }
    ++pos_;
    return obj;
  }

  json parse_number() {
    const std::size_t start = pos_;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '+' ||
                      peek() == '-' || peek() == '.' || peek() == '_')) {
      ++pos_;
    }
    std::string token;
    for (char c : s_.substr(start, pos_ - start)) {
      if (c != '_') token += c;
    }
    if (token.empty()) fail("expected a value");
    std::string_view body = token;
    double sign = 1.0;
    if (body.front() == '+' || body.front() == '-') {
      sign = body.front() == '-' ? -1.0 : 1.0;
      body.remove_prefix(1);
    }
    if (body == "inf") return sign * std::numeric_limits<double>::infinity();
    if (body == "nan") return std::numeric_limits<double>::quiet_NaN();

    const bool is_float = token.find_first_of(".eE") != std::string::npos;
    if (!is_float) {
      long long value = 0;
      auto [ptr, ec] = std::from_chars(token.data() + (token[0] == '+'),
                                       token.data() + token.size(), value);
      if (ec != std::errc{} || ptr != token.data() + token.size()) fail("invalid number '" + token + "'");
      return value;
    }
    double value = 0.0;
    auto [ptr, ec] =
        std::from_chars(token.data() + (token[0] == '+'), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) fail("invalid number '" + token + "'");
    return value;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

}  // namespace

json parse_toml(std::string_view text) { return Parser(text).parse(); }

}  // namespace inertia::harness
