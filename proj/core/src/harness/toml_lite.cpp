#include "esdrl/harness/toml_lite.hpp"

#include <cctype>
#include <vector>

#include <json.hpp>

namespace esdrl::harness {

namespace {

using nlohmann::json;

struct Parser {
  const std::string& text;
  std::size_t pos = 0;
  int line = 1;

  explicit Parser(const std::string& t) : text(t) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw TomlError("toml: line " + std::to_string(line) + ": " + msg);
  }

  bool eof() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  char get() {
    char c = text[pos++];
    if (c == '\n') ++line;
    return c;
  }

  void skip_ws_inline() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos;
  }

  void skip_ws_and_comments() {
    for (;;) {
      skip_ws_inline();
      if (eof()) return;
      if (peek() == '#') {
        while (!eof() && peek() != '\n') ++pos;
        continue;
      }
      if (peek() == '\n' || peek() == '\r') {
        get();
        continue;
      }
      return;
    }
  }

  void expect_line_end() {
    skip_ws_inline();
    if (eof()) return;
    if (peek() == '#') {
      while (!eof() && peek() != '\n') ++pos;
    }
    if (eof()) return;
    if (peek() == '\r') ++pos;
    if (eof()) return;
    if (peek() != '\n') fail("trailing characters after value");
    get();
  }

  std::string parse_bare_key() {
    std::string k;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) ||
                      peek() == '_' || peek() == '-')) {
      k += get();
    }
    if (k.empty()) fail("expected key");
    return k;
  }

  std::vector<std::string> parse_key_path() {
    std::vector<std::string> path;
    for (;;) {
      skip_ws_inline();
      if (!eof() && peek() == '"') {
        path.push_back(parse_basic_string());
      } else {
        path.push_back(parse_bare_key());
      }
      skip_ws_inline();
      if (!eof() && peek() == '.') {
        get();
        continue;
      }
      return path;
    }
  }

  std::string parse_basic_string() {
    if (get() != '"') fail("expected string");
    std::string s;
    for (;;) {
      if (eof()) fail("unterminated string");
      char c = get();
      if (c == '"') return s;
      if (c == '\n') fail("newline in string");
      if (c == '\\') {
        if (eof()) fail("unterminated escape");
        char e = get();
        switch (e) {
          case 'n': s += '\n'; break;
          case 't': s += '\t'; break;
          case 'r': s += '\r'; break;
          case '"': s += '"'; break;
          case '\\': s += '\\'; break;
          default: fail("unsupported escape sequence");
        }
      } else {
        s += c;
      }
    }
  }

  json parse_value() {
    skip_ws_inline();
    if (eof()) fail("expected value");
    char c = peek();
    if (c == '"') return parse_basic_string();
    if (c == '[') return parse_array();
    if (c == '{') return parse_inline_table();
    if (text.compare(pos, 4, "true") == 0) {
      pos += 4;
      return true;
    }
    if (text.compare(pos, 5, "false") == 0) {
      pos += 5;
      return false;
    }
    return parse_number();
  }

  json parse_number() {
    std::size_t start = pos;
    bool is_float = false;
    if (!eof() && (peek() == '+' || peek() == '-')) ++pos;
    while (!eof()) {
      char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '_') {
        ++pos;
      } else if (c == '.' || c == 'e' || c == 'E') {
        is_float = true;
        ++pos;
        if (!eof() && (peek() == '+' || peek() == '-')) ++pos;
      } else {
        break;
      }
    }
    if (pos == start) fail("expected value");
    std::string tok = text.substr(start, pos - start);
    std::erase(tok, '_');
    try {
      if (is_float) return std::stod(tok);
      return static_cast<std::int64_t>(std::stoll(tok));
    } catch (const std::exception&) {
      fail("bad number '" + tok + "'");
    }
  }

  json parse_array() {
    get();  // [
    json arr = json::array();
    for (;;) {
      skip_ws_and_comments();
      if (eof()) fail("unterminated array");
      if (peek() == ']') {
        get();
        return arr;
      }
      arr.push_back(parse_value());
      skip_ws_and_comments();
      if (eof()) fail("unterminated array");
      if (peek() == ',') {
        get();
        continue;
      }
      if (peek() == ']') {
        get();
        return arr;
      }
      fail("expected ',' or ']' in array");
    }
  }

  json parse_inline_table() {
    get();  // {
    json obj = json::object();
    skip_ws_inline();
    if (!eof() && peek() == '}') {
      get();
      return obj;
    }
    for (;;) {
      skip_ws_inline();
      auto path = parse_key_path();
      skip_ws_inline();
      if (eof() || get() != '=') fail("expected '=' in inline table");
      json* slot = &obj;
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        slot = &(*slot)[path[i]];
      }
      if (slot->contains(path.back())) fail("duplicate key " + path.back());
      (*slot)[path.back()] = parse_value();
      skip_ws_inline();
      if (eof()) fail("unterminated inline table");
      if (peek() == ',') {
        get();
        continue;
      }
      if (peek() == '}') {
        get();
        return obj;
      }
      fail("expected ',' or '}' in inline table");
    }
  }
};

json* descend(json& root, const std::vector<std::string>& path,
              Parser& p, bool final_is_array_elem) {
  json* node = &root;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const std::string& key = path[i];
    const bool last = i + 1 == path.size();
    json& child = (*node)[key];
    if (last && final_is_array_elem) {
      if (child.is_null()) child = json::array();
      if (!child.is_array()) p.fail("'" + key + "' is not an array of tables");
      child.push_back(json::object());
      return &child.back();
    }
    if (child.is_null()) child = json::object();
    if (child.is_array()) {
      if (child.empty()) p.fail("'" + key + "' array of tables is empty");
      node = &child.back();
      continue;
    }
    if (!child.is_object()) p.fail("'" + key + "' already holds a value");
    node = &child;
  }
  return node;
}

}  // namespace

std::string toml_to_json_text(const std::string& toml_text) {
  Parser p(toml_text);
  json root = json::object();
  json* current = &root;

  for (;;) {
    p.skip_ws_and_comments();
    if (p.eof()) break;
    if (p.peek() == '[') {
      p.get();
      const bool array_table = !p.eof() && p.peek() == '[';
      if (array_table) p.get();
      auto path = p.parse_key_path();
      p.skip_ws_inline();
      if (p.eof() || p.get() != ']') p.fail("expected ']'");
      if (array_table && (p.eof() || p.get() != ']')) p.fail("expected ']]'");
      current = descend(root, path, p, array_table);
      p.expect_line_end();
      continue;
    }
    auto path = p.parse_key_path();
    p.skip_ws_inline();
    if (p.eof() || p.get() != '=') p.fail("expected '='");
    json value = p.parse_value();
    json* slot = current;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      json& child = (*slot)[path[i]];
      if (child.is_null()) child = json::object();
      if (!child.is_object()) p.fail("'" + path[i] + "' already holds a value");
      slot = &child;
    }
    if (slot->contains(path.back())) p.fail("duplicate key " + path.back());
    (*slot)[path.back()] = std::move(value);
    p.expect_line_end();
  }
  return root.dump();
}

}  // namespace esdrl::harness
