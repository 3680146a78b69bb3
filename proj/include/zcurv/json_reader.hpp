#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "error.hpp"

namespace zcurv::json {

// A small JSON reader that remembers where every value starts, so semantic
// errors in input files can point at a line and column.

struct Position {
  int line = 1;
  int column = 1;
};

struct Value {
  enum class Kind { null, boolean, number, string, array, object };
  Kind kind = Kind::null;
  Position at;
  bool boolean = false;
  std::string text;  // number literal or decoded string
  std::vector<Value> items;
  std::vector<std::pair<std::string, Value>> members;

  const Value* find(std::string_view key) const {
    for (auto& [k, v] : members)
      if (k == key) return &v;
    return nullptr;
  }
};

[[noreturn]] inline void fail_at(const Position& p, const std::string& what) {
  throw ParseError(what, p.line, p.column);
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  Value parse_document() {
    skip_ws();
    Value v = parse_value();
    skip_ws();
    if (i_ != text_.size()) fail_at(pos_, "unexpected trailing characters");
    return v;
  }

 private:
  std::string_view text_;
  std::size_t i_ = 0;
  Position pos_;

  char peek() const { return i_ < text_.size() ? text_[i_] : '\0'; }
  char take() {
    char c = text_[i_++];
    if (c == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    return c;
  }
  void skip_ws() {
    while (i_ < text_.size() && (peek() == ' ' || peek() == '\t' || peek() == '\n' || peek() == '\r'))
      take();
  }
  void expect(char c) {
    if (peek() != c) fail_at(pos_, std::string("expected '") + c + "'");
    take();
  }

  Value parse_value() {
    Value v;
    v.at = pos_;
    char c = peek();
    if (c == '{') {
      v.kind = Value::Kind::object;
      take();
      skip_ws();
      if (peek() == '}') {
        take();
        return v;
      }
      for (;;) {
        skip_ws();
        if (peek() != '"') fail_at(pos_, "expected a quoted key");
        std::string key = parse_string();
        skip_ws();
        expect(':');
        skip_ws();
        v.members.emplace_back(std::move(key), parse_value());
        skip_ws();
        if (peek() == ',') {
          take();
          continue;
        }
        expect('}');
        return v;
      }
    }
    if (c == '[') {
      v.kind = Value::Kind::array;
      take();
      skip_ws();
      if (peek() == ']') {
        take();
        return v;
      }
      for (;;) {
        skip_ws();
        v.items.push_back(parse_value());
        skip_ws();
        if (peek() == ',') {
          take();
          continue;
        }
        expect(']');
        return v;
      }
    }
    if (c == '"') {
      v.kind = Value::Kind::string;
      v.text = parse_string();
      return v;
    }
    if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
      v.kind = Value::Kind::number;
      while (i_ < text_.size() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-' ||
                                   peek() == '+' || peek() == '.'))
        v.text += take();
      return v;
    }
    for (std::string_view word : {"true", "false", "null"}) {
      if (text_.substr(i_, word.size()) == word) {
        for (std::size_t k = 0; k < word.size(); ++k) take();
        v.kind = word == "null" ? Value::Kind::null : Value::Kind::boolean;
        v.boolean = word == "true";
        return v;
      }
    }
    if (i_ >= text_.size()) fail_at(pos_, "unexpected end of document");
    fail_at(pos_, std::string("unexpected character '") + c + "'");
  }

  std::string parse_string() {
    Position start = pos_;
    expect('"');
    std::string out;
    for (;;) {
      if (i_ >= text_.size()) fail_at(start, "unterminated string");
      char c = take();
      if (c == '"') return out;
      if (c == '\\') {
        if (i_ >= text_.size()) fail_at(start, "unterminated string");
        char e = take();
        switch (e) {
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          case '/': out += '/'; break;
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          default: fail_at(pos_, "unsupported escape sequence");
        }
      } else {
        out += c;
      }
    }
  }
};

inline Value parse(std::string_view text) { return Reader(text).parse_document(); }

}  // namespace zcurv::json
