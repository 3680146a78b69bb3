#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cartan.hpp"
#include "json_reader.hpp"

namespace zcurv {

// Cartan-matrix documents:
//
//   {"matrix": [[2, -1], [-1, 2]], "parities": ["even", "even"], "name": "sl3"}
//
// "matrix" is required; entries are JSON integers or "p/q" strings.
// "parities" defaults to all "even"; "name" is optional. Other keys are errors.

namespace detail {

inline Rational entry_value(const json::Value& v) {
  if (v.kind == json::Value::Kind::number || v.kind == json::Value::Kind::string) {
    const std::string& t = v.text;
    bool integer_literal = !t.empty();
    for (std::size_t k = 0; k < t.size(); ++k)
      if (!(std::isdigit(static_cast<unsigned char>(t[k])) || (k == 0 && t[k] == '-'))) integer_literal = false;
    bool fraction = v.kind == json::Value::Kind::string && t.find('/') != std::string::npos;
    if ((v.kind == json::Value::Kind::number && integer_literal) ||
        (v.kind == json::Value::Kind::string && (integer_literal || fraction))) {
      try {
        return parse_rational(t);
      } catch (const ParseError&) {
      }
    }
  }
  json::fail_at(v.at, "non-rational matrix entry (use an integer or a \"p/q\" string)");
}

}  // namespace detail

inline CartanMatrix parse_cartan(std::string_view text) {
  json::Value doc = json::parse(text);
  if (doc.kind != json::Value::Kind::object) json::fail_at(doc.at, "expected a top-level object");
  for (auto& [k, v] : doc.members)
    if (k != "matrix" && k != "parities" && k != "name") json::fail_at(v.at, "unknown key \"" + k + "\"");

  const json::Value* m = doc.find("matrix");
  if (!m) json::fail_at(doc.at, "missing required key \"matrix\"");
  if (m->kind != json::Value::Kind::array || m->items.empty())
    json::fail_at(m->at, "\"matrix\" must be a non-empty array of rows");
  const std::size_t n = m->items.size();
  std::vector<std::vector<Rational>> entries;
  for (auto& row : m->items) {
    if (row.kind != json::Value::Kind::array) json::fail_at(row.at, "matrix row must be an array");
    if (row.items.size() != n)
      json::fail_at(row.at, "non-square matrix: row has " + std::to_string(row.items.size()) +
                                " entries, expected " + std::to_string(n));
    std::vector<Rational> r;
    for (auto& e : row.items) r.push_back(detail::entry_value(e));
    entries.push_back(std::move(r));
  }

  std::vector<Parity> parities;
  if (const json::Value* p = doc.find("parities")) {
    if (p->kind != json::Value::Kind::array) json::fail_at(p->at, "\"parities\" must be an array");
    if (p->items.size() != n)
      json::fail_at(p->at, "parity list length mismatch: " + std::to_string(p->items.size()) +
                               " parities for a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
    for (auto& e : p->items) {
      if (e.kind != json::Value::Kind::string || (e.text != "even" && e.text != "odd"))
        json::fail_at(e.at, "parity must be \"even\" or \"odd\"");
      parities.push_back(e.text == "odd" ? Parity::odd : Parity::even);
    }
  }

  std::optional<std::string> name;
  if (const json::Value* nm = doc.find("name")) {
    if (nm->kind != json::Value::Kind::string) json::fail_at(nm->at, "\"name\" must be a string");
    name = nm->text;
  }
  return CartanMatrix(std::move(entries), std::move(parities), std::move(name));
}

namespace detail {

inline std::string json_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    if (c == '\t') {
      out += "\\t";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

/// Canonical form: no whitespace, integers bare, fractions as "p/q", parities
/// always present, name last when set.
inline std::string render_cartan(const CartanMatrix& A) {
  std::string out = "{\"matrix\":[";
  for (std::size_t i = 0; i < A.rank(); ++i) {
    out += i ? ",[" : "[";
    for (std::size_t j = 0; j < A.rank(); ++j) {
      if (j) out += ",";
      const Rational& v = A(i, j);
      out += is_integer(v) ? v.get_str() : "\"" + v.get_str() + "\"";
    }
    out += "]";
  }
  out += "],\"parities\":[";
  for (std::size_t i = 0; i < A.rank(); ++i) out += std::string(i ? "," : "") + "\"" + to_string(A.parities()[i]) + "\"";
  out += "]";
  if (A.name()) out += ",\"name\":" + detail::json_quote(*A.name());
  return out + "}";
}

}  // namespace zcurv
