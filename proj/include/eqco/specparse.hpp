// Parser for the group-spec grammar used by the CLI and the catalog file:
//   spec   := atom | atom "x" spec
//   atom   := "C"int | "Q8" | "D"int | "E(" p "," r ")" | "MC(" m ";" n ";" k ")"
//           | "G1(" m "," n "," p ")" | "G2(" m "," n "," p ")"
//           | "EPQ(" p "," r ";" q "," n ";" matrix ")"
//   matrix := "[[" int,... "]," ... "[" ... "]]"
// Whitespace is insignificant. Errors carry the offending position.
#pragma once

#include <eqco/groups.hpp>

#include <cctype>
#include <stdexcept>
#include <string>
#include <vector>

namespace eqco::specparse {

using groups::GroupSpec;

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, size_t pos)
      : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"), pos_(pos) {}
  size_t position() const { return pos_; }

 private:
  size_t pos_;
};

namespace detail {

class Parser {
 public:
  explicit Parser(std::string text) : text_(std::move(text)) {}

  GroupSpec parse() {
    GroupSpec first = atom();
    std::vector<GroupSpec> factors{first};
    skip_ws();
    while (peek() == 'x' || peek() == 'X') {
      ++pos_;
      factors.push_back(atom());
      skip_ws();
    }
    if (pos_ != text_.size()) fail("unexpected trailing input");
    if (factors.size() == 1) return factors[0];
    return GroupSpec::direct_product(std::move(factors));
  }

 private:
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  bool try_consume(const std::string& word) {
    skip_ws();
    size_t save = pos_;
    for (char c : word) {
      if (pos_ >= text_.size() || text_[pos_] != c) {
        pos_ = save;
        return false;
      }
      ++pos_;
    }
    return true;
  }
  long integer() {
    skip_ws();
    size_t start = pos_;
    bool neg = false;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
      neg = text_[pos_] == '-';
      ++pos_;
    }
    long v = 0;
    bool any = false;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_] - '0');
      if (v > 1000000) throw ParseError("integer too large", start);
      ++pos_;
      any = true;
    }
    if (!any) fail("expected an integer");
    return neg ? -v : v;
  }

  std::vector<std::vector<long>> matrix() {
    expect('[');
    std::vector<std::vector<long>> rows;
    expect('[');
    for (;;) {
      std::vector<long> row;
      row.push_back(integer());
      while (peek() == ',') {
        ++pos_;
        row.push_back(integer());
      }
      expect(']');
      rows.push_back(std::move(row));
      if (peek() == ',') {
        ++pos_;
        expect('[');
        continue;
      }
      break;
    }
    expect(']');
    for (auto& r : rows)
      if (r.size() != rows.size()) fail("matrix must be square");
    return rows;
  }

  GroupSpec atom() {
    skip_ws();
    if (try_consume("Q8")) return GroupSpec::quaternion8();
    if (try_consume("MC")) {
      expect('(');
      long m = integer();
      expect(';');
      long n = integer();
      expect(';');
      long k = integer();
      expect(')');
      return GroupSpec::metacyclic(m, n, k);
    }
    if (try_consume("G1")) {
      expect('(');
      long m = integer();
      expect(',');
      long n = integer();
      expect(',');
      long p = integer();
      expect(')');
      return GroupSpec::g1(m, n, p);
    }
    if (try_consume("G2")) {
      expect('(');
      long m = integer();
      expect(',');
      long n = integer();
      expect(',');
      long p = integer();
      expect(')');
      return GroupSpec::g2(m, n, p);
    }
    if (try_consume("EPQ")) {
      expect('(');
      long p = integer();
      expect(',');
      long r = integer();
      expect(';');
      long q = integer();
      expect(',');
      long n = integer();
      expect(';');
      auto a = matrix();
      expect(')');
      return GroupSpec::epq(p, r, q, n, std::move(a));
    }
    if (try_consume("E")) {
      expect('(');
      long p = integer();
      expect(',');
      long r = integer();
      expect(')');
      return GroupSpec::elementary_abelian(p, r);
    }
    if (try_consume("C")) return GroupSpec::cyclic(integer());
    if (try_consume("D")) return GroupSpec::dihedral(integer());
    fail("expected a group atom (C, D, E, MC, G1, G2, EPQ, Q8)");
  }

  std::string text_;
  size_t pos_ = 0;
};

}  // namespace detail

// Parses the grammar and validates family invariants by building nothing:
// semantic errors (e.g. k^n != 1 mod m) surface from build_group.
inline GroupSpec parse_group_spec(const std::string& text) {
  return detail::Parser(text).parse();
}

}  // namespace eqco::specparse
