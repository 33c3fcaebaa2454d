// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stlcc/syntax.hpp"

#include <cctype>
#include <charconv>
#include <limits>
#include <stdexcept>
#include <system_error>
#include <vector>

#include "stlcc/error.hpp"

namespace stlcc {
namespace {

enum class Tok {
  kWord,
  kNumber,
  kLParen,
  kRParen,
  kLBracket,
  kRBracket,
  kComma,
  kGe,
  kLe,
  kEnd,
};

struct Token {
  Tok kind;
  std::string_view text;
  std::size_t line;
  std::size_t column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      const std::size_t line = line_, col = column_;
      if (pos_ >= text_.size()) {
        out.push_back({Tok::kEnd, {}, line, col});
        return out;
      }
      const char c = text_[pos_];
      const std::size_t start = pos_;
      auto single = [&](Tok k) {
        advance(1);
        out.push_back({k, text_.substr(start, 1), line, col});
      };
      switch (c) {
        case '(': single(Tok::kLParen); continue;
        case ')': single(Tok::kRParen); continue;
        case '[': single(Tok::kLBracket); continue;
        case ']': single(Tok::kRBracket); continue;
        case ',': single(Tok::kComma); continue;
        default: break;
      }
      if ((c == '>' || c == '<') && peek(1) == '=') {
        advance(2);
        out.push_back({c == '>' ? Tok::kGe : Tok::kLe, text_.substr(start, 2),
                       line, col});
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                text_[pos_] == '_')) {
          advance(1);
        }
        out.push_back({Tok::kWord, text_.substr(start, pos_ - start), line, col});
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' ||
          c == '+') {
        lex_number();
        out.push_back({Tok::kNumber, text_.substr(start, pos_ - start), line, col});
        continue;
      }
      throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
  }

 private:
  char peek(std::size_t ahead) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      if (text_[pos_] == '\n') {
        ++line_;
        column_ = 1;
      } else {
        ++column_;
      }
      ++pos_;
    }
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      advance(1);
    }
  }

  void digits() {
    while (std::isdigit(static_cast<unsigned char>(peek(0)))) advance(1);
  }

  void lex_number() {
    if (peek(0) == '-' || peek(0) == '+') advance(1);
    digits();
    if (peek(0) == '.') {
      advance(1);
      digits();
    }
    if (peek(0) == 'e' || peek(0) == 'E') {
      const char next = peek(1);
      if (std::isdigit(static_cast<unsigned char>(next)) ||
          ((next == '-' || next == '+') &&
           std::isdigit(static_cast<unsigned char>(peek(2))))) {
        advance(next == '-' || next == '+' ? 2 : 1);
        digits();
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Formula parse() {
    Formula f = parse_or();
    if (cur().kind != Tok::kEnd) fail("unexpected trailing input", cur());
    return f;
  }

 private:
  const Token& cur() const { return tokens_[pos_]; }

  [[noreturn]] static void fail(const std::string& msg, const Token& at) {
    throw ParseError(msg, at.line, at.column);
  }

  bool at_word(std::string_view w) const {
    return cur().kind == Tok::kWord && cur().text == w;
  }

  const Token& expect(Tok kind, const char* what) {
    if (cur().kind != kind) {
      fail(std::string("expected ") + what + describe(cur()), cur());
    }
    return tokens_[pos_++];
  }

  static std::string describe(const Token& t) {
    if (t.kind == Tok::kEnd) return " but reached end of input";
    return " but found '" + std::string(t.text) + "'";
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (at_word("or")) {
      ++pos_;
      f = Formula::disjunction(f, parse_and());
    }
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (at_word("and")) {
      ++pos_;
      f = Formula::conjunction(f, parse_unary());
    }
    return f;
  }

  Formula parse_unary() {
    if (at_word("not")) {
      ++pos_;
      return Formula::negation(parse_unary());
    }
    if (at_word("F") || at_word("G")) {
      const bool eventually = cur().text == "F";
      ++pos_;
      const Interval w = parse_interval();
      expect(Tok::kLParen, "'('");
      Formula child = parse_or();
      expect(Tok::kRParen, "')'");
      return eventually ? Formula::eventually(w, child)
                        : Formula::globally(w, child);
    }
    if (cur().kind == Tok::kLParen) {
      ++pos_;
      Formula inner = parse_or();
      expect(Tok::kRParen, "')'");
      if (at_word("U")) {
        ++pos_;
        const Interval w = parse_interval();
        expect(Tok::kLParen, "'('");
        Formula rhs = parse_or();
        expect(Tok::kRParen, "')'");
        return Formula::until(w, inner, rhs);
      }
      return inner;
    }
    return parse_atom();
  }

  Interval parse_interval() {
    const Token& open = expect(Tok::kLBracket, "'['");
    const std::size_t lo = parse_bound();
    expect(Tok::kComma, "','");
    const std::size_t hi = parse_bound();
    expect(Tok::kRBracket, "']'");
    if (lo > hi) fail("interval lower bound exceeds upper bound", open);
    return {lo, hi};
  }

  std::size_t parse_bound() {
    const Token& t = cur();
    if (t.kind != Tok::kNumber) fail("expected interval bound" + describe(t), t);
    if (!t.text.empty() && t.text.front() == '-') {
      fail("negative interval bound", t);
    }
    std::size_t value = 0;
    const auto* first = t.text.data() + (t.text.front() == '+' ? 1 : 0);
    const auto* last = t.text.data() + t.text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
      fail("interval bound must be a non-negative integer", t);
    }
    ++pos_;
    return value;
  }

  Formula parse_atom() {
    const Token& t = cur();
    if (at_word("true")) {
      ++pos_;
      return Formula::truth();
    }
    if (t.kind == Tok::kWord && t.text.size() >= 2 && t.text.front() == 'x') {
      std::size_t var = 0;
      const auto* first = t.text.data() + 1;
      const auto* last = t.text.data() + t.text.size();
      auto [ptr, ec] = std::from_chars(first, last, var);
      if (ec != std::errc() || ptr != last) {
        fail("invalid variable name '" + std::string(t.text) + "'", t);
      }
      ++pos_;
      Direction dir;
      if (cur().kind == Tok::kGe) {
        dir = Direction::kGreaterEqual;
      } else if (cur().kind == Tok::kLe) {
        dir = Direction::kLessEqual;
      } else {
        fail("expected '>=' or '<='" + describe(cur()), cur());
      }
      ++pos_;
      return Formula::predicate(var, dir, parse_real());
    }
    fail("expected formula" + describe(t), t);
  }

  double parse_real() {
    const Token& t = cur();
    if (t.kind != Tok::kNumber) fail("expected threshold" + describe(t), t);
    const auto* first = t.text.data() + (t.text.front() == '+' ? 1 : 0);
    const auto* last = t.text.data() + t.text.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
      fail("invalid threshold '" + std::string(t.text) + "'", t);
    }
    ++pos_;
    return value;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

void print(const Formula& phi, std::string& out);

void print_wrapped(const Formula& phi, bool parens, std::string& out) {
  if (parens) out += '(';
  print(phi, out);
  if (parens) out += ')';
}

void print_interval(Interval w, std::string& out) {
  out += '[';
  out += std::to_string(w.lower);
  out += ',';
  out += std::to_string(w.upper);
  out += ']';
}

void print(const Formula& phi, std::string& out) {
  switch (phi.kind()) {
    case NodeKind::kTrue:
      out += "true";
      return;
    case NodeKind::kPredicate:
      out += 'x';
      out += std::to_string(phi.var());
      out += phi.direction() == Direction::kGreaterEqual ? " >= " : " <= ";
      out += format_real(phi.threshold());
      return;
    case NodeKind::kNot:
      out += "not ";
      print_wrapped(phi.left(), true, out);
      return;
    case NodeKind::kAnd: {
      const Formula l = phi.left(), r = phi.right();
      print_wrapped(l, l.kind() == NodeKind::kOr, out);
      out += " and ";
      print_wrapped(r, r.kind() == NodeKind::kOr || r.kind() == NodeKind::kAnd, out);
      return;
    }
    case NodeKind::kOr: {
      const Formula r = phi.right();
      print(phi.left(), out);
      out += " or ";
      print_wrapped(r, r.kind() == NodeKind::kOr, out);
      return;
    }
    case NodeKind::kEventually:
    case NodeKind::kGlobally:
      out += phi.kind() == NodeKind::kEventually ? 'F' : 'G';
      print_interval(phi.window(), out);
      print_wrapped(phi.left(), true, out);
      return;
    case NodeKind::kUntil:
      print_wrapped(phi.left(), true, out);
      out += " U";
      print_interval(phi.window(), out);
      out += ' ';
      print_wrapped(phi.right(), true, out);
      return;
  }
}

}  // namespace

Formula parse_formula(std::string_view text) {
  return Parser(Lexer(text).run()).parse();
}

std::string to_string(const Formula& phi) {
  std::string out;
  print(phi, out);
  return out;
}

std::string format_real(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw std::runtime_error("failed to format real");
  return std::string(buf, ptr);
}

}  // namespace stlcc
