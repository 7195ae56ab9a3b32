#include "wsg/poly2.hpp"

#include <cctype>
#include <stdexcept>
#include <string>

namespace wsg {

std::vector<Exponent> graded_lex_monomials(unsigned degree) {
  std::vector<Exponent> out;
  out.reserve((degree + 1) * (degree + 2) / 2);
  for (unsigned d = 0; d <= degree; ++d) {
    for (unsigned i = 0; i <= d; ++i) out.push_back({i, d - i});
  }
  return out;
}

namespace {

// Recursive descent over:
//   expr    := term (('+'|'-') term)*
//   term    := unary ('*' unary)*
//   unary   := ('+'|'-') unary | power
//   power   := primary ('^' digits)?
//   primary := number | 'x1' | 'x2' | '(' expr ')'
//   number  := digits ('/' digits | '.' digits? ([eE] [+-]? digits)?)?
class PolyParser {
 public:
  explicit PolyParser(std::string_view text) : text_(text) {}

  QPoly parse() {
    QPoly p = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character");
    return p;
  }

 private:
  QPoly expr() {
    QPoly acc = term();
    for (;;) {
      skip_space();
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  QPoly term() {
    QPoly acc = unary();
    for (;;) {
      skip_space();
      if (!accept('*')) return acc;
      acc = acc * unary();
    }
  }

  QPoly unary() {
    skip_space();
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  QPoly power() {
    QPoly base = primary();
    skip_space();
    if (!accept('^')) return base;
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected exponent digits");
    if (pos_ - start > 4) fail("exponent too large");
    const unsigned n = static_cast<unsigned>(std::stoul(std::string(text_.substr(start, pos_ - start))));
    QPoly out(1);
    for (unsigned k = 0; k < n; ++k) out = out * base;
    return out;
  }

  QPoly primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char ch = text_[pos_];
    if (ch == '(') {
      ++pos_;
      QPoly inner = expr();
      skip_space();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (ch == 'x') {
      ++pos_;
      if (accept('1')) return QPoly::x1();
      if (accept('2')) return QPoly::x2();
      fail("expected x1 or x2");
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') return QPoly(number());
    fail("unexpected character");
  }

  Rational number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '/') {
      ++pos_;
      digits();
    } else {
      if (pos_ < text_.size() && text_[pos_] == '.') {
        ++pos_;
        digits();
      }
      if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
        ++pos_;
        if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
        digits();
      }
    }
    try {
      return parse_rational(text_.substr(start, pos_ - start));
    } catch (const std::invalid_argument&) {
      pos_ = start;
      fail("malformed number");
    }
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char ch) {
    if (pos_ < text_.size() && text_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const char* what) const {
    throw std::invalid_argument("polynomial parse error at position " + std::to_string(pos_) + " (" +
                                what + ") in '" + std::string(text_) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

template <class C>
std::string format_poly(const BasicPoly2<C>& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : p.terms()) {
    const bool negative = c < 0;
    const C absval = negative ? C(-c) : c;
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    std::string mono;
    if (e.i > 0) mono += e.i == 1 ? "x1" : "x1^" + std::to_string(e.i);
    if (e.j > 0) {
      if (!mono.empty()) mono += "*";
      mono += e.j == 1 ? "x2" : "x2^" + std::to_string(e.j);
    }
    const bool unit = absval == C(1);
    if (mono.empty()) {
      out += coefficient_text(absval);
    } else if (unit) {
      out += mono;
    } else {
      out += coefficient_text(absval) + "*" + mono;
    }
  }
  return out;
}

}  // namespace

QPoly parse_poly(std::string_view text) { return PolyParser(text).parse(); }

std::string to_string(const QPoly& p) { return format_poly(p); }
std::string to_string(const RPoly& p) { return format_poly(p); }

}  // namespace wsg
