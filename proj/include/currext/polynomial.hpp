#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "currext/errors.hpp"
#include "currext/rational.hpp"

namespace currext {

using Monomial = std::vector<int>;  // exponent vector

inline int degree(const Monomial& m) {
  int d = 0;
  for (int e : m) d += e;
  return d;
}

/// Graded-lex: higher total degree first, then lexicographically larger first.
inline bool graded_lex_greater(const Monomial& a, const Monomial& b) {
  int da = degree(a), db = degree(b);
  if (da != db) return da > db;
  return a > b;
}

/// Sparse polynomial with rational coefficients in a fixed number of variables.
class Polynomial {
 public:
  explicit Polynomial(std::size_t arity = 0) : arity_(arity) {}

  static Polynomial constant(std::size_t arity, const Rational& c) {
    Polynomial p(arity);
    if (c != 0) p.terms_[Monomial(arity, 0)] = c;
    return p;
  }
  static Polynomial variable(std::size_t arity, std::size_t i) {
    Polynomial p(arity);
    Monomial m(arity, 0);
    m[i] = 1;
    p.terms_[m] = 1;
    return p;
  }
  static Polynomial monomial(const Monomial& m, const Rational& c = 1) {
    Polynomial p(m.size());
    if (c != 0) p.terms_[m] = c;
    return p;
  }

  std::size_t arity() const { return arity_; }
  const std::map<Monomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  int degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, currext::degree(m));
    return d;
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_arity(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check_arity(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(const Polynomial& a) { return Polynomial(a.arity_) - a; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_arity(b);
    Polynomial out(a.arity_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        Monomial m(a.arity_);
        for (std::size_t i = 0; i < a.arity_; ++i) m[i] = ma[i] + mb[i];
        out.add_term(m, ca * cb);
      }
    return out;
  }
  friend Polynomial operator*(const Rational& s, const Polynomial& a) {
    return Polynomial::constant(a.arity_, s) * a;
  }

  Polynomial pow(unsigned k) const {
    Polynomial out = constant(arity_, 1);
    for (unsigned i = 0; i < k; ++i) out = out * *this;
    return out;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.arity_ == b.arity_ && a.terms_ == b.terms_;
  }

  Rational evaluate(std::span<const Rational> point) const {
    if (point.size() != arity_)
      fail(ErrorKind::ArityMismatch, "point has " + std::to_string(point.size()) + " coordinates, polynomial has " +
                                         std::to_string(arity_) + " variables");
    Rational total = 0;
    for (const auto& [m, c] : terms_) {
      Rational t = c;
      for (std::size_t i = 0; i < arity_; ++i)
        for (int e = 0; e < m[i]; ++e) t *= point[i];
      total += t;
    }
    return total;
  }

  Polynomial derivative(std::size_t var) const {
    Polynomial out(arity_);
    for (const auto& [m, c] : terms_) {
      if (m[var] == 0) continue;
      Monomial d = m;
      d[var] -= 1;
      out.add_term(d, c * m[var]);
    }
    return out;
  }

  /// f(u + p): the same polynomial in coordinates centred at p.
  Polynomial shifted(std::span<const Rational> p) const {
    if (p.size() != arity_) fail(ErrorKind::ArityMismatch, "shift point has wrong arity");
    std::vector<Polynomial> subst;
    for (std::size_t i = 0; i < arity_; ++i) subst.push_back(variable(arity_, i) + constant(arity_, p[i]));
    Polynomial out(arity_);
    for (const auto& [m, c] : terms_) {
      Polynomial t = constant(arity_, c);
      for (std::size_t i = 0; i < arity_; ++i)
        if (m[i]) t = t * subst[i].pow(static_cast<unsigned>(m[i]));
      out += t;
    }
    return out;
  }

  /// Terms of total degree < k.
  Polynomial truncated(int k) const {
    Polynomial out(arity_);
    for (const auto& [m, c] : terms_)
      if (currext::degree(m) < k) out.terms_.emplace(m, c);
    return out;
  }

  std::string str(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::vector<std::pair<Monomial, Rational>> ts(terms_.begin(), terms_.end());
    std::sort(ts.begin(), ts.end(), [](const auto& a, const auto& b) { return graded_lex_greater(a.first, b.first); });
    std::string out;
    bool first = true;
    for (const auto& [m, c] : ts) {
      Rational a = abs(c);
      std::string mono = monomial_str(m, names);
      if (first) {
        if (c < 0) out += "-";
      } else {
        out += c < 0 ? " - " : " + ";
      }
      if (mono.empty()) {
        out += to_string(a);
      } else {
        if (a != 1) out += to_string(a) + "*";
        out += mono;
      }
      first = false;
    }
    return out;
  }

  static std::string monomial_str(const Monomial& m, const std::vector<std::string>& names) {
    std::string s;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (!m[i]) continue;
      if (!s.empty()) s += "*";
      s += i < names.size() ? names[i] : "x" + std::to_string(i);
      if (m[i] > 1) s += "^" + std::to_string(m[i]);
    }
    return s;
  }

 private:
  void check_arity(const Polynomial& o) const {
    if (o.arity_ != arity_) fail(ErrorKind::ArityMismatch, "polynomials in different numbers of variables");
  }
  void add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  std::size_t arity_;
  std::map<Monomial, Rational> terms_;
};

namespace detail {

class PolynomialParser {
 public:
  PolynomialParser(std::string_view text, const std::vector<std::string>& names) : s_(text), names_(names) {}

  Polynomial parse() {
    Polynomial p = expr();
    skip();
    if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorKind::ParseError,
         what + " at offset " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial expr() {
    Polynomial p = term();
    for (;;) {
      if (eat('+')) p += term();
      else if (eat('-')) p -= term();
      else return p;
    }
  }

  Polynomial term() {
    Polynomial p = unary();
    for (;;) {
      skip();
      if (pos_ + 1 < s_.size() && s_[pos_] == '*' && s_[pos_ + 1] == '*') return p;  // handled in power()
      if (eat('*')) {
        p = p * unary();
      } else if (eat('/')) {
        Polynomial d = unary();
        if (d.degree() > 0 || d.is_zero()) error("division is only allowed by a nonzero constant");
        p = Rational(1 / d.terms().begin()->second) * p;
      } else {
        return p;
      }
    }
  }

  Polynomial unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  Polynomial power() {
    Polynomial base = primary();
    skip();
    bool has_pow = false;
    if (pos_ < s_.size() && s_[pos_] == '^') {
      ++pos_;
      has_pow = true;
    } else if (pos_ + 1 < s_.size() && s_[pos_] == '*' && s_[pos_ + 1] == '*') {
      pos_ += 2;
      has_pow = true;
    }
    if (!has_pow) return base;
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) error("expected a nonnegative integer exponent");
    return base.pow(static_cast<unsigned>(std::stoul(std::string(s_.substr(start, pos_ - start)))));
  }

  Polynomial primary() {
    skip();
    if (pos_ >= s_.size()) error("unexpected end of expression");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial p = expr();
      if (!eat(')')) error("expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return Polynomial::constant(names_.size(), Rational(Integer(std::string(s_.substr(start, pos_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      auto it = std::find(names_.begin(), names_.end(), name);
      if (it == names_.end()) error("unknown generator '" + name + "'");
      return Polynomial::variable(names_.size(), static_cast<std::size_t>(it - names_.begin()));
    }
    error("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  const std::vector<std::string>& names_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Grammar: sums and differences of products of generators, rational
/// literals and parenthesised expressions; `^` (or `**`) takes a nonnegative
/// integer exponent; `/` only divides by a nonzero constant.
inline Polynomial parse_polynomial(std::string_view text, const std::vector<std::string>& generators) {
  return detail::PolynomialParser(text, generators).parse();
}

}  // namespace currext
