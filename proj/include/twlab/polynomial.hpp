#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "twlab/error.hpp"
#include "twlab/rational.hpp"

namespace twlab {

// Variable name -> power, sorted by name, powers strictly positive.
using Monomial = std::vector<std::pair<std::string, unsigned>>;
using Assignment = std::map<std::string, Rational>;

inline Monomial make_monomial(std::vector<std::pair<std::string, unsigned>> powers) {
  std::map<std::string, unsigned> acc;
  for (auto& [v, p] : powers)
    if (p > 0) acc[v] += p;
  return Monomial(acc.begin(), acc.end());
}

inline unsigned total_degree(const Monomial& m) {
  unsigned d = 0;
  for (const auto& [v, p] : m) d += p;
  return d;
}

inline Monomial multiply(const Monomial& a, const Monomial& b) {
  std::vector<std::pair<std::string, unsigned>> all(a.begin(), a.end());
  all.insert(all.end(), b.begin(), b.end());
  return make_monomial(std::move(all));
}

// Sparse multivariate polynomial with exact rational coefficients. Zero
// coefficients are never stored, so terms() is canonical.
class Polynomial {
 public:
  Polynomial() = default;

  static Polynomial constant(const Rational& c) {
    Polynomial p;
    p.add_term({}, c);
    return p;
  }

  static Polynomial variable(const std::string& name, const Rational& coeff = 1) {
    Polynomial p;
    p.add_term({{name, 1}}, coeff);
    return p;
  }

  void add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  const std::map<Monomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  unsigned degree() const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, total_degree(m));
    return d;
  }

  Rational norm1() const {
    Rational s = 0;
    for (const auto& [m, c] : terms_) s += abs_value(c);
    return s;
  }

  std::set<std::string> variables() const {
    std::set<std::string> out;
    for (const auto& [m, c] : terms_)
      for (const auto& [v, p] : m) out.insert(v);
    return out;
  }

  bool is_linear() const { return degree() <= 1; }

  Rational coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  Polynomial rename(const std::map<std::string, std::string>& names) const {
    Polynomial out;
    for (const auto& [m, c] : terms_) {
      std::vector<std::pair<std::string, unsigned>> powers;
      for (const auto& [v, p] : m) {
        auto it = names.find(v);
        powers.emplace_back(it == names.end() ? v : it->second, p);
      }
      out.add_term(make_monomial(std::move(powers)), c);
    }
    return out;
  }

  Polynomial& operator+=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  Polynomial& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
  friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial out;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) out.add_term(multiply(ma, mb), ca * cb);
    return out;
  }
  Polynomial operator-() const { return *this * Rational(-1); }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::map<Monomial, Rational> terms_;
};

inline Rational eval(const Polynomial& p, const Assignment& x) {
  Rational total = 0;
  for (const auto& [m, c] : p.terms()) {
    Rational term = c;
    for (const auto& [v, e] : m) {
      auto it = x.find(v);
      if (it == x.end()) throw InvalidInput("variable '" + v + "' is not assigned");
      term *= power(it->second, e);
    }
    total += term;
  }
  return total;
}

// Human-readable form, e.g. "x^2 - x + 1/2". Terms follow the canonical order.
inline std::string to_string(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    Rational mag = abs_value(c);
    if (first)
      out += c < 0 ? "-" : "";
    else
      out += c < 0 ? " - " : " + ";
    std::string mono;
    for (const auto& [v, e] : m) {
      if (!mono.empty()) mono += "*";
      mono += v;
      if (e > 1) mono += "^" + std::to_string(e);
    }
    if (mono.empty())
      out += to_string(mag);
    else if (mag == 1)
      out += mono;
    else
      out += to_string(mag) + "*" + mono;
    first = false;
  }
  return out;
}

}  // namespace twlab
