#pragma once

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "twlab/error.hpp"
#include "twlab/po_instance.hpp"
#include "twlab/rational.hpp"
#include "twlab/small_rational.hpp"

namespace twlab {

enum class RowRelation { Le, Eq, Ge };

inline const char* to_string(RowRelation r) {
  switch (r) {
    case RowRelation::Le:
      return "<=";
    case RowRelation::Eq:
      return "=";
    case RowRelation::Ge:
      return ">=";
  }
  return "?";
}

struct LPVariable {
  std::string name;
  std::optional<Rational> lower = Rational(0);  // nullopt = -infinity
  std::optional<Rational> upper;                // nullopt = +infinity
};

struct LPRow {
  std::string name;
  std::vector<std::pair<int, Rational>> coeffs;  // column index, coefficient
  RowRelation relation = RowRelation::Le;
  Rational rhs;
};

class LinearProgram {
 public:
  int add_variable(const std::string& name, std::optional<Rational> lower = Rational(0),
                   std::optional<Rational> upper = std::nullopt) {
    if (index_.count(name)) throw InvalidInput("duplicate LP variable '" + name + "'");
    if (lower && upper && *lower > *upper) throw InvalidInput("empty bounds for LP variable '" + name + "'");
    int id = static_cast<int>(vars_.size());
    vars_.push_back({name, std::move(lower), std::move(upper)});
    index_.emplace(name, id);
    objective_.emplace_back(0);
    return id;
  }

  void add_row(std::vector<std::pair<int, Rational>> coeffs, RowRelation rel, Rational rhs, std::string name = {}) {
    std::map<int, Rational> merged;
    for (auto& [c, v] : coeffs) {
      if (c < 0 || c >= column_count()) throw InvalidInput("LP row references an undeclared column");
      merged[c] += v;
    }
    LPRow row;
    row.name = name.empty() ? "r" + std::to_string(rows_.size()) : std::move(name);
    for (auto& [c, v] : merged)
      if (v != 0) row.coeffs.emplace_back(c, v);
    row.relation = rel;
    row.rhs = std::move(rhs);
    rows_.push_back(std::move(row));
  }

  void set_objective_coeff(int col, const Rational& c) { objective_.at(col) = c; }
  void set_sense(Sense s) { sense_ = s; }

  int column_count() const { return static_cast<int>(vars_.size()); }
  int row_count() const { return static_cast<int>(rows_.size()); }
  const std::vector<LPVariable>& variables() const { return vars_; }
  const std::vector<LPRow>& rows() const { return rows_; }
  const std::vector<Rational>& objective() const { return objective_; }
  Sense sense() const { return sense_; }

  std::optional<int> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  int index_of(const std::string& name) const {
    auto f = find(name);
    if (!f) throw InvalidInput("unknown LP variable '" + name + "'");
    return *f;
  }

 private:
  std::vector<LPVariable> vars_;
  std::map<std::string, int> index_;
  std::vector<LPRow> rows_;
  std::vector<Rational> objective_;
  Sense sense_ = Sense::Max;
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

inline const char* to_string(LPStatus s) {
  switch (s) {
    case LPStatus::Optimal:
      return "optimal";
    case LPStatus::Infeasible:
      return "infeasible";
    case LPStatus::Unbounded:
      return "unbounded";
  }
  return "?";
}

struct LPSolution {
  LPStatus status = LPStatus::Infeasible;
  Rational objective;
  std::vector<Rational> values;  // one per LP column
  long pivots = 0;
  bool used_big_rationals = false;

  Rational value(const LinearProgram& lp, const std::string& name) const { return values.at(lp.index_of(name)); }
};

// Checks every bound and row exactly.
inline bool satisfies(const LinearProgram& lp, const std::vector<Rational>& x) {
  if (static_cast<int>(x.size()) != lp.column_count()) return false;
  for (int j = 0; j < lp.column_count(); ++j) {
    const auto& v = lp.variables()[j];
    if ((v.lower && x[j] < *v.lower) || (v.upper && x[j] > *v.upper)) return false;
  }
  for (const auto& r : lp.rows()) {
    Rational lhs = 0;
    for (const auto& [c, a] : r.coeffs) lhs += a * x[c];
    if ((r.relation == RowRelation::Le && lhs > r.rhs) || (r.relation == RowRelation::Ge && lhs < r.rhs) ||
        (r.relation == RowRelation::Eq && lhs != r.rhs))
      return false;
  }
  return true;
}

namespace detail {

inline int sign_of(const Rational& q) { return sgn(q); }
inline int sign_of(const SmallRational& q) { return q.sign(); }
inline Rational to_exact(const Rational& q) { return q; }
inline Rational to_exact(const SmallRational& q) { return q.to_rational(); }
template <class T>
T from_exact(const Rational& q);
template <>
inline Rational from_exact<Rational>(const Rational& q) {
  return q;
}
template <>
inline SmallRational from_exact<SmallRational>(const Rational& q) {
  return SmallRational::from(q);
}

template <class T>
using SparseRow = std::vector<std::pair<int, T>>;

template <class T>
const T* lookup(const SparseRow<T>& row, int col) {
  auto it = std::lower_bound(row.begin(), row.end(), col, [](const auto& e, int c) { return e.first < c; });
  if (it == row.end() || it->first != col) return nullptr;
  return &it->second;
}

// row -= f * pivot_row
template <class T>
void axpy(SparseRow<T>& row, const T& f, const SparseRow<T>& pivot_row) {
  SparseRow<T> out;
  out.reserve(row.size() + pivot_row.size());
  std::size_t i = 0, j = 0;
  while (i < row.size() || j < pivot_row.size()) {
    if (j == pivot_row.size() || (i < row.size() && row[i].first < pivot_row[j].first)) {
      out.push_back(std::move(row[i++]));
    } else if (i == row.size() || pivot_row[j].first < row[i].first) {
      out.emplace_back(pivot_row[j].first, -(f * pivot_row[j].second));
      ++j;
    } else {
      T v = row[i].second - f * pivot_row[j].second;
      if (sign_of(v) != 0) out.emplace_back(row[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  row = std::move(out);
}

// Standard form: min c x, A x = b, x >= 0, b >= 0.
struct StandardForm {
  int columns = 0;
  std::vector<SparseRow<Rational>> rows;
  std::vector<Rational> rhs;
  std::vector<Rational> cost;
  std::vector<int> slack_basis;  // per row: slack column usable as initial basis, or -1
  // reconstruction: x_j = offset_j + sum(scale * col)
  std::vector<Rational> offset;
  std::vector<std::vector<std::pair<int, Rational>>> recon;
  Rational cost_offset = 0;
};

inline StandardForm standardize(const LinearProgram& lp) {
  StandardForm sf;
  const int n = lp.column_count();
  sf.offset.assign(n, 0);
  sf.recon.resize(n);
  std::vector<std::vector<std::pair<int, Rational>>> subst(n);  // x_j in terms of std columns
  std::vector<std::pair<int, Rational>> upper_rows;            // (std col, bound)
  for (int j = 0; j < n; ++j) {
    const auto& v = lp.variables()[j];
    if (v.lower) {
      sf.offset[j] = *v.lower;
      int c = sf.columns++;
      subst[j] = {{c, Rational(1)}};
      if (v.upper) upper_rows.emplace_back(c, *v.upper - *v.lower);
    } else if (v.upper) {
      sf.offset[j] = *v.upper;
      int c = sf.columns++;
      subst[j] = {{c, Rational(-1)}};
    } else {
      int c1 = sf.columns++;
      int c2 = sf.columns++;
      subst[j] = {{c1, Rational(1)}, {c2, Rational(-1)}};
    }
    sf.recon[j] = subst[j];
  }
  const bool maximize = lp.sense() == Sense::Max;
  std::vector<Rational> cost(sf.columns, 0);
  for (int j = 0; j < n; ++j) {
    Rational c = maximize ? Rational(-lp.objective()[j]) : lp.objective()[j];
    if (c == 0) continue;
    sf.cost_offset += c * sf.offset[j];
    for (const auto& [col, s] : subst[j]) cost[col] += c * s;
  }

  struct Pending {
    std::map<int, Rational> coeffs;
    RowRelation rel;
    Rational rhs;
  };
  std::vector<Pending> pending;
  for (const auto& r : lp.rows()) {
    Pending p{{}, r.relation, r.rhs};
    for (const auto& [j, a] : r.coeffs) {
      p.rhs -= a * sf.offset[j];
      for (const auto& [col, s] : subst[j]) p.coeffs[col] += a * s;
    }
    pending.push_back(std::move(p));
  }
  for (const auto& [col, ub] : upper_rows) pending.push_back({{{col, Rational(1)}}, RowRelation::Le, ub});

  for (auto& p : pending) {
    int slack = -1;
    if (p.rel != RowRelation::Eq) {
      slack = sf.columns++;
      p.coeffs[slack] = p.rel == RowRelation::Le ? 1 : -1;
    }
    if (p.rhs < 0) {
      p.rhs = -p.rhs;
      for (auto& [c, a] : p.coeffs) a = -a;
    }
    SparseRow<Rational> row;
    for (auto& [c, a] : p.coeffs)
      if (a != 0) row.emplace_back(c, a);
    int basis = -1;
    if (slack >= 0) {
      const Rational* a = lookup(row, slack);
      if (a && *a == 1) basis = slack;
    }
    sf.rows.push_back(std::move(row));
    sf.rhs.push_back(p.rhs);
    sf.slack_basis.push_back(basis);
  }
  cost.resize(sf.columns, 0);
  sf.cost = std::move(cost);
  return sf;
}

template <class T>
struct Tableau {
  std::vector<SparseRow<T>> rows;
  std::vector<T> rhs;
  std::vector<int> basis;
  int columns = 0;
  long pivots = 0;

  void pivot(int r, int e) {
    ++pivots;
    T a = *lookup(rows[r], e);
    if (!(a == T(1))) {
      for (auto& [c, v] : rows[r]) v = v / a;
      rhs[r] = rhs[r] / a;
    }
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
      if (i == r) continue;
      const T* f = lookup(rows[i], e);
      if (!f) continue;
      T factor = *f;
      axpy(rows[i], factor, rows[r]);
      rhs[i] = rhs[i] - factor * rhs[r];
    }
    basis[r] = e;
  }

  // Reduced costs d = c - c_B B^{-1} A for the current basis.
  std::vector<T> reduced_costs(const std::vector<T>& cost, T& value) const {
    std::vector<T> d = cost;
    value = T(0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const T& cb = cost[basis[i]];
      if (sign_of(cb) == 0) continue;
      for (const auto& [c, v] : rows[i]) d[c] = d[c] - cb * v;
      value = value + cb * rhs[i];
    }
    return d;
  }

  // Dantzig pricing (most negative reduced cost, smallest column on ties)
  // while pivots make progress; after a degenerate pivot switch to Bland's
  // rule until the objective moves again, which rules out cycling.
  // Ratio-test ties go to the smallest basic column. Returns false on
  // unboundedness.
  bool optimize(const std::vector<T>& cost, const std::vector<char>& allowed) {
    T value;
    std::vector<T> d = reduced_costs(cost, value);
    int degenerate = 0;
    for (;;) {
      const bool bland = degenerate > 0;
      int e = -1;
      for (int c = 0; c < columns; ++c) {
        if (!allowed[c] || sign_of(d[c]) >= 0) continue;
        if (e < 0 || (!bland && d[c] < d[e])) e = c;
        if (bland) break;
      }
      if (e < 0) return true;
      int r = -1;
      T best;
      for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
        const T* a = lookup(rows[i], e);
        if (!a || sign_of(*a) <= 0) continue;
        T ratio = rhs[i] / *a;
        if (r < 0 || ratio < best || (ratio == best && basis[i] < basis[r])) {
          r = i;
          best = ratio;
        }
      }
      if (r < 0) return false;
      degenerate = sign_of(best) == 0 ? degenerate + 1 : 0;
      T de = d[e];
      pivot(r, e);
      for (const auto& [c, v] : rows[r]) d[c] = d[c] - de * v;
    }
  }
};

template <class T>
LPSolution run_simplex(const LinearProgram& lp, const StandardForm& sf) {
  const int m = static_cast<int>(sf.rows.size());
  Tableau<T> tab;
  tab.columns = sf.columns;
  tab.rows.resize(m);
  tab.rhs.resize(m);
  tab.basis.assign(m, -1);
  for (int i = 0; i < m; ++i) {
    for (const auto& [c, a] : sf.rows[i]) tab.rows[i].emplace_back(c, from_exact<T>(a));
    tab.rhs[i] = from_exact<T>(sf.rhs[i]);
  }
  std::vector<int> artificial_of(m, -1);
  for (int i = 0; i < m; ++i) {
    if (sf.slack_basis[i] >= 0) {
      tab.basis[i] = sf.slack_basis[i];
    } else {
      int a = tab.columns++;
      tab.rows[i].emplace_back(a, T(1));
      tab.basis[i] = a;
      artificial_of[i] = a;
    }
  }
  const int total = tab.columns;
  std::vector<char> is_artificial(total, 0);
  for (int a : artificial_of)
    if (a >= 0) is_artificial[a] = 1;

  LPSolution sol;
  bool any_artificial = std::any_of(artificial_of.begin(), artificial_of.end(), [](int a) { return a >= 0; });
  if (any_artificial) {
    std::vector<T> phase1(total, T(0));
    for (int c = 0; c < total; ++c)
      if (is_artificial[c]) phase1[c] = T(1);
    std::vector<char> allowed(total, 1);
    tab.optimize(phase1, allowed);
    T infeas;
    tab.reduced_costs(phase1, infeas);
    if (sign_of(infeas) > 0) {
      sol.status = LPStatus::Infeasible;
      sol.pivots = tab.pivots;
      return sol;
    }
    // Drive remaining artificials out of the basis; drop redundant rows.
    for (int i = 0; i < static_cast<int>(tab.rows.size());) {
      if (!is_artificial[tab.basis[i]]) {
        ++i;
        continue;
      }
      int e = -1;
      for (const auto& [c, v] : tab.rows[i])
        if (!is_artificial[c] && sign_of(v) != 0) {
          e = c;
          break;
        }
      if (e >= 0) {
        tab.pivot(i, e);
        ++i;
      } else {
        tab.rows.erase(tab.rows.begin() + i);
        tab.rhs.erase(tab.rhs.begin() + i);
        tab.basis.erase(tab.basis.begin() + i);
      }
    }
  }
  std::vector<T> cost(total, T(0));
  for (int c = 0; c < sf.columns; ++c) cost[c] = from_exact<T>(sf.cost[c]);
  std::vector<char> allowed(total, 1);
  for (int c = 0; c < total; ++c)
    if (is_artificial[c]) allowed[c] = 0;
  if (!tab.optimize(cost, allowed)) {
    sol.status = LPStatus::Unbounded;
    sol.pivots = tab.pivots;
    return sol;
  }
  std::vector<Rational> xs(total, 0);
  for (std::size_t i = 0; i < tab.rows.size(); ++i) xs[tab.basis[i]] = to_exact(tab.rhs[i]);
  sol.status = LPStatus::Optimal;
  sol.values.assign(lp.column_count(), 0);
  for (int j = 0; j < lp.column_count(); ++j) {
    Rational v = sf.offset[j];
    for (const auto& [c, s] : sf.recon[j]) v += s * xs[c];
    sol.values[j] = v;
  }
  Rational obj = 0;
  for (int j = 0; j < lp.column_count(); ++j) obj += lp.objective()[j] * sol.values[j];
  sol.objective = obj;
  sol.pivots = tab.pivots;
  return sol;
}

}  // namespace detail

// Two-phase primal simplex over exact rationals, Dantzig pricing with a
// Bland fallback on degenerate steps. Runs on 64-bit rationals first and
// restarts with GMP rationals on overflow; both paths take the same pivots,
// so the result does not depend on which one finished.
inline LPSolution solve_lp(const LinearProgram& lp) {
  detail::StandardForm sf = detail::standardize(lp);
  try {
    return detail::run_simplex<SmallRational>(lp, sf);
  } catch (const SmallRationalOverflow&) {
    LPSolution s = detail::run_simplex<Rational>(lp, sf);
    s.used_big_rationals = true;
    return s;
  }
}

// CPLEX LP text. Coefficients with terminating decimal expansions are exact;
// others are written to 17 significant digits.
namespace detail {

inline std::string lp_number(const Rational& q) {
  Integer den = q.get_den();
  Integer d = den;
  int twos = 0, fives = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  if (d != 1) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", q.get_d());
    return buf;
  }
  if (den == 1) return q.get_num().get_str();
  int digits = std::max(twos, fives);
  Integer scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  Integer scaled = abs(q.get_num()) * (scale / den);
  std::string s = scaled.get_str();
  if (static_cast<int>(s.size()) <= digits) s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
  s.insert(s.size() - static_cast<std::size_t>(digits), ".");
  return (q < 0 ? "-" : "") + s;
}

inline std::string lp_name(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.') ? c : '_';
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0])) || out[0] == '.') out.insert(0, "v");
  return out;
}

inline void lp_terms(std::ostream& out, const std::vector<std::pair<int, Rational>>& terms,
                     const LinearProgram& lp) {
  bool first = true;
  for (const auto& [c, a] : terms) {
    if (a == 0) continue;
    Rational mag = abs_value(a);
    out << (a < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
    if (mag != 1) out << lp_number(mag) << ' ';
    out << lp_name(lp.variables()[c].name);
    first = false;
  }
  if (first) out << "0 " << lp_name(lp.variables().empty() ? "x" : lp.variables()[0].name);
}

}  // namespace detail

inline void write_lp_text(std::ostream& out, const LinearProgram& lp) {
  out << (lp.sense() == Sense::Max ? "Maximize" : "Minimize") << "\n obj: ";
  std::vector<std::pair<int, Rational>> obj;
  for (int j = 0; j < lp.column_count(); ++j)
    if (lp.objective()[j] != 0) obj.emplace_back(j, lp.objective()[j]);
  if (lp.column_count() == 0)
    out << "0";
  else
    detail::lp_terms(out, obj, lp);
  out << "\nSubject To\n";
  for (const auto& r : lp.rows()) {
    out << ' ' << detail::lp_name(r.name) << ": ";
    detail::lp_terms(out, r.coeffs, lp);
    out << ' ' << to_string(r.relation) << ' ' << detail::lp_number(r.rhs) << '\n';
  }
  out << "Bounds\n";
  for (const auto& v : lp.variables()) {
    std::string name = detail::lp_name(v.name);
    if (!v.lower && !v.upper)
      out << ' ' << name << " free\n";
    else if (!v.lower)
      out << " -inf <= " << name << " <= " << detail::lp_number(*v.upper) << '\n';
    else if (!v.upper)
      out << ' ' << detail::lp_number(*v.lower) << " <= " << name << " <= +inf\n";
    else
      out << ' ' << detail::lp_number(*v.lower) << " <= " << name << " <= " << detail::lp_number(*v.upper) << '\n';
  }
  out << "End\n";
}

}  // namespace twlab
