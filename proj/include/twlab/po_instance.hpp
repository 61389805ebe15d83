#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "twlab/error.hpp"
#include "twlab/graph.hpp"
#include "twlab/polynomial.hpp"
#include "twlab/rational.hpp"

namespace twlab {

enum class Domain { Binary, Unit };
enum class Relation { Ge0, Eq0 };
enum class Sense { Min, Max };

inline const char* to_string(Domain d) { return d == Domain::Binary ? "binary" : "unit"; }
inline const char* to_string(Relation r) { return r == Relation::Ge0 ? "ge0" : "eq0"; }
inline const char* to_string(Sense s) { return s == Sense::Min ? "min" : "max"; }

struct Variable {
  std::string name;
  Domain domain = Domain::Unit;
};

struct Constraint {
  Polynomial poly;
  Relation relation = Relation::Ge0;
};

// Polynomial optimisation instance: linear objective, polynomial constraints
// f >= 0 or f = 0, variables binary or in [0,1]. Variable order is the order
// of declaration and determines vertex order in the intersection graph.
class POInstance {
 public:
  int add_variable(const std::string& name, Domain domain) {
    if (name.empty()) throw InvalidInput("empty variable name");
    if (index_.count(name)) throw InvalidInput("duplicate variable '" + name + "'");
    int id = static_cast<int>(vars_.size());
    vars_.push_back({name, domain});
    index_.emplace(name, id);
    return id;
  }

  void add_constraint(Polynomial p, Relation rel) {
    for (const auto& v : p.variables())
      if (!index_.count(v)) throw InvalidInput("constraint uses undeclared variable '" + v + "'");
    constraints_.push_back({std::move(p), rel});
  }

  void set_objective(Sense sense, std::map<std::string, Rational> coeffs) {
    for (auto it = coeffs.begin(); it != coeffs.end();) {
      if (!index_.count(it->first)) throw InvalidInput("objective uses undeclared variable '" + it->first + "'");
      it = it->second == 0 ? coeffs.erase(it) : std::next(it);
    }
    sense_ = sense;
    objective_ = std::move(coeffs);
  }

  void set_domain(const std::string& name, Domain d) { vars_[index_of(name)].domain = d; }

  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::map<std::string, Rational>& objective() const { return objective_; }
  Sense sense() const { return sense_; }
  int variable_count() const { return static_cast<int>(vars_.size()); }

  bool has_variable(const std::string& name) const { return index_.count(name) != 0; }
  int index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw InvalidInput("unknown variable '" + name + "'");
    return it->second;
  }
  const Variable& variable(const std::string& name) const { return vars_[index_of(name)]; }

  std::vector<int> binary_indices() const {
    std::vector<int> out;
    for (int i = 0; i < variable_count(); ++i)
      if (vars_[i].domain == Domain::Binary) out.push_back(i);
    return out;
  }

  bool all_binary() const {
    return std::all_of(vars_.begin(), vars_.end(), [](const Variable& v) { return v.domain == Domain::Binary; });
  }

  Rational objective_coeff(const std::string& name) const {
    auto it = objective_.find(name);
    return it == objective_.end() ? Rational(0) : it->second;
  }

  // ||c_N||_1: objective mass on continuous variables.
  Rational continuous_objective_norm() const {
    Rational s = 0;
    for (const auto& [v, c] : objective_)
      if (variable(v).domain == Domain::Unit) s += abs_value(c);
    return s;
  }

  unsigned degree() const {
    unsigned d = 0;
    for (const auto& c : constraints_) d = std::max(d, c.poly.degree());
    return d;
  }

  Rational objective_value(const Assignment& x) const {
    Rational s = 0;
    for (const auto& [v, c] : objective_) {
      auto it = x.find(v);
      if (it == x.end()) throw InvalidInput("variable '" + v + "' is not assigned");
      s += c * it->second;
    }
    return s;
  }

  // Canonical text: variables sorted by name, monomials in canonical order,
  // coefficients as reduced fractions. Constraint order is kept since it is
  // part of the instance.
  std::string canonical_serialization() const {
    std::ostringstream out;
    std::vector<Variable> sorted = vars_;
    std::sort(sorted.begin(), sorted.end(), [](const Variable& a, const Variable& b) { return a.name < b.name; });
    out << "vars";
    for (const auto& v : sorted) out << ' ' << v.name << ':' << to_string(v.domain);
    out << "\nobjective " << to_string(sense_);
    for (const auto& [v, c] : objective_) out << ' ' << v << ':' << to_string(c);
    for (const auto& c : constraints_) {
      out << '\n' << to_string(c.relation);
      for (const auto& [m, coeff] : c.poly.terms()) {
        out << ' ' << to_string(coeff);
        for (const auto& [v, p] : m) out << '*' << v << '^' << p;
      }
    }
    out << '\n';
    return out.str();
  }

  std::size_t encoding_size() const { return canonical_serialization().size(); }

 private:
  std::vector<Variable> vars_;
  std::map<std::string, int> index_;
  std::vector<Constraint> constraints_;
  std::map<std::string, Rational> objective_;
  Sense sense_ = Sense::Min;
};

// Gamma[I]: one vertex per variable, an edge between variables sharing a
// constraint.
inline Graph intersection_graph(const POInstance& inst) {
  std::vector<std::string> labels;
  for (const auto& v : inst.variables()) labels.push_back(v.name);
  Graph g(labels);
  for (const auto& c : inst.constraints()) {
    auto vars = c.poly.variables();
    std::vector<int> ids;
    for (const auto& v : vars) ids.push_back(inst.index_of(v));
    for (std::size_t a = 0; a < ids.size(); ++a)
      for (std::size_t b = a + 1; b < ids.size(); ++b) g.add_edge(ids[a], ids[b]);
  }
  return g;
}

struct ConstraintSlack {
  int index = 0;
  Rational value;      // f_i(x)
  Rational tolerance;  // eps * ||f_i||_1
  bool satisfied = true;
};

struct FeasibilityReport {
  bool feasible = true;
  std::vector<std::string> domain_violations;
  std::vector<ConstraintSlack> constraints;
  explicit operator bool() const { return feasible; }
  Rational max_violation() const {
    Rational worst = 0;
    for (const auto& c : constraints) {
      Rational over = c.value < 0 ? Rational(-c.value) : Rational(0);
      if (over > worst) worst = over;
    }
    return worst;
  }
};

// Membership in S_eps. Equality rows are read two-sidedly: |f(x)| <= eps*||f||_1.
inline FeasibilityReport eps_feasible(const POInstance& inst, const Assignment& x, const Rational& eps) {
  if (eps < 0) throw InvalidInput("eps must be nonnegative");
  FeasibilityReport rep;
  for (const auto& v : inst.variables()) {
    auto it = x.find(v.name);
    if (it == x.end()) throw InvalidInput("variable '" + v.name + "' is not assigned");
    const Rational& val = it->second;
    bool ok = v.domain == Domain::Binary ? (val == 0 || val == 1) : (val >= 0 && val <= 1);
    if (!ok) {
      rep.feasible = false;
      rep.domain_violations.push_back(v.name + " = " + to_string(val));
    }
  }
  for (std::size_t i = 0; i < inst.constraints().size(); ++i) {
    const auto& c = inst.constraints()[i];
    ConstraintSlack s;
    s.index = static_cast<int>(i);
    s.value = eval(c.poly, x);
    s.tolerance = eps * c.poly.norm1();
    s.satisfied = c.relation == Relation::Ge0 ? s.value >= -s.tolerance : abs_value(s.value) <= s.tolerance;
    if (!s.satisfied) rep.feasible = false;
    rep.constraints.push_back(std::move(s));
  }
  return rep;
}

inline bool is_feasible(const POInstance& inst, const Assignment& x) { return eps_feasible(inst, x, 0).feasible; }

// Index-based form of a constraint for repeated evaluation.
struct CompiledPolynomial {
  struct Term {
    Rational coeff;
    std::vector<std::pair<int, unsigned>> powers;  // variable index, power
  };
  std::vector<Term> terms;
  std::vector<int> support;  // sorted variable indices
  Rational norm1;

  CompiledPolynomial() = default;
  CompiledPolynomial(const Polynomial& p, const POInstance& inst) : norm1(p.norm1()) {
    std::set<int> sup;
    for (const auto& [m, c] : p.terms()) {
      Term t{c, {}};
      for (const auto& [v, e] : m) {
        int id = inst.index_of(v);
        t.powers.emplace_back(id, e);
        sup.insert(id);
      }
      terms.push_back(std::move(t));
    }
    support.assign(sup.begin(), sup.end());
  }

  // values indexed by variable index
  Rational eval(const std::vector<Rational>& values) const {
    Rational total = 0;
    for (const auto& t : terms) {
      Rational term = t.coeff;
      for (auto [id, e] : t.powers) term *= power(values[id], e);
      total += term;
    }
    return total;
  }
};

struct BruteForceOptions {
  std::uint64_t cap = 50'000'000;  // grid points
};

struct BruteForceResult {
  bool feasible = false;
  Rational value;
  Assignment assignment;
};

// Exhaustive optimum over binary values x grid {0, g, 2g, ..., 1} on
// continuous variables. Constraints are checked as soon as their support is
// fixed; ties keep the first point in enumeration order.
inline BruteForceResult brute_force_optimum(const POInstance& inst, const Rational& grid,
                                            const BruteForceOptions& opt = {}) {
  if (grid <= 0 || grid > 1) throw InvalidInput("grid step must lie in (0, 1]");
  Rational steps_q = 1 / grid;
  if (!is_integral(steps_q)) throw InvalidInput("grid step must divide 1");
  const int n = inst.variable_count();
  std::uint64_t steps = steps_q.get_num().get_ui();
  long double count = 1;
  for (const auto& v : inst.variables()) count *= v.domain == Domain::Binary ? 2.0L : static_cast<long double>(steps + 1);
  if (count > static_cast<long double>(opt.cap))
    throw CapExceeded("brute-force grid has " + std::to_string(static_cast<double>(count)) + " points, above cap " +
                      std::to_string(opt.cap));

  std::vector<CompiledPolynomial> cons;
  std::vector<Relation> rel;
  std::vector<std::vector<int>> check_at(n + 1);
  for (const auto& c : inst.constraints()) {
    cons.emplace_back(c.poly, inst);
    rel.push_back(c.relation);
    int last = cons.back().support.empty() ? -1 : cons.back().support.back();
    check_at[last + 1].push_back(static_cast<int>(cons.size()) - 1);
  }
  std::vector<Rational> obj(n, 0);
  for (const auto& [v, c] : inst.objective()) obj[inst.index_of(v)] = c;
  const bool maximize = inst.sense() == Sense::Max;

  BruteForceResult best;
  std::vector<Rational> values(n, 0);
  auto ok_at = [&](int level) {
    for (int ci : check_at[level]) {
      Rational v = cons[ci].eval(values);
      if (rel[ci] == Relation::Ge0 ? v < 0 : v != 0) return false;
    }
    return true;
  };
  auto rec = [&](auto&& self, int i, const Rational& partial) -> void {
    if (!ok_at(i)) return;
    if (i == n) {
      if (!best.feasible || (maximize ? partial > best.value : partial < best.value)) {
        best.feasible = true;
        best.value = partial;
        best.assignment.clear();
        for (int j = 0; j < n; ++j) best.assignment[inst.variables()[j].name] = values[j];
      }
      return;
    }
    if (inst.variables()[i].domain == Domain::Binary) {
      for (int b = 0; b <= 1; ++b) {
        values[i] = b;
        self(self, i + 1, partial + obj[i] * b);
      }
    } else {
      for (std::uint64_t k = 0; k <= steps; ++k) {
        values[i] = grid * Rational(static_cast<unsigned long>(k));
        self(self, i + 1, partial + obj[i] * values[i]);
      }
    }
    values[i] = 0;
  };
  rec(rec, 0, Rational(0));
  return best;
}

}  // namespace twlab
