#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "twlab/error.hpp"
#include "twlab/graph.hpp"
#include "twlab/minor.hpp"
#include "twlab/po_instance.hpp"

namespace twlab {

struct Literal {
  int var = 1;  // 1-based
  bool positive = true;
  friend bool operator==(const Literal&, const Literal&) = default;
};

struct Clause {
  Literal a, b;
};

// MAX-2SAT formula; `grid_witness` optionally places variables on grid
// points (row, column), 0-based.
struct Max2SatInstance {
  int variables = 0;
  std::vector<Clause> clauses;
  std::map<int, std::pair<int, int>> grid_witness;

  void validate() const {
    if (variables < 0) throw InvalidInput("negative variable count");
    for (const auto& c : clauses) {
      for (const auto& l : {c.a, c.b})
        if (l.var < 1 || l.var > variables) throw InvalidInput("clause references undeclared variable " + std::to_string(l.var));
      if (c.a.var == c.b.var) throw InvalidInput("clause must use two distinct variables");
    }
  }
};

inline bool literal_value(const Literal& l, bool x) { return l.positive ? x : !x; }

// Weighted DIMACS with unit weights and two literals per clause. Comment
// lines "c grid <var> <row> <col>" record a grid placement.
inline Max2SatInstance read_wcnf(std::istream& in) {
  Max2SatInstance f;
  std::string line;
  bool header = false;
  std::size_t declared = 0;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    auto where = "line " + std::to_string(line_no) + ": ";
    if (tag == "c") {
      std::string word;
      if ((ls >> word) && word == "grid") {
        int v, r, c;
        if (!(ls >> v >> r >> c) || r < 0 || c < 0) throw InvalidInput(where + "malformed grid witness");
        f.grid_witness[v] = {r, c};
      }
      continue;
    }
    if (tag == "p") {
      std::string fmt;
      long n, m;
      if (!(ls >> fmt >> n >> m) || fmt != "wcnf" || n < 0 || m < 0) throw InvalidInput(where + "expected 'p wcnf <n> <m>'");
      f.variables = static_cast<int>(n);
      declared = static_cast<std::size_t>(m);
      header = true;
      continue;
    }
    if (!header) throw InvalidInput(where + "clause before header");
    std::istringstream cs(line);
    long weight;
    if (!(cs >> weight)) throw InvalidInput(where + "malformed clause");
    if (weight != 1) throw InvalidInput(where + "only unit clause weights are supported");
    std::vector<long> lits;
    for (long l; cs >> l && l != 0;) lits.push_back(l);
    if (lits.size() != 2) throw InvalidInput(where + "each clause must have exactly two literals");
    Clause c;
    c.a = {static_cast<int>(std::labs(lits[0])), lits[0] > 0};
    c.b = {static_cast<int>(std::labs(lits[1])), lits[1] > 0};
    f.clauses.push_back(c);
  }
  if (!header) throw InvalidInput("missing 'p wcnf' header");
  if (f.clauses.size() != declared)
    throw InvalidInput("header declares " + std::to_string(declared) + " clauses, found " + std::to_string(f.clauses.size()));
  for (const auto& [v, pos] : f.grid_witness)
    if (v < 1 || v > f.variables) throw InvalidInput("grid witness names undeclared variable " + std::to_string(v));
  f.validate();
  return f;
}

inline void write_wcnf(std::ostream& out, const Max2SatInstance& f) {
  for (const auto& [v, pos] : f.grid_witness) out << "c grid " << v << ' ' << pos.first << ' ' << pos.second << '\n';
  out << "p wcnf " << f.variables << ' ' << f.clauses.size() << '\n';
  for (const auto& c : f.clauses)
    out << "1 " << (c.a.positive ? "" : "-") << c.a.var << ' ' << (c.b.positive ? "" : "-") << c.b.var << " 0\n";
}

// Plain CNF whose clauses have one or two literals.
struct TwoSatFormula {
  int variables = 0;
  std::vector<std::vector<Literal>> clauses;
};

inline TwoSatFormula read_cnf(std::istream& in) {
  TwoSatFormula f;
  std::string line;
  bool header = false;
  std::size_t declared = 0;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag == "c") continue;
    auto where = "line " + std::to_string(line_no) + ": ";
    if (tag == "p") {
      std::string fmt;
      long n, m;
      if (!(ls >> fmt >> n >> m) || fmt != "cnf" || n < 0 || m < 0) throw InvalidInput(where + "expected 'p cnf <n> <m>'");
      f.variables = static_cast<int>(n);
      declared = static_cast<std::size_t>(m);
      header = true;
      continue;
    }
    if (!header) throw InvalidInput(where + "clause before header");
    std::istringstream cs(line);
    std::vector<Literal> clause;
    for (long l; cs >> l && l != 0;) {
      if (std::labs(l) > f.variables) throw InvalidInput(where + "literal out of range");
      clause.push_back({static_cast<int>(std::labs(l)), l > 0});
    }
    if (clause.empty() || clause.size() > 2) throw InvalidInput(where + "clauses must have one or two literals");
    f.clauses.push_back(std::move(clause));
  }
  if (!header) throw InvalidInput("missing 'p cnf' header");
  if (f.clauses.size() != declared)
    throw InvalidInput("header declares " + std::to_string(declared) + " clauses, found " + std::to_string(f.clauses.size()));
  return f;
}

inline std::string x_name(int j) { return "x" + std::to_string(j); }

namespace detail {

// Polynomial of a literal: x or 1 - x.
inline Polynomial literal_poly(const Literal& l) {
  Polynomial x = Polynomial::variable(x_name(l.var));
  return l.positive ? x : Polynomial::constant(1) - x;
}

inline Polynomial integrality(const std::string& v) {
  Polynomial p;
  p.add_term({{v, 2}}, 1);
  p.add_term({{v, 1}}, -1);
  return p;
}

}  // namespace detail

// Two indicator variables per clause: y_i1 <= lit_a, y_i2 <= lit_b,
// y_i1 + y_i2 <= 1, and x_j^2 - x_j = 0 on the continuous x_j.
inline POInstance encode_max2sat(const Max2SatInstance& f) {
  f.validate();
  POInstance inst;
  for (int j = 1; j <= f.variables; ++j) inst.add_variable(x_name(j), Domain::Unit);
  std::map<std::string, Rational> obj;
  for (std::size_t i = 0; i < f.clauses.size(); ++i) {
    std::string y1 = "y" + std::to_string(i + 1) + "_1";
    std::string y2 = "y" + std::to_string(i + 1) + "_2";
    inst.add_variable(y1, Domain::Binary);
    inst.add_variable(y2, Domain::Binary);
    obj[y1] = 1;
    obj[y2] = 1;
  }
  for (std::size_t i = 0; i < f.clauses.size(); ++i) {
    const auto& c = f.clauses[i];
    Polynomial y1 = Polynomial::variable("y" + std::to_string(i + 1) + "_1");
    Polynomial y2 = Polynomial::variable("y" + std::to_string(i + 1) + "_2");
    inst.add_constraint(detail::literal_poly(c.a) - y1, Relation::Ge0);
    inst.add_constraint(detail::literal_poly(c.b) - y2, Relation::Ge0);
    inst.add_constraint(Polynomial::constant(1) - y1 - y2, Relation::Ge0);
  }
  for (int j = 1; j <= f.variables; ++j) inst.add_constraint(detail::integrality(x_name(j)), Relation::Eq0);
  inst.set_objective(Sense::Max, std::move(obj));
  return inst;
}

// One indicator per clause bounded by the quadratic clause polynomial
// lit_a + lit_b - lit_a*lit_b.
inline POInstance encode_max2sat_v1(const Max2SatInstance& f) {
  f.validate();
  POInstance inst;
  for (int j = 1; j <= f.variables; ++j) inst.add_variable(x_name(j), Domain::Unit);
  std::map<std::string, Rational> obj;
  for (std::size_t i = 0; i < f.clauses.size(); ++i) {
    std::string y = "y" + std::to_string(i + 1);
    inst.add_variable(y, Domain::Binary);
    obj[y] = 1;
  }
  for (std::size_t i = 0; i < f.clauses.size(); ++i) {
    const auto& c = f.clauses[i];
    Polynomial la = detail::literal_poly(c.a);
    Polynomial lb = detail::literal_poly(c.b);
    inst.add_constraint(la + lb - la * lb - Polynomial::variable("y" + std::to_string(i + 1)), Relation::Ge0);
  }
  for (int j = 1; j <= f.variables; ++j) inst.add_constraint(detail::integrality(x_name(j)), Relation::Eq0);
  inst.set_objective(Sense::Max, std::move(obj));
  return inst;
}

// Binary variables x_1..x_n, one row per clause: lit_a + lit_b - 1 >= 0, or
// lit - 1 >= 0 for a unit clause. Feasible points are the satisfying
// assignments.
inline POInstance encode_2sat_set(const TwoSatFormula& f) {
  POInstance inst;
  for (int j = 1; j <= f.variables; ++j) inst.add_variable(x_name(j), Domain::Binary);
  for (const auto& clause : f.clauses) {
    if (clause.empty() || clause.size() > 2) throw InvalidInput("2-SAT clauses must have one or two literals");
    Polynomial p = Polynomial::constant(-1);
    for (const auto& l : clause) {
      if (l.var < 1 || l.var > f.variables) throw InvalidInput("literal out of range");
      p += detail::literal_poly(l);
    }
    if (clause.size() == 2 && clause[0] == clause[1]) p = detail::literal_poly(clause[0]) - Polynomial::constant(1);
    inst.add_constraint(std::move(p), Relation::Ge0);
  }
  inst.set_objective(Sense::Min, {});
  return inst;
}

struct Max2SatOptimum {
  int satisfied = 0;
  std::vector<bool> assignment;  // index 0 unused
};

inline int count_satisfied(const Max2SatInstance& f, const std::vector<bool>& x) {
  int s = 0;
  for (const auto& c : f.clauses) s += literal_value(c.a, x[c.a.var]) || literal_value(c.b, x[c.b.var]);
  return s;
}

// Exhaustive over 2^n assignments; the first optimum in binary counting
// order is returned.
inline Max2SatOptimum brute_force_max2sat(const Max2SatInstance& f, int cap = 24) {
  if (f.variables > cap) throw CapExceeded("too many variables for exhaustive MAX-2SAT");
  Max2SatOptimum best;
  best.satisfied = -1;
  std::vector<bool> x(f.variables + 1, false);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << f.variables); ++mask) {
    for (int j = 1; j <= f.variables; ++j) x[j] = (mask >> (j - 1)) & 1;
    int s = count_satisfied(f, x);
    if (s > best.satisfied) {
      best.satisfied = s;
      best.assignment = x;
    }
  }
  return best;
}

// Renames variables, keeping declaration order, constraints and objective.
inline POInstance rename_variables(const POInstance& inst, const std::map<std::string, std::string>& names) {
  auto rn = [&](const std::string& v) {
    auto it = names.find(v);
    return it == names.end() ? v : it->second;
  };
  POInstance out;
  for (const auto& v : inst.variables()) out.add_variable(rn(v.name), v.domain);
  for (const auto& c : inst.constraints()) out.add_constraint(c.poly.rename(names), c.relation);
  std::map<std::string, Rational> obj;
  for (const auto& [v, c] : inst.objective()) obj[rn(v)] = c;
  out.set_objective(inst.sense(), std::move(obj));
  return out;
}

// Every constraint has at most two variables, and those with two are linear.
inline void check_lift_invariant(const POInstance& inst) {
  for (std::size_t i = 0; i < inst.constraints().size(); ++i) {
    const auto& c = inst.constraints()[i];
    auto vars = c.poly.variables();
    if (vars.size() > 2) throw InvalidInput("constraint " + std::to_string(i) + " has more than two variables");
    if (vars.size() == 2 && !c.poly.is_linear())
      throw InvalidInput("two-variable constraint " + std::to_string(i) + " is not linear");
  }
}

struct LiftedInstance {
  POInstance original;
  POInstance instance;
  Graph host;
  std::vector<MinorOperation> ops;     // as applied to the host
  std::vector<MinorOperation> replay;  // lifting order (reverse)
  std::map<std::string, std::string> back_map;  // lifted variable -> original variable, absent if added
  std::vector<int> redundant_rows;              // constraint indices in `instance`
};

// Replays the minor operations backwards, turning an instance whose
// intersection graph is the final minor into an equivalent one whose
// intersection graph is exactly the host.
inline LiftedInstance lift_instance(const POInstance& inst, const Graph& host, const std::vector<MinorOperation>& ops) {
  check_lift_invariant(inst);
  std::vector<Graph> stages{host};
  for (const auto& op : ops) stages.push_back(apply_operation(stages.back(), op));
  if (!same_labelled_graph(stages.back(), intersection_graph(inst)))
    throw InvalidInput("the operation sequence does not turn the host into the intersection graph");

  struct Row {
    Polynomial poly;
    Relation rel;
    bool redundant;
  };
  std::vector<Variable> vars = inst.variables();
  std::vector<Row> rows;
  for (const auto& c : inst.constraints()) rows.push_back({c.poly, c.relation, false});
  std::map<std::string, Rational> obj = inst.objective();
  std::map<std::string, std::string> back;
  for (const auto& v : vars) back[v.name] = v.name;

  auto redundant_pair = [](const std::string& a, const std::string& b) {
    return Polynomial::variable(a) + Polynomial::variable(b);
  };

  LiftedInstance out;
  out.original = inst;
  out.host = host;
  out.ops = ops;
  for (std::size_t k = ops.size(); k-- > 0;) {
    const MinorOperation& op = ops[k];
    const Graph& before = stages[k];
    out.replay.push_back(op);
    switch (op.kind) {
      case MinorOperation::Kind::VertexDeletion: {
        vars.push_back({op.u, Domain::Unit});
        for (int t : before.neighbors(before.index_of(op.u)))
          rows.push_back({redundant_pair(before.label(t), op.u), Relation::Ge0, true});
        break;
      }
      case MinorOperation::Kind::EdgeDeletion:
        rows.push_back({redundant_pair(op.v, op.u), Relation::Ge0, true});
        break;
      case MinorOperation::Kind::EdgeContraction: {
        const std::string& w = op.w;
        auto wit = std::find_if(vars.begin(), vars.end(), [&](const Variable& v) { return v.name == w; });
        if (wit == vars.end()) throw InvalidInput("contraction target '" + w + "' is not a variable");
        Domain dom = wit->domain;
        std::size_t slot = static_cast<std::size_t>(wit - vars.begin());
        vars[slot] = {op.u, dom};
        vars.insert(vars.begin() + static_cast<std::ptrdiff_t>(slot) + 1, {op.v, dom});
        std::map<std::string, std::string> to_u{{w, op.u}}, to_v{{w, op.v}};
        int iu = before.index_of(op.u), iv = before.index_of(op.v);
        std::vector<Row> next;
        for (auto& r : rows) {
          auto sup = r.poly.variables();
          if (!sup.count(w)) {
            next.push_back(std::move(r));
            continue;
          }
          if (sup.size() == 1) {
            next.push_back({r.poly.rename(to_u), r.rel, r.redundant});
            next.push_back({r.poly.rename(to_v), r.rel, r.redundant});
            continue;
          }
          std::string t = *sup.begin() == w ? *sup.rbegin() : *sup.begin();
          int it = before.index_of(t);
          bool placed = false;
          if (it != iv && before.has_edge(iu, it)) {
            next.push_back({r.poly.rename(to_u), r.rel, r.redundant});
            placed = true;
          }
          if (it != iu && before.has_edge(iv, it)) {
            next.push_back({r.poly.rename(to_v), r.rel, r.redundant});
            placed = true;
          }
          if (!placed) throw InvalidInput("row between '" + w + "' and '" + t + "' has no host edge after splitting");
        }
        next.push_back({Polynomial::variable(op.u) - Polynomial::variable(op.v), Relation::Eq0, false});
        rows = std::move(next);
        Rational c = 0;
        if (auto oit = obj.find(w); oit != obj.end()) {
          c = oit->second;
          obj.erase(oit);
        }
        if (c != 0) obj[op.u] = c;
        std::string origin = back.count(w) ? back[w] : std::string();
        back.erase(w);
        if (!origin.empty()) {
          back[op.u] = origin;
          back[op.v] = origin;
        }
        break;
      }
    }
  }

  for (const auto& v : vars) out.instance.add_variable(v.name, v.domain);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.instance.add_constraint(rows[i].poly, rows[i].rel);
    if (rows[i].redundant) out.redundant_rows.push_back(static_cast<int>(i));
  }
  out.instance.set_objective(inst.sense(), obj);
  out.back_map = std::move(back);
  if (!same_labelled_graph(intersection_graph(out.instance), host))
    throw InvalidInput("lifted intersection graph differs from the host");
  return out;
}

// Variables that can only take values 0 or 1: binary ones and those carrying
// a unary equality whose roots are exactly {0, 1}.
inline std::set<std::string> integral_variables(const POInstance& inst) {
  std::set<std::string> out;
  for (const auto& v : inst.variables())
    if (v.domain == Domain::Binary) out.insert(v.name);
  for (const auto& c : inst.constraints()) {
    if (c.relation != Relation::Eq0) continue;
    auto vars = c.poly.variables();
    if (vars.size() != 1) continue;
    const std::string& v = *vars.begin();
    Polynomial h = detail::integrality(v);
    if (c.poly == h || c.poly == -h) out.insert(v);
  }
  return out;
}

// Each two-variable inequality is either one of the redundant rows added
// for deletions or touches an integral variable.
inline bool two_variable_rows_are_anchored(const LiftedInstance& lifted) {
  auto integral = integral_variables(lifted.instance);
  std::set<int> redundant(lifted.redundant_rows.begin(), lifted.redundant_rows.end());
  const auto& cons = lifted.instance.constraints();
  for (std::size_t i = 0; i < cons.size(); ++i) {
    if (cons[i].relation != Relation::Ge0) continue;
    auto vars = cons[i].poly.variables();
    if (vars.size() != 2 || redundant.count(static_cast<int>(i))) continue;
    if (!integral.count(*vars.begin()) && !integral.count(*vars.rbegin())) return false;
  }
  return true;
}

// Rounds every coordinate to the nearest integer (halves up) after checking
// eps < 1/10 and eps-feasibility; the rounded point is verified exactly.
inline Assignment round_solution(const POInstance& inst, const Assignment& z, const Rational& eps) {
  if (eps >= Rational(1, 10)) throw PreconditionFailed("rounding requires eps < 1/10");
  if (eps < 0) throw InvalidInput("eps must be nonnegative");
  auto rep = eps_feasible(inst, z, eps);
  if (!rep) throw PreconditionFailed("point is not eps-feasible for the lifted instance");
  Assignment out;
  for (const auto& v : inst.variables()) {
    Integer r = round_nearest(z.at(v.name));
    if (r < 0) r = 0;
    if (r > 1) r = 1;
    out[v.name] = Rational(r);
  }
  if (!is_feasible(inst, out)) throw PreconditionFailed("rounded point violates a constraint");
  return out;
}

inline Assignment round_solution(const LiftedInstance& lifted, const Assignment& z, const Rational& eps) {
  return round_solution(lifted.instance, z, eps);
}

// Collapses equality classes to their original variable and drops the
// variables added for deletions.
inline Assignment pullback_solution(const LiftedInstance& lifted, const Assignment& z) {
  if (!is_feasible(lifted.instance, z)) throw PreconditionFailed("assignment is not feasible for the lifted instance");
  Assignment out;
  for (const auto& v : lifted.instance.variables()) {
    auto it = lifted.back_map.find(v.name);
    if (it == lifted.back_map.end()) continue;
    auto [pos, inserted] = out.emplace(it->second, z.at(v.name));
    if (!inserted && pos->second != z.at(v.name))
      throw PreconditionFailed("copies of '" + it->second + "' disagree");
  }
  for (const auto& v : lifted.original.variables())
    if (!out.count(v.name)) throw PreconditionFailed("no lifted copy of '" + v.name + "'");
  if (!is_feasible(lifted.original, out)) throw PreconditionFailed("pulled-back assignment is infeasible");
  return out;
}

}  // namespace twlab
