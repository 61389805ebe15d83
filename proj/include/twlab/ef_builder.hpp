#pragma once

#include <algorithm>
#include <chrono>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "twlab/error.hpp"
#include "twlab/lp.hpp"
#include "twlab/po_instance.hpp"
#include "twlab/treewidth.hpp"

namespace twlab {

struct BagAssignment {
  std::vector<Rational> values;  // aligned with BagEntry::variables
  int column = -1;               // LP column of the lambda variable
};

struct BagEntry {
  std::vector<int> variables;  // instance variable indices, sorted
  std::vector<BagAssignment> assignments;
};

struct BagTable {
  std::vector<std::string> variable_names;  // instance order
  std::vector<BagEntry> bags;
  std::vector<std::pair<int, int>> tree_edges;
  std::vector<int> link_bag;   // per variable: bag holding its linking row
  std::vector<int> x_column;   // per variable: LP column of the original variable
  std::vector<int> constraint_bag;  // per constraint: bag it is assigned to
  bool approximate = false;
  Rational eps = 0;
  Rational grid = 1;  // gamma; 1 when every variable is binary
};

struct EFStats {
  int bags = 0;
  int width = -1;
  long extension_columns = 0;  // lambda columns
  long columns = 0;
  long rows = 0;
  long enumerated = 0;       // locally feasible assignments before pruning
  long pruned = 0;           // removed by separator consistency
  std::vector<std::string> compressed;  // continuous variables reduced to {0,1}
  double build_seconds = 0;
};

struct EFBuild {
  LinearProgram lp;
  BagTable table;
  EFStats stats;
};

struct EFOptions {
  long max_bag_assignments = 2'000'000;
  long compression_probe_cap = 200'000;
  bool compress_free_continuous = true;
};

// Largest power of 1/2 not exceeding eps / (2 rho).
inline Rational grid_step(const Rational& eps, unsigned rho) {
  if (eps <= 0) throw InvalidInput("eps must be positive");
  Rational target = eps / Rational(2 * std::max(1u, rho));
  Rational g = 1;
  while (g > target) g /= 2;
  return g;
}

namespace detail {

struct EFContext {
  const POInstance& inst;
  std::vector<CompiledPolynomial> cons;
  std::vector<char> relaxed;  // constraint checked with eps/2 slack
  Rational half_eps = 0;
  std::vector<std::vector<Rational>> domain;

  bool passes(int ci, const std::vector<Rational>& values) const {
    Rational v = cons[ci].eval(values);
    Rational tol = relaxed[ci] ? Rational(half_eps * cons[ci].norm1) : Rational(0);
    if (inst.constraints()[ci].relation == Relation::Ge0) return v >= -tol;
    return abs_value(v) <= tol;
  }
};

// Every combination of domain values on the support passes `ci`?
inline bool always_passes(const EFContext& ctx, int ci, long cap) {
  const auto& sup = ctx.cons[ci].support;
  long total = 1;
  for (int v : sup) {
    total *= static_cast<long>(ctx.domain[v].size());
    if (total > cap) return false;
  }
  std::vector<Rational> values(ctx.inst.variable_count(), 0);
  std::vector<std::size_t> idx(sup.size(), 0);
  for (;;) {
    for (std::size_t i = 0; i < sup.size(); ++i) values[sup[i]] = ctx.domain[sup[i]][idx[i]];
    if (!ctx.passes(ci, values)) return false;
    std::size_t i = 0;
    while (i < sup.size() && ++idx[i] == ctx.domain[sup[i]].size()) idx[i++] = 0;
    if (i == sup.size()) return true;
  }
}

inline std::vector<Rational> project(const BagEntry& from, const BagAssignment& a, const std::vector<int>& sep) {
  std::vector<Rational> out;
  out.reserve(sep.size());
  for (int v : sep) {
    auto it = std::lower_bound(from.variables.begin(), from.variables.end(), v);
    out.push_back(a.values[static_cast<std::size_t>(it - from.variables.begin())]);
  }
  return out;
}

inline std::vector<int> separator(const BagEntry& a, const BagEntry& b) {
  std::vector<int> s;
  std::set_intersection(a.variables.begin(), a.variables.end(), b.variables.begin(), b.variables.end(),
                        std::back_inserter(s));
  return s;
}

inline EFBuild build_ef(const POInstance& inst, const TreeDecomposition& td, bool approximate, const Rational& eps,
                        const EFOptions& opt) {
  auto t0 = std::chrono::steady_clock::now();
  const int n = inst.variable_count();
  Graph gamma = intersection_graph(inst);
  auto report = verify_decomposition(gamma, td);
  if (!report) throw InvalidInput("tree decomposition is not valid for the intersection graph: " + report.violations[0]);

  EFContext ctx{inst, {}, {}, approximate ? Rational(eps / 2) : Rational(0), {}};
  EFBuild out;
  out.table.approximate = approximate;
  out.table.eps = approximate ? eps : Rational(0);
  out.table.grid = 1;
  for (const auto& v : inst.variables()) out.table.variable_names.push_back(v.name);

  Rational gamma_step = 1;
  bool any_continuous = false;
  for (const auto& v : inst.variables()) any_continuous |= v.domain == Domain::Unit;
  if (approximate && any_continuous) gamma_step = grid_step(eps, inst.degree());
  out.table.grid = gamma_step;
  for (const auto& v : inst.variables()) {
    std::vector<Rational> dom;
    if (v.domain == Domain::Binary) {
      dom = {Rational(0), Rational(1)};
    } else {
      for (Rational x = 0; x <= 1; x += gamma_step) dom.push_back(x);
    }
    ctx.domain.push_back(std::move(dom));
  }
  for (const auto& c : inst.constraints()) {
    ctx.cons.emplace_back(c.poly, inst);
    bool mixed = false;
    for (int v : ctx.cons.back().support) mixed |= inst.variables()[v].domain == Domain::Unit;
    ctx.relaxed.push_back(approximate && mixed);
  }
  const int m = static_cast<int>(ctx.cons.size());

  // Constraint -> first bag containing its support.
  const int nb = td.bag_count();
  out.table.constraint_bag.assign(m, -1);
  std::vector<std::vector<int>> bag_constraints(nb);
  for (int ci = 0; ci < m; ++ci) {
    const auto& sup = ctx.cons[ci].support;
    for (int b = 0; b < nb; ++b)
      if (std::includes(td.bags[b].begin(), td.bags[b].end(), sup.begin(), sup.end())) {
        if (out.table.constraint_bag[ci] < 0) out.table.constraint_bag[ci] = b;
        bag_constraints[b].push_back(ci);
      }
    if (out.table.constraint_bag[ci] < 0) throw InvalidInput("constraint " + std::to_string(ci) + " is not covered by any bag");
  }

  // Unary filtering, then drop continuous variables whose constraints can
  // never bind on the grid: their projection is [0,1] whatever the grid, so
  // the endpoints suffice.
  std::vector<Rational> probe(n, 0);
  for (int ci = 0; ci < m; ++ci) {
    if (ctx.cons[ci].support.size() != 1) continue;
    int v = ctx.cons[ci].support[0];
    std::vector<Rational> kept;
    for (const auto& x : ctx.domain[v]) {
      probe[v] = x;
      if (ctx.passes(ci, probe)) kept.push_back(x);
    }
    probe[v] = 0;
    ctx.domain[v] = std::move(kept);
  }
  if (approximate && opt.compress_free_continuous) {
    std::vector<std::vector<int>> var_constraints(n);
    for (int ci = 0; ci < m; ++ci)
      for (int v : ctx.cons[ci].support) var_constraints[v].push_back(ci);
    for (int v = 0; v < n; ++v) {
      if (inst.variables()[v].domain != Domain::Unit || ctx.domain[v].size() <= 2) continue;
      if (ctx.domain[v].front() != 0 || ctx.domain[v].back() != 1) continue;
      bool free = true;
      for (int ci : var_constraints[v])
        if (!always_passes(ctx, ci, opt.compression_probe_cap)) {
          free = false;
          break;
        }
      if (free) {
        ctx.domain[v] = {Rational(0), Rational(1)};
        out.stats.compressed.push_back(inst.variables()[v].name);
      }
    }
  }

  // Locally feasible assignments per bag.
  out.table.bags.resize(nb);
  out.table.tree_edges = td.tree_edges;
  for (int b = 0; b < nb; ++b) {
    BagEntry& entry = out.table.bags[b];
    entry.variables = td.bags[b];
    const auto& vars = entry.variables;
    std::vector<std::vector<int>> check_at(vars.size());
    for (int ci : bag_constraints[b]) {
      const auto& sup = ctx.cons[ci].support;
      std::size_t pos = 0;
      if (!sup.empty())
        pos = static_cast<std::size_t>(std::lower_bound(vars.begin(), vars.end(), sup.back()) - vars.begin());
      if (vars.empty()) continue;
      check_at[pos].push_back(ci);
    }
    std::vector<Rational> values(n, 0);
    bool constant_ok = true;
    if (vars.empty())
      for (int ci : bag_constraints[b]) constant_ok &= ctx.passes(ci, values);
    auto rec = [&](auto&& self, std::size_t i) -> void {
      if (i == vars.size()) {
        BagAssignment a;
        for (int v : vars) a.values.push_back(values[v]);
        entry.assignments.push_back(std::move(a));
        if (static_cast<long>(entry.assignments.size()) > opt.max_bag_assignments)
          throw CapExceeded("bag " + std::to_string(b) + " has more than " + std::to_string(opt.max_bag_assignments) +
                            " locally feasible assignments");
        return;
      }
      for (const auto& x : ctx.domain[vars[i]]) {
        values[vars[i]] = x;
        bool ok = true;
        for (int ci : check_at[i])
          if (!ctx.passes(ci, values)) {
            ok = false;
            break;
          }
        if (ok) self(self, i + 1);
      }
      values[vars[i]] = 0;
    };
    if (constant_ok) rec(rec, 0);
    out.stats.enumerated += static_cast<long>(entry.assignments.size());
  }

  // Separator consistency: an assignment whose separator projection has no
  // partner across a tree edge carries zero weight in every LP solution.
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto [a, b] : out.table.tree_edges) {
      auto sep = separator(out.table.bags[a], out.table.bags[b]);
      for (int dir = 0; dir < 2; ++dir) {
        BagEntry& src = out.table.bags[dir == 0 ? a : b];
        BagEntry& dst = out.table.bags[dir == 0 ? b : a];
        std::set<std::vector<Rational>> seen;
        for (const auto& asg : src.assignments) seen.insert(project(src, asg, sep));
        std::size_t before = dst.assignments.size();
        std::erase_if(dst.assignments, [&](const BagAssignment& asg) { return !seen.count(project(dst, asg, sep)); });
        if (dst.assignments.size() != before) {
          out.stats.pruned += static_cast<long>(before - dst.assignments.size());
          changed = true;
        }
      }
    }
  }

  // LP: original variables first, then lambda columns bag by bag.
  LinearProgram& lp = out.lp;
  lp.set_sense(inst.sense());
  out.table.x_column.resize(n);
  for (int v = 0; v < n; ++v) {
    out.table.x_column[v] = lp.add_variable(inst.variables()[v].name, Rational(0), Rational(1));
    lp.set_objective_coeff(out.table.x_column[v], inst.objective_coeff(inst.variables()[v].name));
  }
  for (int b = 0; b < nb; ++b) {
    auto& entry = out.table.bags[b];
    for (std::size_t k = 0; k < entry.assignments.size(); ++k)
      entry.assignments[k].column = lp.add_variable("L" + std::to_string(b) + "_" + std::to_string(k));
    out.stats.extension_columns += static_cast<long>(entry.assignments.size());
  }
  for (int b = 0; b < nb; ++b) {
    std::vector<std::pair<int, Rational>> row;
    for (const auto& a : out.table.bags[b].assignments) row.emplace_back(a.column, 1);
    lp.add_row(std::move(row), RowRelation::Eq, 1, "convex_" + std::to_string(b));
  }
  for (std::size_t e = 0; e < out.table.tree_edges.size(); ++e) {
    auto [a, b] = out.table.tree_edges[e];
    auto sep = separator(out.table.bags[a], out.table.bags[b]);
    if (sep.empty()) continue;
    std::map<std::vector<Rational>, std::vector<std::pair<int, Rational>>> rows;
    for (const auto& asg : out.table.bags[a].assignments)
      rows[project(out.table.bags[a], asg, sep)].emplace_back(asg.column, 1);
    for (const auto& asg : out.table.bags[b].assignments)
      rows[project(out.table.bags[b], asg, sep)].emplace_back(asg.column, -1);
    int k = 0;
    for (auto& [key, coeffs] : rows)
      lp.add_row(std::move(coeffs), RowRelation::Eq, 0, "glue_" + std::to_string(e) + "_" + std::to_string(k++));
  }
  out.table.link_bag.assign(n, -1);
  for (int v = 0; v < n; ++v) {
    for (int b = 0; b < nb && out.table.link_bag[v] < 0; ++b)
      if (std::binary_search(td.bags[b].begin(), td.bags[b].end(), v)) out.table.link_bag[v] = b;
    const BagEntry& entry = out.table.bags[out.table.link_bag[v]];
    std::size_t pos = static_cast<std::size_t>(std::lower_bound(entry.variables.begin(), entry.variables.end(), v) -
                                               entry.variables.begin());
    std::vector<std::pair<int, Rational>> row{{out.table.x_column[v], Rational(1)}};
    for (const auto& asg : entry.assignments)
      if (asg.values[pos] != 0) row.emplace_back(asg.column, -asg.values[pos]);
    lp.add_row(std::move(row), RowRelation::Eq, 0, "link_" + inst.variables()[v].name);
  }

  out.stats.bags = nb;
  out.stats.width = td.width();
  out.stats.columns = lp.column_count();
  out.stats.rows = lp.row_count();
  // Each bag holds at most (grid points per variable)^(width+1) assignments.
  {
    Integer per_var = Rational(1 / gamma_step).get_num() + 1;
    if (!approximate || !any_continuous) per_var = 2;
    Integer cap;
    mpz_pow_ui(cap.get_mpz_t(), per_var.get_mpz_t(), static_cast<unsigned long>(std::max(0, td.width() + 1)));
    cap *= nb;
    if (Integer(out.stats.extension_columns) > cap) throw Error("internal", "formulation exceeds its column bound");
  }
  out.stats.build_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace detail

// Exact extended formulation of conv(S) for an all-binary instance.
inline EFBuild build_exact_binary_ef(const POInstance& inst, const TreeDecomposition& td, const EFOptions& opt = {}) {
  if (!inst.all_binary()) throw InvalidInput("exact binary formulation requires every variable to be binary");
  return detail::build_ef(inst, td, false, 0, opt);
}

// Grid-discretised formulation: continuous variables take values k*gamma;
// constraints touching a continuous variable are kept when they hold up to
// (eps/2)*||f||_1, constraints on binary variables only are kept exactly.
inline EFBuild build_eps_ef(const POInstance& inst, const Rational& eps, const TreeDecomposition& td,
                            const EFOptions& opt = {}) {
  if (eps <= 0) throw InvalidInput("eps must be positive");
  return detail::build_ef(inst, td, true, eps, opt);
}

// Walks the bag tree from bag 0, fixing in each bag the heaviest assignment
// that agrees with what is already fixed. Every such choice lies in the
// support of the LP solution, so the result is a point of the discretised
// feasible set; at an optimum it attains the LP objective.
inline Assignment extract_assignment(const LPSolution& sol, const BagTable& table) {
  if (sol.status != LPStatus::Optimal) throw PreconditionFailed("extraction needs an optimal LP solution");
  const int n = static_cast<int>(table.variable_names.size());
  const int nb = static_cast<int>(table.bags.size());
  std::vector<std::optional<Rational>> fixed(n);
  std::vector<std::vector<int>> adj(nb);
  for (auto [a, b] : table.tree_edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<char> seen(nb, 0);
  std::queue<int> q;
  for (int root = 0; root < nb; ++root) {
    if (seen[root]) continue;
    seen[root] = 1;
    q.push(root);
    while (!q.empty()) {
      int b = q.front();
      q.pop();
      const BagEntry& entry = table.bags[b];
      const BagAssignment* best = nullptr;
      for (const auto& asg : entry.assignments) {
        const Rational& w = sol.values.at(asg.column);
        if (w <= 0) continue;
        bool consistent = true;
        for (std::size_t i = 0; i < entry.variables.size() && consistent; ++i) {
          const auto& f = fixed[entry.variables[i]];
          if (f && *f != asg.values[i]) consistent = false;
        }
        if (consistent && (!best || w > sol.values.at(best->column))) best = &asg;
      }
      if (!best && !entry.variables.empty())
        throw PreconditionFailed("LP solution has no consistent support in bag " + std::to_string(b));
      if (best)
        for (std::size_t i = 0; i < entry.variables.size(); ++i) fixed[entry.variables[i]] = best->values[i];
      for (int c : adj[b])
        if (!seen[c]) {
          seen[c] = 1;
          q.push(c);
        }
    }
  }
  Assignment out;
  for (int v = 0; v < n; ++v) {
    if (!fixed[v]) throw PreconditionFailed("variable '" + table.variable_names[v] + "' lies in no bag");
    out[table.variable_names[v]] = *fixed[v];
  }
  return out;
}

}  // namespace twlab
