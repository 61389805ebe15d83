#pragma once

// Brute-force reference implementations used by the tests. They share no
// code with the library beyond the plain data types, so agreement between
// the two is evidence rather than tautology.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "twlab/graph.hpp"
#include "twlab/po_instance.hpp"
#include "twlab/polytope.hpp"
#include "twlab/random.hpp"
#include "twlab/reductions.hpp"

namespace oracle {

using twlab::Graph;
using twlab::Rational;

// ---- treewidth: minimum over all elimination orders ----

inline int width_of_order(const Graph& g, const std::vector<int>& order) {
  const int n = g.vertex_count();
  std::vector<std::uint32_t> adj(n, 0);
  for (auto [u, v] : g.edges()) {
    adj[u] |= 1u << v;
    adj[v] |= 1u << u;
  }
  std::uint32_t alive = n == 32 ? ~0u : (1u << n) - 1;
  int width = n == 0 ? -1 : 0;
  for (int v : order) {
    std::uint32_t nb = adj[v] & alive;
    width = std::max(width, std::popcount(nb));
    for (int a = 0; a < n; ++a)
      if ((nb >> a) & 1) adj[a] |= nb & ~(1u << a);
    alive &= ~(1u << v);
  }
  return width;
}

inline int treewidth_by_orders(const Graph& g) {
  std::vector<int> order(g.vertex_count());
  std::iota(order.begin(), order.end(), 0);
  int best = g.vertex_count() == 0 ? -1 : g.vertex_count();
  do best = std::min(best, width_of_order(g, order));
  while (std::next_permutation(order.begin(), order.end()));
  return best;
}

inline Graph random_graph(int n, double p, twlab::SplitMix64& rng) {
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.bernoulli(p)) g.add_edge(u, v);
  return g;
}

// Random partial k-tree: grow a k-tree, then keep each edge with
// probability `keep`. Treewidth is at most k.
inline Graph random_partial_ktree(int n, int k, double keep, twlab::SplitMix64& rng,
                                  std::vector<std::vector<int>>* cliques = nullptr) {
  Graph full(n);
  std::vector<std::vector<int>> cl;
  int base = std::min(n, k + 1);
  std::vector<int> first;
  for (int v = 0; v < base; ++v) first.push_back(v);
  for (int a = 0; a < base; ++a)
    for (int b = a + 1; b < base; ++b) full.add_edge(a, b);
  cl.push_back(first);
  for (int v = base; v < n; ++v) {
    const auto& host = cl[rng.uniform(cl.size())];
    std::vector<int> pick = host;
    if (static_cast<int>(pick.size()) > k) pick.erase(pick.begin() + static_cast<long>(rng.uniform(pick.size())));
    for (int u : pick) full.add_edge(u, v);
    pick.push_back(v);
    std::sort(pick.begin(), pick.end());
    cl.push_back(pick);
  }
  Graph g(n);
  for (auto [u, v] : full.edges())
    if (rng.bernoulli(keep)) g.add_edge(u, v);
  if (cliques) *cliques = cl;
  return g;
}

// ---- polynomial instances ----

inline Rational evaluate(const twlab::Polynomial& p, const std::map<std::string, Rational>& x) {
  Rational total = 0;
  for (const auto& [mono, c] : p.terms()) {
    Rational t = c;
    for (const auto& [v, e] : mono)
      for (unsigned k = 0; k < e; ++k) t *= x.at(v);
    total += t;
  }
  return total;
}

struct Optimum {
  bool feasible = false;
  Rational value;
};

// Exact optimum of a pure binary instance over all 2^n points.
inline Optimum binary_optimum(const twlab::POInstance& inst) {
  const int n = inst.variable_count();
  Optimum best;
  std::map<std::string, Rational> x;
  for (std::uint32_t m = 0; m < (1u << n); ++m) {
    for (int i = 0; i < n; ++i) x[inst.variables()[i].name] = static_cast<int>((m >> i) & 1);
    bool ok = true;
    for (const auto& c : inst.constraints()) {
      Rational v = evaluate(c.poly, x);
      if (c.relation == twlab::Relation::Ge0 ? v < 0 : v != 0) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    Rational obj = 0;
    for (const auto& [v, c] : inst.objective()) obj += c * x[v];
    bool better = inst.sense() == twlab::Sense::Max ? obj > best.value : obj < best.value;
    if (!best.feasible || better) best = {true, obj};
  }
  return best;
}

// Grid optimum of an instance with integer coefficients and degree <= 2.
// Coordinates are k/N; everything is scaled by N^2 and evaluated in 64-bit
// integers, which keeps fine grids affordable.
inline Optimum grid_optimum(const twlab::POInstance& inst, long N) {
  const int n = inst.variable_count();
  struct Term {
    long coeff;
    int a = -1, b = -1;  // variable indices, -1 when absent
  };
  struct Row {
    std::vector<Term> terms;
    bool eq;
  };
  std::vector<Row> rows;
  for (const auto& c : inst.constraints()) {
    Row r{{}, c.relation == twlab::Relation::Eq0};
    for (const auto& [mono, q] : c.poly.terms()) {
      if (!twlab::is_integral(q)) throw std::runtime_error("grid oracle needs integer coefficients");
      Term t{q.get_num().get_si()};
      std::vector<int> idx;
      for (const auto& [v, e] : mono)
        for (unsigned k = 0; k < e; ++k) idx.push_back(inst.index_of(v));
      if (idx.size() > 2) throw std::runtime_error("grid oracle needs degree <= 2");
      if (idx.size() >= 1) t.a = idx[0];
      if (idx.size() == 2) t.b = idx[1];
      r.terms.push_back(t);
    }
    rows.push_back(std::move(r));
  }
  std::vector<long> obj(n, 0);
  for (const auto& [v, c] : inst.objective()) {
    if (!twlab::is_integral(c)) throw std::runtime_error("grid oracle needs integer objective");
    obj[inst.index_of(v)] = c.get_num().get_si();
  }
  std::vector<std::vector<long>> values(n);
  for (int i = 0; i < n; ++i) {
    if (inst.variables()[i].domain == twlab::Domain::Binary)
      values[i] = {0, N};
    else
      for (long k = 0; k <= N; ++k) values[i].push_back(k);
  }
  std::vector<long> k(n, 0);
  const bool maximize = inst.sense() == twlab::Sense::Max;
  Optimum best;
  long best_scaled = 0;
  auto row_ok = [&](const Row& r) {
    long s = 0;
    for (const auto& t : r.terms) {
      long a = t.a < 0 ? N : k[t.a];
      long b = t.b < 0 ? N : k[t.b];
      s += t.coeff * a * b;
    }
    return r.eq ? s == 0 : s >= 0;
  };
  std::vector<std::size_t> pos(n, 0);
  for (;;) {
    for (int i = 0; i < n; ++i) k[i] = values[i][pos[i]];
    bool ok = std::all_of(rows.begin(), rows.end(), row_ok);
    if (ok) {
      long s = 0;
      for (int i = 0; i < n; ++i) s += obj[i] * k[i];
      if (!best.feasible || (maximize ? s > best_scaled : s < best_scaled)) {
        best.feasible = true;
        best_scaled = s;
      }
    }
    int i = 0;
    while (i < n && ++pos[i] == values[i].size()) pos[i++] = 0;
    if (i == n) break;
  }
  if (best.feasible) best.value = Rational(best_scaled) / Rational(N);
  return best;
}

// ---- MAX-2SAT ----

inline int max2sat_optimum(const twlab::Max2SatInstance& f) {
  int best = 0;
  for (std::uint32_t m = 0; m < (1u << f.variables); ++m) {
    int s = 0;
    for (const auto& c : f.clauses) {
      bool a = ((m >> (c.a.var - 1)) & 1) == (c.a.positive ? 1u : 0u);
      bool b = ((m >> (c.b.var - 1)) & 1) == (c.b.positive ? 1u : 0u);
      s += a || b;
    }
    best = std::max(best, s);
  }
  return best;
}

// ---- point sets ----

inline std::set<std::vector<int>> stable_sets(const Graph& g) {
  std::set<std::vector<int>> out;
  const int n = g.vertex_count();
  for (std::uint32_t m = 0; m < (1u << n); ++m) {
    bool ok = true;
    for (auto [u, v] : g.edges())
      if (((m >> u) & 1) && ((m >> v) & 1)) ok = false;
    if (!ok) continue;
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = (m >> i) & 1;
    out.insert(p);
  }
  return out;
}

inline std::set<std::vector<int>> as_int_set(const twlab::PointSet& s) {
  std::set<std::vector<int>> out;
  for (const auto& p : s.points) {
    std::vector<int> q;
    for (const auto& c : p) q.push_back(static_cast<int>(c.get_num().get_si()));
    out.insert(q);
  }
  return out;
}

inline twlab::PointSet random_binary_set(int dim, twlab::SplitMix64& rng, double density = 0.5) {
  std::vector<twlab::Point> pts;
  for (std::uint32_t m = 0; m < (1u << dim); ++m) {
    if (!rng.bernoulli(density)) continue;
    twlab::Point p(dim);
    for (int i = 0; i < dim; ++i) p[i] = static_cast<int>((m >> i) & 1);
    pts.push_back(std::move(p));
  }
  if (pts.empty()) pts.push_back(twlab::Point(dim, 0));
  return twlab::PointSet(dim, std::move(pts));
}

// Facets of a full-dimensional conv(S) by brute force: every hyperplane
// through d affinely independent points that has all points on one side.
// Returned as primitive integer (a, b) with a.x <= b.
inline std::set<std::pair<std::vector<Rational>, Rational>> facets_by_subsets(const twlab::PointSet& s) {
  const int d = s.dimension;
  const int m = static_cast<int>(s.points.size());
  std::set<std::pair<std::vector<Rational>, Rational>> out;
  std::vector<int> pick(d);
  auto solve = [&]() -> std::optional<std::pair<std::vector<Rational>, Rational>> {
    // a.(p_i - p_0) = 0 for i >= 1: null space of a (d-1) x d system.
    std::vector<std::vector<Rational>> rows;
    for (int i = 1; i < d; ++i) {
      std::vector<Rational> r(d);
      for (int k = 0; k < d; ++k) r[k] = s.points[pick[i]][k] - s.points[pick[0]][k];
      rows.push_back(r);
    }
    // Gaussian elimination
    std::vector<int> piv;
    int row = 0;
    for (int c = 0; c < d && row < static_cast<int>(rows.size()); ++c) {
      int sel = -1;
      for (int r = row; r < static_cast<int>(rows.size()); ++r)
        if (rows[r][c] != 0) {
          sel = r;
          break;
        }
      if (sel < 0) continue;
      std::swap(rows[row], rows[sel]);
      Rational inv = 1 / rows[row][c];
      for (auto& v : rows[row]) v *= inv;
      for (int r = 0; r < static_cast<int>(rows.size()); ++r)
        if (r != row && rows[r][c] != 0) {
          Rational f = rows[r][c];
          for (int k = 0; k < d; ++k) rows[r][k] -= f * rows[row][k];
        }
      piv.push_back(c);
      ++row;
    }
    if (static_cast<int>(piv.size()) != d - 1) return std::nullopt;
    int free = 0;
    while (std::find(piv.begin(), piv.end(), free) != piv.end()) ++free;
    std::vector<Rational> a(d, 0);
    a[free] = 1;
    for (int r = 0; r < d - 1; ++r) a[piv[r]] = -rows[r][free];
    Rational b = 0;
    for (int k = 0; k < d; ++k) b += a[k] * s.points[pick[0]][k];
    int above = 0, below = 0;
    for (const auto& p : s.points) {
      Rational v = -b;
      for (int k = 0; k < d; ++k) v += a[k] * p[k];
      if (v > 0) ++above;
      if (v < 0) ++below;
    }
    if (above && below) return std::nullopt;
    if (above) {
      for (auto& v : a) v = -v;
      b = -b;
    }
    // primitive scaling
    twlab::Integer l = 1, g = 0;
    for (const auto& v : a) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), b.get_den_mpz_t());
    for (auto& v : a) v *= l;
    b *= l;
    for (const auto& v : a) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_num_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), b.get_num_mpz_t());
    if (g > 1) {
      for (auto& v : a) v /= g;
      b /= g;
    }
    return std::make_pair(a, b);
  };
  auto rec = [&](auto&& self, int start, int depth) -> void {
    if (depth == d) {
      if (auto f = solve()) out.insert(*f);
      return;
    }
    for (int i = start; i < m; ++i) {
      pick[depth] = i;
      self(self, i + 1, depth + 1);
    }
  };
  rec(rec, 0, 0);
  return out;
}

}  // namespace oracle
