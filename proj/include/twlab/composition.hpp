#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "twlab/error.hpp"
#include "twlab/graph.hpp"
#include "twlab/po_instance.hpp"
#include "twlab/polytope.hpp"
#include "twlab/treewidth.hpp"

namespace twlab {

// S+ = (S x {0}) u {e_{n+1}}.
inline PointSet plus_operator(const PointSet& s) {
  if (s.points.empty()) throw InvalidInput("plus operator needs a nonempty point set");
  std::vector<Point> pts;
  for (auto p : s.points) {
    p.emplace_back(0);
    pts.push_back(std::move(p));
  }
  Point apex(s.dimension + 1, 0);
  apex.back() = 1;
  pts.push_back(std::move(apex));
  return PointSet(s.dimension + 1, std::move(pts), "plus");
}

inline PointSet cartesian_product(const PointSet& a, const PointSet& b) {
  std::vector<Point> pts;
  pts.reserve(a.size() * b.size());
  for (const auto& p : a.points)
    for (const auto& q : b.points) {
      Point r = p;
      r.insert(r.end(), q.begin(), q.end());
      pts.push_back(std::move(r));
    }
  return PointSet(a.dimension + b.dimension, std::move(pts), "product");
}

// k-fold product of S+ with itself.
inline PointSet cartesian_power(const PointSet& s, int k) {
  if (k < 1) throw InvalidInput("cartesian power needs k >= 1");
  PointSet plus = plus_operator(s);
  PointSet out = plus;
  for (int i = 1; i < k; ++i) out = cartesian_product(out, plus);
  out.provenance = "power";
  return out;
}

struct EnumerationOptions {
  int cap = 20;
};

// Indicator vectors of all stable sets, in increasing bitmask order.
inline PointSet stab_vertices(const Graph& g, const EnumerationOptions& opt = {}) {
  const int n = g.vertex_count();
  if (n > opt.cap) throw CapExceeded("stable set enumeration on " + std::to_string(n) + " vertices exceeds the cap");
  std::vector<std::uint64_t> adj(n);
  for (int v = 0; v < n; ++v) adj[v] = g.neighbor_mask(v);
  std::vector<Point> pts;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    bool stable = true;
    for (int v = 0; v < n && stable; ++v)
      if (((m >> v) & 1) && (adj[v] & m)) stable = false;
    if (!stable) continue;
    Point p(n, 0);
    for (int v = 0; v < n; ++v)
      if ((m >> v) & 1) p[v] = 1;
    pts.push_back(std::move(p));
  }
  return PointSet(n, std::move(pts), "stab");
}

// G plus a universal vertex labelled n+1 (primes appended on collision).
inline Graph graph_plus(const Graph& g) {
  Graph out(g.labels());
  for (auto [u, v] : g.edges()) out.add_edge(u, v);
  std::string label = std::to_string(g.vertex_count() + 1);
  while (out.contains(label)) label += '\'';
  int apex = out.add_vertex(label);
  for (int v = 0; v < apex; ++v) out.add_edge(v, apex);
  return out;
}

// A formulation of S over {0,1}^n is a pure binary instance whose feasible
// set is S; coordinate i is the i-th declared variable.
using Formulation = POInstance;

inline std::string coordinate_name(int i) { return "x" + std::to_string(i + 1); }

inline Formulation empty_formulation(int n) {
  Formulation f;
  for (int i = 0; i < n; ++i) f.add_variable(coordinate_name(i), Domain::Binary);
  f.set_objective(Sense::Max, {});
  return f;
}

// One constraint over all coordinates: sum of the indicator polynomials of the
// missing 0/1 points, required to vanish.
inline Formulation membership_formulation(const PointSet& s) {
  if (!s.is_binary()) throw InvalidInput("membership formulation needs a 0/1 point set");
  if (s.dimension > 16) throw CapExceeded("membership formulation limited to 16 coordinates");
  Formulation f = empty_formulation(s.dimension);
  auto members = s.as_set();
  Polynomial phi;
  for (std::uint32_t m = 0; m < (1u << s.dimension); ++m) {
    Point p(s.dimension, 0);
    for (int i = 0; i < s.dimension; ++i)
      if ((m >> i) & 1) p[i] = 1;
    if (members.count(p)) continue;
    Polynomial chi = Polynomial::constant(1);
    for (int i = 0; i < s.dimension; ++i) {
      Polynomial xi = Polynomial::variable(coordinate_name(i));
      chi = chi * (p[i] == 1 ? xi : Polynomial::constant(1) - xi);
    }
    phi = phi + chi;
  }
  if (!phi.terms().empty()) f.add_constraint(std::move(phi), Relation::Eq0);
  return f;
}

// F+ : every constraint phi becomes (1 - x_{n+1}) phi, plus x_j <= 1 - x_{n+1}.
inline Formulation formulation_of_plus(const Formulation& f) {
  const int n = f.variable_count();
  Formulation out;
  for (const auto& v : f.variables()) out.add_variable(v.name, Domain::Binary);
  std::string apex = coordinate_name(n);
  while (out.has_variable(apex)) apex += '\'';
  out.add_variable(apex, Domain::Binary);
  Polynomial off = Polynomial::constant(1) - Polynomial::variable(apex);
  for (const auto& c : f.constraints()) out.add_constraint(off * c.poly, c.relation);
  for (const auto& v : f.variables()) out.add_constraint(off - Polynomial::variable(v.name), Relation::Ge0);
  out.set_objective(Sense::Max, {});
  return out;
}

// k disjoint copies; copy c renames coordinate i to x_{c*n+i+1}.
inline Formulation product_formulation(const Formulation& f, int k) {
  if (k < 1) throw InvalidInput("product formulation needs k >= 1");
  const int n = f.variable_count();
  Formulation out = empty_formulation(n * k);
  for (int c = 0; c < k; ++c) {
    std::map<std::string, std::string> names;
    for (int i = 0; i < n; ++i) names[f.variables()[i].name] = coordinate_name(c * n + i);
    for (const auto& con : f.constraints()) out.add_constraint(con.poly.rename(names), con.relation);
  }
  return out;
}

// Feasible 0/1 points of a formulation, in increasing bitmask order.
inline PointSet feasible_points(const Formulation& f, const EnumerationOptions& opt = {}) {
  const int n = f.variable_count();
  if (n > opt.cap) throw CapExceeded("feasible point enumeration on " + std::to_string(n) + " variables exceeds the cap");
  std::vector<CompiledPolynomial> cons;
  for (const auto& c : f.constraints()) cons.emplace_back(c.poly, f);
  std::vector<Point> pts;
  std::vector<Rational> vals(n);
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    for (int i = 0; i < n; ++i) vals[i] = static_cast<int>((m >> i) & 1);
    bool ok = true;
    for (std::size_t c = 0; c < cons.size() && ok; ++c) {
      Rational v = cons[c].eval(vals);
      ok = f.constraints()[c].relation == Relation::Ge0 ? v >= 0 : v == 0;
    }
    if (ok) pts.push_back(vals);
  }
  return PointSet(n, std::move(pts), "feasible");
}

struct HardFamilyResult {
  PointSet points;  // S'_n
  int k = 0;
  int omega = 0;
  int n = 0;
  int ambient = 0;
  Formulation formulation;
  Graph intersection;
  int width = -1;
  bool width_exact = false;
  std::optional<PyramidCertificate> pyramid;
  std::string lower_bound_note;
};

// S'_n = (S^{xk})+ with k = floor((n-1)/(omega+1)); the witness formulation is
// built from the membership formulation of the seed by the same operations.
inline HardFamilyResult build_hard_family(const PointSet& seed, int n, int omega,
                                          const ExactTreewidthOptions& tw_opt = {}) {
  if (seed.points.empty()) throw InvalidInput("hard family needs a nonempty seed");
  if (seed.dimension != omega) throw InvalidInput("seed dimension must equal omega");
  if (omega < 1 || omega >= n) throw InvalidInput("hard family needs 1 <= omega <= n-1");
  HardFamilyResult r;
  r.n = n;
  r.omega = omega;
  r.k = (n - 1) / (omega + 1);
  r.ambient = r.k * (omega + 1) + 1;
  if (r.k == 0) {
    r.points = plus_operator(PointSet(0, {Point{}}));
    r.formulation = formulation_of_plus(empty_formulation(0));
  } else {
    r.points = plus_operator(cartesian_power(seed, r.k));
    r.formulation = formulation_of_plus(product_formulation(formulation_of_plus(membership_formulation(seed)), r.k));
  }
  r.points.provenance = "hard-family";
  r.intersection = intersection_graph(r.formulation);
  if (r.intersection.vertex_count() <= tw_opt.cap) {
    r.width = treewidth_exact(r.intersection, tw_opt).width;
    r.width_exact = true;
  } else {
    r.width = treewidth_upper(r.intersection).width;
  }
  r.pyramid = check_pyramid_apex(r.points, static_cast<int>(r.points.size()) - 1);
  r.lower_bound_note = "xc(conv(S'_n)) >= xc(conv(seed)) = f_n for the seed family; hypothesis on seeds: liminf log(n)/f_n < 1";
  return r;
}

}  // namespace twlab
