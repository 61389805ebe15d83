#pragma once

#include <algorithm>
#include <bitset>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "twlab/error.hpp"
#include "twlab/rational.hpp"

namespace twlab {

using Point = std::vector<Rational>;

// Finite set of distinct points. Most constructions produce 0/1 points, but
// general rational coordinates are accepted so that re-encodings can be
// studied.
struct PointSet {
  int dimension = 0;
  std::vector<Point> points;
  std::string provenance;

  PointSet() = default;
  PointSet(int dim, std::vector<Point> pts, std::string tag = {})
      : dimension(dim), points(std::move(pts)), provenance(std::move(tag)) {
    validate();
  }

  void validate() const {
    std::set<Point> seen;
    for (const auto& p : points) {
      if (static_cast<int>(p.size()) != dimension) throw InvalidInput("point has wrong dimension");
      if (!seen.insert(p).second) throw InvalidInput("duplicate point in point set");
    }
  }

  std::size_t size() const { return points.size(); }
  bool is_binary() const {
    for (const auto& p : points)
      for (const auto& c : p)
        if (c != 0 && c != 1) return false;
    return true;
  }
  std::set<Point> as_set() const { return {points.begin(), points.end()}; }
};

inline PointSet binary_points(int dim, const std::vector<std::vector<int>>& rows, std::string tag = {}) {
  std::vector<Point> pts;
  for (const auto& r : rows) {
    Point p;
    for (int v : r) p.emplace_back(v);
    pts.push_back(std::move(p));
  }
  return PointSet(dim, std::move(pts), std::move(tag));
}

inline bool same_points(const PointSet& a, const PointSet& b) {
  return a.dimension == b.dimension && a.as_set() == b.as_set();
}

namespace detail {

// Row echelon form in place; returns pivot columns.
inline std::vector<int> echelon(std::vector<std::vector<Rational>>& m, int cols) {
  std::vector<int> pivots;
  std::size_t row = 0;
  for (int c = 0; c < cols && row < m.size(); ++c) {
    std::size_t sel = row;
    while (sel < m.size() && m[sel][c] == 0) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[row], m[sel]);
    Rational inv = 1 / m[row][c];
    for (auto& v : m[row]) v *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][c] == 0) continue;
      Rational f = m[r][c];
      for (int k = 0; k < cols; ++k) m[r][k] -= f * m[row][k];
    }
    pivots.push_back(c);
    ++row;
  }
  m.resize(row);
  return pivots;
}

inline int rank_of(std::vector<std::vector<Rational>> m, int cols) { return static_cast<int>(echelon(m, cols).size()); }

inline std::vector<std::vector<Rational>> differences(const std::vector<Point>& pts) {
  std::vector<std::vector<Rational>> d;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    std::vector<Rational> row(pts[i].size());
    for (std::size_t k = 0; k < row.size(); ++k) row[k] = pts[i][k] - pts[0][k];
    d.push_back(std::move(row));
  }
  return d;
}

// Scale a rational vector to the primitive integer vector with the same
// direction.
inline std::vector<Rational> primitive(std::vector<Rational> v) {
  Integer l = 1, g = 0;
  for (const auto& x : v) {
    if (x == 0) continue;
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  }
  for (auto& x : v) x *= l;
  for (const auto& x : v) {
    if (x == 0) continue;
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_num_mpz_t());
  }
  if (g > 1)
    for (auto& x : v) x /= g;
  return v;
}

}  // namespace detail

// Dimension of aff(points); -1 for the empty set.
inline int affine_dimension(const std::vector<Point>& pts, int ambient) {
  if (pts.empty()) return -1;
  return detail::rank_of(detail::differences(pts), ambient);
}

inline int affine_dimension(const PointSet& s) { return affine_dimension(s.points, s.dimension); }

inline bool in_affine_hull(const std::vector<Point>& base, const Point& p, int ambient) {
  if (base.empty()) return false;
  auto d = detail::differences(base);
  int r = detail::rank_of(d, ambient);
  std::vector<Rational> extra(ambient);
  for (int k = 0; k < ambient; ++k) extra[k] = p[k] - base[0][k];
  d.push_back(std::move(extra));
  return detail::rank_of(std::move(d), ambient) == r;
}

struct Inequality {
  std::vector<Rational> a;  // a^T x <= b
  Rational b;
  friend bool operator<(const Inequality& x, const Inequality& y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  }
  friend bool operator==(const Inequality&, const Inequality&) = default;
};

struct HPolytope {
  int ambient = 0;
  int dimension = -1;
  std::vector<Inequality> facets;     // sorted, primitive integer coefficients
  std::vector<Inequality> equations;  // a^T x = b, affine hull
};

struct HullOptions {
  int cap = 8;  // dimension of the polytope
};

// Complete irredundant facet list of conv(S) by the double description
// method. The affine hull is split off first and the computation runs in a
// coordinate projection that is injective on it.
inline HPolytope convex_hull_facets(const PointSet& s, const HullOptions& opt = {}) {
  if (s.points.empty()) throw InvalidInput("convex hull of an empty point set");
  const int n = s.dimension;
  HPolytope h;
  h.ambient = n;

  auto diff = detail::differences(s.points);
  auto ech = diff;
  std::vector<int> pivots = detail::echelon(ech, n);
  const int d = static_cast<int>(pivots.size());
  h.dimension = d;
  if (d > opt.cap)
    throw CapExceeded("polytope dimension " + std::to_string(d) + " exceeds the hull cap of " + std::to_string(opt.cap));

  // Affine hull equations: null space of the difference rows.
  {
    std::vector<char> is_pivot(n, 0);
    for (int c : pivots) is_pivot[c] = 1;
    for (int free = 0; free < n; ++free) {
      if (is_pivot[free]) continue;
      std::vector<Rational> a(n, 0);
      a[free] = 1;
      for (std::size_t r = 0; r < ech.size(); ++r) a[pivots[r]] = -ech[r][free];
      a = detail::primitive(a);
      Rational b = 0;
      for (int k = 0; k < n; ++k) b += a[k] * s.points[0][k];
      h.equations.push_back({a, b});
    }
  }
  if (d == 0) return h;

  // Work with rows (v_pivots, -1) and look for rays y=(a, b) with row.y <= 0.
  const int m = d + 1;
  std::vector<std::vector<Rational>> rows;
  for (const auto& p : s.points) {
    std::vector<Rational> r(m);
    for (int k = 0; k < d; ++k) r[k] = p[pivots[k]];
    r[d] = -1;
    rows.push_back(std::move(r));
  }
  const std::size_t nr = rows.size();
  using Bits = std::vector<bool>;

  // Initial basis: m linearly independent rows.
  std::vector<int> basis;
  {
    std::vector<std::vector<Rational>> acc;
    for (std::size_t i = 0; i < nr && static_cast<int>(basis.size()) < m; ++i) {
      auto trial = acc;
      trial.push_back(rows[i]);
      if (detail::rank_of(trial, m) > static_cast<int>(acc.size())) {
        acc = std::move(trial);
        basis.push_back(static_cast<int>(i));
      }
    }
  }
  // Rays of {y : A_B y <= 0} are the columns of -A_B^{-1}.
  std::vector<std::vector<Rational>> aug(m, std::vector<Rational>(2 * m, 0));
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < m; ++k) aug[i][k] = rows[basis[i]][k];
    aug[i][m + i] = 1;
  }
  detail::echelon(aug, 2 * m);
  struct Ray {
    std::vector<Rational> y;
    Bits zero;  // active rows among processed ones
  };
  std::vector<char> processed(nr, 0);
  for (int b : basis) processed[b] = 1;
  auto dot = [&](std::size_t row, const std::vector<Rational>& y) {
    Rational v = 0;
    for (int k = 0; k < m; ++k) v += rows[row][k] * y[k];
    return v;
  };
  std::vector<Ray> rays;
  for (int j = 0; j < m; ++j) {
    std::vector<Rational> y(m);
    for (int k = 0; k < m; ++k) y[k] = -aug[k][m + j];
    Ray r{detail::primitive(y), Bits(nr, false)};
    for (std::size_t i = 0; i < nr; ++i)
      if (processed[i] && dot(i, r.y) == 0) r.zero[i] = true;
    rays.push_back(std::move(r));
  }

  for (std::size_t i = 0; i < nr; ++i) {
    if (processed[i]) continue;
    std::vector<Ray> pos, neg, zero;
    for (auto& r : rays) {
      Rational v = dot(i, r.y);
      if (v > 0)
        pos.push_back(std::move(r));
      else if (v < 0)
        neg.push_back(std::move(r));
      else
        zero.push_back(std::move(r));
    }
    std::vector<Ray> next;
    for (auto& r : neg) next.push_back(r);
    for (auto& r : zero) {
      r.zero[i] = true;
      next.push_back(r);
    }
    std::vector<Ray> all_old;
    for (auto& r : pos) all_old.push_back(r);
    for (auto& r : neg) all_old.push_back(r);
    for (auto& r : zero) all_old.push_back(r);
    for (const auto& rp : pos) {
      for (const auto& rn : neg) {
        Bits common(nr, false);
        int count = 0;
        for (std::size_t k = 0; k < nr; ++k)
          if (rp.zero[k] && rn.zero[k]) {
            common[k] = true;
            ++count;
          }
        if (count < m - 2) continue;
        // Combinatorial adjacency: no third ray is active on all of `common`.
        bool adjacent = true;
        for (const auto& other : all_old) {
          if (&other == &rp || other.y == rp.y || other.y == rn.y) continue;
          bool contains = true;
          for (std::size_t k = 0; k < nr && contains; ++k)
            if (common[k] && !other.zero[k]) contains = false;
          if (contains) {
            adjacent = false;
            break;
          }
        }
        if (!adjacent) continue;
        Rational vp = dot(i, rp.y), vn = dot(i, rn.y);
        std::vector<Rational> y(m);
        for (int k = 0; k < m; ++k) y[k] = vp * rn.y[k] - vn * rp.y[k];
        Ray r{detail::primitive(y), common};
        r.zero[i] = true;
        next.push_back(std::move(r));
      }
    }
    processed[i] = 1;
    rays = std::move(next);
  }

  std::set<Inequality> facets;
  for (const auto& r : rays) {
    bool trivial = true;
    for (int k = 0; k < d; ++k)
      if (r.y[k] != 0) trivial = false;
    if (trivial) continue;
    Inequality f{std::vector<Rational>(n, 0), r.y[d]};
    for (int k = 0; k < d; ++k) f.a[pivots[k]] = r.y[k];
    facets.insert(std::move(f));
  }
  h.facets.assign(facets.begin(), facets.end());
  return h;
}

struct PyramidCertificate {
  int apex = -1;
  std::vector<int> base;
};

// Apex at `index`: the point is outside the affine hull of the others.
inline std::optional<PyramidCertificate> check_pyramid_apex(const PointSet& s, int index) {
  if (s.points.size() < 2 || index < 0 || index >= static_cast<int>(s.points.size())) return std::nullopt;
  std::vector<Point> base;
  PyramidCertificate cert;
  cert.apex = index;
  for (int i = 0; i < static_cast<int>(s.points.size()); ++i)
    if (i != index) {
      base.push_back(s.points[i]);
      cert.base.push_back(i);
    }
  if (in_affine_hull(base, s.points[index], s.dimension)) return std::nullopt;
  return cert;
}

// First point (by index) that can serve as an apex.
inline std::optional<PyramidCertificate> is_pyramid(const PointSet& s) {
  for (int i = 0; i < static_cast<int>(s.points.size()); ++i)
    if (auto c = check_pyramid_apex(s, i)) return c;
  return std::nullopt;
}

inline PointSet project(const PointSet& s, const std::vector<int>& coords) {
  std::set<Point> seen;
  std::vector<Point> pts;
  for (const auto& p : s.points) {
    Point q;
    for (int c : coords) q.push_back(p[c]);
    if (seen.insert(q).second) pts.push_back(std::move(q));
  }
  return PointSet(static_cast<int>(coords.size()), std::move(pts), "projection");
}

struct DecompositionCertificate {
  std::vector<int> first_coords, second_coords;
  PointSet first, second;
  int first_dimension = 0, second_dimension = 0;
};

// Searches coordinate bipartitions for S = S1 x S2 with both factors of
// dimension at least one; the larger-dimensional factor is reported first.
inline std::optional<DecompositionCertificate> is_decomposable(const PointSet& s) {
  const int n = s.dimension;
  if (n < 2 || s.points.empty() || n > 24) return std::nullopt;
  for (std::uint32_t mask = 1; mask < (1u << (n - 1)); ++mask) {
    std::vector<int> a, b;
    a.push_back(n - 1);
    for (int k = 0; k < n - 1; ++k) ((mask >> k) & 1 ? b : a).push_back(k);
    std::sort(a.begin(), a.end());
    PointSet pa = project(s, a), pb = project(s, b);
    if (pa.size() * pb.size() != s.size()) continue;
    int da = affine_dimension(pa), db = affine_dimension(pb);
    if (da < 1 || db < 1) continue;
    DecompositionCertificate cert;
    if (da >= db)
      cert = {a, b, std::move(pa), std::move(pb), da, db};
    else
      cert = {b, a, std::move(pb), std::move(pa), db, da};
    return cert;
  }
  return std::nullopt;
}

struct AffineMap {
  std::vector<std::vector<Rational>> matrix;  // rows = output coordinates
  std::vector<Rational> offset;

  static AffineMap identity(int n) {
    AffineMap m;
    m.matrix.assign(n, std::vector<Rational>(n, 0));
    for (int i = 0; i < n; ++i) m.matrix[i][i] = 1;
    m.offset.assign(n, 0);
    return m;
  }

  Point apply(const Point& x) const {
    Point y = offset;
    for (std::size_t i = 0; i < matrix.size(); ++i)
      for (std::size_t k = 0; k < x.size(); ++k) y[i] += matrix[i][k] * x[k];
    return y;
  }
};

struct ReencodeResult {
  PointSet image;
  bool injective_on_affine_hull = false;
  bool pyramid_before = false;
  bool pyramid_after = false;
};

// Image of S under x -> Mx + c. The map must be injective on S; when it is
// also injective on aff(S), pyramid status is checked to be preserved.
inline ReencodeResult affine_reencode(const PointSet& s, const AffineMap& map) {
  if (map.offset.size() != map.matrix.size()) throw InvalidInput("affine map offset has wrong length");
  for (const auto& row : map.matrix)
    if (static_cast<int>(row.size()) != s.dimension) throw InvalidInput("affine map has wrong input dimension");
  std::set<Point> seen;
  std::vector<Point> image;
  for (const auto& p : s.points) {
    Point q = map.apply(p);
    if (!seen.insert(q).second) throw InvalidInput("affine map is not injective on the point set");
    image.push_back(std::move(q));
  }
  ReencodeResult r;
  r.image = PointSet(static_cast<int>(map.matrix.size()), std::move(image), "reencode");
  auto diff = detail::differences(s.points);
  std::vector<std::vector<Rational>> mapped;
  for (const auto& dvec : diff) {
    std::vector<Rational> out(map.matrix.size(), 0);
    for (std::size_t i = 0; i < map.matrix.size(); ++i)
      for (int k = 0; k < s.dimension; ++k) out[i] += map.matrix[i][k] * dvec[k];
    mapped.push_back(std::move(out));
  }
  r.injective_on_affine_hull = detail::rank_of(mapped, static_cast<int>(map.matrix.size())) ==
                               detail::rank_of(diff, s.dimension);
  r.pyramid_before = is_pyramid(s).has_value();
  r.pyramid_after = is_pyramid(r.image).has_value();
  if (r.injective_on_affine_hull && r.pyramid_before != r.pyramid_after)
    throw Error("internal", "affine re-encoding changed pyramid status");
  return r;
}

}  // namespace twlab
