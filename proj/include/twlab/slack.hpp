#pragma once

#include <algorithm>
#include <bit>
#include <optional>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "twlab/error.hpp"
#include "twlab/polytope.hpp"
#include "twlab/rational.hpp"

namespace twlab {

inline std::string to_string(const Point& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ',';
    s += to_string(p[i]);
  }
  return s + ")";
}

inline std::string to_string(const Inequality& f) {
  std::string s;
  bool first = true;
  for (std::size_t i = 0; i < f.a.size(); ++i) {
    if (f.a[i] == 0) continue;
    Rational c = f.a[i];
    if (!first) s += c < 0 ? " - " : " + ";
    else if (c < 0) s += "-";
    Rational m = abs_value(c);
    if (m != 1) s += to_string(m) + "*";
    s += "x" + std::to_string(i + 1);
    first = false;
  }
  if (first) s = "0";
  return s + " <= " + to_string(f.b);
}

struct SlackMatrix {
  std::vector<std::vector<Rational>> entries;  // rows = facets, columns = points
  std::vector<std::string> row_labels, column_labels;

  int rows() const { return static_cast<int>(entries.size()); }
  int cols() const { return entries.empty() ? 0 : static_cast<int>(entries[0].size()); }
};

inline SlackMatrix slack_matrix(const HPolytope& h, const PointSet& s) {
  if (h.ambient != s.dimension) throw InvalidInput("polytope and point set have different ambient dimension");
  SlackMatrix m;
  for (const auto& p : s.points) m.column_labels.push_back(to_string(p));
  for (const auto& f : h.facets) {
    std::vector<Rational> row;
    for (const auto& p : s.points) {
      Rational v = f.b;
      for (int k = 0; k < s.dimension; ++k) v -= f.a[k] * p[k];
      if (v < 0) throw InvalidInput("point " + to_string(p) + " violates facet " + to_string(f));
      row.push_back(std::move(v));
    }
    m.entries.push_back(std::move(row));
    m.row_labels.push_back(to_string(f));
  }
  return m;
}

struct RectangleCoverOptions {
  int cap = 64;  // support cells
};

// Exact minimum number of all-positive combinatorial rectangles covering the
// support of M. Maximal rectangles are the closed (row set, column set)
// pairs; the cover is found by iterative deepening on the answer.
inline int rectangle_cover_lb(const SlackMatrix& m, const RectangleCoverOptions& opt = {}) {
  const int r = m.rows(), c = m.cols();
  std::vector<std::pair<int, int>> cells;
  std::vector<std::vector<int>> cell_id(r, std::vector<int>(c, -1));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j)
      if (m.entries[i][j] != 0) {
        cell_id[i][j] = static_cast<int>(cells.size());
        cells.emplace_back(i, j);
      }
  if (static_cast<int>(cells.size()) > opt.cap || cells.size() > 64)
    throw CapExceeded("support has " + std::to_string(cells.size()) + " cells, above the rectangle cover cap");
  if (cells.empty()) return 0;

  using Cols = std::vector<bool>;
  std::vector<Cols> row_support(r, Cols(c, false));
  for (auto [i, j] : cells) row_support[i][j] = true;

  // Closed column sets: intersections of row supports.
  std::set<Cols> closed;
  std::vector<Cols> frontier;
  for (int i = 0; i < r; ++i) {
    bool any = std::find(row_support[i].begin(), row_support[i].end(), true) != row_support[i].end();
    if (any && closed.insert(row_support[i]).second) frontier.push_back(row_support[i]);
  }
  while (!frontier.empty()) {
    std::vector<Cols> next;
    for (const auto& cs : frontier)
      for (int i = 0; i < r; ++i) {
        Cols meet(c, false);
        bool any = false;
        for (int j = 0; j < c; ++j)
          if (cs[j] && row_support[i][j]) meet[j] = any = true;
        if (any && closed.insert(meet).second) next.push_back(meet);
      }
    frontier = std::move(next);
  }

  std::vector<std::uint64_t> rects;
  for (const auto& cs : closed) {
    std::uint64_t mask = 0;
    for (int i = 0; i < r; ++i) {
      bool contains = true;
      for (int j = 0; j < c && contains; ++j)
        if (cs[j] && !row_support[i][j]) contains = false;
      if (!contains) continue;
      for (int j = 0; j < c; ++j)
        if (cs[j]) mask |= std::uint64_t{1} << cell_id[i][j];
    }
    rects.push_back(mask);
  }
  std::sort(rects.begin(), rects.end());
  rects.erase(std::unique(rects.begin(), rects.end()), rects.end());

  const std::uint64_t all = cells.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << cells.size()) - 1;
  std::vector<std::vector<int>> covering(cells.size());
  for (std::size_t k = 0; k < rects.size(); ++k)
    for (std::size_t e = 0; e < cells.size(); ++e)
      if ((rects[k] >> e) & 1) covering[e].push_back(static_cast<int>(k));

  auto search = [&](auto&& self, std::uint64_t covered, int budget) -> bool {
    if (covered == all) return true;
    if (budget == 0) return false;
    int best = -1;
    std::size_t fewest = SIZE_MAX;
    std::uint64_t open = all & ~covered;
    int largest = 0;
    for (auto rect : rects) largest = std::max(largest, std::popcount(rect & open));
    if (largest * budget < std::popcount(open)) return false;
    for (std::uint64_t o = open; o; o &= o - 1) {
      int e = std::countr_zero(o);
      if (covering[e].size() < fewest) {
        fewest = covering[e].size();
        best = e;
      }
    }
    for (int k : covering[best])
      if (self(self, covered | rects[k], budget - 1)) return true;
    return false;
  };
  for (int k = 1;; ++k)
    if (search(search, 0, k)) return k;
}

namespace detail {

// Number of distinct nonzero rows up to positive scaling; each class is one
// nonnegative rank-one term.
inline int proportional_classes(const std::vector<std::vector<Rational>>& rows) {
  std::set<std::vector<Rational>> classes;
  for (const auto& row : rows) {
    auto it = std::find_if(row.begin(), row.end(), [](const Rational& v) { return v != 0; });
    if (it == row.end()) continue;
    Rational s = *it;
    std::vector<Rational> norm;
    for (const auto& v : row) norm.push_back(v / s);
    classes.insert(std::move(norm));
  }
  return static_cast<int>(classes.size());
}

}  // namespace detail

// Upper bound on the nonnegative rank: rows and columns are trivial
// factorizations; grouping proportional rows (or columns) is a greedy
// improvement.
inline int nn_rank_ub(const SlackMatrix& m) {
  std::vector<std::vector<Rational>> cols(m.cols(), std::vector<Rational>(m.rows()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) cols[j][i] = m.entries[i][j];
  return std::min({m.rows(), m.cols(), detail::proportional_classes(m.entries), detail::proportional_classes(cols)});
}

struct XcBracket {
  int lower = 0;
  int upper = 0;
  std::vector<std::string> notes;
};

inline const char* xc_sdp_note() {
  return "upper bounds here also bound xc_SDP (xc_SDP <= xc); the rectangle-cover lower bound does NOT bound xc_SDP";
}

// Sandwich for rk+(M) = xc(P): rectangle covering from below, the best of
// facet count, nn_rank_ub and any supplied extended formulation size from
// above.
inline XcBracket xc_bracket(const HPolytope& h, const SlackMatrix& m, std::optional<int> ef_size = std::nullopt,
                            const RectangleCoverOptions& opt = {}) {
  if (h.dimension < 1) throw PreconditionFailed("extension complexity bracket needs a polytope of dimension at least 1");
  XcBracket b;
  b.lower = rectangle_cover_lb(m, opt);
  b.upper = std::min(static_cast<int>(h.facets.size()), nn_rank_ub(m));
  b.notes.push_back("lower: minimum rectangle cover of the slack support = " + std::to_string(b.lower));
  b.notes.push_back("upper: min(facets = " + std::to_string(h.facets.size()) + ", nn_rank_ub = " +
                    std::to_string(nn_rank_ub(m)) + ")");
  if (ef_size) {
    b.upper = std::min(b.upper, *ef_size);
    b.notes.push_back("upper: constructed extended formulation of size " + std::to_string(*ef_size));
  }
  b.notes.push_back(xc_sdp_note());
  if (b.lower > b.upper) throw Error("internal", "extension complexity bracket is inverted");
  return b;
}

}  // namespace twlab
