#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "twlab/error.hpp"
#include "twlab/graph.hpp"

namespace twlab {

struct TreeDecomposition {
  std::vector<std::vector<int>> bags;  // sorted vertex indices
  std::vector<std::pair<int, int>> tree_edges;

  int width() const {
    int w = -1;
    for (const auto& b : bags) w = std::max(w, static_cast<int>(b.size()) - 1);
    return w;
  }
  int bag_count() const { return static_cast<int>(bags.size()); }

  std::vector<std::vector<int>> adjacency() const {
    std::vector<std::vector<int>> adj(bags.size());
    for (auto [a, b] : tree_edges) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
    return adj;
  }
};

struct DecompositionReport {
  bool valid = true;
  std::vector<std::string> violations;
  explicit operator bool() const { return valid; }
};

inline DecompositionReport verify_decomposition(const Graph& g, const TreeDecomposition& td) {
  DecompositionReport rep;
  auto fail = [&](std::string msg) {
    rep.valid = false;
    rep.violations.push_back(std::move(msg));
  };
  const int n = g.vertex_count();
  const int nb = td.bag_count();

  for (int b = 0; b < nb; ++b)
    for (int v : td.bags[b])
      if (v < 0 || v >= n) fail("bag " + std::to_string(b) + " references unknown vertex " + std::to_string(v));
  if (!rep.valid) return rep;

  // Tree structure: nb - 1 edges, connected, no out-of-range endpoints.
  if (nb == 0) {
    if (n > 0) fail("no bags for a nonempty graph");
  } else {
    if (static_cast<int>(td.tree_edges.size()) != nb - 1)
      fail("tree has " + std::to_string(td.tree_edges.size()) + " edges for " + std::to_string(nb) + " bags");
    for (auto [a, b] : td.tree_edges)
      if (a < 0 || b < 0 || a >= nb || b >= nb || a == b) fail("malformed tree edge");
    if (rep.valid) {
      auto adj = td.adjacency();
      std::vector<char> seen(nb, 0);
      std::vector<int> stack{0};
      seen[0] = 1;
      int count = 1;
      while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (int y : adj[x])
          if (!seen[y]) {
            seen[y] = 1;
            ++count;
            stack.push_back(y);
          }
      }
      if (count != nb) fail("tree edges do not connect all bags");
    }
  }
  if (!rep.valid) return rep;

  std::vector<std::vector<int>> holders(n);
  for (int b = 0; b < nb; ++b)
    for (int v : td.bags[b]) holders[v].push_back(b);

  for (int v = 0; v < n; ++v)
    if (holders[v].empty()) fail("vertex " + g.label(v) + " is in no bag");

  for (auto [u, v] : g.edges()) {
    bool covered = false;
    for (int b : holders[u])
      if (std::binary_search(td.bags[b].begin(), td.bags[b].end(), v)) {
        covered = true;
        break;
      }
    if (!covered) fail("edge {" + g.label(u) + "," + g.label(v) + "} is in no bag");
  }

  auto adj = td.adjacency();
  for (int v = 0; v < n; ++v) {
    if (holders[v].size() <= 1) continue;
    std::vector<char> in(nb, 0), seen(nb, 0);
    for (int b : holders[v]) in[b] = 1;
    std::vector<int> stack{holders[v][0]};
    seen[holders[v][0]] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int y : adj[x])
        if (in[y] && !seen[y]) {
          seen[y] = 1;
          ++count;
          stack.push_back(y);
        }
    }
    if (count != holders[v].size()) fail("bags containing vertex " + g.label(v) + " are not connected");
  }
  return rep;
}

namespace detail {

inline void check_permutation(int n, const std::vector<int>& order) {
  if (static_cast<int>(order.size()) != n) throw InvalidInput("elimination order is not a permutation of V");
  std::vector<char> seen(n, 0);
  for (int v : order) {
    if (v < 0 || v >= n || seen[v]) throw InvalidInput("elimination order is not a permutation of V");
    seen[v] = 1;
  }
}

// Contract tree edges whose child bag is contained in its neighbour.
inline TreeDecomposition compact(TreeDecomposition td) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t e = 0; e < td.tree_edges.size(); ++e) {
      auto [a, b] = td.tree_edges[e];
      const auto& ba = td.bags[a];
      const auto& bb = td.bags[b];
      int drop = -1, keep = -1;
      if (std::includes(bb.begin(), bb.end(), ba.begin(), ba.end())) {
        drop = a;
        keep = b;
      } else if (std::includes(ba.begin(), ba.end(), bb.begin(), bb.end())) {
        drop = b;
        keep = a;
      }
      if (drop < 0) continue;
      td.tree_edges.erase(td.tree_edges.begin() + static_cast<std::ptrdiff_t>(e));
      for (auto& [x, y] : td.tree_edges) {
        if (x == drop) x = keep;
        if (y == drop) y = keep;
      }
      td.bags.erase(td.bags.begin() + drop);
      for (auto& [x, y] : td.tree_edges) {
        if (x > drop) --x;
        if (y > drop) --y;
      }
      changed = true;
      break;
    }
  }
  for (auto& [x, y] : td.tree_edges)
    if (x > y) std::swap(x, y);
  std::sort(td.tree_edges.begin(), td.tree_edges.end());
  return td;
}

}  // namespace detail

struct EliminationResult {
  Graph filled;  // chordal supergraph
  int clique_number = 0;
  TreeDecomposition decomposition;
};

// Elimination game along `order`; the filled graph is chordal with `order`
// as a perfect elimination order.
inline EliminationResult eliminate(const Graph& g, const std::vector<int>& order) {
  const int n = g.vertex_count();
  detail::check_permutation(n, order);
  std::vector<int> pos(n);
  for (int i = 0; i < n; ++i) pos[order[i]] = i;

  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (auto [u, v] : g.edges()) adj[u][v] = adj[v][u] = 1;

  EliminationResult res;
  res.filled = g;
  TreeDecomposition td;
  td.bags.resize(n);
  std::vector<int> parent(n, -1);
  for (int i = 0; i < n; ++i) {
    int v = order[i];
    std::vector<int> later;
    for (int u = 0; u < n; ++u)
      if (adj[v][u] && pos[u] > i) later.push_back(u);
    for (std::size_t a = 0; a < later.size(); ++a)
      for (std::size_t b = a + 1; b < later.size(); ++b) {
        int x = later[a], y = later[b];
        if (!adj[x][y]) {
          adj[x][y] = adj[y][x] = 1;
          res.filled.add_edge(x, y);
        }
      }
    std::vector<int> bag = later;
    bag.push_back(v);
    std::sort(bag.begin(), bag.end());
    res.clique_number = std::max(res.clique_number, static_cast<int>(bag.size()));
    td.bags[v] = std::move(bag);
    if (!later.empty())
      parent[v] = *std::min_element(later.begin(), later.end(), [&](int a, int b) { return pos[a] < pos[b]; });
  }
  // Bag index == vertex index at this point; roots of separate components
  // are chained so the result is a single tree.
  int prev_root = -1;
  for (int i = 0; i < n; ++i) {
    int v = order[i];
    if (parent[v] >= 0) {
      td.tree_edges.emplace_back(v, parent[v]);
    } else {
      if (prev_root >= 0) td.tree_edges.emplace_back(prev_root, v);
      prev_root = v;
    }
  }
  if (n == 0) td.bags.push_back({});
  res.decomposition = detail::compact(std::move(td));
  return res;
}

inline EliminationResult chordal_completion(const Graph& g, const std::vector<int>& order) { return eliminate(g, order); }

struct ChordalityResult {
  bool chordal = false;
  std::vector<int> perfect_elimination_order;  // set only when chordal
};

inline bool is_perfect_elimination_order(const Graph& g, const std::vector<int>& order) {
  const int n = g.vertex_count();
  if (static_cast<int>(order.size()) != n) return false;
  std::vector<int> pos(n, -1);
  for (int i = 0; i < n; ++i) {
    if (order[i] < 0 || order[i] >= n || pos[order[i]] >= 0) return false;
    pos[order[i]] = i;
  }
  for (int v : order) {
    std::vector<int> later;
    for (int u : g.neighbors(v))
      if (pos[u] > pos[v]) later.push_back(u);
    for (std::size_t a = 0; a < later.size(); ++a)
      for (std::size_t b = a + 1; b < later.size(); ++b)
        if (!g.has_edge(later[a], later[b])) return false;
  }
  return true;
}

// Maximum cardinality search; the reverse visit order is a perfect
// elimination order exactly when the graph is chordal.
inline ChordalityResult is_chordal(const Graph& g) {
  const int n = g.vertex_count();
  std::vector<int> weight(n, 0);
  std::vector<char> done(n, 0);
  std::vector<int> visit;
  visit.reserve(n);
  for (int step = 0; step < n; ++step) {
    int best = -1;
    for (int v = 0; v < n; ++v)
      if (!done[v] && (best < 0 || weight[v] > weight[best])) best = v;
    done[best] = 1;
    visit.push_back(best);
    for (int u : g.neighbors(best))
      if (!done[u]) ++weight[u];
  }
  std::vector<int> peo(visit.rbegin(), visit.rend());
  ChordalityResult r;
  if (is_perfect_elimination_order(g, peo)) {
    r.chordal = true;
    r.perfect_elimination_order = std::move(peo);
  }
  return r;
}

struct TreewidthResult {
  int width = -1;
  TreeDecomposition decomposition;
  std::vector<int> order;
};

enum class Heuristic { MinFill, MinDegree };

// Greedy elimination; ties go to the smallest vertex index.
inline TreewidthResult treewidth_upper(const Graph& g, Heuristic heuristic = Heuristic::MinFill) {
  const int n = g.vertex_count();
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  std::vector<std::vector<int>> nbrs(n);
  for (auto [u, v] : g.edges()) adj[u][v] = adj[v][u] = 1;
  std::vector<char> gone(n, 0);
  std::vector<int> order;
  order.reserve(n);
  int width = n == 0 ? -1 : 0;

  auto live_neighbors = [&](int v) {
    std::vector<int> out;
    for (int u = 0; u < n; ++u)
      if (!gone[u] && adj[v][u]) out.push_back(u);
    return out;
  };

  for (int step = 0; step < n; ++step) {
    int best = -1;
    long best_score = 0;
    for (int v = 0; v < n; ++v) {
      if (gone[v]) continue;
      auto nb = live_neighbors(v);
      long score = 0;
      if (heuristic == Heuristic::MinDegree) {
        score = static_cast<long>(nb.size());
      } else {
        for (std::size_t a = 0; a < nb.size(); ++a)
          for (std::size_t b = a + 1; b < nb.size(); ++b)
            if (!adj[nb[a]][nb[b]]) ++score;
      }
      if (best < 0 || score < best_score) {
        best = v;
        best_score = score;
      }
    }
    auto nb = live_neighbors(best);
    width = std::max(width, static_cast<int>(nb.size()));
    for (std::size_t a = 0; a < nb.size(); ++a)
      for (std::size_t b = a + 1; b < nb.size(); ++b) adj[nb[a]][nb[b]] = adj[nb[b]][nb[a]] = 1;
    gone[best] = 1;
    order.push_back(best);
  }
  TreewidthResult r;
  r.order = order;
  r.decomposition = eliminate(g, order).decomposition;
  r.width = r.decomposition.width();
  return r;
}

struct ExactTreewidthOptions {
  int cap = 14;
};

namespace detail {

using Mask = std::uint64_t;

inline int popcount(Mask m) { return std::popcount(m); }
inline int lowest(Mask m) { return std::countr_zero(m); }

// Largest clique inside `live`, plain branch and bound on bitmasks.
inline int max_clique(const std::vector<Mask>& adj, Mask candidates, int size, int best) {
  if (candidates == 0) return std::max(size, best);
  while (candidates) {
    if (size + popcount(candidates) <= best) return best;
    int v = lowest(candidates);
    candidates &= candidates - 1;
    best = max_clique(adj, candidates & adj[v], size + 1, best);
  }
  return std::max(size, best);
}

// Degeneracy of the graph induced on `live` (a lower bound on treewidth).
inline int degeneracy(const std::vector<Mask>& adj, Mask live) {
  int deg = 0;
  while (live) {
    int best = -1, best_d = 1 << 30;
    for (Mask m = live; m; m &= m - 1) {
      int v = lowest(m);
      int d = popcount(adj[v] & live);
      if (d < best_d) {
        best_d = d;
        best = v;
      }
    }
    deg = std::max(deg, best_d);
    live &= ~(Mask{1} << best);
  }
  return deg;
}

struct ExactSearch {
  int n;
  int best;
  std::vector<int> best_order;
  std::vector<int> current;
  std::unordered_map<Mask, int> memo;

  int lower_bound(const std::vector<Mask>& adj, Mask live) const {
    int clique = max_clique(adj, live, 0, 0);
    return std::max(clique - 1, degeneracy(adj, live));
  }

  void run(const std::vector<Mask>& adj, Mask live, int width) {
    if (width >= best) return;
    int remaining = popcount(live);
    if (remaining == 0 || remaining - 1 <= width) {
      best = width;
      best_order = current;
      for (Mask m = live; m; m &= m - 1) best_order.push_back(lowest(m));
      return;
    }
    if (auto it = memo.find(live); it != memo.end() && it->second <= width) return;
    memo[live] = width;
    if (std::max(width, lower_bound(adj, live)) >= best) return;

    // A simplicial vertex can always be eliminated first without loss.
    for (Mask m = live; m; m &= m - 1) {
      int v = lowest(m);
      Mask nb = adj[v] & live;
      bool simplicial = true;
      for (Mask k = nb; k; k &= k - 1) {
        int u = lowest(k);
        if ((nb & ~(Mask{1} << u) & ~adj[u]) != 0) {
          simplicial = false;
          break;
        }
      }
      if (simplicial) {
        current.push_back(v);
        run(adj, live & ~(Mask{1} << v), std::max(width, popcount(nb)));
        current.pop_back();
        return;
      }
    }

    std::vector<std::pair<int, int>> cand;
    for (Mask m = live; m; m &= m - 1) {
      int v = lowest(m);
      cand.emplace_back(popcount(adj[v] & live), v);
    }
    std::sort(cand.begin(), cand.end());
    for (auto [d, v] : cand) {
      int w = std::max(width, d);
      if (w >= best) continue;
      std::vector<Mask> next = adj;
      Mask nb = adj[v] & live;
      for (Mask k = nb; k; k &= k - 1) {
        int u = lowest(k);
        next[u] |= nb & ~(Mask{1} << u);
      }
      current.push_back(v);
      run(next, live & ~(Mask{1} << v), w);
      current.pop_back();
    }
  }
};

}  // namespace detail

// Exact treewidth by branch and bound over elimination orders, seeded with
// the min-degree and min-fill upper bounds and pruned with clique and
// degeneracy lower bounds. Elimination prefixes are memoised by vertex set
// since the remaining graph does not depend on their order.
inline TreewidthResult treewidth_exact(const Graph& g, const ExactTreewidthOptions& opt = {}) {
  const int n = g.vertex_count();
  if (n > opt.cap || n > 64)
    throw CapExceeded("graph with " + std::to_string(n) + " vertices is too large for exact mode (cap " +
                      std::to_string(std::min(opt.cap, 64)) + ")");
  TreewidthResult seed = treewidth_upper(g, Heuristic::MinDegree);
  TreewidthResult fill = treewidth_upper(g, Heuristic::MinFill);
  if (fill.width < seed.width) seed = fill;
  if (n == 0) return seed;

  detail::ExactSearch search{n, seed.width, seed.order, {}, {}};
  std::vector<detail::Mask> adj(n);
  for (int v = 0; v < n; ++v) adj[v] = g.neighbor_mask(v);
  detail::Mask all = n == 64 ? ~detail::Mask{0} : ((detail::Mask{1} << n) - 1);
  search.run(adj, all, 0);

  TreewidthResult r;
  r.order = search.best_order;
  r.decomposition = eliminate(g, r.order).decomposition;
  r.width = r.decomposition.width();
  return r;
}

// Exact when the graph is within the cap, min-fill otherwise.
inline TreewidthResult default_decomposition(const Graph& g, int exact_cap, bool* exact = nullptr) {
  bool ex = g.vertex_count() <= exact_cap;
  if (exact) *exact = ex;
  return ex ? treewidth_exact(g, ExactTreewidthOptions{exact_cap}) : treewidth_upper(g);
}

}  // namespace twlab
