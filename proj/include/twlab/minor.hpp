#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "twlab/error.hpp"
#include "twlab/graph.hpp"
#include "twlab/random.hpp"

namespace twlab {

struct MinorOperation {
  enum class Kind { VertexDeletion, EdgeDeletion, EdgeContraction };
  Kind kind = Kind::VertexDeletion;
  std::string u;
  std::string v;  // unused for vertex deletion
  std::string w;  // merged label, contraction only

  static MinorOperation delete_vertex(std::string v) { return {Kind::VertexDeletion, std::move(v), {}, {}}; }
  static MinorOperation delete_edge(std::string u, std::string v) {
    return {Kind::EdgeDeletion, std::move(u), std::move(v), {}};
  }
  static MinorOperation contract(std::string u, std::string v, std::string w) {
    return {Kind::EdgeContraction, std::move(u), std::move(v), std::move(w)};
  }

  friend bool operator==(const MinorOperation&, const MinorOperation&) = default;
};

inline std::string to_string(const MinorOperation& op) {
  switch (op.kind) {
    case MinorOperation::Kind::VertexDeletion:
      return "delete-vertex(" + op.u + ")";
    case MinorOperation::Kind::EdgeDeletion:
      return "delete-edge(" + op.u + "," + op.v + ")";
    case MinorOperation::Kind::EdgeContraction:
      return "contract(" + op.u + "," + op.v + "->" + op.w + ")";
  }
  return {};
}

// Applies one operation; the result keeps the vertex order of `g`, with a
// contracted pair occupying the slot of u.
inline Graph apply_operation(const Graph& g, const MinorOperation& op) {
  using K = MinorOperation::Kind;
  const int n = g.vertex_count();
  int u = g.index_of(op.u);
  if (op.kind == K::VertexDeletion) {
    std::vector<int> keep;
    for (int x = 0; x < n; ++x)
      if (x != u) keep.push_back(x);
    return induced_subgraph(g, keep);
  }
  int v = g.index_of(op.v);
  if (!g.has_edge(u, v)) throw InvalidInput("operation " + to_string(op) + " references a missing edge");
  if (op.kind == K::EdgeDeletion) {
    Graph out = g;
    out.remove_edge(u, v);
    return out;
  }
  if (op.w != op.u && op.w != op.v && g.contains(op.w))
    throw InvalidInput("contraction label '" + op.w + "' already names another vertex");
  Graph out;
  std::vector<int> remap(n, -1);
  for (int x = 0; x < n; ++x) {
    if (x == v) continue;
    remap[x] = out.add_vertex(x == u ? op.w : g.label(x));
  }
  remap[v] = remap[u];
  for (auto [a, b] : g.edges())
    if (remap[a] != remap[b]) out.add_edge(remap[a], remap[b]);
  return out;
}

inline Graph apply_operations(Graph g, const std::vector<MinorOperation>& ops) {
  for (const auto& op : ops) g = apply_operation(g, op);
  return g;
}

struct EdgeWitness {
  std::string target_u, target_v;
  std::string host_u, host_v;
  friend bool operator==(const EdgeWitness&, const EdgeWitness&) = default;
};

// Branch sets listed in target vertex order.
struct MinorModel {
  std::vector<std::pair<std::string, std::vector<std::string>>> branch_sets;
  std::vector<EdgeWitness> witnesses;

  const std::vector<std::string>& branch_set(const std::string& target_vertex) const {
    for (const auto& [t, b] : branch_sets)
      if (t == target_vertex) return b;
    throw InvalidInput("model has no branch set for '" + target_vertex + "'");
  }
};

inline void validate_minor_model(const Graph& host, const Graph& target, const MinorModel& model) {
  const int n = host.vertex_count();
  if (static_cast<int>(model.branch_sets.size()) != target.vertex_count())
    throw InvalidInput("model must give one branch set per target vertex");
  std::vector<int> owner(n, -1);
  std::map<std::string, int> target_index;
  for (std::size_t i = 0; i < model.branch_sets.size(); ++i) {
    const auto& [t, b] = model.branch_sets[i];
    if (!target.contains(t)) throw InvalidInput("model names unknown target vertex '" + t + "'");
    if (!target_index.emplace(t, static_cast<int>(i)).second)
      throw InvalidInput("duplicate branch set for '" + t + "'");
    if (b.empty()) throw InvalidInput("empty branch set for '" + t + "'");
    for (const auto& h : b) {
      int x = host.index_of(h);
      if (owner[x] >= 0) throw InvalidInput("host vertex '" + h + "' lies in two branch sets");
      owner[x] = static_cast<int>(i);
    }
    // connectivity inside the branch set
    std::vector<int> members;
    for (const auto& h : b) members.push_back(host.index_of(h));
    std::vector<char> seen(n, 0);
    std::vector<int> stack{members[0]};
    seen[members[0]] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int y : host.neighbors(x))
        if (!seen[y] && owner[y] == static_cast<int>(i)) {
          seen[y] = 1;
          ++count;
          stack.push_back(y);
        }
    }
    if (count != members.size()) throw InvalidInput("branch set for '" + t + "' is not connected");
  }
  for (auto [a, b] : target.edges()) {
    const std::string& ta = target.label(a);
    const std::string& tb = target.label(b);
    bool ok = false;
    for (const auto& w : model.witnesses) {
      bool same = (w.target_u == ta && w.target_v == tb) || (w.target_u == tb && w.target_v == ta);
      if (!same) continue;
      auto hu = host.find(w.host_u), hv = host.find(w.host_v);
      if (!hu || !hv || !host.has_edge(*hu, *hv)) continue;
      int ou = owner[*hu], ov = owner[*hv];
      int ia = target_index[ta], ib = target_index[tb];
      if ((ou == ia && ov == ib) || (ou == ib && ov == ia)) {
        ok = true;
        break;
      }
    }
    if (!ok) throw InvalidInput("target edge {" + ta + "," + tb + "} has no valid host witness");
  }
}

namespace detail {

inline MinorModel model_from_masks(const Graph& host, const Graph& target, const std::vector<std::uint64_t>& masks) {
  MinorModel model;
  for (int t = 0; t < target.vertex_count(); ++t) {
    std::vector<std::string> b;
    for (std::uint64_t m = masks[t]; m; m &= m - 1) b.push_back(host.label(std::countr_zero(m)));
    model.branch_sets.emplace_back(target.label(t), std::move(b));
  }
  for (auto [a, b] : target.edges()) {
    bool done = false;
    for (std::uint64_t m = masks[a]; m && !done; m &= m - 1) {
      int x = std::countr_zero(m);
      std::uint64_t hit = host.neighbor_mask(x) & masks[b];
      if (hit) {
        model.witnesses.push_back({target.label(a), target.label(b), host.label(x), host.label(std::countr_zero(hit))});
        done = true;
      }
    }
  }
  return model;
}

struct MinorSearch {
  const Graph& host;
  const Graph& target;
  std::vector<std::uint64_t> host_adj;
  std::vector<std::vector<std::uint64_t>> connected_by_size;  // index = size
  std::vector<int> target_order;
  std::vector<std::uint64_t> masks;
  int budget = 0;

  std::uint64_t neighborhood(std::uint64_t m) const {
    std::uint64_t out = 0;
    for (std::uint64_t k = m; k; k &= k - 1) out |= host_adj[std::countr_zero(k)];
    return out & ~m;
  }

  bool place(std::size_t pos, std::uint64_t used, int remaining_budget) {
    if (pos == target_order.size()) return remaining_budget == 0;
    int t = target_order[pos];
    int left = static_cast<int>(target_order.size() - pos);
    int max_size = remaining_budget - (left - 1);
    for (int s = 1; s <= max_size; ++s) {
      for (std::uint64_t m : connected_by_size[s]) {
        if (m & used) continue;
        std::uint64_t nb = neighborhood(m);
        bool ok = true;
        for (int u : target.neighbors(t))
          if (masks[u] != 0 && (nb & masks[u]) == 0) {
            ok = false;
            break;
          }
        if (!ok) continue;
        masks[t] = m;
        if (place(pos + 1, used | m, remaining_budget - s)) return true;
        masks[t] = 0;
      }
    }
    return false;
  }
};

}  // namespace detail

struct MinorSearchOptions {
  int cap = 12;
};

// Exhaustive search. Branch-set assignments are tried by increasing total
// size, then in a fixed enumeration order, so the result is deterministic and
// uses as few host vertices as possible.
inline std::optional<MinorModel> find_minor_model(const Graph& host, const Graph& target,
                                                  const MinorSearchOptions& opt = {}) {
  const int n = host.vertex_count();
  const int k = target.vertex_count();
  if (n > opt.cap || n > 63)
    throw CapExceeded("host has " + std::to_string(n) + " vertices, above the minor-search cap of " +
                      std::to_string(opt.cap) + "; supply a minor model file with --model");
  if (k > n || target.edge_count() > host.edge_count()) return std::nullopt;
  if (k == 0) return MinorModel{};

  detail::MinorSearch s{host, target, {}, {}, {}, std::vector<std::uint64_t>(k, 0)};
  s.host_adj.resize(n);
  for (int v = 0; v < n; ++v) s.host_adj[v] = host.neighbor_mask(v);
  s.connected_by_size.resize(n + 1);
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) {
    std::uint64_t reach = m & (~m + 1);
    for (;;) {
      std::uint64_t next = reach;
      for (std::uint64_t r = reach; r; r &= r - 1) next |= s.host_adj[std::countr_zero(r)] & m;
      if (next == reach) break;
      reach = next;
    }
    if (reach == m) s.connected_by_size[std::popcount(m)].push_back(m);
  }
  // Targets in BFS order from the highest-degree vertex so that adjacency
  // constraints bite early.
  std::vector<char> seen(k, 0);
  for (int round = 0; round < k; ++round) {
    int start = -1;
    for (int t = 0; t < k; ++t)
      if (!seen[t] && (start < 0 || target.degree(t) > target.degree(start))) start = t;
    if (start < 0) break;
    std::queue<int> q;
    q.push(start);
    seen[start] = 1;
    while (!q.empty()) {
      int t = q.front();
      q.pop();
      s.target_order.push_back(t);
      for (int u : target.neighbors(t))
        if (!seen[u]) {
          seen[u] = 1;
          q.push(u);
        }
    }
  }
  for (int total = k; total <= n; ++total)
    if (s.place(0, 0, total)) return detail::model_from_masks(host, target, s.masks);
  return std::nullopt;
}

struct MinorOps {
  std::vector<MinorOperation> ops;
  // final-graph label -> target label
  std::vector<std::pair<std::string, std::string>> isomorphism;
};

// Deletes unused host vertices, contracts each branch set onto its first
// listed vertex along a BFS tree, then deletes surplus edges between branch
// sets. Host labels are kept throughout; `isomorphism` maps them to targets.
inline MinorOps minor_model_to_ops(const Graph& host, const Graph& target, const MinorModel& model) {
  validate_minor_model(host, target, model);
  const int n = host.vertex_count();
  std::vector<int> owner(n, -1);
  for (std::size_t i = 0; i < model.branch_sets.size(); ++i)
    for (const auto& h : model.branch_sets[i].second) owner[host.index_of(h)] = static_cast<int>(i);

  MinorOps out;
  for (int x = 0; x < n; ++x)
    if (owner[x] < 0) out.ops.push_back(MinorOperation::delete_vertex(host.label(x)));

  std::vector<std::string> rep(model.branch_sets.size());
  for (std::size_t i = 0; i < model.branch_sets.size(); ++i) {
    const auto& b = model.branch_sets[i].second;
    int root = host.index_of(b[0]);
    rep[i] = host.label(root);
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    q.push(root);
    seen[root] = 1;
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      for (int y : host.neighbors(x))
        if (!seen[y] && owner[y] == static_cast<int>(i)) {
          seen[y] = 1;
          q.push(y);
          out.ops.push_back(MinorOperation::contract(rep[i], host.label(y), rep[i]));
        }
    }
  }

  Graph current = host;
  for (const auto& op : out.ops) current = apply_operation(current, op);
  std::map<std::string, std::string> to_target;
  for (std::size_t i = 0; i < rep.size(); ++i) to_target[rep[i]] = model.branch_sets[i].first;
  for (auto [a, b] : current.edges()) {
    const std::string& la = current.label(a);
    const std::string& lb = current.label(b);
    if (!target.has_edge(to_target[la], to_target[lb])) out.ops.push_back(MinorOperation::delete_edge(la, lb));
  }
  for (std::size_t i = 0; i < rep.size(); ++i) out.isomorphism.emplace_back(rep[i], model.branch_sets[i].first);
  return out;
}

struct EmbeddingOptions {
  std::uint64_t seed = 1;
  int attempts = 400;
  int slack = 8;  // extra path length tried beyond the minimum
};

namespace detail {

// Simple path from any vertex of `from` to a vertex adjacent to `to_set`
// with at least `min_inner` interior vertices, all free. Searches by
// increasing length; returns interior vertices in order.
inline bool route_path(const Graph& host, const std::vector<int>& owner, int from, int to, int min_inner,
                       int max_inner, std::vector<int>& inner) {
  const int n = host.vertex_count();
  std::vector<char> on_path(n, 0);
  std::vector<int> path;
  // iterative deepening on interior length
  for (int len = min_inner; len <= max_inner; ++len) {
    path.clear();
    std::fill(on_path.begin(), on_path.end(), 0);
    bool found = false;
    auto dfs = [&](auto&& self, int cur) -> void {
      if (found) return;
      if (static_cast<int>(path.size()) == len) {
        if (host.has_edge(cur, to)) found = true;
        return;
      }
      for (int y : host.neighbors(cur)) {
        if (owner[y] >= 0 || on_path[y]) continue;
        on_path[y] = 1;
        path.push_back(y);
        self(self, y);
        if (found) return;
        path.pop_back();
        on_path[y] = 0;
      }
    };
    dfs(dfs, from);
    if (found) {
      inner = path;
      return true;
    }
  }
  return false;
}

}  // namespace detail

// Heuristic topological embedding for hosts too large for exhaustive search.
// Target vertices of degree other than two become single host vertices
// (placed at `hints` when given, otherwise at random); chains of degree-two
// target vertices are routed as host paths and cut into consecutive
// segments. Every result is checked with validate_minor_model.
inline std::optional<MinorModel> embed_topological(const Graph& host, const Graph& target,
                                                   const std::map<std::string, std::string>& hints = {},
                                                   const EmbeddingOptions& opt = {}) {
  const int n = host.vertex_count();
  const int k = target.vertex_count();
  if (k > n) return std::nullopt;

  // Decompose the target into branch vertices and degree-two chains.
  std::vector<char> is_branch(k, 0);
  for (int t = 0; t < k; ++t) is_branch[t] = target.degree(t) != 2 || hints.count(target.label(t));
  struct Chain {
    int a, b;
    std::vector<int> inner;
  };
  std::vector<Chain> chains;
  std::set<std::pair<int, int>> used_edges;
  auto walk = [&](int a, int first) {
    Chain c{a, -1, {}};
    int prev = a, cur = first;
    used_edges.insert(std::minmax(prev, cur));
    while (!is_branch[cur]) {
      c.inner.push_back(cur);
      int next = target.neighbors(cur)[0] == prev ? target.neighbors(cur)[1] : target.neighbors(cur)[0];
      prev = cur;
      cur = next;
      used_edges.insert(std::minmax(prev, cur));
    }
    c.b = cur;
    chains.push_back(std::move(c));
  };
  for (int t = 0; t < k; ++t)
    if (is_branch[t])
      for (int u : target.neighbors(t))
        if (!used_edges.count(std::minmax(t, u))) walk(t, u);
  // Cycles made only of degree-two vertices: promote one vertex per cycle.
  for (int t = 0; t < k; ++t) {
    if (is_branch[t] || target.degree(t) != 2) continue;
    bool covered = false;
    for (const auto& c : chains)
      if (std::find(c.inner.begin(), c.inner.end(), t) != c.inner.end()) covered = true;
    if (covered) continue;
    is_branch[t] = 1;
    for (int u : target.neighbors(t))
      if (!used_edges.count(std::minmax(t, u))) walk(t, u);
  }

  SplitMix64 rng(opt.seed);
  std::vector<int> branch_vertices;
  for (int t = 0; t < k; ++t)
    if (is_branch[t]) branch_vertices.push_back(t);

  for (int attempt = 0; attempt < opt.attempts; ++attempt) {
    std::vector<int> owner(n, -1);
    std::vector<std::vector<int>> sets(k);
    bool ok = true;
    std::vector<int> free_hosts;
    for (int t : branch_vertices) {
      auto h = hints.find(target.label(t));
      if (h == hints.end()) continue;
      int x = host.index_of(h->second);
      if (owner[x] >= 0) throw InvalidInput("two hints name host vertex '" + h->second + "'");
      owner[x] = t;
      sets[t] = {x};
    }
    for (int t : branch_vertices) {
      if (!sets[t].empty()) continue;
      free_hosts.clear();
      for (int x = 0; x < n; ++x)
        if (owner[x] < 0 && host.degree(x) >= target.degree(t)) free_hosts.push_back(x);
      if (free_hosts.empty()) {
        ok = false;
        break;
      }
      int x = free_hosts[rng.uniform(free_hosts.size())];
      owner[x] = t;
      sets[t] = {x};
    }
    if (!ok) continue;

    std::vector<std::size_t> chain_order(chains.size());
    for (std::size_t i = 0; i < chains.size(); ++i) chain_order[i] = i;
    if (attempt > 0)
      for (std::size_t i = chain_order.size(); i > 1; --i) std::swap(chain_order[i - 1], chain_order[rng.uniform(i)]);
    // Short chains first: they have the fewest routing options.
    std::stable_sort(chain_order.begin(), chain_order.end(),
                     [&](std::size_t a, std::size_t b) { return chains[a].inner.size() < chains[b].inner.size(); });

    for (std::size_t ci : chain_order) {
      const Chain& c = chains[ci];
      int from = sets[c.a][0], to = sets[c.b][0];
      int need = static_cast<int>(c.inner.size());
      if (need == 0) {
        if (!host.has_edge(from, to)) {
          ok = false;
          break;
        }
        continue;
      }
      std::vector<int> path;
      if (!detail::route_path(host, owner, from, to, need, need + opt.slack, path)) {
        ok = false;
        break;
      }
      // first need-1 chain vertices take one host vertex each, the last one
      // absorbs the remainder of the path
      for (int i = 0; i < need; ++i) {
        int t = c.inner[i];
        if (i + 1 < need) {
          sets[t] = {path[i]};
          owner[path[i]] = t;
        } else {
          for (std::size_t j = i; j < path.size(); ++j) {
            sets[t].push_back(path[j]);
            owner[path[j]] = t;
          }
        }
      }
    }
    if (!ok) continue;

    MinorModel model;
    for (int t = 0; t < k; ++t) {
      std::vector<std::string> b;
      for (int x : sets[t]) b.push_back(host.label(x));
      model.branch_sets.emplace_back(target.label(t), std::move(b));
    }
    for (auto [a, b] : target.edges()) {
      for (int x : sets[a]) {
        bool found = false;
        for (int y : sets[b])
          if (host.has_edge(x, y)) {
            model.witnesses.push_back({target.label(a), target.label(b), host.label(x), host.label(y)});
            found = true;
            break;
          }
        if (found) break;
      }
    }
    try {
      validate_minor_model(host, target, model);
      return model;
    } catch (const InvalidInput&) {
    }
  }
  return std::nullopt;
}

}  // namespace twlab
