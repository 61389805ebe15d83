#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "twlab/error.hpp"

namespace twlab {

// Simple undirected graph with opaque string labels. Algorithms work on the
// dense indices 0..n-1; labels survive every transformation so that variable
// names can be traced through minors and lifts.
class Graph {
 public:
  Graph() = default;

  // Vertices labelled "1".."n".
  explicit Graph(int n) {
    for (int i = 1; i <= n; ++i) add_vertex(std::to_string(i));
  }

  explicit Graph(const std::vector<std::string>& labels) {
    for (const auto& l : labels) add_vertex(l);
  }

  int add_vertex(const std::string& label) {
    if (index_.count(label)) throw InvalidInput("duplicate vertex label '" + label + "'");
    int id = static_cast<int>(labels_.size());
    labels_.push_back(label);
    adj_.emplace_back();
    index_.emplace(label, id);
    return id;
  }

  // Returns false when the edge was already present.
  bool add_edge(int u, int v) {
    check_vertex(u);
    check_vertex(v);
    if (u == v) throw InvalidInput("self-loop on vertex '" + labels_[u] + "'");
    auto& nu = adj_[u];
    auto it = std::lower_bound(nu.begin(), nu.end(), v);
    if (it != nu.end() && *it == v) return false;
    nu.insert(it, v);
    auto& nv = adj_[v];
    nv.insert(std::lower_bound(nv.begin(), nv.end(), u), u);
    ++edge_count_;
    return true;
  }

  bool add_edge(const std::string& u, const std::string& v) { return add_edge(index_of(u), index_of(v)); }

  bool remove_edge(int u, int v) {
    check_vertex(u);
    check_vertex(v);
    auto& nu = adj_[u];
    auto it = std::lower_bound(nu.begin(), nu.end(), v);
    if (it == nu.end() || *it != v) return false;
    nu.erase(it);
    auto& nv = adj_[v];
    nv.erase(std::lower_bound(nv.begin(), nv.end(), u));
    --edge_count_;
    return true;
  }

  int vertex_count() const { return static_cast<int>(labels_.size()); }
  std::size_t edge_count() const { return edge_count_; }

  const std::string& label(int v) const {
    check_vertex(v);
    return labels_[v];
  }
  const std::vector<std::string>& labels() const { return labels_; }

  std::optional<int> find(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  int index_of(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) throw InvalidInput("unknown vertex '" + label + "'");
    return it->second;
  }

  bool contains(const std::string& label) const { return index_.count(label) != 0; }

  const std::vector<int>& neighbors(int v) const {
    check_vertex(v);
    return adj_[v];
  }

  int degree(int v) const { return static_cast<int>(neighbors(v).size()); }

  bool has_edge(int u, int v) const {
    if (u < 0 || v < 0 || u >= vertex_count() || v >= vertex_count()) return false;
    const auto& nu = adj_[u];
    return std::binary_search(nu.begin(), nu.end(), v);
  }

  bool has_edge(const std::string& u, const std::string& v) const {
    auto a = find(u), b = find(v);
    return a && b && has_edge(*a, *b);
  }

  // Edges as (u, v) with u < v, in lexicographic order.
  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(edge_count_);
    for (int u = 0; u < vertex_count(); ++u)
      for (int v : adj_[u])
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  // Bitmask adjacency; only valid for graphs with at most 64 vertices.
  std::uint64_t neighbor_mask(int v) const {
    std::uint64_t m = 0;
    for (int u : neighbors(v)) m |= std::uint64_t{1} << u;
    return m;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<int>> adj_;
  std::unordered_map<std::string, int> index_;
  std::size_t edge_count_ = 0;

  void check_vertex(int v) const {
    if (v < 0 || v >= vertex_count()) throw InvalidInput("vertex index out of range: " + std::to_string(v));
  }
};

// Labelled equality: same label set and the same edges between labels.
// Vertex order does not matter.
inline bool same_labelled_graph(const Graph& a, const Graph& b) {
  if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count()) return false;
  for (int v = 0; v < a.vertex_count(); ++v)
    if (!b.contains(a.label(v))) return false;
  for (auto [u, v] : a.edges())
    if (!b.has_edge(a.label(u), a.label(v))) return false;
  return true;
}

inline Graph induced_subgraph(const Graph& g, const std::vector<int>& vertices) {
  Graph out;
  std::vector<int> remap(g.vertex_count(), -1);
  for (int v : vertices) remap[v] = out.add_vertex(g.label(v));
  for (auto [u, v] : g.edges())
    if (remap[u] >= 0 && remap[v] >= 0) out.add_edge(remap[u], remap[v]);
  return out;
}

inline Graph path_graph(int n) {
  Graph g(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

inline Graph cycle_graph(int n) {
  Graph g = path_graph(n);
  if (n >= 3) g.add_edge(n - 1, 0);
  return g;
}

inline Graph complete_graph(int n) {
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

// g x g grid, vertices labelled 1..g*g in row-major order.
inline Graph grid_graph(int g) {
  if (g < 1) throw InvalidInput("grid size must be at least 1");
  Graph out(g * g);
  for (int r = 0; r < g; ++r)
    for (int c = 0; c < g; ++c) {
      int v = r * g + c;
      if (c + 1 < g) out.add_edge(v, v + 1);
      if (r + 1 < g) out.add_edge(v, v + g);
    }
  return out;
}

inline Graph disjoint_union(const Graph& a, const Graph& b, const std::string& prefix_a, const std::string& prefix_b) {
  Graph out;
  for (int v = 0; v < a.vertex_count(); ++v) out.add_vertex(prefix_a + a.label(v));
  for (int v = 0; v < b.vertex_count(); ++v) out.add_vertex(prefix_b + b.label(v));
  for (auto [u, v] : a.edges()) out.add_edge(u, v);
  int off = a.vertex_count();
  for (auto [u, v] : b.edges()) out.add_edge(off + u, off + v);
  return out;
}

// ---------------------------------------------------------------------------
// DIMACS edge format: "p edge <n> <m>", "e <u> <v>" (1-based), "c ..." comments.

inline Graph read_dimacs_graph(std::istream& in) {
  std::string line;
  std::optional<Graph> g;
  std::size_t declared_edges = 0;
  std::vector<std::string> labels;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "c") {
      std::string word;
      if (!g && (ls >> word) && word == "labels")
        for (std::string l; ls >> l;) labels.push_back(l);
      continue;
    }
    if (tag == "p") {
      std::string fmt;
      long n = -1;
      long m = -1;
      if (!(ls >> fmt >> n >> m) || (fmt != "edge" && fmt != "col") || n < 0 || m < 0)
        throw InvalidInput("line " + std::to_string(line_no) + ": malformed DIMACS header");
      if (g) throw InvalidInput("line " + std::to_string(line_no) + ": duplicate DIMACS header");
      if (!labels.empty() && static_cast<long>(labels.size()) != n)
        throw InvalidInput("label comment lists " + std::to_string(labels.size()) + " labels for " +
                           std::to_string(n) + " vertices");
      if (labels.empty())
        g.emplace(static_cast<int>(n));
      else
        g.emplace(labels);
      declared_edges = static_cast<std::size_t>(m);
    } else if (tag == "e") {
      if (!g) throw InvalidInput("line " + std::to_string(line_no) + ": edge before header");
      long u = 0, v = 0;
      if (!(ls >> u >> v) || u < 1 || v < 1 || u > g->vertex_count() || v > g->vertex_count())
        throw InvalidInput("line " + std::to_string(line_no) + ": malformed or out-of-range edge");
      if (u == v) throw InvalidInput("line " + std::to_string(line_no) + ": self-loop");
      g->add_edge(static_cast<int>(u - 1), static_cast<int>(v - 1));
    } else {
      throw InvalidInput("line " + std::to_string(line_no) + ": unknown DIMACS line type '" + tag + "'");
    }
  }
  if (!g) throw InvalidInput("missing DIMACS header");
  if (g->edge_count() != declared_edges)
    throw InvalidInput("DIMACS header declares " + std::to_string(declared_edges) + " edges, found " +
                       std::to_string(g->edge_count()));
  return std::move(*g);
}

// Vertices are written by index; a comment line records the labels when they
// are not simply 1..n.
inline void write_dimacs_graph(std::ostream& out, const Graph& g) {
  bool natural = true;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (g.label(v) != std::to_string(v + 1)) natural = false;
  if (!natural) {
    out << "c labels";
    for (int v = 0; v < g.vertex_count(); ++v) out << ' ' << g.label(v);
    out << '\n';
  }
  out << "p edge " << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (auto [u, v] : g.edges()) out << "e " << u + 1 << ' ' << v + 1 << '\n';
}

}  // namespace twlab
