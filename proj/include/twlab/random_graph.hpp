#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "twlab/error.hpp"
#include "twlab/graph.hpp"
#include "twlab/random.hpp"

namespace twlab {

// G(n,p): each pair u < v, in lexicographic order, is an edge with
// probability p.
inline Graph sample_gnp(int n, double p, std::uint64_t seed) {
  if (n < 0) throw InvalidInput("n must be nonnegative");
  if (!(p >= 0 && p <= 1)) throw InvalidInput("p must lie in [0, 1]");
  SplitMix64 rng(seed);
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.bernoulli(p)) g.add_edge(u, v);
  return g;
}

struct AlphaOptions {
  int cap = 64;
};

namespace detail {

using VMask = std::uint64_t;

// Maximum clique in the complement with a greedy colouring bound.
inline void independent_clique_search(const std::vector<VMask>& adj, VMask cand, int size, int& best) {
  if (!cand) {
    best = std::max(best, size);
    return;
  }
  // Colour classes give an upper bound per vertex.
  std::vector<int> order, bound;
  VMask rest = cand;
  int colour = 0;
  while (rest) {
    ++colour;
    VMask avail = rest;
    while (avail) {
      int v = std::countr_zero(avail);
      avail &= ~(VMask{1} << v) & ~adj[v];
      rest &= ~(VMask{1} << v);
      order.push_back(v);
      bound.push_back(colour);
    }
  }
  for (int i = static_cast<int>(order.size()) - 1; i >= 0; --i) {
    if (size + bound[i] <= best) return;
    int v = order[i];
    independent_clique_search(adj, cand & adj[v], size + 1, best);
    cand &= ~(VMask{1} << v);
  }
}

}  // namespace detail

// Exact independence number by branch and bound.
inline int alpha(const Graph& g, const AlphaOptions& opt = {}) {
  const int n = g.vertex_count();
  if (n > opt.cap || n > 64) throw CapExceeded("independence number on " + std::to_string(n) + " vertices exceeds the cap");
  if (n == 0) return 0;
  const detail::VMask all = n == 64 ? ~detail::VMask{0} : (detail::VMask{1} << n) - 1;
  std::vector<detail::VMask> comp(n);
  for (int v = 0; v < n; ++v) comp[v] = all & ~g.neighbor_mask(v) & ~(detail::VMask{1} << v);
  int best = 0;
  detail::independent_clique_search(comp, all, 0, best);
  return best;
}

// (n e^{-p(r-1)/2})^r, the first-moment bound on P(alpha(G(n,p)) >= r).
inline double diestel_bound(int n, double p, int r) {
  return std::pow(static_cast<double>(n) * std::exp(-p * (r - 1) / 2.0), r);
}

struct GnpExperiment {
  int n = 0;
  double p = 0;
  int r = 0;
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
  std::uint64_t seed = 0;
  double empirical() const { return samples ? static_cast<double>(hits) / samples : 0.0; }
  double bound() const { return diestel_bound(n, p, r); }
  // Binomial standard deviation of the empirical frequency at the bound.
  double sigma() const {
    double q = std::clamp(bound(), 0.0, 1.0);
    return samples ? std::sqrt(q * (1 - q) / samples) : 0.0;
  }
};

// Counts samples with alpha >= r. Sample i uses its own stream, so the count
// is independent of the number of worker threads.
inline GnpExperiment gnp_experiment(int n, double p, int r, std::uint64_t samples, std::uint64_t seed, int jobs = 1) {
  if (samples == 0) throw InvalidInput("samples must be positive");
  if (jobs < 1) throw InvalidInput("jobs must be positive");
  if (n > 64) throw CapExceeded("experiment graphs are limited to 64 vertices");
  GnpExperiment e{n, p, r, samples, 0, seed};
  std::vector<std::uint64_t> hits(jobs, 0);
  auto work = [&](int j) {
    for (std::uint64_t i = j; i < samples; i += jobs) {
      Graph g = sample_gnp(n, p, SplitMix64::stream(seed, i)());
      if (alpha(g) >= r) ++hits[j];
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(work, j);
    for (auto& t : pool) t.join();
  }
  for (auto h : hits) e.hits += h;
  return e;
}

}  // namespace twlab
