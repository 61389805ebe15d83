#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"
#include "twlab/graph.hpp"
#include "twlab/treewidth.hpp"

using namespace twlab;

TEST(Graph, LabelsAndEdges) {
  Graph g(3);
  EXPECT_EQ(g.label(0), "1");
  EXPECT_TRUE(g.add_edge("1", "3"));
  EXPECT_FALSE(g.add_edge(2, 0));  // duplicate
  EXPECT_TRUE(g.has_edge("3", "1"));
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_THROW(g.add_edge(1, 1), InvalidInput);
  EXPECT_THROW(g.index_of("9"), InvalidInput);
}

TEST(Graph, DimacsRoundTrip) {
  Graph g = grid_graph(3);
  std::stringstream s;
  write_dimacs_graph(s, g);
  Graph h = read_dimacs_graph(s);
  EXPECT_TRUE(same_labelled_graph(g, h));
  EXPECT_EQ(h.edge_count(), 12u);
}

TEST(Graph, DimacsRejectsGarbage) {
  std::stringstream a("p edge 2 1\ne 1 3\n");
  EXPECT_THROW(read_dimacs_graph(a), InvalidInput);
  std::stringstream b("e 1 2\n");
  EXPECT_THROW(read_dimacs_graph(b), InvalidInput);
}

TEST(Treewidth, EliminationOnCycle) {
  Graph c4 = cycle_graph(4);
  auto r = eliminate(c4, {0, 1, 2, 3});
  EXPECT_EQ(r.clique_number, 3);
  EXPECT_TRUE(is_chordal(r.filled).chordal);
  EXPECT_FALSE(is_chordal(c4).chordal);
  EXPECT_TRUE(verify_decomposition(c4, r.decomposition).valid);
}

TEST(Treewidth, VerifierCatchesBrokenDecompositions) {
  Graph p = path_graph(3);
  TreeDecomposition td;
  td.bags = {{0, 1}, {2}};
  td.tree_edges = {{0, 1}};
  auto rep = verify_decomposition(p, td);
  EXPECT_FALSE(rep.valid);
  EXPECT_FALSE(rep.violations.empty());

  td.bags = {{0, 1}, {2}, {0, 2}};  // vertex 0 split, then rejoined
  td.tree_edges = {{0, 1}, {1, 2}};
  EXPECT_FALSE(verify_decomposition(p, td).valid);
}

TEST(Treewidth, KnownValues) {
  EXPECT_EQ(treewidth_exact(grid_graph(3)).width, 3);
  EXPECT_EQ(treewidth_exact(grid_graph(4), ExactTreewidthOptions{16}).width, 4);
  EXPECT_EQ(treewidth_exact(complete_graph(5)).width, 4);
  EXPECT_EQ(treewidth_exact(path_graph(6)).width, 1);
  EXPECT_EQ(treewidth_exact(cycle_graph(6)).width, 2);
  EXPECT_EQ(treewidth_exact(Graph(3)).width, 0);
}

TEST(Treewidth, ExactMatchesAllOrders) {
  SplitMix64 rng(11);
  for (int t = 0; t < 40; ++t) {
    int n = 1 + static_cast<int>(rng.uniform(7));
    Graph g = oracle::random_graph(n, 0.2 + 0.6 * rng.uniform01(), rng);
    auto r = treewidth_exact(g);
    EXPECT_EQ(r.width, oracle::treewidth_by_orders(g)) << "trial " << t;
    EXPECT_TRUE(verify_decomposition(g, r.decomposition).valid);
    EXPECT_EQ(r.decomposition.width(), r.width);
  }
}

TEST(Treewidth, HeuristicsAreUpperBounds) {
  SplitMix64 rng(5);
  for (int t = 0; t < 30; ++t) {
    Graph g = oracle::random_partial_ktree(10, 3, 0.8, rng);
    int exact = treewidth_exact(g).width;
    EXPECT_LE(exact, 3);
    for (auto h : {Heuristic::MinFill, Heuristic::MinDegree}) {
      auto u = treewidth_upper(g, h);
      EXPECT_GE(u.width, exact);
      EXPECT_TRUE(verify_decomposition(g, u.decomposition).valid);
    }
  }
}

TEST(Treewidth, CapIsEnforced) {
  ExactTreewidthOptions opt;
  opt.cap = 8;
  EXPECT_THROW(treewidth_exact(grid_graph(3), opt), CapExceeded);
  bool exact = true;
  auto r = default_decomposition(grid_graph(5), 14, &exact);
  EXPECT_FALSE(exact);
  EXPECT_GE(r.width, 5);
}
