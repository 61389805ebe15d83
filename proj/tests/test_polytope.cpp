#include <gtest/gtest.h>

#include "oracles.hpp"
#include "twlab/composition.hpp"
#include "twlab/polytope.hpp"
#include "twlab/slack.hpp"

using namespace twlab;

namespace {

PointSet triangle() { return binary_points(2, {{0, 0}, {1, 0}, {0, 1}}); }
PointSet square() { return binary_points(2, {{0, 0}, {1, 0}, {0, 1}, {1, 1}}); }

std::set<std::pair<std::vector<Rational>, Rational>> as_pairs(const HPolytope& h) {
  std::set<std::pair<std::vector<Rational>, Rational>> out;
  for (const auto& f : h.facets) out.insert({f.a, f.b});
  return out;
}

}  // namespace

TEST(Hull, SquareFacets) {
  auto h = convex_hull_facets(square());
  EXPECT_EQ(h.dimension, 2);
  EXPECT_EQ(h.facets.size(), 4u);
  EXPECT_TRUE(h.equations.empty());
}

TEST(Hull, LowerDimensionalSetsCarryEquations) {
  PointSet s = binary_points(3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  auto h = convex_hull_facets(s);
  EXPECT_EQ(h.dimension, 2);
  EXPECT_EQ(h.equations.size(), 1u);
  EXPECT_EQ(h.facets.size(), 3u);
  auto single = convex_hull_facets(binary_points(2, {{1, 1}}));
  EXPECT_EQ(single.dimension, 0);
  EXPECT_TRUE(single.facets.empty());
}

TEST(Hull, MatchesSubsetOracle) {
  SplitMix64 rng(9);
  int checked = 0;
  for (int t = 0; t < 60 && checked < 25; ++t) {
    int d = 2 + static_cast<int>(rng.uniform(3));
    PointSet s = oracle::random_binary_set(d, rng, 0.6);
    if (affine_dimension(s) != d) continue;
    auto h = convex_hull_facets(s);
    EXPECT_EQ(as_pairs(h), oracle::facets_by_subsets(s)) << "trial " << t;
    ++checked;
  }
  EXPECT_GE(checked, 20);
}

TEST(Hull, RejectsBadInput) {
  EXPECT_THROW(convex_hull_facets(PointSet(2, {})), InvalidInput);
  EXPECT_THROW(PointSet(2, {Point{0, 1}, Point{0, 1}}), InvalidInput);
  HullOptions small;
  small.cap = 2;
  EXPECT_THROW(convex_hull_facets(binary_points(3, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}), small), CapExceeded);
}

TEST(Slack, MatrixAndBracket) {
  auto s = square();
  auto h = convex_hull_facets(s);
  auto m = slack_matrix(h, s);
  EXPECT_EQ(m.rows(), 4);
  EXPECT_EQ(m.cols(), 4);
  int zeros = 0;
  for (const auto& r : m.entries)
    for (const auto& e : r) {
      EXPECT_GE(e, 0);
      zeros += e == 0;
    }
  EXPECT_EQ(zeros, 8);
  auto b = xc_bracket(h, m);
  EXPECT_EQ(b.lower, 4);
  EXPECT_EQ(b.upper, 4);
  auto with_ef = xc_bracket(h, m, 5);
  EXPECT_EQ(with_ef.upper, 4);
}

TEST(Slack, RectangleCoverOfIdentitySupport) {
  SlackMatrix m;
  m.entries = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  EXPECT_EQ(rectangle_cover_lb(m), 3);
  m.entries = {{1, 1}, {1, 1}};
  EXPECT_EQ(rectangle_cover_lb(m), 1);
}

TEST(Slack, NegativeSlackIsRejected) {
  auto h = convex_hull_facets(triangle());
  EXPECT_THROW(slack_matrix(h, square()), InvalidInput);
}

TEST(Pyramid, PlusOperatorMakesPyramids) {
  SplitMix64 rng(2);
  for (int t = 0; t < 20; ++t) {
    PointSet s = oracle::random_binary_set(3, rng);
    auto p = plus_operator(s);
    EXPECT_EQ(affine_dimension(p), affine_dimension(s) + 1);
    auto cert = is_pyramid(p);
    ASSERT_TRUE(cert.has_value());
  }
  EXPECT_FALSE(is_pyramid(square()).has_value());
  EXPECT_TRUE(is_pyramid(triangle()).has_value());
}

TEST(Decomposition, ProductsSplitAndPyramidsDoNot) {
  auto sq = square();
  auto cert = is_decomposable(sq);
  ASSERT_TRUE(cert.has_value());
  EXPECT_EQ(cert->first_dimension, 1);
  EXPECT_EQ(cert->second_dimension, 1);
  auto tt = cartesian_product(triangle(), triangle());
  auto c2 = is_decomposable(tt);
  ASSERT_TRUE(c2.has_value());
  EXPECT_EQ(c2->first.size() * c2->second.size(), tt.size());
  EXPECT_FALSE(is_decomposable(triangle()).has_value());
  EXPECT_FALSE(is_decomposable(plus_operator(sq)).has_value());
}

TEST(Composition, StabOfPlusIsPlusOfStab) {
  SplitMix64 rng(12);
  for (int t = 0; t < 15; ++t) {
    Graph g = oracle::random_graph(1 + static_cast<int>(rng.uniform(6)), 0.4, rng);
    auto lhs = oracle::as_int_set(stab_vertices(graph_plus(g)));
    auto rhs = oracle::as_int_set(plus_operator(stab_vertices(g)));
    EXPECT_EQ(lhs, rhs);
    EXPECT_EQ(oracle::as_int_set(stab_vertices(g)), oracle::stable_sets(g));
  }
}

TEST(Composition, FormulationsDescribeTheirSets) {
  SplitMix64 rng(14);
  for (int t = 0; t < 10; ++t) {
    PointSet s = oracle::random_binary_set(3, rng);
    auto f = membership_formulation(s);
    EXPECT_TRUE(same_points(feasible_points(f), s));
    EXPECT_TRUE(same_points(feasible_points(formulation_of_plus(f)), plus_operator(s)));
    auto prod = feasible_points(product_formulation(f, 2));
    EXPECT_TRUE(same_points(prod, cartesian_product(s, s)));
  }
}

TEST(Composition, AffineReencodeKeepsPyramids) {
  auto t = triangle();
  AffineMap m;
  m.matrix = {{1, 1}, {0, 1}};
  m.offset = {2, 0};
  auto r = affine_reencode(t, m);
  EXPECT_TRUE(r.injective_on_affine_hull);
  EXPECT_TRUE(r.pyramid_before);
  EXPECT_TRUE(r.pyramid_after);
  AffineMap collapse;
  collapse.matrix = {{1, 1}};
  collapse.offset = {0};
  EXPECT_THROW(affine_reencode(t, collapse), InvalidInput);
}

TEST(HardFamily, SmallCase) {
  auto r = build_hard_family(binary_points(1, {{0}, {1}}), 5, 1);
  EXPECT_EQ(r.k, 2);
  EXPECT_EQ(affine_dimension(r.points), 5);
  EXPECT_TRUE(r.width_exact);
  EXPECT_LE(r.width, 2);
  EXPECT_TRUE(r.pyramid.has_value());
  EXPECT_FALSE(is_decomposable(r.points).has_value());
  EXPECT_THROW(build_hard_family(triangle(), 5, 1), InvalidInput);
}
