#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sys/wait.h>

#include "twlab/twlab.hpp"

using namespace twlab;
using io::json;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

// Runs the CLI with stderr folded into stdout.
Run cli(const std::string& args) {
  std::string cmd = std::string(TWLAB_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
  int raw = pclose(p);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string sample(const std::string& name) { return std::string(TWLAB_SAMPLES) + "/" + name; }

}  // namespace

TEST(IO, InstanceRoundTrip) {
  POInstance inst = io::instance_from(io::read_file(sample("qcqp_sqrt_half.json")));
  json j = io::to_json(inst);
  POInstance back = io::instance_from(j);
  EXPECT_EQ(inst.canonical_serialization(), back.canonical_serialization());
  EXPECT_EQ(back.variables()[0].domain, Domain::Unit);
}

TEST(IO, RationalsAcceptSeveralSpellings) {
  EXPECT_EQ(io::rational_from(json("3/6")), Rational(1, 2));
  EXPECT_EQ(io::rational_from(json(2)), 2);
  EXPECT_EQ(io::rational_from(json("0.25")), Rational(1, 4));
  EXPECT_THROW(io::rational_from(json("1/0")), InvalidInput);
  EXPECT_THROW(io::rational_from(json::array()), InvalidInput);
}

TEST(IO, PointSetAndPolytopeRoundTrip) {
  PointSet s = io::point_set_from(io::read_file(sample("square.json")));
  EXPECT_EQ(s.size(), 4u);
  EXPECT_TRUE(same_points(io::point_set_from(io::to_json(s)), s));
  HPolytope h = convex_hull_facets(s);
  HPolytope back = io::polytope_from(io::to_json(h));
  EXPECT_EQ(back.facets, h.facets);
  EXPECT_EQ(back.dimension, h.dimension);
}

TEST(IO, DecompositionRoundTrip) {
  Graph g = grid_graph(3);
  auto td = treewidth_exact(g).decomposition;
  auto back = io::decomposition_from(io::to_json(td, g), g);
  EXPECT_EQ(back.bags, td.bags);
  EXPECT_TRUE(verify_decomposition(g, back).valid);
}

TEST(IO, MinorModelRoundTrip) {
  Graph c4 = cycle_graph(4), p3 = path_graph(3);
  auto m = find_minor_model(c4, p3);
  ASSERT_TRUE(m.has_value());
  auto back = io::minor_model_from(io::to_json(*m), c4, p3);
  EXPECT_EQ(back.branch_sets, m->branch_sets);
  auto ops = minor_model_to_ops(c4, p3, *m).ops;
  EXPECT_EQ(io::operations_from(io::to_json(ops)), ops);
}

TEST(IO, MalformedJsonIsInvalidInput) {
  EXPECT_THROW(io::parse_text("{\"dimension\": "), InvalidInput);
  EXPECT_THROW(io::point_set_from(json{{"dimension", 2}}), InvalidInput);
  EXPECT_THROW(io::instance_from(json{{"variables", json::array({{{"name", "a"}, {"domain", "real"}}})}}), InvalidInput);
}

TEST(CLI, TreewidthMatchesLibrary) {
  auto r = cli("tw " + sample("grid3.col") + " --exact");
  ASSERT_EQ(r.status, 0) << r.out;
  json j = json::parse(r.out);
  EXPECT_EQ(j["width"], 3);
  EXPECT_EQ(j["exact"], true);
  std::ifstream in(sample("grid3.col"));
  Graph g = read_dimacs_graph(in);
  EXPECT_TRUE(verify_decomposition(g, io::decomposition_from(j["decomposition"], g)).valid);
}

TEST(CLI, HullMatchesLibrary) {
  auto r = cli("hull --points " + sample("triangle.json"));
  ASSERT_EQ(r.status, 0) << r.out;
  HPolytope got = io::polytope_from(json::parse(r.out));
  HPolytope want = convex_hull_facets(io::point_set_from(io::read_file(sample("triangle.json"))));
  EXPECT_EQ(got.facets, want.facets);
}

TEST(CLI, BracketOfSquare) {
  auto r = cli("xc-bracket --points " + sample("square.json"));
  ASSERT_EQ(r.status, 0) << r.out;
  json j = json::parse(r.out);
  EXPECT_EQ(j["bracket"]["lower"], 4);
  EXPECT_EQ(j["bracket"]["upper"], 4);
}

TEST(CLI, LpSolveStableSet) {
  auto r = cli("lp solve --instance " + sample("stab_p3.json"));
  ASSERT_EQ(r.status, 0) << r.out;
  json j = json::parse(r.out);
  EXPECT_EQ(io::rational_from(j["objective"]), 2);
  auto emit = cli("lp emit --instance " + sample("stab_p3.json") + " --format lp");
  ASSERT_EQ(emit.status, 0);
  EXPECT_NE(emit.out.find("Subject To"), std::string::npos);
}

TEST(CLI, PipelineMatchesBruteForce) {
  auto r = cli("pipeline --wcnf " + sample("small.wcnf") + " --host grid:3");
  ASSERT_EQ(r.status, 0) << r.out;
  json j = json::parse(r.out);
  std::ifstream in(sample("small.wcnf"));
  auto f = read_wcnf(in);
  EXPECT_EQ(io::rational_from(j["optimum"]), brute_force_max2sat(f).satisfied);
  EXPECT_TRUE(j["trace"]["stages"].is_array());
}

TEST(CLI, RoundNearFeasiblePoint) {
  auto r = cli("round --instance " + sample("stab_p3_relaxed.json") + " --point " + sample("near_feasible.json") +
               " --eps 1/20");
  ASSERT_EQ(r.status, 0) << r.out;
  json j = json::parse(r.out);
  EXPECT_EQ(j["assignment"]["x1"], "1");
  EXPECT_EQ(j["objective_after"], "2");
}

TEST(CLI, GnpCsvIsDeterministic) {
  auto a = cli("gnp-experiment --n 12 --p 0.5 --r 5 --samples 40 --seed 3 --format csv");
  auto b = cli("gnp-experiment --n 12 --p 0.5 --r 5 --samples 40 --seed 3 --format csv --jobs 3");
  ASSERT_EQ(a.status, 0) << a.out;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.rfind(io::csv_header(), 0), 0u);
  auto e = gnp_experiment(12, 0.5, 5, 40, 3);
  EXPECT_NE(a.out.find(io::csv_row(e)), std::string::npos);
}

TEST(CLI, ExitCodes) {
  EXPECT_EQ(cli("tw").status, 2);
  EXPECT_EQ(cli("no-such-command").status, 2);
  auto missing = cli("tw /nonexistent/graph.col");
  EXPECT_EQ(missing.status, 1);
  json err = json::parse(missing.out);
  EXPECT_EQ(err["kind"], "invalid-input");
  auto cap = cli("tw " + sample("grid3.col") + " --exact --cap-tw 4");
  EXPECT_EQ(cap.status, 1);
  EXPECT_EQ(json::parse(cap.out)["kind"], "cap-exceeded");
  EXPECT_EQ(cli("round --instance " + sample("stab_p3_relaxed.json") + " --point " + sample("near_feasible.json") +
                " --eps 1/5")
                .status,
            1);
}
