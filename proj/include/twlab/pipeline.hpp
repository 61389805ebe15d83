#pragma once

#include <chrono>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "twlab/ef_builder.hpp"
#include "twlab/error.hpp"
#include "twlab/graph.hpp"
#include "twlab/lp.hpp"
#include "twlab/minor.hpp"
#include "twlab/reductions.hpp"
#include "twlab/treewidth.hpp"

namespace twlab {

struct Host {
  Graph graph;
  int grid = 0;  // side length when the host is a grid, else 0
};

// "grid:<g>" or a DIMACS graph file.
inline Host parse_host(const std::string& text) {
  Host h;
  if (text.rfind("grid:", 0) == 0) {
    std::string num = text.substr(5);
    if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos)
      throw InvalidInput("bad grid host '" + text + "'");
    h.grid = std::stoi(num);
    h.graph = grid_graph(h.grid);
    return h;
  }
  std::ifstream in(text);
  if (!in) throw InvalidInput("cannot open host graph '" + text + "'");
  h.graph = read_dimacs_graph(in);
  return h;
}

struct PipelineOptions {
  Rational eps{1, 16};
  int minor_cap = 12;
  int exact_tw_cap = 14;
  std::uint64_t seed = 1;
  EFOptions ef;
};

struct PipelineResult {
  Rational optimum;
  std::vector<bool> assignment;  // index j holds x_j; index 0 unused
  int satisfied = 0;
  LiftedInstance lifted;
  MinorModel model;
  MinorOps ops;
  TreeDecomposition decomposition;
  EFStats ef_stats;
  Rational lp_objective;
  nlohmann::json trace;
};

// Runs the full chain on a MAX-2SAT formula: encode, embed the intersection
// graph as a minor of the host, lift along the operations, solve the
// eps-formulation over a decomposition of the host, round, pull back.
inline PipelineResult run_pipeline(const Max2SatInstance& formula, const Host& host, const PipelineOptions& opt = {},
                                   const std::optional<MinorModel>& supplied = std::nullopt) {
  using clock = std::chrono::steady_clock;
  if (opt.eps <= 0 || opt.eps >= Rational(1, 10)) throw InvalidInput("pipeline eps must lie in (0, 1/10)");
  PipelineResult res;
  nlohmann::json stages = nlohmann::json::array();
  auto t = clock::now();
  auto lap = [&](const std::string& name, nlohmann::json info) {
    auto now = clock::now();
    info["stage"] = name;
    info["seconds"] = std::chrono::duration<double>(now - t).count();
    stages.push_back(std::move(info));
    t = now;
  };

  POInstance inst = encode_max2sat(formula);
  Graph target = intersection_graph(inst);
  lap("encode", {{"variables", inst.variable_count()},
                 {"constraints", inst.constraints().size()},
                 {"gamma_vertices", target.vertex_count()},
                 {"gamma_edges", target.edge_count()}});

  std::string how;
  if (supplied) {
    validate_minor_model(host.graph, target, *supplied);
    res.model = *supplied;
    how = "supplied";
  } else if (host.graph.vertex_count() <= opt.minor_cap) {
    auto m = find_minor_model(host.graph, target, MinorSearchOptions{opt.minor_cap});
    if (!m) throw PreconditionFailed("intersection graph is not a minor of the host");
    res.model = *m;
    how = "exhaustive";
  } else {
    std::map<std::string, std::string> hints;
    if (host.grid > 0)
      for (const auto& [var, rc] : formula.grid_witness) {
        if (rc.first < 0 || rc.first >= host.grid || rc.second < 0 || rc.second >= host.grid)
          throw InvalidInput("grid witness for x" + std::to_string(var) + " lies outside the host");
        hints[x_name(var)] = std::to_string(rc.first * host.grid + rc.second + 1);
      }
    EmbeddingOptions eo;
    eo.seed = opt.seed;
    auto m = embed_topological(host.graph, target, hints, eo);
    if (!m)
      throw CapExceeded("host is above the exhaustive minor-search cap and no embedding was found; supply a model with --model");
    res.model = *m;
    how = hints.empty() ? "topological" : "topological-hinted";
  }
  lap("minor-model", {{"method", how}, {"host_vertices", host.graph.vertex_count()}});

  res.ops = minor_model_to_ops(host.graph, target, res.model);
  std::map<std::string, std::string> to_host;
  for (const auto& [h, tgt] : res.ops.isomorphism) to_host[tgt] = h;
  POInstance renamed = rename_variables(inst, to_host);
  nlohmann::json forward = nlohmann::json::array();
  for (const auto& op : res.ops.ops) forward.push_back(to_string(op));
  lap("minor-ops", {{"count", res.ops.ops.size()}, {"host_to_minor", forward}});

  res.lifted = lift_instance(renamed, host.graph, res.ops.ops);
  nlohmann::json backward = nlohmann::json::array();
  for (const auto& op : res.lifted.replay) backward.push_back(to_string(op));
  lap("lift", {{"variables", res.lifted.instance.variable_count()},
               {"constraints", res.lifted.instance.constraints().size()},
               {"redundant_rows", res.lifted.redundant_rows.size()},
               {"anchored", two_variable_rows_are_anchored(res.lifted)},
               {"lift_order", backward}});

  const Graph gamma = intersection_graph(res.lifted.instance);
  bool exact = false;
  TreewidthResult tw = default_decomposition(gamma, opt.exact_tw_cap, &exact);
  res.decomposition = tw.decomposition;
  lap("decompose", {{"width", tw.width}, {"exact", exact}, {"bags", tw.decomposition.bag_count()}});

  EFBuild ef = build_eps_ef(res.lifted.instance, opt.eps, res.decomposition, opt.ef);
  res.ef_stats = ef.stats;
  lap("build-ef", {{"columns", ef.stats.columns},
                   {"rows", ef.stats.rows},
                   {"extension_columns", ef.stats.extension_columns},
                   {"grid", to_string(ef.table.grid)}});

  LPSolution sol = solve_lp(ef.lp);
  if (sol.status != LPStatus::Optimal) throw PreconditionFailed(std::string("LP ended with status ") + to_string(sol.status));
  res.lp_objective = sol.objective;
  lap("solve", {{"objective", to_string(sol.objective)}, {"pivots", sol.pivots}});

  Assignment z = extract_assignment(sol, ef.table);
  if (!eps_feasible(res.lifted.instance, z, opt.eps))
    throw Error("internal", "extracted point is not eps-feasible");
  Assignment rounded = round_solution(res.lifted, z, opt.eps);
  Assignment back = pullback_solution(res.lifted, rounded);
  lap("round", {{"extracted_objective", to_string(res.lifted.instance.objective_value(z))},
                {"rounded_objective", to_string(res.lifted.instance.objective_value(rounded))}});

  std::map<std::string, std::string> to_target;
  for (const auto& [h, tgt] : res.ops.isomorphism) to_target[h] = tgt;
  Assignment original;
  for (const auto& [name, value] : back) original[to_target.count(name) ? to_target[name] : name] = value;
  res.optimum = inst.objective_value(original);
  res.assignment.assign(formula.variables + 1, false);
  for (int j = 1; j <= formula.variables; ++j) res.assignment[j] = original.at(x_name(j)) == 1;
  res.satisfied = count_satisfied(formula, res.assignment);
  if (Rational(res.satisfied) != res.optimum) throw Error("internal", "objective does not match satisfied clauses");
  lap("pullback", {{"optimum", to_string(res.optimum)}, {"satisfied", res.satisfied}});

  res.trace = {{"eps", to_string(opt.eps)}, {"stages", stages}};
  return res;
}

}  // namespace twlab
