// twlab: command-line front end. Every subcommand reads its inputs, calls the
// library once and prints JSON (or CSV / LP text) to stdout or --output.

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "twlab/twlab.hpp"

namespace {

using twlab::io::json;

struct RunConfig {
  std::string eps = "1/16";
  std::uint64_t seed = 1;
  int cap_tw = 14;
  int cap_hull = 8;
  int cap_enum = 20;
  std::string format = "json";
  int jobs = 1;
  std::string model;
  std::string output;
};

RunConfig cfg;

void add_common(CLI::App* app) {
  app->add_option("--eps", cfg.eps, "approximation parameter (rational, e.g. 1/20 or 0.05)");
  app->add_option("--seed", cfg.seed, "64-bit seed");
  app->add_option("--cap-tw", cfg.cap_tw, "vertex cap for exact treewidth")->check(CLI::PositiveNumber);
  app->add_option("--cap-hull", cfg.cap_hull, "dimension cap for facet enumeration")->check(CLI::PositiveNumber);
  app->add_option("--cap-enum", cfg.cap_enum, "coordinate cap for 0/1 enumeration")->check(CLI::PositiveNumber);
  app->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "csv", "lp"}));
  app->add_option("--jobs", cfg.jobs, "worker threads for experiments")->check(CLI::PositiveNumber);
  app->add_option("--model", cfg.model, "minor model JSON (target vertex -> host vertices)");
  app->add_option("-o,--output", cfg.output, "write output here instead of stdout");
}

void emit(const std::string& text) {
  if (cfg.output.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(cfg.output);
  if (!out) throw twlab::InvalidInput("cannot write '" + cfg.output + "'");
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

void emit(const json& j) { emit(j.dump(2)); }

twlab::Rational eps_value() { return twlab::parse_rational(cfg.eps); }

twlab::Graph read_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw twlab::InvalidInput("cannot open graph '" + path + "'");
  return twlab::read_dimacs_graph(in);
}

template <class F>
auto read_stream(const std::string& path, F reader) {
  std::ifstream in(path);
  if (!in) throw twlab::InvalidInput("cannot open '" + path + "'");
  return reader(in);
}

std::vector<int> parse_order(const twlab::Graph& g, const std::string& text) {
  std::vector<int> order;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) order.push_back(g.index_of(item));
  return order;
}

json decomposition_report(const twlab::Graph& g, const twlab::TreeDecomposition& td) {
  auto rep = twlab::verify_decomposition(g, td);
  return {{"valid", rep.valid}, {"violations", rep.violations}};
}

// Lifts `inst` onto `host` through a supplied model, or one found by search.
twlab::LiftedInstance lift_onto(const twlab::POInstance& inst, const twlab::Host& host) {
  twlab::Graph target = twlab::intersection_graph(inst);
  twlab::MinorModel model;
  if (!cfg.model.empty()) {
    model = twlab::io::minor_model_from(twlab::io::read_file(cfg.model), host.graph, target);
  } else if (host.graph.vertex_count() <= 12) {
    auto m = twlab::find_minor_model(host.graph, target);
    if (!m) throw twlab::PreconditionFailed("intersection graph is not a minor of the host");
    model = *m;
  } else {
    twlab::EmbeddingOptions eo;
    eo.seed = cfg.seed;
    auto m = twlab::embed_topological(host.graph, target, {}, eo);
    if (!m) throw twlab::CapExceeded("no embedding found for a host above the search cap; supply a model with --model");
    model = *m;
  }
  auto ops = twlab::minor_model_to_ops(host.graph, target, model);
  std::map<std::string, std::string> to_host;
  for (const auto& [h, t] : ops.isomorphism) to_host[t] = h;
  return twlab::lift_instance(twlab::rename_variables(inst, to_host), host.graph, ops.ops);
}

twlab::EFBuild build_ef_for(const twlab::POInstance& inst, bool approximate, const std::string& td_path) {
  twlab::Graph g = twlab::intersection_graph(inst);
  twlab::TreeDecomposition td = td_path.empty() ? twlab::default_decomposition(g, cfg.cap_tw).decomposition
                                                : twlab::io::decomposition_from(twlab::io::read_file(td_path), g);
  return approximate ? twlab::build_eps_ef(inst, eps_value(), td) : twlab::build_exact_binary_ef(inst, td);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twlab: treewidth, extended formulations and polytope experiments"};
  app.require_subcommand(1);
  std::function<void()> action;

  // tw
  std::string graph_path;
  bool exact = false;
  std::string heuristic = "minfill";
  auto* tw = app.add_subcommand("tw", "treewidth and a tree decomposition");
  tw->add_option("graph", graph_path, "DIMACS graph")->required();
  tw->add_flag("--exact", exact, "exact treewidth (within --cap-tw)");
  tw->add_option("--heuristic", heuristic)->check(CLI::IsMember({"minfill", "mindegree"}));
  add_common(tw);
  tw->callback([&] {
    action = [&] {
      auto g = read_graph(graph_path);
      auto r = exact ? twlab::treewidth_exact(g, twlab::ExactTreewidthOptions{cfg.cap_tw})
                     : twlab::treewidth_upper(g, heuristic == "minfill" ? twlab::Heuristic::MinFill : twlab::Heuristic::MinDegree);
      json order = json::array();
      for (int v : r.order) order.push_back(g.label(v));
      emit(json{{"width", r.width}, {"exact", exact}, {"order", order}, {"decomposition", twlab::io::to_json(r.decomposition, g)}});
    };
  });

  // decompose
  std::string order_text, verify_path;
  auto* dec = app.add_subcommand("decompose", "chordal completion along an order, or check a decomposition");
  dec->add_option("graph", graph_path, "DIMACS graph")->required();
  dec->add_option("--order", order_text, "comma-separated vertex labels");
  dec->add_option("--verify", verify_path, "tree decomposition JSON to check");
  add_common(dec);
  dec->callback([&] {
    action = [&] {
      auto g = read_graph(graph_path);
      if (!verify_path.empty()) {
        auto td = twlab::io::decomposition_from(twlab::io::read_file(verify_path), g);
        json rep = decomposition_report(g, td);
        rep["width"] = td.width();
        emit(rep);
        return;
      }
      std::vector<int> order;
      if (order_text.empty())
        for (int v = 0; v < g.vertex_count(); ++v) order.push_back(v);
      else
        order = parse_order(g, order_text);
      auto r = twlab::eliminate(g, order);
      json fill = json::array();
      for (auto [u, v] : r.filled.edges())
        if (!g.has_edge(u, v)) fill.push_back({g.label(u), g.label(v)});
      emit(json{{"fill_edges", fill},
                {"clique_number", r.clique_number},
                {"chordal", twlab::is_chordal(r.filled).chordal},
                {"decomposition", twlab::io::to_json(r.decomposition, g)}});
    };
  });

  // hull / slack / xc-bracket
  std::string points_path, hull_path;
  std::optional<int> ef_size;
  auto* hull = app.add_subcommand("hull", "facets of conv(S)");
  hull->add_option("--points", points_path, "point set JSON")->required();
  add_common(hull);
  hull->callback([&] {
    action = [&] {
      auto s = twlab::io::point_set_from(twlab::io::read_file(points_path));
      emit(twlab::io::to_json(twlab::convex_hull_facets(s, {cfg.cap_hull})));
    };
  });
  auto* slack = app.add_subcommand("slack", "slack matrix of conv(S)");
  slack->add_option("--points", points_path, "point set JSON")->required();
  slack->add_option("--hull", hull_path, "facet description JSON (computed when absent)");
  add_common(slack);
  slack->callback([&] {
    action = [&] {
      auto s = twlab::io::point_set_from(twlab::io::read_file(points_path));
      auto h = hull_path.empty() ? twlab::convex_hull_facets(s, {cfg.cap_hull})
                                 : twlab::io::polytope_from(twlab::io::read_file(hull_path));
      emit(twlab::io::to_json(twlab::slack_matrix(h, s)));
    };
  });
  auto* xc = app.add_subcommand("xc-bracket", "facets, slack matrix and extension complexity bracket");
  xc->add_option("--points", points_path, "point set JSON")->required();
  xc->add_option("--ef-size", ef_size, "size of a known extended formulation");
  add_common(xc);
  xc->callback([&] {
    action = [&] {
      auto s = twlab::io::point_set_from(twlab::io::read_file(points_path));
      auto h = twlab::convex_hull_facets(s, {cfg.cap_hull});
      auto m = twlab::slack_matrix(h, s);
      auto b = twlab::xc_bracket(h, m, ef_size);
      auto pyr = twlab::is_pyramid(s);
      auto decomp = twlab::is_decomposable(s);
      emit(json{{"hull", twlab::io::to_json(h)},
                {"slack", twlab::io::to_json(m)},
                {"bracket", twlab::io::to_json(b)},
                {"pyramid", pyr ? twlab::io::to_json(*pyr) : json(nullptr)},
                {"decomposable", decomp ? twlab::io::to_json(*decomp) : json(nullptr)}});
    };
  });

  // compose
  auto* compose = app.add_subcommand("compose", "point set and graph constructions");
  compose->require_subcommand(1);
  int power_k = 1, family_n = 0, family_omega = 0;
  auto* c_plus = compose->add_subcommand("plus", "S+");
  c_plus->add_option("--points", points_path)->required();
  add_common(c_plus);
  c_plus->callback([&] {
    action = [&] { emit(twlab::io::to_json(twlab::plus_operator(twlab::io::point_set_from(twlab::io::read_file(points_path))))); };
  });
  auto* c_power = compose->add_subcommand("power", "k-fold product of S+");
  c_power->add_option("--points", points_path)->required();
  c_power->add_option("--k", power_k)->required();
  add_common(c_power);
  c_power->callback([&] {
    action = [&] {
      emit(twlab::io::to_json(twlab::cartesian_power(twlab::io::point_set_from(twlab::io::read_file(points_path)), power_k)));
    };
  });
  auto* c_stab = compose->add_subcommand("stab", "vertices of STAB(G)");
  c_stab->add_option("--graph", graph_path)->required();
  add_common(c_stab);
  c_stab->callback([&] {
    action = [&] { emit(twlab::io::to_json(twlab::stab_vertices(read_graph(graph_path), {cfg.cap_enum}))); };
  });
  auto* c_gplus = compose->add_subcommand("gplus", "G plus a universal vertex (DIMACS out)");
  c_gplus->add_option("--graph", graph_path)->required();
  add_common(c_gplus);
  c_gplus->callback([&] {
    action = [&] {
      std::ostringstream out;
      twlab::write_dimacs_graph(out, twlab::graph_plus(read_graph(graph_path)));
      emit(out.str());
    };
  });
  auto* c_family = compose->add_subcommand("hard-family", "(S^{xk})+ with its low-width formulation");
  c_family->add_option("--points", points_path, "seed point set on omega coordinates")->required();
  c_family->add_option("--n", family_n)->required();
  c_family->add_option("--omega", family_omega)->required();
  add_common(c_family);
  c_family->callback([&] {
    action = [&] {
      auto seed = twlab::io::point_set_from(twlab::io::read_file(points_path));
      auto r = twlab::build_hard_family(seed, family_n, family_omega, {cfg.cap_tw});
      json out = twlab::io::to_json(r);
      auto d = twlab::is_decomposable(r.points);
      out["decomposable"] = d ? twlab::io::to_json(*d) : json(nullptr);
      emit(out);
    };
  });

  // ef
  std::string instance_path, td_path;
  auto* ef = app.add_subcommand("ef", "tree-decomposition extended formulations");
  ef->require_subcommand(1);
  auto ef_action = [&](bool approximate) {
    return [&, approximate] {
      action = [&, approximate] {
        auto inst = twlab::io::instance_from(twlab::io::read_file(instance_path));
        auto b = build_ef_for(inst, approximate, td_path);
        if (cfg.format == "lp") {
          std::ostringstream out;
          twlab::write_lp_text(out, b.lp);
          emit(out.str());
          return;
        }
        emit(json{{"stats", twlab::io::to_json(b.stats)}, {"table", twlab::io::to_json(b.table)}});
      };
    };
  };
  for (auto [name, approx] : {std::pair{"build-binary", false}, std::pair{"build-eps", true}}) {
    auto* sub = ef->add_subcommand(name, approx ? "grid formulation with tolerance eps" : "exact formulation, binary variables");
    sub->add_option("--instance", instance_path)->required();
    sub->add_option("--td", td_path, "tree decomposition JSON (computed when absent)");
    add_common(sub);
    sub->callback(ef_action(approx));
  }

  // lp
  bool use_eps = false;
  auto* lp = app.add_subcommand("lp", "solve or emit the formulation LP");
  lp->require_subcommand(1);
  auto* lp_solve = lp->add_subcommand("solve", "build, solve exactly and extract a point");
  auto* lp_emit = lp->add_subcommand("emit", "write the LP in CPLEX LP format");
  for (auto* sub : {lp_solve, lp_emit}) {
    sub->add_option("--instance", instance_path)->required();
    sub->add_option("--td", td_path);
    sub->add_flag("--approx", use_eps, "use the eps formulation even for binary instances");
    add_common(sub);
  }
  auto approx_for = [&](const twlab::POInstance& inst) { return use_eps || !inst.all_binary(); };
  lp_solve->callback([&] {
    action = [&] {
      auto inst = twlab::io::instance_from(twlab::io::read_file(instance_path));
      bool approx = approx_for(inst);
      auto b = build_ef_for(inst, approx, td_path);
      auto sol = twlab::solve_lp(b.lp);
      json out = {{"approximate", approx}, {"stats", twlab::io::to_json(b.stats)}, {"lp", twlab::io::to_json(sol, b.lp)}};
      if (sol.status == twlab::LPStatus::Optimal) {
        auto x = twlab::extract_assignment(sol, b.table);
        out["assignment"] = twlab::io::to_json(x);
        out["objective"] = twlab::io::rational(inst.objective_value(x));
        out["eps_feasible"] = twlab::eps_feasible(inst, x, approx ? eps_value() : twlab::Rational(0)).feasible;
      }
      emit(out);
    };
  });
  lp_emit->callback([&] {
    action = [&] {
      auto inst = twlab::io::instance_from(twlab::io::read_file(instance_path));
      auto b = build_ef_for(inst, approx_for(inst), td_path);
      std::ostringstream out;
      twlab::write_lp_text(out, b.lp);
      emit(out.str());
    };
  });

  // reduce
  std::string wcnf_path, cnf_path;
  bool v1 = false;
  auto* reduce = app.add_subcommand("reduce", "encode formulas as polynomial instances");
  reduce->require_subcommand(1);
  auto* r_max = reduce->add_subcommand("max2sat", "MAX-2SAT to a quadratic instance");
  r_max->add_option("--wcnf", wcnf_path)->required();
  r_max->add_flag("--single-indicator", v1, "one indicator per clause (degree-2 clause rows)");
  add_common(r_max);
  r_max->callback([&] {
    action = [&] {
      auto f = read_stream(wcnf_path, [](std::istream& in) { return twlab::read_wcnf(in); });
      auto inst = v1 ? twlab::encode_max2sat_v1(f) : twlab::encode_max2sat(f);
      emit(json{{"instance", twlab::io::to_json(inst)}, {"intersection_graph", twlab::io::to_json(twlab::intersection_graph(inst))}});
    };
  });
  auto* r_2sat = reduce->add_subcommand("2sat", "2-SAT satisfying set as a binary instance");
  r_2sat->add_option("--cnf", cnf_path)->required();
  add_common(r_2sat);
  r_2sat->callback([&] {
    action = [&] {
      auto f = read_stream(cnf_path, [](std::istream& in) { return twlab::read_cnf(in); });
      auto inst = twlab::encode_2sat_set(f);
      emit(json{{"instance", twlab::io::to_json(inst)}, {"intersection_graph", twlab::io::to_json(twlab::intersection_graph(inst))}});
    };
  });

  // lift
  std::string host_spec;
  auto* lift = app.add_subcommand("lift", "lift an instance so its intersection graph is the host");
  lift->add_option("--instance", instance_path)->required();
  lift->add_option("--host", host_spec, "grid:<g> or DIMACS file")->required();
  add_common(lift);
  lift->callback([&] {
    action = [&] {
      auto inst = twlab::io::instance_from(twlab::io::read_file(instance_path));
      auto lifted = lift_onto(inst, twlab::parse_host(host_spec));
      json out = twlab::io::to_json(lifted);
      out["anchored"] = twlab::two_variable_rows_are_anchored(lifted);
      emit(out);
    };
  });

  // round
  std::string point_path;
  auto* round = app.add_subcommand("round", "round an eps-feasible point to a feasible 0/1 point");
  round->add_option("--instance", instance_path)->required();
  round->add_option("--point", point_path, "assignment JSON")->required();
  add_common(round);
  round->callback([&] {
    action = [&] {
      auto inst = twlab::io::instance_from(twlab::io::read_file(instance_path));
      auto z = twlab::io::assignment_from(twlab::io::read_file(point_path));
      auto eps = eps_value();
      if (eps <= 0 || eps >= twlab::Rational(1, 10)) throw twlab::InvalidInput("round needs eps in (0, 1/10)");
      auto x = twlab::round_solution(inst, z, eps);
      emit(json{{"assignment", twlab::io::to_json(x)},
                {"objective_before", twlab::io::rational(inst.objective_value(z))},
                {"objective_after", twlab::io::rational(inst.objective_value(x))}});
    };
  });

  // pipeline
  auto* pipe = app.add_subcommand("pipeline", "MAX-2SAT through minor lifting and the eps formulation");
  pipe->add_option("--wcnf", wcnf_path)->required();
  pipe->add_option("--host", host_spec, "grid:<g> or DIMACS file")->required();
  add_common(pipe);
  pipe->callback([&] {
    action = [&] {
      auto f = read_stream(wcnf_path, [](std::istream& in) { return twlab::read_wcnf(in); });
      auto host = twlab::parse_host(host_spec);
      twlab::PipelineOptions opt;
      opt.eps = eps_value();
      opt.seed = cfg.seed;
      opt.exact_tw_cap = cfg.cap_tw;
      std::optional<twlab::MinorModel> model;
      if (!cfg.model.empty())
        model = twlab::io::minor_model_from(twlab::io::read_file(cfg.model), host.graph,
                                            twlab::intersection_graph(twlab::encode_max2sat(f)));
      auto r = twlab::run_pipeline(f, host, opt, model);
      json assignment = json::object();
      for (int j = 1; j <= f.variables; ++j) assignment[twlab::x_name(j)] = r.assignment[j] ? 1 : 0;
      emit(json{{"optimum", twlab::io::rational(r.optimum)}, {"assignment", assignment}, {"trace", r.trace}});
    };
  });

  // gnp-experiment
  int gn = 30, gr = 15;
  double gp = 0.5;
  std::uint64_t samples = 2000;
  auto* gnp = app.add_subcommand("gnp-experiment", "Monte Carlo frequency of alpha(G(n,p)) >= r");
  gnp->add_option("--n", gn)->required();
  gnp->add_option("--p", gp)->required()->check(CLI::Range(0.0, 1.0));
  gnp->add_option("--r", gr)->required();
  gnp->add_option("--samples", samples);
  add_common(gnp);
  gnp->callback([&] {
    action = [&] {
      auto e = twlab::gnp_experiment(gn, gp, gr, samples, cfg.seed, cfg.jobs);
      if (cfg.format == "csv") {
        emit(twlab::io::csv_header() + "\n" + twlab::io::csv_row(e) + "\n");
        return;
      }
      emit(json{{"n", e.n}, {"p", e.p}, {"r", e.r}, {"samples", e.samples}, {"hits", e.hits},
                {"empirical", e.empirical()}, {"bound", e.bound()}, {"sigma", e.sigma()}, {"seed", e.seed}});
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    if (action) action();
  } catch (const twlab::Error& e) {
    std::cerr << json{{"error", e.what()}, {"kind", e.kind()}}.dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}, {"kind", "internal"}}.dump() << '\n';
    return 1;
  }
  return 0;
}
