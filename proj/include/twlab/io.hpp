#pragma once

#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "twlab/composition.hpp"
#include "twlab/ef_builder.hpp"
#include "twlab/error.hpp"
#include "twlab/graph.hpp"
#include "twlab/lp.hpp"
#include "twlab/minor.hpp"
#include "twlab/po_instance.hpp"
#include "twlab/polytope.hpp"
#include "twlab/random_graph.hpp"
#include "twlab/reductions.hpp"
#include "twlab/slack.hpp"
#include "twlab/treewidth.hpp"

// JSON forms of the library types. Rationals are written as strings
// ("3/4") so nothing is lost; integers and exact decimals are accepted on
// input as well.
namespace twlab::io {

using json = nlohmann::json;

inline json rational(const Rational& q) { return to_string(q); }

inline Rational rational_from(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number_float()) return parse_rational(j.dump());
  throw InvalidInput("expected a rational, got " + j.dump());
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidInput(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidInput(std::string("field '") + key + "' has the wrong type");
  }
}

inline json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
}

inline json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

// ---- polynomials and instances ----

inline json to_json(const Polynomial& p) {
  json terms = json::array();
  for (const auto& [m, c] : p.terms()) {
    json mono = json::object();
    for (const auto& [v, e] : m) mono[v] = e;
    terms.push_back({{"coeff", rational(c)}, {"monomial", mono}});
  }
  return terms;
}

inline Polynomial polynomial_from(const json& j) {
  if (!j.is_array()) throw InvalidInput("polynomial must be a list of terms");
  Polynomial p;
  for (const auto& t : j) {
    Monomial m;
    if (t.contains("monomial")) {
      if (!t["monomial"].is_object()) throw InvalidInput("monomial must map variables to exponents");
      for (const auto& [v, e] : t["monomial"].items()) {
        if (!e.is_number_unsigned()) throw InvalidInput("exponent of '" + v + "' must be a nonnegative integer");
        m.emplace_back(v, e.get<unsigned>());
      }
    }
    if (!t.contains("coeff")) throw InvalidInput("term without coefficient");
    p.add_term(make_monomial(std::move(m)), rational_from(t["coeff"]));
  }
  return p;
}

inline json to_json(const POInstance& inst) {
  json vars = json::array();
  for (const auto& v : inst.variables()) vars.push_back({{"name", v.name}, {"domain", to_string(v.domain)}});
  json cons = json::array();
  for (const auto& c : inst.constraints()) cons.push_back({{"relation", to_string(c.relation)}, {"poly", to_json(c.poly)}});
  json obj = json::object();
  for (const auto& [v, c] : inst.objective()) obj[v] = rational(c);
  return {{"variables", vars}, {"constraints", cons}, {"objective", {{"sense", to_string(inst.sense())}, {"coeffs", obj}}}};
}

inline POInstance instance_from(const json& j) {
  POInstance inst;
  for (const auto& v : field<json>(j, "variables")) {
    std::string d = field<std::string>(v, "domain");
    if (d != "binary" && d != "unit") throw InvalidInput("unknown domain '" + d + "'");
    inst.add_variable(field<std::string>(v, "name"), d == "binary" ? Domain::Binary : Domain::Unit);
  }
  for (const auto& c : field<json>(j, "constraints")) {
    std::string r = field<std::string>(c, "relation");
    if (r != "ge0" && r != "eq0") throw InvalidInput("unknown relation '" + r + "'");
    inst.add_constraint(polynomial_from(field<json>(c, "poly")), r == "ge0" ? Relation::Ge0 : Relation::Eq0);
  }
  Sense sense = Sense::Min;
  std::map<std::string, Rational> coeffs;
  if (j.contains("objective")) {
    const json& o = j["objective"];
    std::string s = o.value("sense", std::string("min"));
    if (s != "min" && s != "max") throw InvalidInput("unknown sense '" + s + "'");
    sense = s == "max" ? Sense::Max : Sense::Min;
    if (o.contains("coeffs"))
      for (const auto& [v, c] : o["coeffs"].items()) coeffs[v] = rational_from(c);
  }
  inst.set_objective(sense, std::move(coeffs));
  return inst;
}

inline json to_json(const Assignment& x) {
  json out = json::object();
  for (const auto& [v, q] : x) out[v] = rational(q);
  return out;
}

inline Assignment assignment_from(const json& j) {
  if (!j.is_object()) throw InvalidInput("assignment must be an object");
  Assignment x;
  for (const auto& [v, q] : j.items()) x[v] = rational_from(q);
  return x;
}

inline json to_json(const FeasibilityReport& r) {
  json cons = json::array();
  for (const auto& c : r.constraints)
    cons.push_back({{"index", c.index}, {"value", rational(c.value)}, {"tolerance", rational(c.tolerance)}, {"satisfied", c.satisfied}});
  return {{"feasible", r.feasible}, {"domain_violations", r.domain_violations}, {"constraints", cons}};
}

// ---- graphs, decompositions, minors ----

inline json to_json(const Graph& g) {
  json edges = json::array();
  for (auto [u, v] : g.edges()) edges.push_back({g.label(u), g.label(v)});
  return {{"vertices", g.labels()}, {"edges", edges}};
}

inline json to_json(const TreeDecomposition& td, const Graph& g) {
  json bags = json::array();
  for (const auto& b : td.bags) {
    json bag = json::array();
    for (int v : b) bag.push_back(g.label(v));
    bags.push_back(bag);
  }
  json edges = json::array();
  for (auto [a, b] : td.tree_edges) edges.push_back({a, b});
  return {{"width", td.width()}, {"bags", bags}, {"tree_edges", edges}};
}

inline TreeDecomposition decomposition_from(const json& j, const Graph& g) {
  TreeDecomposition td;
  for (const auto& bag : field<json>(j, "bags")) {
    std::vector<int> b;
    for (const auto& v : bag) b.push_back(g.index_of(v.is_string() ? v.get<std::string>() : v.dump()));
    std::sort(b.begin(), b.end());
    td.bags.push_back(std::move(b));
  }
  for (const auto& e : field<json>(j, "tree_edges")) {
    if (!e.is_array() || e.size() != 2) throw InvalidInput("tree edge must be a pair of bag indices");
    td.tree_edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return td;
}

inline json to_json(const MinorModel& m) {
  json sets = json::object();
  for (const auto& [t, b] : m.branch_sets) sets[t] = b;
  json wit = json::array();
  for (const auto& w : m.witnesses) wit.push_back({{"target", {w.target_u, w.target_v}}, {"host", {w.host_u, w.host_v}}});
  return {{"branch_sets", sets}, {"witnesses", wit}};
}

// Branch sets follow the target's vertex order. Missing witnesses are filled
// in from host edges between the branch sets.
inline MinorModel minor_model_from(const json& j, const Graph& host, const Graph& target) {
  MinorModel m;
  json sets = field<json>(j, "branch_sets");
  if (!sets.is_object()) throw InvalidInput("branch_sets must map target vertices to host vertex lists");
  for (const auto& t : target.labels()) {
    if (!sets.contains(t)) throw InvalidInput("model has no branch set for '" + t + "'");
    std::vector<std::string> b;
    for (const auto& h : sets[t]) b.push_back(h.is_string() ? h.get<std::string>() : h.dump());
    m.branch_sets.emplace_back(t, std::move(b));
  }
  if (sets.size() != m.branch_sets.size()) throw InvalidInput("model names vertices that are not in the target");
  if (j.contains("witnesses")) {
    for (const auto& w : j["witnesses"]) {
      auto t = field<std::vector<std::string>>(w, "target");
      auto h = field<std::vector<std::string>>(w, "host");
      if (t.size() != 2 || h.size() != 2) throw InvalidInput("witness needs two target and two host vertices");
      m.witnesses.push_back({t[0], t[1], h[0], h[1]});
    }
  } else {
    std::map<std::string, std::string> owner;
    for (const auto& [t, b] : m.branch_sets)
      for (const auto& h : b) owner[h] = t;
    for (auto [a, b] : target.edges()) {
      const std::string& ta = target.label(a);
      const std::string& tb = target.label(b);
      for (const auto& hu : m.branch_set(ta)) {
        auto iu = host.find(hu);
        if (!iu) break;
        bool found = false;
        for (int y : host.neighbors(*iu))
          if (owner.count(host.label(y)) && owner[host.label(y)] == tb) {
            m.witnesses.push_back({ta, tb, hu, host.label(y)});
            found = true;
            break;
          }
        if (found) break;
      }
    }
  }
  validate_minor_model(host, target, m);
  return m;
}

inline json to_json(const std::vector<MinorOperation>& ops) {
  json out = json::array();
  for (const auto& op : ops) {
    switch (op.kind) {
      case MinorOperation::Kind::VertexDeletion:
        out.push_back({{"op", "delete-vertex"}, {"u", op.u}});
        break;
      case MinorOperation::Kind::EdgeDeletion:
        out.push_back({{"op", "delete-edge"}, {"u", op.u}, {"v", op.v}});
        break;
      case MinorOperation::Kind::EdgeContraction:
        out.push_back({{"op", "contract"}, {"u", op.u}, {"v", op.v}, {"w", op.w}});
        break;
    }
  }
  return out;
}

inline std::vector<MinorOperation> operations_from(const json& j) {
  if (!j.is_array()) throw InvalidInput("operations must be a list");
  std::vector<MinorOperation> ops;
  for (const auto& o : j) {
    std::string kind = field<std::string>(o, "op");
    if (kind == "delete-vertex")
      ops.push_back(MinorOperation::delete_vertex(field<std::string>(o, "u")));
    else if (kind == "delete-edge")
      ops.push_back(MinorOperation::delete_edge(field<std::string>(o, "u"), field<std::string>(o, "v")));
    else if (kind == "contract")
      ops.push_back(MinorOperation::contract(field<std::string>(o, "u"), field<std::string>(o, "v"),
                                             field<std::string>(o, "w")));
    else
      throw InvalidInput("unknown minor operation '" + kind + "'");
  }
  return ops;
}

inline json to_json(const LiftedInstance& l) {
  json back = json::object();
  for (const auto& [a, b] : l.back_map) back[a] = b;
  return {{"instance", to_json(l.instance)},
          {"host_to_minor", to_json(l.ops)},
          {"lift_order", to_json(l.replay)},
          {"back_map", back},
          {"redundant_rows", l.redundant_rows}};
}

// ---- LP and formulations ----

inline json to_json(const LPSolution& s, const LinearProgram& lp) {
  json vals = json::object();
  for (int j = 0; j < lp.column_count() && j < static_cast<int>(s.values.size()); ++j)
    if (s.values[j] != 0) vals[lp.variables()[j].name] = rational(s.values[j]);
  json out = {{"status", to_string(s.status)}, {"pivots", s.pivots}};
  if (s.status == LPStatus::Optimal) {
    out["objective"] = rational(s.objective);
    out["nonzero_values"] = vals;
  }
  return out;
}

inline json to_json(const EFStats& s) {
  return {{"bags", s.bags},
          {"width", s.width},
          {"extension_columns", s.extension_columns},
          {"columns", s.columns},
          {"rows", s.rows},
          {"enumerated", s.enumerated},
          {"pruned", s.pruned},
          {"compressed", s.compressed}};
}

inline json to_json(const BagTable& t) {
  json bags = json::array();
  for (const auto& b : t.bags) {
    json vars = json::array();
    for (int v : b.variables) vars.push_back(t.variable_names[v]);
    json rows = json::array();
    for (const auto& a : b.assignments) {
      json vals = json::array();
      for (const auto& q : a.values) vals.push_back(rational(q));
      rows.push_back({{"column", a.column}, {"values", vals}});
    }
    bags.push_back({{"variables", vars}, {"assignments", rows}});
  }
  json edges = json::array();
  for (auto [a, b] : t.tree_edges) edges.push_back({a, b});
  return {{"approximate", t.approximate}, {"eps", rational(t.eps)}, {"grid", rational(t.grid)},
          {"bags", bags}, {"tree_edges", edges}};
}

// ---- polytope lab ----

inline json to_json(const Point& p) {
  json out = json::array();
  for (const auto& c : p) {
    if (is_integral(c) && c.get_num().fits_slong_p())
      out.push_back(c.get_num().get_si());
    else
      out.push_back(rational(c));
  }
  return out;
}

inline json to_json(const PointSet& s) {
  json pts = json::array();
  for (const auto& p : s.points) pts.push_back(to_json(p));
  json out = {{"dimension", s.dimension}, {"points", pts}};
  if (!s.provenance.empty()) out["provenance"] = s.provenance;
  return out;
}

inline PointSet point_set_from(const json& j) {
  int dim = field<int>(j, "dimension");
  std::vector<Point> pts;
  for (const auto& p : field<json>(j, "points")) {
    if (!p.is_array()) throw InvalidInput("point must be a list of coordinates");
    Point q;
    for (const auto& c : p) q.push_back(rational_from(c));
    pts.push_back(std::move(q));
  }
  return PointSet(dim, std::move(pts), j.value("provenance", std::string()));
}

inline json to_json(const Inequality& f) {
  return {{"a", to_json(f.a)}, {"b", rational(f.b)}, {"text", to_string(f)}};
}

inline json to_json(const HPolytope& h) {
  json facets = json::array(), eqs = json::array();
  for (const auto& f : h.facets) facets.push_back(to_json(f));
  for (const auto& e : h.equations) eqs.push_back({{"a", to_json(e.a)}, {"b", rational(e.b)}});
  return {{"ambient", h.ambient}, {"dimension", h.dimension}, {"facets", facets}, {"equations", eqs}};
}

inline HPolytope polytope_from(const json& j) {
  HPolytope h;
  h.ambient = field<int>(j, "ambient");
  h.dimension = field<int>(j, "dimension");
  auto ineq = [&](const json& f) {
    Inequality q;
    for (const auto& c : field<json>(f, "a")) q.a.push_back(rational_from(c));
    if (static_cast<int>(q.a.size()) != h.ambient) throw InvalidInput("inequality has wrong length");
    q.b = rational_from(field<json>(f, "b"));
    return q;
  };
  for (const auto& f : field<json>(j, "facets")) h.facets.push_back(ineq(f));
  if (j.contains("equations"))
    for (const auto& f : j["equations"]) h.equations.push_back(ineq(f));
  return h;
}

inline json to_json(const SlackMatrix& m) {
  json rows = json::array();
  for (const auto& r : m.entries) {
    json row = json::array();
    for (const auto& v : r) row.push_back(is_integral(v) && v.get_num().fits_slong_p() ? json(v.get_num().get_si()) : rational(v));
    rows.push_back(row);
  }
  return {{"entries", rows}, {"row_labels", m.row_labels}, {"column_labels", m.column_labels}};
}

inline SlackMatrix slack_from(const json& j) {
  SlackMatrix m;
  for (const auto& r : field<json>(j, "entries")) {
    std::vector<Rational> row;
    for (const auto& v : r) row.push_back(rational_from(v));
    if (!m.entries.empty() && row.size() != m.entries[0].size()) throw InvalidInput("ragged slack matrix");
    m.entries.push_back(std::move(row));
  }
  if (j.contains("row_labels")) m.row_labels = j["row_labels"].get<std::vector<std::string>>();
  if (j.contains("column_labels")) m.column_labels = j["column_labels"].get<std::vector<std::string>>();
  return m;
}

inline json to_json(const XcBracket& b) { return {{"lower", b.lower}, {"upper", b.upper}, {"notes", b.notes}}; }

inline json to_json(const PyramidCertificate& c) { return {{"apex", c.apex}, {"base", c.base}}; }

inline json to_json(const DecompositionCertificate& c) {
  return {{"first_coordinates", c.first_coords},
          {"second_coordinates", c.second_coords},
          {"first", to_json(c.first)},
          {"second", to_json(c.second)},
          {"first_dimension", c.first_dimension},
          {"second_dimension", c.second_dimension}};
}

inline json to_json(const HardFamilyResult& r) {
  json out = {{"n", r.n},
              {"k", r.k},
              {"omega", r.omega},
              {"ambient", r.ambient},
              {"points", to_json(r.points)},
              {"formulation", to_json(r.formulation)},
              {"intersection_graph", to_json(r.intersection)},
              {"width", r.width},
              {"width_exact", r.width_exact},
              {"lower_bound", r.lower_bound_note}};
  out["pyramid"] = r.pyramid ? to_json(*r.pyramid) : json(nullptr);
  return out;
}

inline AffineMap affine_map_from(const json& j) {
  AffineMap m;
  for (const auto& row : field<json>(j, "matrix")) {
    std::vector<Rational> r;
    for (const auto& v : row) r.push_back(rational_from(v));
    m.matrix.push_back(std::move(r));
  }
  if (j.contains("offset"))
    for (const auto& v : j["offset"]) m.offset.push_back(rational_from(v));
  else
    m.offset.assign(m.matrix.size(), 0);
  return m;
}

inline std::string csv_header() { return "n,p,r,samples,hits,empirical,bound,seed"; }

inline std::string csv_row(const GnpExperiment& e) {
  std::ostringstream out;
  out << e.n << ',' << e.p << ',' << e.r << ',' << e.samples << ',' << e.hits << ',' << std::setprecision(17)
      << e.empirical() << ',' << e.bound() << ',' << e.seed;
  return out.str();
}

}  // namespace twlab::io
