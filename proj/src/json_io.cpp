#include "satbench/json_io.hpp"

#include <cstdio>

namespace satbench {

Json formula_to_json(const CnfFormula& formula) { return Json(emit_dimacs(formula)); }

CnfFormula formula_from_json(const Json& j) {
  if (!j.is_string()) throw DomainError("formula must be a DIMACS text block");
  return parse_dimacs(j.get<std::string>());
}

std::string rational_to_string(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Json edit_to_json(const Edit& edit) {
  Json j;
  j["kind"] = to_string(edit.kind);
  j["clause"] = edit.clause;
  if (edit.kind != EditKind::DeleteClause) j["position"] = edit.position;
  if (edit.kind == EditKind::ReplaceLiteral) {
    j["new_variable"] = edit.new_variable;
    j["new_polarity"] = edit.new_polarity;
  }
  return j;
}

Edit edit_from_json(const Json& j) {
  Edit e;
  e.kind = edit_kind_from_string(j.at("kind").get<std::string>());
  e.clause = j.at("clause").get<std::size_t>();
  e.position = j.value("position", std::size_t{0});
  e.new_variable = j.value("new_variable", Variable{0});
  e.new_polarity = j.value("new_polarity", true);
  return e;
}

Json pair_to_json(const InstancePair& pair, std::string_view id) {
  Json j;
  j["id"] = id;
  j["k"] = pair.k;
  j["n"] = pair.n;
  j["alpha_unsat"] = to_double(pair.alpha_unsat);
  j["alpha_sat"] = to_double(pair.alpha_sat);
  j["alpha_unsat_exact"] = rational_to_string(pair.alpha_unsat);
  j["alpha_sat_exact"] = rational_to_string(pair.alpha_sat);
  j["source_alpha"] = pair.source_alpha;
  j["source_seed"] = pair.source_seed;
  j["twin_seed"] = pair.twin_seed;
  Json edits = Json::array();
  for (const Edit& e : pair.edits) edits.push_back(edit_to_json(e));
  j["edits"] = std::move(edits);
  j["certified"] = {{"unsat_member", "UNSAT"}, {"sat_member", "SAT"}};
  j["unsat_dimacs"] = formula_to_json(pair.unsat_formula);
  j["sat_dimacs"] = formula_to_json(pair.sat_formula);
  return j;
}

InstancePair pair_from_json(const Json& j) {
  InstancePair p;
  p.unsat_formula = formula_from_json(j.at("unsat_dimacs"));
  p.sat_formula = formula_from_json(j.at("sat_dimacs"));
  for (const Json& e : j.at("edits")) p.edits.push_back(edit_from_json(e));
  p.n = j.at("n").get<Variable>();
  p.k = j.value("k", 3u);
  p.alpha_unsat = clause_density(p.unsat_formula);
  p.alpha_sat = clause_density(p.sat_formula);
  p.source_alpha = j.value("source_alpha", 0.0);
  p.source_seed = j.value("source_seed", std::uint64_t{0});
  p.twin_seed = j.value("twin_seed", std::uint64_t{0});
  return p;
}

Json pair_set_to_json(const PairSet& set) {
  Json j;
  j["k"] = set.k;
  j["n"] = set.n;
  j["seed"] = set.seed;
  j["alpha_choices"] = set.alpha_choices;
  Json stats;
  stats["unsat_attempts"] = set.stats.unsat_attempts;
  stats["unsat_rejected_sat"] = set.stats.unsat_rejected_sat;
  stats["unsat_rejected_unknown"] = set.stats.unsat_rejected_unknown;
  stats["pairing_failures"] = set.stats.pairing_failures;
  stats["edits_by_kind"] = {{"flip_polarity", set.stats.edits_by_kind[0]},
                            {"replace_literal", set.stats.edits_by_kind[1]},
                            {"delete_clause", set.stats.edits_by_kind[2]}};
  stats["trace_lengths"] = {{"1", set.stats.trace_lengths[0]},
                            {"2", set.stats.trace_lengths[1]},
                            {"3", set.stats.trace_lengths[2]}};
  j["stats"] = std::move(stats);
  Json pairs = Json::array();
  for (std::size_t i = 0; i < set.pairs.size(); ++i) {
    char id[48];
    std::snprintf(id, sizeof id, "k%u-n%u-p%04zu", set.k, set.n, i);
    pairs.push_back(pair_to_json(set.pairs[i], id));
  }
  j["pairs"] = std::move(pairs);
  return j;
}

Json vertex_cover_to_json(const VertexCoverInstance& g) {
  Json vertices = Json::array();
  for (std::size_t i = 0; i < g.vertices.size(); ++i) {
    const VcVertex& v = g.vertices[i];
    Json jv;
    jv["id"] = i;
    jv["label"] = v.label();
    jv["gadget"] = v.kind == GadgetKind::Literal ? "literal" : "clause";
    jv["variable"] = v.variable;
    jv["positive"] = v.positive;
    if (v.kind == GadgetKind::Clause) {
      jv["clause"] = v.clause;
      jv["position"] = v.position;
    }
    vertices.push_back(std::move(jv));
  }
  Json edges = Json::array();
  for (const auto& [a, b] : g.edges) edges.push_back({a, b});
  Json j;
  j["num_variables"] = g.num_variables;
  j["num_clauses"] = g.num_clauses;
  j["k"] = g.k;
  j["vertices"] = std::move(vertices);
  j["edges"] = std::move(edges);
  return j;
}

VertexCoverInstance vertex_cover_from_json(const Json& j) {
  VertexCoverInstance g;
  g.num_variables = j.at("num_variables").get<Variable>();
  g.num_clauses = j.at("num_clauses").get<std::size_t>();
  g.k = j.at("k").get<std::size_t>();
  for (const Json& jv : j.at("vertices")) {
    VcVertex v;
    v.kind = jv.at("gadget").get<std::string>() == "literal" ? GadgetKind::Literal : GadgetKind::Clause;
    v.variable = jv.at("variable").get<Variable>();
    v.positive = jv.at("positive").get<bool>();
    v.clause = jv.value("clause", std::size_t{0});
    v.position = jv.value("position", std::size_t{0});
    g.vertices.push_back(v);
  }
  for (const Json& e : j.at("edges")) g.edges.push_back({e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>()});
  g.validate();
  return g;
}

Json packing_to_json(const PackingInstance& p) {
  Json rods = Json::array();
  for (std::size_t i = 0; i < p.rods.size(); ++i) {
    const Rod& r = p.rods[i];
    Json cells = Json::array();
    for (const Cell& c : r.cells) cells.push_back({c.x, c.y, c.z});
    rods.push_back({{"id", i},
                    {"label", r.label()},
                    {"variable", r.variable},
                    {"value", r.value},
                    {"capacity", r.capacity},
                    {"cells", std::move(cells)}});
  }
  Json tokens = Json::array();
  for (std::size_t i = 0; i < p.tokens.size(); ++i) {
    const Token& t = p.tokens[i];
    tokens.push_back({{"id", i}, {"label", t.label()}, {"clause", t.clause}, {"allowed_rods", t.allowed_rods}});
  }
  Json j;
  j["num_variables"] = p.num_variables;
  j["bounding_box"] = p.bounding_box;
  j["rods"] = std::move(rods);
  j["tokens"] = std::move(tokens);
  return j;
}

PackingInstance packing_from_json(const Json& j) {
  PackingInstance p;
  p.num_variables = j.at("num_variables").get<Variable>();
  p.bounding_box = j.at("bounding_box").get<std::array<std::int64_t, 3>>();
  for (const Json& jr : j.at("rods")) {
    Rod r;
    r.variable = jr.at("variable").get<Variable>();
    r.value = jr.at("value").get<bool>();
    r.capacity = jr.at("capacity").get<std::size_t>();
    for (const Json& c : jr.at("cells")) r.cells.push_back({c.at(0).get<std::int64_t>(), c.at(1).get<std::int64_t>(), c.at(2).get<std::int64_t>()});
    p.rods.push_back(std::move(r));
  }
  for (const Json& jt : j.at("tokens"))
    p.tokens.push_back({jt.at("clause").get<std::size_t>(), jt.at("allowed_rods").get<std::vector<std::size_t>>()});
  p.validate();
  return p;
}

}  // namespace satbench
