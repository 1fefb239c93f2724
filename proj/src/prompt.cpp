#include "satbench/prompt.hpp"

#include "satbench/json_io.hpp"

namespace satbench {

std::string_view to_string(Representation r) {
  switch (r) {
    case Representation::Cnf: return "cnf";
    case Representation::VertexCover: return "vc";
    case Representation::Packing: return "packing";
  }
  return "cnf";
}

Representation representation_from_string(std::string_view s) {
  if (s == "cnf") return Representation::Cnf;
  if (s == "vc") return Representation::VertexCover;
  if (s == "packing") return Representation::Packing;
  throw DomainError("unknown representation '" + std::string(s) + "' (expected cnf, vc or packing)");
}

EvalInstance make_eval_instance(std::string id, Representation representation, const CnfFormula& source, Label truth,
                                std::optional<std::string> pair_id, double alpha) {
  EvalInstance e;
  e.id = std::move(id);
  e.representation = representation;
  e.truth = truth;
  e.pair_id = std::move(pair_id);
  e.k = static_cast<unsigned>(std::max<std::size_t>(source.max_width(), 1));
  e.n = source.num_variables();
  e.alpha = alpha;
  e.source = source;
  if (representation == Representation::VertexCover) e.reduced = to_vertex_cover(source);
  if (representation == Representation::Packing) e.reduced = to_packing(source);
  return e;
}

void PromptTemplate::validate() const {
  const std::string key = "{instance}";
  std::size_t first = text.find(key);
  if (first == std::string::npos || text.find(key, first + 1) != std::string::npos)
    throw DomainError("prompt template must contain {instance} exactly once");
}

namespace {

const char* const kCnfTemplate =
    "You are a SAT logic solver.\n"
    "Please use a step-by-step method to solve the following {k}-CNF formula.\n"
    "Finally, output only the following three items, with no extra explanation:\n"
    "* Whether the formula is SATISFIABLE or UNSATISFIABLE\n"
    "* Number of branches (i.e., decision points)\n"
    "* Number of conflicts (i.e., backtracking steps)\n"
    "If the formula is SATISFIABLE, please give me the value for each variable.\n"
    "{format}\n"
    "The formula is:\n"
    "{instance}\n";

const char* const kCnfFormat =
    "Return the three items as a single JSON object and nothing else:\n"
    "{\"decision\": \"SATISFIABLE\" or \"UNSATISFIABLE\", \"branches\": <integer>, \"conflicts\": <integer>, "
    "\"witness\": {\"x1\": true, \"x2\": false, ...}}\n"
    "Include \"witness\" only when the decision is SATISFIABLE.";

const char* const kVcTemplate =
    "You are given an undirected graph and a budget k.\n"
    "A vertex cover is a set of vertices such that every edge has at least one endpoint in the set.\n"
    "Decide whether there is a cover of size <= k. If YES, output such a cover.\n"
    "{format}\n"
    "The graph is:\n"
    "{instance}\n";

const char* const kVcFormat =
    "Answer with a single JSON object and nothing else:\n"
    "{\"decision\": \"YES\" or \"NO\", \"witness\": [<vertex label>, ...]}\n"
    "Include \"witness\" only when the decision is YES.";

const char* const kPackingTemplate =
    "You are given a discrete 3D packing problem on an integer grid.\n"
    "Each rod occupies a set of grid cells and offers numbered slots 1..capacity.\n"
    "Select exactly one rod from each group (rods rNa and rNb form group N). Selected rods must not share a cell.\n"
    "Every token must be placed in a free slot of a selected rod listed in its allowed set; no slot holds two tokens.\n"
    "Decide whether all tokens can be placed. If YES, output the rod selection and the placement.\n"
    "{format}\n"
    "The instance is:\n"
    "{instance}\n";

const char* const kPackingFormat =
    "Answer with a single JSON object and nothing else:\n"
    "{\"decision\": \"YES\" or \"NO\", \"witness\": {\"rods\": [<rod label>, ...], "
    "\"placements\": {<token label>: {\"rod\": <rod label>, \"slot\": <integer>}, ...}}}\n"
    "Include \"witness\" only when the decision is YES.";

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
    s.replace(pos, from.size(), to);
}

}  // namespace

PromptTemplate default_template(Representation representation) {
  switch (representation) {
    case Representation::Cnf: return {representation, kCnfTemplate};
    case Representation::VertexCover: return {representation, kVcTemplate};
    case Representation::Packing: return {representation, kPackingTemplate};
  }
  return {representation, kCnfTemplate};
}

std::string render_instance(const EvalInstance& instance) {
  switch (instance.representation) {
    case Representation::Cnf:
      return to_clause_text(instance.source) + "\n\nDIMACS:\n" + emit_dimacs(instance.source);
    case Representation::VertexCover: {
      const auto& g = std::get<VertexCoverInstance>(instance.reduced);
      Json vertices = Json::array();
      for (const VcVertex& v : g.vertices) vertices.push_back(v.label());
      Json edges = Json::array();
      for (const auto& [a, b] : g.edges) edges.push_back({g.vertices[a].label(), g.vertices[b].label()});
      Json j;
      j["vertices"] = std::move(vertices);
      j["edges"] = std::move(edges);
      j["k"] = g.k;
      return j.dump();
    }
    case Representation::Packing: {
      const auto& p = std::get<PackingInstance>(instance.reduced);
      Json rods = Json::array();
      for (const Rod& r : p.rods) {
        Json cells = Json::array();
        for (const Cell& c : r.cells) cells.push_back({c.x, c.y, c.z});
        rods.push_back({{"label", r.label()}, {"capacity", r.capacity}, {"cells", std::move(cells)}});
      }
      Json tokens = Json::array();
      for (const Token& t : p.tokens) {
        Json allowed = Json::array();
        for (std::size_t r : t.allowed_rods) allowed.push_back(p.rods[r].label());
        tokens.push_back({{"label", t.label()}, {"allowed_rods", std::move(allowed)}});
      }
      Json j;
      j["bounding_box"] = p.bounding_box;
      j["rods"] = std::move(rods);
      j["tokens"] = std::move(tokens);
      return j.dump();
    }
  }
  return {};
}

std::string build_prompt(const EvalInstance& instance, const PromptTemplate& tmpl) {
  if (instance.representation != tmpl.representation)
    throw DomainError("template is for '" + std::string(to_string(tmpl.representation)) + "' but instance is '" +
                      std::string(to_string(instance.representation)) + "'");
  tmpl.validate();
  std::string out = tmpl.text;
  const char* format = instance.representation == Representation::Cnf           ? kCnfFormat
                       : instance.representation == Representation::VertexCover ? kVcFormat
                                                                                 : kPackingFormat;
  replace_all(out, "{format}", format);
  replace_all(out, "{k}", std::to_string(instance.k));
  // last, so placeholder-like text inside the instance is left alone
  const std::size_t at = out.find("{instance}");
  out.replace(at, std::string_view("{instance}").size(), render_instance(instance));
  return out;
}

}  // namespace satbench
