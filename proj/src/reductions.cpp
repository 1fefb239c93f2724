#include "satbench/reductions.hpp"

#include <algorithm>
#include <bit>
#include <optional>
#include <set>

namespace satbench {

CnfFormula pad_to_width3(const CnfFormula& formula) {
  std::vector<Clause> clauses;
  clauses.reserve(formula.num_clauses());
  for (std::size_t i = 0; i < formula.num_clauses(); ++i) {
    Clause c = formula.clause(i);
    if (c.empty() || c.size() > 3)
      throw DomainError("clause " + std::to_string(i) + " has width " + std::to_string(c.size()) +
                        "; reductions need width 1..3");
    while (c.size() < 3) c.push_back(c.front());
    clauses.push_back(std::move(c));
  }
  return CnfFormula(formula.num_variables(), std::move(clauses));
}

std::string VcVertex::label() const {
  if (kind == GadgetKind::Literal) return (positive ? "x" : "~x") + std::to_string(variable);
  return "c" + std::to_string(clause + 1) + "." + std::to_string(position);
}

void VertexCoverInstance::validate() const {
  for (const auto& [u, v] : edges) {
    if (u >= vertices.size() || v >= vertices.size()) throw DomainError("edge endpoint does not exist");
    if (u == v) throw DomainError("self-loop on vertex " + vertices[u].label());
  }
  if (k > vertices.size()) throw DomainError("cover budget exceeds vertex count");
}

std::size_t VertexCoverInstance::find(std::string_view label) const {
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i].label() == label) return i;
  return npos;
}

VertexCoverInstance to_vertex_cover(const CnfFormula& input) {
  const CnfFormula formula = pad_to_width3(input);
  VertexCoverInstance g;
  const Variable n = formula.num_variables();
  const std::size_t m = formula.num_clauses();
  g.num_variables = n;
  g.num_clauses = m;
  g.vertices.reserve(2 * n + 3 * m);
  for (Variable v = 1; v <= n; ++v) {
    g.vertices.push_back({GadgetKind::Literal, v, true, 0, 0});
    g.vertices.push_back({GadgetKind::Literal, v, false, 0, 0});
    g.edges.push_back({g.vertices.size() - 2, g.vertices.size() - 1});
  }
  auto literal_vertex = [](const Literal& l) { return 2 * std::size_t{l.variable - 1} + (l.positive ? 0 : 1); };
  for (std::size_t j = 0; j < m; ++j) {
    const Clause& c = formula.clause(j);
    const std::size_t base = g.vertices.size();
    for (std::size_t p = 0; p < 3; ++p) g.vertices.push_back({GadgetKind::Clause, c[p].variable, c[p].positive, j, p});
    g.edges.push_back({base, base + 1});
    g.edges.push_back({base + 1, base + 2});
    g.edges.push_back({base, base + 2});
    for (std::size_t p = 0; p < 3; ++p) g.edges.push_back({base + p, literal_vertex(c[p])});
  }
  g.k = n + 2 * m;
  g.validate();
  return g;
}

bool check_cover(const VertexCoverInstance& instance, const std::vector<std::size_t>& cover) {
  std::vector<bool> in(instance.vertices.size(), false);
  std::size_t size = 0;
  for (std::size_t v : cover) {
    if (v >= instance.vertices.size()) throw DomainError("cover names unknown vertex id " + std::to_string(v));
    if (!in[v]) {
      in[v] = true;
      ++size;
    }
  }
  if (size > instance.k) return false;
  return std::all_of(instance.edges.begin(), instance.edges.end(),
                     [&](const auto& e) { return in[e.first] || in[e.second]; });
}

namespace {

class VcSearch {
 public:
  explicit VcSearch(const VertexCoverInstance& g) : edges_(g.edges), adj_(g.vertices.size(), 0) {
    for (const auto& [u, v] : edges_) {
      adj_[u] |= std::uint64_t{1} << v;
      adj_[v] |= std::uint64_t{1} << u;
    }
  }

  bool feasible(std::uint64_t cover, std::size_t budget) const {
    std::optional<std::pair<std::size_t, std::size_t>> open;
    // greedy maximal matching over uncovered edges: each needs its own vertex
    std::uint64_t matched = 0;
    std::size_t matching = 0;
    for (const auto& [u, v] : edges_) {
      if ((cover >> u & 1) || (cover >> v & 1)) continue;
      if (!open) open = std::pair{u, v};
      if (!(matched >> u & 1) && !(matched >> v & 1)) {
        matched |= (std::uint64_t{1} << u) | (std::uint64_t{1} << v);
        ++matching;
      }
    }
    if (!open) return true;
    if (matching > budget) return false;
    const std::size_t u = open->first;
    // either u is in the cover, or every neighbour of u is
    if (feasible(cover | (std::uint64_t{1} << u), budget - 1)) return true;
    const std::uint64_t added = adj_[u] & ~cover;
    const auto need = static_cast<std::size_t>(std::popcount(added));
    return need <= budget && feasible(cover | added, budget - need);
  }

 private:
  const std::vector<std::pair<std::size_t, std::size_t>>& edges_;
  std::vector<std::uint64_t> adj_;
};

}  // namespace

bool vc_brute_force(const VertexCoverInstance& instance, std::size_t max_vertices) {
  const std::size_t limit = std::min<std::size_t>(max_vertices, 64);
  if (instance.vertices.size() > limit)
    throw DomainError("vertex cover brute force refuses " + std::to_string(instance.vertices.size()) +
                      " vertices (limit " + std::to_string(limit) + ")");
  instance.validate();
  return VcSearch(instance).feasible(0, instance.k);
}

std::vector<std::size_t> cover_from_assignment(const VertexCoverInstance& instance, const CnfFormula& formula,
                                               const Assignment& sigma) {
  const CnfFormula padded = pad_to_width3(formula);
  if (instance.num_variables != padded.num_variables() || instance.num_clauses != padded.num_clauses())
    throw DomainError("formula does not match the vertex cover instance");
  std::vector<std::size_t> cover;
  for (Variable v = 1; v <= padded.num_variables(); ++v) cover.push_back(2 * std::size_t{v - 1} + (sigma.value(v) ? 0 : 1));
  const std::size_t base = 2 * std::size_t{padded.num_variables()};
  for (std::size_t j = 0; j < padded.num_clauses(); ++j) {
    const Clause& c = padded.clause(j);
    std::size_t skip = 0;
    for (std::size_t p = 0; p < 3; ++p)
      if (sigma.satisfies(c[p])) {
        skip = p;
        break;
      }
    for (std::size_t p = 0; p < 3; ++p)
      if (p != skip) cover.push_back(base + 3 * j + p);
  }
  return cover;
}

// ---------------------------------------------------------------- packing

std::string Rod::label() const { return "r" + std::to_string(variable) + (value ? "a" : "b"); }

std::string Token::label() const { return "t" + std::to_string(clause + 1); }

void PackingInstance::validate() const {
  if (rods.size() != 2 * std::size_t{num_variables}) throw DomainError("expected two rods per variable");
  std::map<Cell, std::size_t> owner;
  for (std::size_t r = 0; r < rods.size(); ++r) {
    for (const Cell& cell : rods[r].cells) {
      auto [it, inserted] = owner.emplace(cell, r);
      if (!inserted && rods[it->second].variable != rods[r].variable)
        throw DomainError("rods of different variables overlap");
    }
  }
  for (Variable v = 1; v <= num_variables; ++v) {
    const Rod& t = rods[rod_id(v, true)];
    const Rod& f = rods[rod_id(v, false)];
    if (t.variable != v || !t.value || f.variable != v || f.value)
      throw DomainError("rod order does not follow rod_id layout at variable " + std::to_string(v));
    bool shared = std::any_of(t.cells.begin(), t.cells.end(), [&](const Cell& c) {
      return std::find(f.cells.begin(), f.cells.end(), c) != f.cells.end();
    });
    if (!shared) throw DomainError("rods of variable " + std::to_string(v) + " are not mutually exclusive");
  }
  for (const Token& tok : tokens) {
    if (tok.allowed_rods.empty()) throw DomainError("token " + tok.label() + " has no allowed rod");
    for (std::size_t r : tok.allowed_rods)
      if (r >= rods.size()) throw DomainError("token " + tok.label() + " references a missing rod");
  }
}

std::size_t PackingInstance::find_rod(std::string_view label) const {
  for (std::size_t i = 0; i < rods.size(); ++i)
    if (rods[i].label() == label) return i;
  return npos;
}

std::size_t PackingInstance::find_token(std::string_view label) const {
  for (std::size_t i = 0; i < tokens.size(); ++i)
    if (tokens[i].label() == label) return i;
  return npos;
}

PackingInstance to_packing(const CnfFormula& input) {
  const CnfFormula formula = pad_to_width3(input);
  const Variable n = formula.num_variables();
  const auto m = static_cast<std::int64_t>(formula.num_clauses());
  PackingInstance p;
  p.num_variables = n;
  p.bounding_box = {static_cast<std::int64_t>(n) + 1, 2, m + 1};
  for (Variable v = 1; v <= n; ++v) {
    const auto x = static_cast<std::int64_t>(v);
    Rod t{v, true, {}, static_cast<std::size_t>(m)};
    for (std::int64_t z = 0; z <= m; ++z) t.cells.push_back({x, 0, z});
    Rod f{v, false, {{x, 0, 0}}, static_cast<std::size_t>(m)};
    for (std::int64_t z = 1; z <= m; ++z) f.cells.push_back({x, 1, z});
    p.rods.push_back(std::move(t));
    p.rods.push_back(std::move(f));
  }
  for (std::size_t j = 0; j < formula.num_clauses(); ++j) {
    Token tok{j, {}};
    for (const Literal& l : formula.clause(j)) tok.allowed_rods.push_back(PackingInstance::rod_id(l.variable, l.positive));
    std::sort(tok.allowed_rods.begin(), tok.allowed_rods.end());
    tok.allowed_rods.erase(std::unique(tok.allowed_rods.begin(), tok.allowed_rods.end()), tok.allowed_rods.end());
    p.tokens.push_back(std::move(tok));
  }
  p.validate();
  return p;
}

bool check_packing(const PackingInstance& instance, const PackingWitness& witness) {
  for (std::size_t r : witness.selected_rods)
    if (r >= instance.rods.size()) throw DomainError("witness selects unknown rod id " + std::to_string(r));
  for (const auto& [tok, place] : witness.token_placement) {
    if (tok >= instance.tokens.size()) throw DomainError("witness places unknown token id " + std::to_string(tok));
    if (place.rod >= instance.rods.size()) throw DomainError("witness places a token on unknown rod id " + std::to_string(place.rod));
  }

  // (a) exactly one rod per variable
  std::vector<int> per_variable(instance.num_variables + 1, 0);
  std::set<std::size_t> selected;
  for (std::size_t r : witness.selected_rods) {
    if (!selected.insert(r).second) return false;
    ++per_variable[instance.rods[r].variable];
  }
  for (Variable v = 1; v <= instance.num_variables; ++v)
    if (per_variable[v] != 1) return false;

  // (b) selected footprints pairwise disjoint
  std::set<Cell> used;
  for (std::size_t r : selected)
    for (const Cell& c : instance.rods[r].cells)
      if (!used.insert(c).second) return false;

  // (c) every token placed on a selected, allowed rod; (d) slot bounds and exclusivity
  std::set<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t t = 0; t < instance.tokens.size(); ++t) {
    auto it = witness.token_placement.find(t);
    if (it == witness.token_placement.end()) return false;
    const Placement& place = it->second;
    const auto& allowed = instance.tokens[t].allowed_rods;
    if (!selected.count(place.rod)) return false;
    if (std::find(allowed.begin(), allowed.end(), place.rod) == allowed.end()) return false;
    if (place.slot < 1 || place.slot > instance.rods[place.rod].capacity) return false;
    if (!slots.insert({place.rod, place.slot}).second) return false;
  }
  return true;
}

namespace {

bool place_tokens(const PackingInstance& instance, const std::vector<bool>& selected, std::vector<std::size_t>& load,
                  std::size_t token) {
  if (token == instance.tokens.size()) return true;
  for (std::size_t r : instance.tokens[token].allowed_rods) {
    if (!selected[r] || load[r] >= instance.rods[r].capacity) continue;
    ++load[r];
    if (place_tokens(instance, selected, load, token + 1)) return true;
    --load[r];
  }
  return false;
}

}  // namespace

bool packing_brute_force(const PackingInstance& instance) {
  if (instance.num_variables > 20 || instance.tokens.size() > 32)
    throw DomainError("packing brute force refuses " + std::to_string(instance.num_variables) + " variables / " +
                      std::to_string(instance.tokens.size()) + " tokens (limits 20 / 32)");
  instance.validate();
  const std::size_t rods = instance.rods.size();
  std::vector<std::vector<bool>> clash(rods, std::vector<bool>(rods, false));
  for (std::size_t a = 0; a < rods; ++a)
    for (std::size_t b = a + 1; b < rods; ++b)
      for (const Cell& c : instance.rods[a].cells)
        if (std::find(instance.rods[b].cells.begin(), instance.rods[b].cells.end(), c) != instance.rods[b].cells.end()) {
          clash[a][b] = clash[b][a] = true;
          break;
        }

  const std::uint64_t total = std::uint64_t{1} << instance.num_variables;
  std::vector<std::size_t> chosen(instance.num_variables);
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    std::vector<bool> selected(rods, false);
    for (Variable v = 1; v <= instance.num_variables; ++v) {
      chosen[v - 1] = PackingInstance::rod_id(v, (mask >> (v - 1) & 1) != 0);
      selected[chosen[v - 1]] = true;
    }
    bool disjoint = true;
    for (std::size_t a = 0; a < chosen.size() && disjoint; ++a)
      for (std::size_t b = a + 1; b < chosen.size(); ++b)
        if (clash[chosen[a]][chosen[b]]) {
          disjoint = false;
          break;
        }
    if (!disjoint) continue;
    std::vector<std::size_t> load(rods, 0);
    if (place_tokens(instance, selected, load, 0)) return true;
  }
  return false;
}

PackingWitness packing_from_assignment(const PackingInstance& instance, const Assignment& sigma) {
  PackingWitness w;
  std::vector<bool> selected(instance.rods.size(), false);
  for (Variable v = 1; v <= instance.num_variables; ++v) {
    std::size_t r = PackingInstance::rod_id(v, sigma.value(v));
    w.selected_rods.push_back(r);
    selected[r] = true;
  }
  for (std::size_t t = 0; t < instance.tokens.size(); ++t) {
    for (std::size_t r : instance.tokens[t].allowed_rods) {
      if (selected[r]) {
        w.token_placement[t] = Placement{r, t + 1};
        break;
      }
    }
  }
  return w;
}

}  // namespace satbench
