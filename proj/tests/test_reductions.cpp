#include "doctest.h"

#include "satbench/generator.hpp"
#include "satbench/json_io.hpp"
#include "satbench/random.hpp"
#include "satbench/reductions.hpp"

using namespace satbench;

namespace {

CnfFormula make(Variable n, std::initializer_list<std::initializer_list<int>> clauses) {
  std::vector<Clause> cs;
  for (auto c : clauses) {
    Clause clause;
    for (int l : c) clause.push_back(Literal::from_dimacs(l));
    cs.push_back(clause);
  }
  return CnfFormula(n, cs);
}

CnfFormula complete_3cnf() {
  std::vector<Clause> cs;
  for (int mask = 0; mask < 8; ++mask)
    cs.push_back({{1, (mask & 1) != 0}, {2, (mask & 2) != 0}, {3, (mask & 4) != 0}});
  return CnfFormula(3, cs);
}

VertexCoverInstance triangle(std::size_t k) {
  VertexCoverInstance g;
  for (Variable v = 1; v <= 3; ++v) g.vertices.push_back({GadgetKind::Literal, v, true});
  g.edges = {{0, 1}, {1, 2}, {0, 2}};
  g.k = k;
  return g;
}

std::size_t id(const VertexCoverInstance& g, std::string_view label) {
  const std::size_t i = g.find(label);
  REQUIRE(i != VertexCoverInstance::npos);
  return i;
}

}  // namespace

TEST_CASE("vertex cover of a single clause") {
  const VertexCoverInstance g = to_vertex_cover(make(3, {{1, 2, 3}}));
  CHECK(g.vertices.size() == 9);
  CHECK(g.edges.size() == 9);
  CHECK(g.k == 5);
  CHECK(vc_brute_force(g));
  // the true literal of x1 plus the two corners opposite its slot
  const std::vector<std::size_t> cover = {id(g, "x1"), id(g, "~x2"), id(g, "~x3"), id(g, "c1.1"), id(g, "c1.2")};
  CHECK(check_cover(g, cover));
}

TEST_CASE("vertex cover of the complete UNSAT formula has no cover of size 19") {
  const VertexCoverInstance g = to_vertex_cover(complete_3cnf());
  CHECK(g.k == 19);
  CHECK_FALSE(vc_brute_force(g));
}

TEST_CASE("vertex cover of the empty formula") {
  const VertexCoverInstance g = to_vertex_cover(CnfFormula(2, {}));
  CHECK(g.vertices.size() == 4);
  CHECK(g.edges.size() == 2);
  CHECK(g.k == 2);
  CHECK(vc_brute_force(g));
}

TEST_CASE("check_cover budget, coverage and unknown ids") {
  const VertexCoverInstance g = to_vertex_cover(make(3, {{1, 2, 3}}));
  CHECK_FALSE(check_cover(g, {}));
  std::vector<std::size_t> six = {id(g, "x1"), id(g, "~x2"), id(g, "~x3"), id(g, "c1.1"), id(g, "c1.2"), id(g, "x2")};
  CHECK_FALSE(check_cover(g, six));
  CHECK_THROWS_AS(check_cover(g, {99}), DomainError);
}

TEST_CASE("triangle covers") {
  CHECK_FALSE(vc_brute_force(triangle(1)));
  CHECK(vc_brute_force(triangle(2)));
}

TEST_CASE("reduction size formulas and padding") {
  Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    const Variable n = 3 + rng.below(5);
    const CnfFormula f = random_ksat(3, n, 1.0 + rng.unit() * 3, rng.next());
    const VertexCoverInstance g = to_vertex_cover(f);
    const std::size_t m = f.num_clauses();
    CHECK(g.vertices.size() == 2 * n + 3 * m);
    CHECK(g.edges.size() == n + 6 * m);
    CHECK(g.k == n + 2 * m);
    CHECK_NOTHROW(g.validate());
  }
  const CnfFormula padded = pad_to_width3(make(2, {{1, -2}, {2}}));
  CHECK(padded.clause(0) == Clause{{1, true}, {2, false}, {1, true}});
  CHECK(padded.clause(1) == Clause{{2, true}, {2, true}, {2, true}});
  CHECK_THROWS_AS(to_vertex_cover(make(4, {{1, 2, 3, 4}})), DomainError);
  CHECK_THROWS_AS(to_packing(CnfFormula(2, {Clause{}})), DomainError);
}

TEST_CASE("vc brute force refuses oversized graphs") {
  const VertexCoverInstance g = to_vertex_cover(random_ksat(3, 10, 4.0, 0));
  CHECK_THROWS_AS(vc_brute_force(g, 30), DomainError);
}

TEST_CASE("packing of a single clause") {
  const PackingInstance p = to_packing(make(3, {{1, 2, 3}}));
  CHECK(p.rods.size() == 6);
  REQUIRE(p.tokens.size() == 1);
  CHECK(p.tokens[0].allowed_rods.size() == 3);
  CHECK(p.rods[0].capacity == 1);
  CHECK(p.rods[0].label() == "r1a");
  CHECK(p.rods[1].label() == "r1b");
  CHECK(p.tokens[0].label() == "t1");
  CHECK(packing_brute_force(p));
}

TEST_CASE("packing layout shares only the base cell within a variable") {
  const PackingInstance p = to_packing(make(2, {{1, -2, 1}, {2, 1, -1}}));
  const Rod& t = p.rods[PackingInstance::rod_id(1, true)];
  const Rod& f = p.rods[PackingInstance::rod_id(1, false)];
  CHECK(t.cells.size() == 3);
  CHECK(f.cells.size() == 3);
  CHECK(std::count(f.cells.begin(), f.cells.end(), Cell{1, 0, 0}) == 1);
  CHECK(std::count(t.cells.begin(), t.cells.end(), Cell{1, 0, 0}) == 1);
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("packing of the complete UNSAT formula is infeasible, the empty formula feasible") {
  CHECK_FALSE(packing_brute_force(to_packing(complete_3cnf())));
  const PackingInstance e = to_packing(CnfFormula(3, {}));
  CHECK(e.tokens.empty());
  CHECK(packing_brute_force(e));
}

TEST_CASE("check_packing conditions") {
  const PackingInstance p = to_packing(make(3, {{1, 2, 3}}));
  const std::size_t r1 = PackingInstance::rod_id(1, true), r2 = PackingInstance::rod_id(2, true),
                    r3 = PackingInstance::rod_id(3, true);
  PackingWitness w{{r1, r2, r3}, {{0, Placement{r1, 1}}}};
  CHECK(check_packing(p, w));

  PackingWitness off = w;
  off.selected_rods = {PackingInstance::rod_id(1, false), r2, r3};
  CHECK_FALSE(check_packing(p, off));  // token on a rod that was not selected

  PackingWitness both = w;
  both.selected_rods.push_back(PackingInstance::rod_id(1, false));
  CHECK_FALSE(check_packing(p, both));

  PackingWitness slot = w;
  slot.token_placement[0].slot = 2;
  CHECK_FALSE(check_packing(p, slot));

  PackingWitness missing = w;
  missing.token_placement.clear();
  CHECK_FALSE(check_packing(p, missing));

  PackingWitness dangling = w;
  dangling.selected_rods.push_back(77);
  CHECK_THROWS_AS(check_packing(p, dangling), DomainError);
}

TEST_CASE("two tokens may not share a slot") {
  const PackingInstance p = to_packing(make(3, {{1, 2, 3}, {1, -2, 3}}));
  const std::size_t r1 = PackingInstance::rod_id(1, true);
  PackingWitness w{{r1, PackingInstance::rod_id(2, true), PackingInstance::rod_id(3, true)},
                   {{0, Placement{r1, 1}}, {1, Placement{r1, 1}}}};
  CHECK_FALSE(check_packing(p, w));
  w.token_placement[1].slot = 2;
  CHECK(check_packing(p, w));
}

TEST_CASE("labels agree across both reductions and witnesses pass") {
  Rng rng(2024);
  for (int t = 0; t < 200; ++t) {
    const Variable n = 3 + rng.below(3);
    const std::size_t m = 1 + rng.below(8);
    const CnfFormula f = random_ksat(3, n, static_cast<double>(m) / n, rng.next());
    const SolveResult truth = brute_force(f);
    const VertexCoverInstance g = to_vertex_cover(f);
    const PackingInstance p = to_packing(f);
    const bool sat = truth.status == SolveStatus::Sat;
    CHECK(vc_brute_force(g) == sat);
    CHECK(packing_brute_force(p) == sat);
    if (sat) {
      CHECK(check_cover(g, cover_from_assignment(g, f, *truth.model)));
      CHECK(check_packing(p, packing_from_assignment(p, *truth.model)));
    }
  }
}

TEST_CASE("reduced instances survive JSON") {
  const CnfFormula f = random_ksat(3, 5, 1.6, 8);
  const VertexCoverInstance g = to_vertex_cover(f);
  const VertexCoverInstance g2 = vertex_cover_from_json(vertex_cover_to_json(g));
  CHECK(g2.k == g.k);
  CHECK(g2.edges == g.edges);
  REQUIRE(g2.vertices.size() == g.vertices.size());
  for (std::size_t i = 0; i < g.vertices.size(); ++i) CHECK(g2.vertices[i].label() == g.vertices[i].label());

  const PackingInstance p = to_packing(f);
  const PackingInstance p2 = packing_from_json(packing_to_json(p));
  CHECK(p2.bounding_box == p.bounding_box);
  REQUIRE(p2.rods.size() == p.rods.size());
  for (std::size_t i = 0; i < p.rods.size(); ++i) CHECK(p2.rods[i].cells == p.rods[i].cells);
  REQUIRE(p2.tokens.size() == p.tokens.size());
  for (std::size_t i = 0; i < p.tokens.size(); ++i) CHECK(p2.tokens[i].allowed_rods == p.tokens[i].allowed_rods);
}
