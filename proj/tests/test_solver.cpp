#include "doctest.h"

#include "satbench/generator.hpp"
#include "satbench/random.hpp"
#include "satbench/solver.hpp"

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

}  // namespace

TEST_CASE("cdcl refutes complementary units without deciding") {
  const SolveResult r = solve_cdcl(make(1, {{1}, {-1}}));
  CHECK(r.status == SolveStatus::Unsat);
  CHECK(r.decisions == 0);
  CHECK(r.conflicts >= 1);
  CHECK_FALSE(r.model.has_value());
}

TEST_CASE("cdcl on the empty formula returns the all-false model") {
  const SolveResult r = solve_cdcl(CnfFormula(4, {}));
  CHECK(r.status == SolveStatus::Sat);
  CHECK(r.decisions == 0);
  CHECK(r.conflicts == 0);
  REQUIRE(r.model);
  CHECK(*r.model == Assignment(4, false));
}

TEST_CASE("cdcl handles empty clauses, duplicates and tautologies") {
  CHECK(solve_cdcl(CnfFormula(2, {Clause{}})).status == SolveStatus::Unsat);
  const CnfFormula f = make(2, {{1, 1, -2}, {2, -2}, {-1}});
  const SolveResult r = solve_cdcl(f);
  REQUIRE(r.status == SolveStatus::Sat);
  CHECK(evaluate(f, *r.model));
  CHECK(solve_cdcl(complete_3cnf()).status == SolveStatus::Unsat);
}

TEST_CASE("cdcl agrees with brute force at N=10, alpha=4.3") {
  int mismatches = 0;
  for (std::uint64_t s = 0; s < 500; ++s) {
    const CnfFormula f = random_ksat(3, 10, 4.3, derive_seed(11, s));
    const SolveResult a = solve_cdcl(f), b = brute_force(f);
    mismatches += a.status != b.status;
    if (a.status == SolveStatus::Sat) CHECK(evaluate(f, *a.model));
  }
  CHECK(mismatches == 0);
}

TEST_CASE("cdcl is deterministic") {
  const CnfFormula f = random_ksat(3, 60, 4.26, 99);
  const SolveResult a = solve_cdcl(f), b = solve_cdcl(f);
  CHECK(a.status == b.status);
  CHECK(a.decisions == b.decisions);
  CHECK(a.conflicts == b.conflicts);
  CHECK(a.model == b.model);
}

TEST_CASE("budget exhaustion gives Unknown and invalid budgets are rejected") {
  const CnfFormula f = random_ksat(3, 120, 4.26, 5);
  SolveBudget b;
  b.max_conflicts = 1;
  const SolveResult r = solve_cdcl(f, b);
  if (r.status == SolveStatus::Unknown) {
    CHECK_FALSE(r.model.has_value());
    CHECK(r.conflicts <= 1);
  }
  SolveBudget bad;
  bad.max_decisions = 0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  CHECK_THROWS_AS(solve_cdcl(f, bad), DomainError);
}

TEST_CASE("2-SAT on the four two-literal clauses is UNSAT") {
  CHECK(solve_2sat(make(2, {{1, 2}, {-1, 2}, {1, -2}, {-1, -2}})).status == SolveStatus::Unsat);
}

TEST_CASE("2-SAT reads (x1 v x1) as a unit") {
  const SolveResult r = solve_2sat(make(1, {{1, 1}}));
  REQUIRE(r.status == SolveStatus::Sat);
  CHECK(r.model->value(1));
  CHECK(r.decisions == 0);
  CHECK(r.conflicts == 0);
}

TEST_CASE("2-SAT rejects wide clauses and handles empty clauses") {
  CHECK_THROWS_AS(solve_2sat(make(3, {{1, 2, 3}})), DomainError);
  CHECK(solve_2sat(CnfFormula(2, {Clause{}})).status == SolveStatus::Unsat);
}

TEST_CASE("2-SAT status follows the SCC criterion and matches brute force") {
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const Variable n = 2 + s % 11;
    const CnfFormula f = random_ksat(2, n, 0.5 + 0.002 * static_cast<double>(s), derive_seed(3, s));
    const SolveResult r = solve_2sat(f);
    const ImplicationComponents comps = implication_components(f);
    bool contradictory = false;
    for (Variable v = 1; v <= n; ++v) contradictory = contradictory || comps.contradictory(v);
    CHECK((r.status == SolveStatus::Unsat) == contradictory);
    CHECK(r.status == brute_force(f).status);
    if (r.model) CHECK(evaluate(f, *r.model));
  }
}

TEST_CASE("brute force enumerates from all-false with x1 lowest") {
  const SolveResult r = brute_force(make(3, {{1, 2, 3}}));
  REQUIRE(r.status == SolveStatus::Sat);
  CHECK(r.model->value(1));
  CHECK_FALSE(r.model->value(2));
  CHECK_FALSE(r.model->value(3));
  CHECK(brute_force(complete_3cnf()).status == SolveStatus::Unsat);
}

TEST_CASE("brute force refuses oversized input") {
  CHECK_THROWS_AS(brute_force(CnfFormula(21, {})), DomainError);
  CHECK_NOTHROW(brute_force(CnfFormula(21, {}), 21));
  CHECK_THROWS_AS(brute_force(CnfFormula(41, {}), 41), DomainError);
}
