#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "satbench/cnf.hpp"

namespace satbench {

enum class SolveStatus { Sat, Unsat, Unknown };

std::string_view to_string(SolveStatus status);

struct SolveResult {
  SolveStatus status = SolveStatus::Unknown;
  std::uint64_t decisions = 0;  // free branching assignments
  std::uint64_t conflicts = 0;  // derived empty-clause events
  std::optional<Assignment> model;  // present iff status == Sat
};

/// Resource limits for a single solve; exhausting any one yields Unknown.
struct SolveBudget {
  std::optional<std::uint64_t> max_conflicts;
  std::optional<std::uint64_t> max_decisions;
  std::optional<std::chrono::milliseconds> wall_time;

  /// Throws DomainError if a present limit is not positive.
  void validate() const;
};

/// Conflict-driven clause learning: two-watched-literal propagation, first-UIP
/// learning with non-chronological backjumping, activity branching (ties go to
/// the lowest variable index), saved phases starting at false, and geometric
/// restarts. Deterministic for a given formula.
SolveResult solve_cdcl(const CnfFormula& formula, const SolveBudget& budget = {});

/// Strongly connected components of the 2-SAT implication graph. Node 2(v-1)
/// is literal v, node 2(v-1)+1 is literal ¬v. Component ids follow Tarjan
/// completion order, i.e. reverse topological order of the condensation.
struct ImplicationComponents {
  std::vector<std::uint32_t> component;

  std::uint32_t of(Literal l) const { return component[2 * (l.variable - 1) + (l.positive ? 0 : 1)]; }
  /// True iff v and ¬v share a component.
  bool contradictory(Variable v) const { return of({v, true}) == of({v, false}); }
};

/// Throws DomainError if any clause is wider than 2.
ImplicationComponents implication_components(const CnfFormula& formula);

/// Linear-time 2-SAT decision. Width-1 clauses are read as (l ∨ l); an empty
/// clause makes the formula UNSAT. decisions/conflicts are always 0.
SolveResult solve_2sat(const CnfFormula& formula);

inline constexpr Variable kBruteForceDefaultLimit = 20;

/// Exhaustive enumeration. Assignments are visited as a binary counter with
/// x1 as the least significant bit, starting from all-false; the first model
/// found is returned. Throws DomainError above `max_variables` (hard cap 40).
SolveResult brute_force(const CnfFormula& formula, Variable max_variables = kBruteForceDefaultLimit);

}  // namespace satbench
