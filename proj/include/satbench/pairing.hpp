#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "satbench/cnf.hpp"
#include "satbench/generator.hpp"

namespace satbench {

enum class EditKind { FlipPolarity, ReplaceLiteral, DeleteClause };

std::string_view to_string(EditKind kind);
EditKind edit_kind_from_string(std::string_view s);

/// A single satisfiability-changing edit. `position`, `new_variable` and
/// `new_polarity` are meaningful only for the kinds that use them.
struct Edit {
  EditKind kind = EditKind::FlipPolarity;
  std::size_t clause = 0;
  std::size_t position = 0;
  Variable new_variable = 0;
  bool new_polarity = true;

  friend bool operator==(const Edit&, const Edit&) = default;
};

/// Throws DomainError when indices are out of range or a replacement would
/// repeat a variable already in the clause.
CnfFormula apply_edit(const CnfFormula& formula, const Edit& edit);
CnfFormula apply_edits(const CnfFormula& formula, const std::vector<Edit>& edits);

struct InstancePair {
  CnfFormula unsat_formula;
  CnfFormula sat_formula;
  std::vector<Edit> edits;  // 1..3, in application order
  Variable n = 0;
  Rational alpha_unsat;
  Rational alpha_sat;
  unsigned k = 3;
  double source_alpha = 0.0;  // generator density the UNSAT member was drawn at
  std::uint64_t source_seed = 0;
  std::uint64_t twin_seed = 0;
};

/// All three stages ran without producing a satisfiable formula.
class PairingError : public std::runtime_error {
 public:
  PairingError(std::string what, std::vector<EditKind> stages_attempted)
      : std::runtime_error(std::move(what)), stages_(std::move(stages_attempted)) {}
  const std::vector<EditKind>& stages_attempted() const noexcept { return stages_; }

 private:
  std::vector<EditKind> stages_;
};

/// Ordered single-edit search for a SAT twin.
///
/// Stages run in the order flip polarity, replace literal, delete clause. In
/// each stage every candidate location is tried once, in seeded random order,
/// against the current working formula; the first edit that makes it
/// satisfiable ends the search. If a stage finds nothing, its first candidate
/// edit is kept and the next stage works on the edited formula, so a twin
/// carries at most one edit per kind. Replacement draws the new variable
/// uniformly from those not already in the clause and a fair polarity, which
/// preserves clause width.
///
/// Throws DomainError if `unsat` is not UNSAT under `oracle`, PairingError if
/// all stages fail.
InstancePair make_sat_twin(const CnfFormula& unsat, std::uint64_t seed, const SatOracle& oracle);
InstancePair make_sat_twin(const CnfFormula& unsat, std::uint64_t seed);

struct PairSetStats {
  std::uint64_t unsat_attempts = 0;  // draws from the generator
  std::uint64_t unsat_rejected_sat = 0;
  std::uint64_t unsat_rejected_unknown = 0;
  std::uint64_t pairing_failures = 0;  // UNSAT formulas that could not be paired
  std::array<std::uint64_t, 3> edits_by_kind{};  // indexed by EditKind
  std::array<std::uint64_t, 3> trace_lengths{};  // pairs with 1, 2, 3 edits
};

struct PairSet {
  unsigned k = 3;
  Variable n = 0;
  std::uint64_t seed = 0;
  std::vector<double> alpha_choices;
  std::vector<InstancePair> pairs;
  PairSetStats stats;
};

/// Default densities for 2-SAT pair sets: the 2-SAT threshold sits at 1, so
/// the 3-SAT defaults would produce formulas no single edit can repair.
inline const std::vector<double> kLowAlphaChoices2Sat = {1.0, 1.1, 1.2, 1.3, 1.4, 1.5};

struct PairSetOptions {
  std::uint64_t max_attempts_per_accept = 10000;
  std::uint64_t max_pairing_failures = 1000;
};

/// Exactly `count` verified pairs. Formulas the twin search cannot repair are
/// replaced by further draws from the same UNSAT stream and counted in stats.
PairSet build_pair_set(Variable n, std::size_t count, const std::vector<double>& alpha_choices, std::uint64_t seed,
                       unsigned k, const PairSetOptions& options = {});

/// Re-checks the pair contract: UNSAT/SAT labels under `oracle`, equal N,
/// |Δα| ≤ 1/N, 1..3 edits, replayed edits reproduce the twin. Returns an empty
/// string on success or a description of the first violation.
std::string verify_pair(const InstancePair& pair, const SatOracle& oracle);

}  // namespace satbench
