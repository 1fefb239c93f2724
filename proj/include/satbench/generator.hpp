#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "satbench/cnf.hpp"
#include "satbench/solver.hpp"

namespace satbench {

struct GeneratorConfig {
  unsigned k = 3;
  Variable n = 0;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  std::size_t count = 1;

  /// Throws DomainError unless k ∈ {2,3}, n ≥ k, alpha > 0, L ≥ 1, count ≥ 1.
  void validate() const;
  std::size_t clause_count() const;
};

/// round(alpha * n), halves rounded up. A small tolerance absorbs binary
/// representation error so 4.26 * 75 gives 320, not 319.
std::size_t clause_count_for(double alpha, Variable n);

/// One random k-CNF: L independent clauses, each over k distinct variables
/// drawn uniformly without replacement, with independent fair polarities.
CnfFormula random_ksat(unsigned k, Variable n, double alpha, std::uint64_t seed);

/// Uses config.seed directly; same config gives the same formula.
CnfFormula random_ksat(const GeneratorConfig& config);

struct GeneratedInstance {
  CnfFormula formula;
  std::uint64_t seed = 0;
  double alpha = 0.0;
};

/// config.count formulas; instance i uses derive_seed(config.seed, i).
std::vector<GeneratedInstance> generate_batch(const GeneratorConfig& config);

struct PhaseRow {
  double alpha = 0.0;
  std::size_t count = 0;
  double sat_fraction = 0.0;      // over decided instances
  double median_decisions = 0.0;  // over decided instances
  double median_conflicts = 0.0;
  double unknown_fraction = 0.0;
};

struct PhaseReport {
  unsigned k = 3;
  Variable n = 0;
  std::vector<PhaseRow> rows;  // sorted by alpha
};

/// Aggregates the solves of one density point; medians skip Unknown results.
PhaseRow summarize_phase_point(double alpha, std::span<const SolveResult> results);

struct SweepOptions {
  SolveBudget budget;
  unsigned threads = 0;  // 0 = hardware concurrency
};

/// For each alpha, solves `count` instances with the CDCL solver. Instance j at
/// alpha index i uses seed derive_seed(derive_seed(seed, i), j), so results do
/// not depend on thread count.
PhaseReport sweep_phase(unsigned k, Variable n, std::vector<double> alphas, std::size_t count, std::uint64_t seed,
                        const SweepOptions& options = {});

/// CSV with header alpha,count,sat_fraction,median_decisions,median_conflicts,unknown_fraction.
std::string to_csv(const PhaseReport& report);

inline const std::vector<double> kLowAlphaChoices = {3.5, 3.6, 3.7, 3.8, 3.9, 4.0};

/// Raised when verified-UNSAT sampling cannot reach its target.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Satisfiability oracle used for filtering; solve_cdcl for k=3, solve_2sat for k=2.
using SatOracle = std::function<SolveStatus(const CnfFormula&)>;
SatOracle default_oracle(unsigned k);

struct UnsatSample {
  CnfFormula formula;
  double alpha = 0.0;
  std::uint64_t seed = 0;      // seed the formula was generated from
  std::uint64_t attempt = 0;   // index in the attempt stream
};

struct UnsatStressSet {
  std::vector<UnsatSample> instances;
  std::uint64_t attempts = 0;
  std::uint64_t rejected_sat = 0;
  std::uint64_t rejected_unknown = 0;
};

struct UnsatOptions {
  unsigned k = 3;
  /// Abort once this many consecutive attempts yield nothing.
  std::uint64_t max_attempts_per_accept = 10000;
  SatOracle oracle;  // empty: default_oracle(k)
};

/// Rejection sampling of verified-UNSAT formulas. Attempt t draws alpha
/// uniformly from alpha_choices and a formula from derive_seed(seed, t).
UnsatStressSet generate_unsat_low_alpha(Variable n, const std::vector<double>& alpha_choices, std::size_t count,
                                        std::uint64_t seed, const UnsatOptions& options = {});

/// Lazily continues an UNSAT attempt stream; shared by the pairing pipeline
/// so it can draw replacements for instances it fails to pair.
class UnsatStream {
 public:
  UnsatStream(Variable n, std::vector<double> alpha_choices, std::uint64_t seed, UnsatOptions options);

  UnsatSample next();
  std::uint64_t attempts() const { return attempts_; }
  std::uint64_t rejected_sat() const { return rejected_sat_; }
  std::uint64_t rejected_unknown() const { return rejected_unknown_; }

 private:
  Variable n_;
  std::vector<double> alpha_choices_;
  std::uint64_t seed_;
  UnsatOptions options_;
  std::uint64_t attempts_ = 0;
  std::uint64_t rejected_sat_ = 0;
  std::uint64_t rejected_unknown_ = 0;
};

/// Runs fn(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace satbench
