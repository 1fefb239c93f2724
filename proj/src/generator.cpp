#include "satbench/generator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <span>
#include <sstream>
#include <thread>

#include "satbench/random.hpp"

namespace satbench {

std::size_t clause_count_for(double alpha, Variable n) {
  return static_cast<std::size_t>(std::floor(alpha * static_cast<double>(n) + 0.5 + 1e-9));
}

void GeneratorConfig::validate() const {
  if (k != 2 && k != 3) throw DomainError("clause width k must be 2 or 3");
  if (n < k) throw DomainError("need n >= k (n = " + std::to_string(n) + ", k = " + std::to_string(k) + ")");
  if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
  if (clause_count() < 1) throw DomainError("round(alpha * n) must be at least 1");
  if (count < 1) throw DomainError("count must be at least 1");
}

std::size_t GeneratorConfig::clause_count() const { return clause_count_for(alpha, n); }

CnfFormula random_ksat(unsigned k, Variable n, double alpha, std::uint64_t seed) {
  GeneratorConfig config{k, n, alpha, seed, 1};
  config.validate();
  Rng rng(seed);
  const std::size_t clauses = config.clause_count();
  std::vector<Clause> out;
  out.reserve(clauses);
  for (std::size_t i = 0; i < clauses; ++i) {
    Clause c;
    c.reserve(k);
    while (c.size() < k) {
      Variable v = static_cast<Variable>(rng.below(n)) + 1;
      if (std::any_of(c.begin(), c.end(), [v](const Literal& l) { return l.variable == v; })) continue;
      c.push_back(Literal{v, false});
    }
    for (Literal& l : c) l.positive = rng.coin();
    out.push_back(std::move(c));
  }
  return CnfFormula(n, std::move(out));
}

CnfFormula random_ksat(const GeneratorConfig& config) {
  config.validate();
  return random_ksat(config.k, config.n, config.alpha, config.seed);
}

std::vector<GeneratedInstance> generate_batch(const GeneratorConfig& config) {
  config.validate();
  std::vector<GeneratedInstance> out;
  out.reserve(config.count);
  for (std::size_t i = 0; i < config.count; ++i) {
    std::uint64_t s = derive_seed(config.seed, i);
    out.push_back({random_ksat(config.k, config.n, config.alpha, s), s, config.alpha});
  }
  return out;
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (unsigned t = 0; t < threads; ++t) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (failure) std::rethrow_exception(failure);
}

namespace {

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace

PhaseRow summarize_phase_point(double alpha, std::span<const SolveResult> results) {
  PhaseRow row;
  row.alpha = alpha;
  row.count = results.size();
  std::vector<double> decisions, conflicts;
  std::size_t sat = 0, unknown = 0;
  for (const SolveResult& r : results) {
    if (r.status == SolveStatus::Unknown) {
      ++unknown;
      continue;
    }
    if (r.status == SolveStatus::Sat) ++sat;
    decisions.push_back(static_cast<double>(r.decisions));
    conflicts.push_back(static_cast<double>(r.conflicts));
  }
  const std::size_t decided = results.size() - unknown;
  row.sat_fraction = decided ? static_cast<double>(sat) / static_cast<double>(decided) : 0.0;
  row.median_decisions = median(std::move(decisions));
  row.median_conflicts = median(std::move(conflicts));
  row.unknown_fraction = results.empty() ? 0.0 : static_cast<double>(unknown) / static_cast<double>(results.size());
  return row;
}

PhaseReport sweep_phase(unsigned k, Variable n, std::vector<double> alphas, std::size_t count, std::uint64_t seed,
                        const SweepOptions& options) {
  if (count < 1) throw DomainError("count must be at least 1");
  for (double a : alphas)
    if (!(a > 0.0)) throw DomainError("alphas must be positive");
  options.budget.validate();

  // seeds are tied to the caller's alpha order; rows are sorted afterwards
  PhaseReport report{k, n, {}};
  std::vector<SolveResult> results(alphas.size() * count);
  parallel_for(results.size(), options.threads, [&](std::size_t idx) {
    std::size_t ai = idx / count, j = idx % count;
    CnfFormula f = random_ksat(k, n, alphas[ai], derive_seed(derive_seed(seed, ai), j));
    results[idx] = solve_cdcl(f, options.budget);
  });

  for (std::size_t ai = 0; ai < alphas.size(); ++ai)
    report.rows.push_back(summarize_phase_point(alphas[ai], std::span(results).subspan(ai * count, count)));
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const PhaseRow& a, const PhaseRow& b) { return a.alpha < b.alpha; });
  return report;
}

std::string to_csv(const PhaseReport& report) {
  std::ostringstream out;
  out << "alpha,count,sat_fraction,median_decisions,median_conflicts,unknown_fraction\n";
  out << std::setprecision(10);
  for (const PhaseRow& r : report.rows) {
    out << r.alpha << ',' << r.count << ',' << r.sat_fraction << ',' << r.median_decisions << ','
        << r.median_conflicts << ',' << r.unknown_fraction << '\n';
  }
  return out.str();
}

SatOracle default_oracle(unsigned k) {
  if (k == 2) return [](const CnfFormula& f) { return solve_2sat(f).status; };
  return [](const CnfFormula& f) { return solve_cdcl(f).status; };
}

UnsatStream::UnsatStream(Variable n, std::vector<double> alpha_choices, std::uint64_t seed, UnsatOptions options)
    : n_(n), alpha_choices_(std::move(alpha_choices)), seed_(seed), options_(std::move(options)) {
  if (alpha_choices_.empty()) throw DomainError("alpha_choices must not be empty");
  for (double a : alpha_choices_) GeneratorConfig{options_.k, n_, a, 0, 1}.validate();
  if (options_.max_attempts_per_accept == 0) throw DomainError("max_attempts_per_accept must be positive");
  if (!options_.oracle) options_.oracle = default_oracle(options_.k);
}

UnsatSample UnsatStream::next() {
  for (std::uint64_t tries = 0; tries < options_.max_attempts_per_accept; ++tries) {
    const std::uint64_t attempt = attempts_++;
    Rng pick(derive_seed(seed_, attempt));
    double alpha = alpha_choices_[pick.below(alpha_choices_.size())];
    std::uint64_t formula_seed = pick.next();
    CnfFormula f = random_ksat(options_.k, n_, alpha, formula_seed);
    SolveStatus status = options_.oracle(f);
    if (status == SolveStatus::Unsat) return UnsatSample{std::move(f), alpha, formula_seed, attempt};
    if (status == SolveStatus::Sat)
      ++rejected_sat_;
    else
      ++rejected_unknown_;
  }
  std::ostringstream msg;
  msg << "UNSAT acceptance rate below floor: no UNSAT instance in " << options_.max_attempts_per_accept
      << " consecutive attempts (n = " << n_ << ", k = " << options_.k << ", total attempts " << attempts_
      << ", rejected SAT " << rejected_sat_ << ", rejected UNKNOWN " << rejected_unknown_ << ")";
  throw GenerationError(msg.str());
}

UnsatStressSet generate_unsat_low_alpha(Variable n, const std::vector<double>& alpha_choices, std::size_t count,
                                        std::uint64_t seed, const UnsatOptions& options) {
  if (count < 1) throw DomainError("count must be at least 1");
  UnsatStream stream(n, alpha_choices, seed, options);
  UnsatStressSet out;
  out.instances.reserve(count);
  while (out.instances.size() < count) out.instances.push_back(stream.next());
  out.attempts = stream.attempts();
  out.rejected_sat = stream.rejected_sat();
  out.rejected_unknown = stream.rejected_unknown();
  return out;
}

}  // namespace satbench
