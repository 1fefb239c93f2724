#include "satbench/pairing.hpp"

#include <algorithm>
#include <sstream>

#include "satbench/random.hpp"

namespace satbench {

std::string_view to_string(EditKind kind) {
  switch (kind) {
    case EditKind::FlipPolarity: return "flip_polarity";
    case EditKind::ReplaceLiteral: return "replace_literal";
    case EditKind::DeleteClause: return "delete_clause";
  }
  return "flip_polarity";
}

EditKind edit_kind_from_string(std::string_view s) {
  if (s == "flip_polarity") return EditKind::FlipPolarity;
  if (s == "replace_literal") return EditKind::ReplaceLiteral;
  if (s == "delete_clause") return EditKind::DeleteClause;
  throw DomainError("unknown edit kind '" + std::string(s) + "'");
}

CnfFormula apply_edit(const CnfFormula& formula, const Edit& edit) {
  if (edit.clause >= formula.num_clauses())
    throw DomainError("edit clause index " + std::to_string(edit.clause) + " out of range");
  std::vector<Clause> clauses = formula.clauses();
  Clause& target = clauses[edit.clause];
  switch (edit.kind) {
    case EditKind::FlipPolarity:
      if (edit.position >= target.size()) throw DomainError("edit literal position out of range");
      target[edit.position].positive = !target[edit.position].positive;
      break;
    case EditKind::ReplaceLiteral: {
      if (edit.position >= target.size()) throw DomainError("edit literal position out of range");
      for (std::size_t i = 0; i < target.size(); ++i)
        if (i != edit.position && target[i].variable == edit.new_variable)
          throw DomainError("replacement variable already occurs in the clause");
      target[edit.position] = Literal{edit.new_variable, edit.new_polarity};
      break;
    }
    case EditKind::DeleteClause:
      clauses.erase(clauses.begin() + static_cast<std::ptrdiff_t>(edit.clause));
      break;
  }
  return CnfFormula(formula.num_variables(), std::move(clauses));
}

CnfFormula apply_edits(const CnfFormula& formula, const std::vector<Edit>& edits) {
  CnfFormula current = formula;
  for (const Edit& e : edits) current = apply_edit(current, e);
  return current;
}

namespace {

std::vector<Edit> stage_candidates(const CnfFormula& working, EditKind kind, Rng& rng) {
  std::vector<Edit> out;
  if (kind == EditKind::DeleteClause) {
    for (std::size_t c = 0; c < working.num_clauses(); ++c) out.push_back(Edit{kind, c, 0, 0, true});
    rng.shuffle(out);
    return out;
  }
  for (std::size_t c = 0; c < working.num_clauses(); ++c)
    for (std::size_t p = 0; p < working.clause(c).size(); ++p) out.push_back(Edit{kind, c, p, 0, true});
  rng.shuffle(out);
  if (kind == EditKind::ReplaceLiteral) {
    // draw the replacement for each location after the order is fixed
    std::vector<Edit> drawn;
    drawn.reserve(out.size());
    for (Edit e : out) {
      const Clause& clause = working.clause(e.clause);
      std::vector<Variable> pool;
      for (Variable v = 1; v <= working.num_variables(); ++v)
        if (std::none_of(clause.begin(), clause.end(), [v](const Literal& l) { return l.variable == v; }))
          pool.push_back(v);
      if (pool.empty()) continue;
      e.new_variable = pool[rng.below(pool.size())];
      e.new_polarity = rng.coin();
      drawn.push_back(e);
    }
    out = std::move(drawn);
  }
  return out;
}

}  // namespace

InstancePair make_sat_twin(const CnfFormula& unsat, std::uint64_t seed, const SatOracle& oracle) {
  if (oracle(unsat) != SolveStatus::Unsat) throw DomainError("make_sat_twin requires a certified UNSAT formula");
  Rng rng(seed);
  CnfFormula working = unsat;
  std::vector<Edit> trace;
  std::vector<EditKind> attempted;
  for (EditKind kind : {EditKind::FlipPolarity, EditKind::ReplaceLiteral, EditKind::DeleteClause}) {
    std::vector<Edit> candidates = stage_candidates(working, kind, rng);
    if (candidates.empty()) continue;
    attempted.push_back(kind);
    for (const Edit& e : candidates) {
      CnfFormula edited = apply_edit(working, e);
      if (oracle(edited) == SolveStatus::Sat) {
        trace.push_back(e);
        InstancePair pair;
        pair.n = unsat.num_variables();
        pair.alpha_unsat = clause_density(unsat);
        pair.alpha_sat = clause_density(edited);
        pair.unsat_formula = unsat;
        pair.sat_formula = std::move(edited);
        pair.edits = std::move(trace);
        pair.k = static_cast<unsigned>(unsat.max_width());
        pair.twin_seed = seed;
        return pair;
      }
    }
    working = apply_edit(working, candidates.front());
    trace.push_back(candidates.front());
  }
  std::string stages;
  for (EditKind k : attempted) stages += (stages.empty() ? "" : ", ") + std::string(to_string(k));
  throw PairingError("no satisfiable twin within three edits (stages attempted: " +
                         (stages.empty() ? std::string("none") : stages) + ")",
                     attempted);
}

InstancePair make_sat_twin(const CnfFormula& unsat, std::uint64_t seed) {
  return make_sat_twin(unsat, seed, default_oracle(unsat.max_width() <= 2 ? 2 : 3));
}

PairSet build_pair_set(Variable n, std::size_t count, const std::vector<double>& alpha_choices, std::uint64_t seed,
                       unsigned k, const PairSetOptions& options) {
  if (count < 1) throw DomainError("count must be at least 1");
  if (k != 2 && k != 3) throw DomainError("k must be 2 or 3");
  PairSet set;
  set.k = k;
  set.n = n;
  set.seed = seed;
  set.alpha_choices = alpha_choices;
  SatOracle oracle = default_oracle(k);
  UnsatOptions unsat_options;
  unsat_options.k = k;
  unsat_options.max_attempts_per_accept = options.max_attempts_per_accept;
  unsat_options.oracle = oracle;
  UnsatStream stream(n, alpha_choices, seed, unsat_options);
  const std::uint64_t twin_master = derive_seed(seed, 0x7a31'0f5e'11c2'9b07ULL);

  while (set.pairs.size() < count) {
    UnsatSample sample = stream.next();
    try {
      InstancePair pair = make_sat_twin(sample.formula, derive_seed(twin_master, sample.attempt), oracle);
      pair.k = k;
      pair.source_alpha = sample.alpha;
      pair.source_seed = sample.seed;
      for (const Edit& e : pair.edits) ++set.stats.edits_by_kind[static_cast<std::size_t>(e.kind)];
      ++set.stats.trace_lengths[pair.edits.size() - 1];
      set.pairs.push_back(std::move(pair));
    } catch (const PairingError& e) {
      if (++set.stats.pairing_failures > options.max_pairing_failures) {
        std::ostringstream msg;
        msg << "pairing failed for " << set.stats.pairing_failures << " UNSAT formulas (last: " << e.what()
            << "); built " << set.pairs.size() << " of " << count << " pairs after " << stream.attempts()
            << " generator attempts";
        throw GenerationError(msg.str());
      }
    }
  }
  set.stats.unsat_attempts = stream.attempts();
  set.stats.unsat_rejected_sat = stream.rejected_sat();
  set.stats.unsat_rejected_unknown = stream.rejected_unknown();
  return set;
}

std::string verify_pair(const InstancePair& pair, const SatOracle& oracle) {
  if (oracle(pair.unsat_formula) != SolveStatus::Unsat) return "UNSAT member is not certified UNSAT";
  if (oracle(pair.sat_formula) != SolveStatus::Sat) return "SAT member is not certified SAT";
  if (pair.unsat_formula.num_variables() != pair.sat_formula.num_variables() ||
      pair.unsat_formula.num_variables() != pair.n)
    return "members disagree on N";
  if (pair.edits.empty() || pair.edits.size() > 3) return "edit trace length outside 1..3";
  Rational delta = clause_density(pair.unsat_formula) - clause_density(pair.sat_formula);
  if (boost::abs(delta) > Rational(1, pair.n)) return "density difference exceeds 1/N";
  if (apply_edits(pair.unsat_formula, pair.edits) != pair.sat_formula) return "replayed edits do not reproduce the twin";
  return {};
}

}  // namespace satbench
