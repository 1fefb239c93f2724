#include "satbench/solver.hpp"

#include <algorithm>
#include <set>
#include <utility>

namespace satbench {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Sat: return "SAT";
    case SolveStatus::Unsat: return "UNSAT";
    case SolveStatus::Unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

void SolveBudget::validate() const {
  if (max_conflicts && *max_conflicts == 0) throw DomainError("max_conflicts must be positive");
  if (max_decisions && *max_decisions == 0) throw DomainError("max_decisions must be positive");
  if (wall_time && wall_time->count() <= 0) throw DomainError("wall_time must be positive");
}

namespace {

using Lit = std::uint32_t;  // 2*(v-1) + negative
constexpr int kNoReason = -1;

inline Lit encode(Literal l) { return 2 * (l.variable - 1) + (l.positive ? 0u : 1u); }
inline Lit negate(Lit l) { return l ^ 1u; }
inline std::uint32_t var_of(Lit l) { return l >> 1; }
inline bool sign_negative(Lit l) { return (l & 1u) != 0; }

class Cdcl {
 public:
  Cdcl(const CnfFormula& formula, const SolveBudget& budget)
      : budget_(budget),
        num_vars_(formula.num_variables()),
        watches_(2 * std::size_t{formula.num_variables()}),
        assigns_(formula.num_variables(), -1),
        level_(formula.num_variables(), 0),
        reason_(formula.num_variables(), kNoReason),
        activity_(formula.num_variables(), 0.0),
        polarity_(formula.num_variables(), 0),
        seen_(formula.num_variables(), 0) {
    const std::vector<bool> occurs = occurring_variables(formula);
    for (std::uint32_t v = 0; v < num_vars_; ++v)
      if (occurs[v + 1]) order_.insert({-0.0, v});
    load(formula);
  }

  SolveResult run() {
    SolveResult result;
    if (trivially_unsat_) {
      conflicts_ = std::max<std::uint64_t>(conflicts_, 1);
      return finish(SolveStatus::Unsat);
    }
    const auto start = std::chrono::steady_clock::now();
    std::uint64_t restart_limit = 100;
    std::uint64_t conflicts_since_restart = 0;
    std::uint64_t steps = 0;

    for (;;) {
      if (budget_.wall_time && (++steps & 63u) == 0 &&
          std::chrono::steady_clock::now() - start > *budget_.wall_time)
        return finish(SolveStatus::Unknown);

      int confl = propagate();
      if (confl != kNoReason) {
        ++conflicts_;
        ++conflicts_since_restart;
        if (decision_level() == 0) return finish(SolveStatus::Unsat);
        std::vector<Lit> learnt;
        int backjump = analyze(confl, learnt);
        backtrack(backjump);
        add_learnt(std::move(learnt));
        var_inc_ /= kVarDecay;
        if (budget_.max_conflicts && conflicts_ >= *budget_.max_conflicts) return finish(SolveStatus::Unknown);
        continue;
      }

      if (conflicts_since_restart >= restart_limit) {
        backtrack(0);
        conflicts_since_restart = 0;
        restart_limit += restart_limit / 2;
        continue;
      }

      std::optional<std::uint32_t> next = pick_branch_variable();
      if (!next) return finish(SolveStatus::Sat);
      if (budget_.max_decisions && decisions_ >= *budget_.max_decisions) return finish(SolveStatus::Unknown);
      ++decisions_;
      trail_lim_.push_back(trail_.size());
      enqueue(2 * *next + (polarity_[*next] ? 0u : 1u), kNoReason);
    }
  }

 private:
  static constexpr double kVarDecay = 0.95;

  void load(const CnfFormula& formula) {
    for (const Clause& source : formula.clauses()) {
      std::vector<Lit> lits;
      lits.reserve(source.size());
      bool tautology = false;
      for (const Literal& l : source) {
        Lit code = encode(l);
        if (std::find(lits.begin(), lits.end(), negate(code)) != lits.end()) tautology = true;
        if (std::find(lits.begin(), lits.end(), code) == lits.end()) lits.push_back(code);
      }
      if (tautology) continue;
      if (lits.empty()) {
        trivially_unsat_ = true;
        return;
      }
      if (lits.size() == 1) {
        int v = value(lits[0]);
        if (v == 0) {
          // complementary unit at the root: one refutation event
          conflicts_ = 1;
          trivially_unsat_ = true;
          return;
        }
        if (v < 0) enqueue(lits[0], kNoReason);
        continue;
      }
      attach(std::move(lits));
    }
  }

  int attach(std::vector<Lit> lits) {
    int index = static_cast<int>(clauses_.size());
    watches_[lits[0]].push_back(index);
    watches_[lits[1]].push_back(index);
    clauses_.push_back(std::move(lits));
    return index;
  }

  std::size_t decision_level() const { return trail_lim_.size(); }

  // 1 true, 0 false, -1 unassigned
  int value(Lit l) const {
    int a = assigns_[var_of(l)];
    if (a < 0) return -1;
    return sign_negative(l) ? 1 - a : a;
  }

  void enqueue(Lit l, int reason) {
    std::uint32_t v = var_of(l);
    assigns_[v] = sign_negative(l) ? 0 : 1;
    level_[v] = static_cast<int>(decision_level());
    reason_[v] = reason;
    trail_.push_back(l);
  }

  int propagate() {
    while (qhead_ < trail_.size()) {
      Lit false_lit = negate(trail_[qhead_++]);
      std::vector<int>& ws = watches_[false_lit];
      std::size_t i = 0, j = 0;
      while (i < ws.size()) {
        int ci = ws[i++];
        std::vector<Lit>& c = clauses_[ci];
        if (c[0] == false_lit) std::swap(c[0], c[1]);
        if (value(c[0]) == 1) {
          ws[j++] = ci;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (value(c[k]) != 0) {
            std::swap(c[1], c[k]);
            watches_[c[1]].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = ci;
        if (value(c[0]) == 0) {
          while (i < ws.size()) ws[j++] = ws[i++];
          ws.resize(j);
          qhead_ = trail_.size();
          return ci;
        }
        enqueue(c[0], ci);
      }
      ws.resize(j);
    }
    return kNoReason;
  }

  // First-UIP learning. learnt[0] is the asserting literal and learnt[1]
  // (if any) has the highest remaining level. Returns the backjump level.
  int analyze(int confl, std::vector<Lit>& learnt) {
    learnt.assign(1, 0);
    int path_count = 0;
    std::optional<Lit> p;
    std::size_t index = trail_.size();
    do {
      const std::vector<Lit>& c = clauses_[confl];
      for (std::size_t j = p ? 1 : 0; j < c.size(); ++j) {
        Lit q = c[j];
        std::uint32_t v = var_of(q);
        if (seen_[v] || level_[v] == 0) continue;
        seen_[v] = 1;
        bump(v);
        if (level_[v] >= static_cast<int>(decision_level()))
          ++path_count;
        else
          learnt.push_back(q);
      }
      do {
        --index;
      } while (!seen_[var_of(trail_[index])]);
      p = trail_[index];
      confl = reason_[var_of(*p)];
      seen_[var_of(*p)] = 0;
      --path_count;
    } while (path_count > 0);
    learnt[0] = negate(*p);

    for (std::size_t j = 1; j < learnt.size(); ++j) seen_[var_of(learnt[j])] = 0;

    if (learnt.size() == 1) return 0;
    std::size_t max_i = 1;
    for (std::size_t j = 2; j < learnt.size(); ++j)
      if (level_[var_of(learnt[j])] > level_[var_of(learnt[max_i])]) max_i = j;
    std::swap(learnt[1], learnt[max_i]);
    return level_[var_of(learnt[1])];
  }

  void add_learnt(std::vector<Lit> learnt) {
    if (learnt.size() == 1) {
      enqueue(learnt[0], kNoReason);
      return;
    }
    Lit asserting = learnt[0];
    int ci = attach(std::move(learnt));
    enqueue(asserting, ci);
  }

  void backtrack(std::size_t level) {
    if (decision_level() <= level) return;
    for (std::size_t i = trail_.size(); i-- > trail_lim_[level];) {
      std::uint32_t v = var_of(trail_[i]);
      polarity_[v] = assigns_[v] == 1 ? 1 : 0;
      assigns_[v] = -1;
      reason_[v] = kNoReason;
      order_.insert({-activity_[v], v});
    }
    trail_.resize(trail_lim_[level]);
    trail_lim_.resize(level);
    qhead_ = trail_.size();
  }

  void bump(std::uint32_t v) {
    bool queued = order_.erase({-activity_[v], v}) > 0;
    activity_[v] += var_inc_;
    if (queued) order_.insert({-activity_[v], v});
    if (activity_[v] > 1e100) {
      for (double& a : activity_) a *= 1e-100;
      var_inc_ *= 1e-100;
      std::set<std::pair<double, std::uint32_t>> rebuilt;
      for (const auto& entry : order_) rebuilt.insert({-activity_[entry.second], entry.second});
      order_ = std::move(rebuilt);
    }
  }

  std::optional<std::uint32_t> pick_branch_variable() {
    while (!order_.empty()) {
      auto it = order_.begin();
      std::uint32_t v = it->second;
      order_.erase(it);
      if (assigns_[v] < 0) return v;
    }
    return std::nullopt;
  }

  SolveResult finish(SolveStatus status) {
    SolveResult result{status, decisions_, conflicts_, std::nullopt};
    if (status == SolveStatus::Sat) {
      Assignment model(num_vars_);
      for (std::uint32_t v = 0; v < num_vars_; ++v) model.set(v + 1, assigns_[v] == 1);
      result.model = std::move(model);
    }
    return result;
  }

  const SolveBudget& budget_;
  std::uint32_t num_vars_;
  std::vector<std::vector<Lit>> clauses_;
  std::vector<std::vector<int>> watches_;
  std::vector<std::int8_t> assigns_;
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<double> activity_;
  std::vector<std::int8_t> polarity_;
  std::vector<std::int8_t> seen_;
  std::set<std::pair<double, std::uint32_t>> order_;  // (-activity, var): max activity, then lowest index
  std::vector<Lit> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;
  double var_inc_ = 1.0;
  std::uint64_t decisions_ = 0;
  std::uint64_t conflicts_ = 0;
  bool trivially_unsat_ = false;
};

}  // namespace

SolveResult solve_cdcl(const CnfFormula& formula, const SolveBudget& budget) {
  budget.validate();
  Cdcl solver(formula, budget);
  return solver.run();
}

ImplicationComponents implication_components(const CnfFormula& formula) {
  const std::size_t nodes = 2 * std::size_t{formula.num_variables()};
  std::vector<std::vector<std::uint32_t>> succ(nodes);
  for (const Clause& c : formula.clauses()) {
    if (c.size() > 2) throw DomainError("2-SAT requires clauses of width <= 2, found width " + std::to_string(c.size()));
    if (c.empty()) continue;
    Lit a = encode(c[0]);
    Lit b = c.size() == 2 ? encode(c[1]) : a;
    succ[negate(a)].push_back(b);
    succ[negate(b)].push_back(a);
  }

  // iterative Tarjan
  constexpr std::uint32_t kUnvisited = ~std::uint32_t{0};
  std::vector<std::uint32_t> index(nodes, kUnvisited), low(nodes, 0), comp(nodes, kUnvisited);
  std::vector<std::uint32_t> stack;
  std::vector<bool> on_stack(nodes, false);
  std::vector<std::pair<std::uint32_t, std::size_t>> call;
  std::uint32_t counter = 0, components = 0;

  for (std::uint32_t root = 0; root < nodes; ++root) {
    if (index[root] != kUnvisited) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [node, edge] = call.back();
      if (edge < succ[node].size()) {
        std::uint32_t next = succ[node][edge++];
        if (index[next] == kUnvisited) {
          index[next] = low[next] = counter++;
          stack.push_back(next);
          on_stack[next] = true;
          call.push_back({next, 0});
        } else if (on_stack[next]) {
          low[node] = std::min(low[node], index[next]);
        }
        continue;
      }
      std::uint32_t done = node;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = components;
        } while (w != done);
        ++components;
      }
    }
  }
  return ImplicationComponents{std::move(comp)};
}

SolveResult solve_2sat(const CnfFormula& formula) {
  for (const Clause& c : formula.clauses())
    if (c.empty()) return SolveResult{SolveStatus::Unsat, 0, 0, std::nullopt};
  ImplicationComponents scc = implication_components(formula);
  const std::vector<bool> occurs = occurring_variables(formula);
  Assignment model(formula.num_variables());
  for (Variable v = 1; v <= formula.num_variables(); ++v) {
    if (scc.contradictory(v)) return SolveResult{SolveStatus::Unsat, 0, 0, std::nullopt};
    // components are numbered in reverse topological order: the literal whose
    // component finishes first sits later in the implication order
    model.set(v, occurs[v] && scc.of({v, true}) < scc.of({v, false}));
  }
  return SolveResult{SolveStatus::Sat, 0, 0, std::move(model)};
}

SolveResult brute_force(const CnfFormula& formula, Variable max_variables) {
  constexpr Variable kHardCap = 40;
  const Variable n = formula.num_variables();
  if (n > max_variables || n > kHardCap)
    throw DomainError("brute force refuses N = " + std::to_string(n) + " (limit " +
                      std::to_string(std::min(max_variables, kHardCap)) + ")");
  struct Masks {
    std::uint64_t pos = 0, neg = 0;
  };
  std::vector<Masks> masks;
  masks.reserve(formula.num_clauses());
  for (const Clause& c : formula.clauses()) {
    Masks m;
    for (const Literal& l : c) (l.positive ? m.pos : m.neg) |= std::uint64_t{1} << (l.variable - 1);
    masks.push_back(m);
  }
  const std::uint64_t all = n == 0 ? 0 : (~std::uint64_t{0} >> (64 - n));
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    bool ok = std::all_of(masks.begin(), masks.end(),
                          [&](const Masks& m) { return (bits & m.pos) != 0 || (~bits & all & m.neg) != 0; });
    if (ok) {
      Assignment model(n);
      for (Variable v = 1; v <= n; ++v) model.set(v, ((bits >> (v - 1)) & 1u) != 0);
      return SolveResult{SolveStatus::Sat, 0, 0, std::move(model)};
    }
  }
  return SolveResult{SolveStatus::Unsat, 0, 0, std::nullopt};
}

}  // namespace satbench
