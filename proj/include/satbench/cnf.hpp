#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

namespace satbench {

using Variable = std::uint32_t;
using Rational = boost::rational<std::int64_t>;

/// Raised when an operation is applied outside its domain (bad widths,
/// out-of-range indices, incomplete assignments, oversized brute-force input).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// DIMACS syntax or consistency error, tagged with the 1-based input line.
class DimacsError : public std::runtime_error {
 public:
  DimacsError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct Literal {
  Variable variable = 1;
  bool positive = true;

  static Literal from_dimacs(int value);
  int to_dimacs() const { return positive ? static_cast<int>(variable) : -static_cast<int>(variable); }
  Literal negated() const { return {variable, !positive}; }

  friend bool operator==(const Literal&, const Literal&) = default;
};

using Clause = std::vector<Literal>;

/// A conjunction of clauses over variables 1..N. Clause and literal order are
/// kept verbatim and duplicate clauses are allowed.
class CnfFormula {
 public:
  CnfFormula() = default;
  /// Throws DomainError if a literal references variable 0 or a variable > num_variables.
  CnfFormula(Variable num_variables, std::vector<Clause> clauses);

  Variable num_variables() const noexcept { return num_variables_; }
  std::size_t num_clauses() const noexcept { return clauses_.size(); }
  const std::vector<Clause>& clauses() const noexcept { return clauses_; }
  const Clause& clause(std::size_t i) const { return clauses_.at(i); }

  /// Largest clause width, 0 for the empty formula.
  std::size_t max_width() const;

  friend bool operator==(const CnfFormula&, const CnfFormula&) = default;

 private:
  Variable num_variables_ = 0;
  std::vector<Clause> clauses_;
};

/// Total map from variables 1..N to truth values. Unset entries are detected
/// on read so that a partial map is never silently treated as total.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(Variable num_variables);
  /// Every variable set to `value`.
  Assignment(Variable num_variables, bool value);

  Variable num_variables() const noexcept { return static_cast<Variable>(values_.size()); }
  void set(Variable v, bool value);
  bool is_set(Variable v) const;
  /// Throws DomainError when v is out of range or unset.
  bool value(Variable v) const;
  bool satisfies(Literal l) const { return value(l.variable) == l.positive; }
  bool complete() const;

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<std::int8_t> values_;  // -1 unset, 0 false, 1 true; index v-1
};

CnfFormula parse_dimacs(std::istream& in);
CnfFormula parse_dimacs(std::string_view text);
std::string emit_dimacs(const CnfFormula& formula);

/// True iff every clause has a literal satisfied by sigma. Throws DomainError
/// when sigma does not cover every variable of the formula.
bool evaluate(const CnfFormula& formula, const Assignment& sigma);

/// L/N as an exact fraction. Throws DomainError for N = 0.
Rational clause_density(const CnfFormula& formula);

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

/// Satisfiability threshold of random 3-SAT used as the sweep reference point.
inline constexpr double kThreshold3Sat = 4.26;

/// Human-readable clause form, e.g. "(x1 ∨ ¬x2 ∨ x3) ∧ (¬x1 ∨ x4)".
std::string to_clause_text(const CnfFormula& formula);

/// Entry v is true iff variable v occurs in some clause (entry 0 unused).
std::vector<bool> occurring_variables(const CnfFormula& formula);

}  // namespace satbench
