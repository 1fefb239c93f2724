#include "satbench/cnf.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace satbench {

DimacsError::DimacsError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

Literal Literal::from_dimacs(int value) {
  if (value == 0) throw DomainError("literal 0 is the clause terminator, not a literal");
  return value > 0 ? Literal{static_cast<Variable>(value), true}
                   : Literal{static_cast<Variable>(-static_cast<long long>(value)), false};
}

CnfFormula::CnfFormula(Variable num_variables, std::vector<Clause> clauses)
    : num_variables_(num_variables), clauses_(std::move(clauses)) {
  for (std::size_t i = 0; i < clauses_.size(); ++i) {
    for (const Literal& l : clauses_[i]) {
      if (l.variable == 0 || l.variable > num_variables_) {
        throw DomainError("clause " + std::to_string(i) + " references variable " +
                          std::to_string(l.variable) + " outside 1.." + std::to_string(num_variables_));
      }
    }
  }
}

std::size_t CnfFormula::max_width() const {
  std::size_t w = 0;
  for (const Clause& c : clauses_) w = std::max(w, c.size());
  return w;
}

Assignment::Assignment(Variable num_variables) : values_(num_variables, -1) {}

Assignment::Assignment(Variable num_variables, bool value) : values_(num_variables, value ? 1 : 0) {}

void Assignment::set(Variable v, bool value) {
  if (v == 0 || v > values_.size()) throw DomainError("assignment variable out of range: " + std::to_string(v));
  values_[v - 1] = value ? 1 : 0;
}

bool Assignment::is_set(Variable v) const { return v >= 1 && v <= values_.size() && values_[v - 1] >= 0; }

bool Assignment::value(Variable v) const {
  if (v == 0 || v > values_.size()) throw DomainError("assignment has no variable " + std::to_string(v));
  if (values_[v - 1] < 0) throw DomainError("assignment leaves variable " + std::to_string(v) + " unset");
  return values_[v - 1] == 1;
}

bool Assignment::complete() const {
  return std::none_of(values_.begin(), values_.end(), [](std::int8_t x) { return x < 0; });
}

namespace {

bool parse_int(std::string_view token, long long& out) {
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

}  // namespace

CnfFormula parse_dimacs(std::istream& in) {
  std::optional<long long> declared_vars;
  long long declared_clauses = 0;
  std::vector<Clause> clauses;
  Clause current;
  std::size_t line_no = 0;
  std::size_t open_clause_line = 0;

  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream tokens(line);
    std::string token;
    if (!(tokens >> token)) continue;
    if (token == "c" || token[0] == 'c') continue;
    if (token == "%") break;  // SATLIB trailer
    if (token == "p") {
      if (declared_vars) throw DimacsError(line_no, "duplicate header");
      std::string format, nv, nc, extra;
      if (!(tokens >> format >> nv >> nc) || format != "cnf")
        throw DimacsError(line_no, "malformed header, expected 'p cnf <vars> <clauses>'");
      long long v = 0, cl = 0;
      if (!parse_int(nv, v) || !parse_int(nc, cl) || v < 0 || cl < 0 || v > 0xffffffffLL)
        throw DimacsError(line_no, "malformed header counts");
      if (tokens >> extra) throw DimacsError(line_no, "trailing tokens after header");
      declared_vars = v;
      declared_clauses = cl;
      continue;
    }
    if (!declared_vars) throw DimacsError(line_no, "clause data before 'p cnf' header");
    do {
      long long value = 0;
      if (!parse_int(token, value)) throw DimacsError(line_no, "not an integer literal: '" + token + "'");
      if (value == 0) {
        if (token != "0") throw DimacsError(line_no, "literal index 0 inside clause body");
        if (static_cast<long long>(clauses.size()) >= declared_clauses)
          throw DimacsError(line_no, "more clauses than the " + std::to_string(declared_clauses) + " declared");
        clauses.push_back(std::move(current));
        current.clear();
        continue;
      }
      long long var = value < 0 ? -value : value;
      if (var > *declared_vars)
        throw DimacsError(line_no, "variable index " + std::to_string(var) + " exceeds declared " +
                                       std::to_string(*declared_vars));
      if (current.empty()) open_clause_line = line_no;
      current.push_back(Literal{static_cast<Variable>(var), value > 0});
    } while (tokens >> token);
  }
  if (!declared_vars) throw DimacsError(line_no, "missing 'p cnf' header");
  if (!current.empty()) throw DimacsError(open_clause_line, "clause not terminated by 0");
  if (static_cast<long long>(clauses.size()) != declared_clauses)
    throw DimacsError(line_no, "clause count mismatch: declared " + std::to_string(declared_clauses) + ", found " +
                                   std::to_string(clauses.size()));
  return CnfFormula(static_cast<Variable>(*declared_vars), std::move(clauses));
}

CnfFormula parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dimacs(in);
}

std::string emit_dimacs(const CnfFormula& formula) {
  std::string out = "p cnf " + std::to_string(formula.num_variables()) + " " +
                    std::to_string(formula.num_clauses()) + "\n";
  for (const Clause& c : formula.clauses()) {
    for (const Literal& l : c) {
      out += std::to_string(l.to_dimacs());
      out += ' ';
    }
    out += "0\n";
  }
  return out;
}

bool evaluate(const CnfFormula& formula, const Assignment& sigma) {
  if (sigma.num_variables() < formula.num_variables() || !sigma.complete())
    throw DomainError("assignment does not cover all " + std::to_string(formula.num_variables()) + " variables");
  return std::all_of(formula.clauses().begin(), formula.clauses().end(), [&](const Clause& c) {
    return std::any_of(c.begin(), c.end(), [&](const Literal& l) { return sigma.satisfies(l); });
  });
}

Rational clause_density(const CnfFormula& formula) {
  if (formula.num_variables() == 0) throw DomainError("clause density undefined for N = 0");
  return Rational(static_cast<std::int64_t>(formula.num_clauses()), formula.num_variables());
}

std::string to_clause_text(const CnfFormula& formula) {
  if (formula.num_clauses() == 0) return "(empty formula: no clauses)";
  std::string out;
  for (std::size_t i = 0; i < formula.num_clauses(); ++i) {
    if (i > 0) out += " ∧ ";
    out += '(';
    const Clause& c = formula.clause(i);
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (j > 0) out += " ∨ ";
      if (!c[j].positive) out += "¬";
      out += "x" + std::to_string(c[j].variable);
    }
    out += ')';
  }
  return out;
}

std::vector<bool> occurring_variables(const CnfFormula& formula) {
  std::vector<bool> seen(formula.num_variables() + 1, false);
  for (const Clause& c : formula.clauses())
    for (const Literal& l : c) seen[l.variable] = true;
  return seen;
}

}  // namespace satbench
