#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "satbench/metrics.hpp"
#include "satbench/prompt.hpp"

namespace satbench {

enum class Decision { Sat, Unsat, Yes, No, Abstain };

std::string_view to_string(Decision d);
Decision decision_from_string(std::string_view s);  // exact names as printed by to_string
Verdict to_verdict(Decision d);
bool is_affirmative(Decision d);

/// Witnesses are kept in the backend's own vocabulary (variable numbers,
/// vertex and rod labels) and resolved against the instance at validation
/// time, so a reference to something that does not exist is an invalid
/// witness rather than a parse failure.
using AssignmentWitness = std::map<Variable, bool>;

struct CoverWitness {
  std::vector<std::string> vertices;
};

struct TokenPlacementText {
  std::string token;
  std::string rod;
  std::int64_t slot = 0;
};

struct PackingWitnessText {
  std::vector<std::string> rods;
  std::vector<TokenPlacementText> placements;
};

using Witness = std::variant<AssignmentWitness, CoverWitness, PackingWitnessText>;

struct Prediction {
  Decision decision = Decision::Abstain;
  std::optional<std::int64_t> branches;
  std::optional<std::int64_t> conflicts;
  std::optional<Witness> witness;  // only for affirmative decisions
  std::string raw_text;
  std::chrono::milliseconds latency{0};
};

/// Total over arbitrary text. A JSON object carrying "decision" is read
/// first; otherwise the last whole-word decision keyword wins (SATISFIABLE /
/// UNSATISFIABLE for CNF, YES / NO for the reduced forms) and CNF text is
/// scanned for "xN = True/False" pairs. Anything else is Abstain.
Prediction parse_response(std::string_view text, Representation representation);

}  // namespace satbench
