#pragma once

#include <optional>
#include <string>
#include <variant>

#include "satbench/cnf.hpp"
#include "satbench/metrics.hpp"
#include "satbench/reductions.hpp"

namespace satbench {

enum class Representation { Cnf, VertexCover, Packing };

std::string_view to_string(Representation r);  // "cnf", "vc", "packing"
Representation representation_from_string(std::string_view s);

/// One item to put in front of a backend: the source CNF plus, for reduced
/// representations, the reduced instance. Ids are shared across
/// representations so records can be matched instance by instance.
struct EvalInstance {
  std::string id;
  Representation representation = Representation::Cnf;
  Label truth = Label::Sat;
  std::optional<std::string> pair_id;
  unsigned k = 3;
  Variable n = 0;
  double alpha = 0.0;
  CnfFormula source;
  std::variant<std::monostate, VertexCoverInstance, PackingInstance> reduced;
};

/// Builds the reduced instance for `representation` from `source`.
EvalInstance make_eval_instance(std::string id, Representation representation, const CnfFormula& source, Label truth,
                                std::optional<std::string> pair_id = std::nullopt, double alpha = 0.0);

/// Template text with placeholders {instance} (exactly once), {format} and {k}.
struct PromptTemplate {
  Representation representation = Representation::Cnf;
  std::string text;

  /// Throws DomainError unless {instance} occurs exactly once.
  void validate() const;
};

PromptTemplate default_template(Representation representation);

/// Deterministic rendering. Throws DomainError when the instance and template
/// representations differ.
std::string build_prompt(const EvalInstance& instance, const PromptTemplate& tmpl);

/// Instance body alone: clause text plus DIMACS for CNF, compact JSON with
/// vertex/rod labels for the reduced forms.
std::string render_instance(const EvalInstance& instance);

}  // namespace satbench
