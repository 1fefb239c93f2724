#pragma once

#include "json.hpp"

#include "satbench/cnf.hpp"
#include "satbench/pairing.hpp"
#include "satbench/reductions.hpp"

namespace satbench {

using Json = nlohmann::ordered_json;

/// Formulas travel as DIMACS text blocks.
Json formula_to_json(const CnfFormula& formula);
CnfFormula formula_from_json(const Json& j);

std::string rational_to_string(const Rational& r);

Json edit_to_json(const Edit& edit);
Edit edit_from_json(const Json& j);

/// Per pair: both DIMACS blocks, the edit trace, densities and the labels the
/// solver certified.
Json pair_to_json(const InstancePair& pair, std::string_view id);
InstancePair pair_from_json(const Json& j);

Json pair_set_to_json(const PairSet& set);

Json vertex_cover_to_json(const VertexCoverInstance& instance);
VertexCoverInstance vertex_cover_from_json(const Json& j);

Json packing_to_json(const PackingInstance& instance);
PackingInstance packing_from_json(const Json& j);

}  // namespace satbench
