#pragma once

#include <json.hpp>

#include "modlie/charcluster.hpp"
#include "modlie/formations.hpp"
#include "modlie/theorem.hpp"

namespace modlie {

/// JSON carriers for every artifact the command-line tool reads or writes.
/// Objects use sorted keys and field elements travel as indices, so equal
/// values always serialize to identical bytes. Parsers validate: algebras
/// are re-verified against the Lie and p-map axioms, modules against the
/// bracket rule; inconsistent input throws std::invalid_argument.

nlohmann::json field_to_json(const FieldCtx* K);
const FieldCtx* field_from_json(const nlohmann::json& j);

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const FieldCtx* K, const nlohmann::json& j);

/// A subspace as a list of basis rows; parsing re-echelonizes, so any
/// spanning set is accepted.
nlohmann::json subspace_to_json(const Subspace& s);
Subspace subspace_from_json(const FieldCtx* K, std::size_t ambient, const nlohmann::json& j);

nlohmann::json algebra_to_json(const RestrictedLieAlgebra& L);
RestrictedLieAlgebra algebra_from_json(const nlohmann::json& j);

nlohmann::json module_to_json(const LModule& M);
LModule module_from_json(AlgebraPtr L, const nlohmann::json& j);

nlohmann::json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);

nlohmann::json verdict_to_json(const Verdict& v);
nlohmann::json pipeline_to_json(const PipelineReport& r);
nlohmann::json character_to_json(const Character& c);
nlohmann::json cluster_to_json(const CharacterCluster& c);
nlohmann::json hypercentral_to_json(const HypercentralReport& r);
nlohmann::json campaign_to_json(const CampaignSummary& c);
nlohmann::json envelope_to_json(const PEnvelope& e);

}  // namespace modlie
