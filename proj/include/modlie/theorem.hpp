#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "modlie/charcluster.hpp"
#include "modlie/formations.hpp"
#include "modlie/repmod.hpp"

namespace modlie {

/// A full hypothesis bundle: restricted algebra L with centre-killed p-map,
/// subnormal nilpotent S, and modules V, W over L with cl(W) inside the
/// F_p-span of cl(V). Checking never trusts the construction; every
/// hypothesis is re-verified from the data.
struct Instance {
  AlgebraPtr L;
  Subalgebra S;  // S.parent == L
  LModule V;
  LModule W;
  std::string formation = "nilpotent";
  uint64_t seed = 0;
};

struct HypothesisCheck {
  std::string name;  // "centre-kill", "s-nonzero", "s-in-formation",
                     // "s-subnormal", "v-hypercentral", "cluster-inclusion"
  bool pass = false;
  std::string witness;  // empty on pass, else a description of the failure
};

enum class Status { VACUOUS, CONFIRMED, VIOLATION };
std::string to_string(Status s);

struct Verdict {
  std::vector<HypothesisCheck> hypotheses;
  bool conclusion_pass = false;
  std::string conclusion_witness;
  Status status = Status::VACUOUS;
  bool all_hypotheses_pass() const;
};

std::vector<HypothesisCheck> check_hypotheses(const Instance& inst);

/// Hypotheses plus the conclusion (W restricted to S is hypercentral).
/// VACUOUS when a hypothesis fails, CONFIRMED when everything holds,
/// VIOLATION when the hypotheses hold but the conclusion fails.
Verdict check_theorem_instance(const Instance& inst);

/// X = direct sum of V^(x)r for r = 1 .. k(p-1), k = |cl(V)|.
LModule tensor_power_sum(const LModule& V, uint64_t seed = 0);

/// H = joint kernel of the semilinear defects of Hom(V,W): the largest
/// subspace on which the hom action is a restricted module. May be zero;
/// nonzero exactly when cl(V) and cl(W) share a character.
Subspace char_zero_hom_submodule(const LModule& V, const LModule& W);

/// The evaluation map tensor(V, H) -> W, v (x) f -> f(v), as a verified
/// ModuleMap. H is a subspace of hom_module(V, W) and must be invariant.
ModuleMap evaluation_map(const LModule& V, const Subspace& H, const LModule& W);

struct PipelineStep {
  std::size_t index = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct PipelineReport {
  bool ran = false;        // false when a precondition failed
  std::string refusal;     // why the pipeline refused to start
  bool zero_char_discrepancy = false;  // k = 1 nonzero character pattern
  std::vector<PipelineStep> steps;
  bool all_passed() const;
};

/// Replays the proof on the instance: builds X, checks cl(X) against the
/// F_p-span of cl(V) (augmenting X by a trivial summand when the exact
/// tensor-power law omits the zero character), and for each composition
/// factor W' of W checks the character inclusion, the nonzero restricted
/// hom submodule H, the surjectivity of evaluation, and hypercentrality of
/// every intermediate module. Refuses to start unless all hypotheses hold.
PipelineReport proof_pipeline(const Instance& inst);

/// Deterministic seeded instance generator: centre-killed p-closure of
/// random nilpotent-or-diagonal matrices, a subnormal nilpotent S, V from
/// random module constructions, W a sub-quotient of a tensor power of V.
Instance random_instance(uint32_t p, std::size_t max_dim_L, std::size_t max_dim_V,
                         uint64_t seed);

struct CampaignSummary {
  uint32_t p = 0;
  std::size_t count = 0;
  std::size_t confirmed = 0;
  std::size_t vacuous = 0;
  std::size_t violation = 0;
  std::vector<Status> statuses;  // per instance, in seed order
};

/// Runs `count` instances with seeds base_seed, base_seed+1, ...
CampaignSummary run_campaign(uint32_t p, std::size_t max_dim_L, std::size_t max_dim_V,
                             std::size_t count, uint64_t base_seed);

}  // namespace modlie
