#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "modlie/repmod.hpp"

namespace modlie {

/// A saturated formation presented operationally: membership for algebras
/// and centrality for irreducible S-modules. Saturation itself is the
/// caller's obligation; only these two predicates are consumed here.
struct Formation {
  std::string name;
  std::function<bool(const LieAlgebra&)> is_member;
  std::function<bool(const Subalgebra&, const LModule&)> is_central_factor;
};

/// Membership = nilpotency; an irreducible factor is central when S
/// annihilates it.
Formation nilpotent_formation();

/// Lookup for CLI/config use; "nilpotent" is the only built-in.
Formation formation_by_name(const std::string& name);

/// The largest submodule of M reachable by the ascending chain
/// U_{i+1}/U_i = sum of all F-central irreducible submodules of M/U_i.
/// M is an S-module (over the induced structure of S); the chain is
/// computed with composition machinery, so any central-factor predicate
/// works. Series returned ascending, starting at 0, ending stabilized.
std::vector<Subspace> hypercentre_series(const Subalgebra& S, const LModule& M,
                                         const Formation& F, uint64_t seed = 0);
Subspace hypercentre(const Subalgebra& S, const LModule& M, const Formation& F,
                     uint64_t seed = 0);

/// Nilpotent-formation fast path: U_{i+1} = {v : rho(s) v in U_i for every
/// S-basis vector s}. Agrees with the generic hypercentre.
Subspace hypercentre_nilpotent_fast(const Subalgebra& S, const LModule& M);

struct HypercentralReport {
  std::size_t module_dim = 0;
  bool is_hypercentral = false;
  std::vector<Subspace> series;
  /// An irreducible non-central factor of M/U at the stabilized U; absent
  /// exactly when hypercentral.
  std::optional<LModule> obstruction;
};

HypercentralReport is_hypercentral(const Subalgebra& S, const LModule& M, const Formation& F,
                                   uint64_t seed = 0);

}  // namespace modlie
