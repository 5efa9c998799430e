#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "modlie/liealg.hpp"

namespace modlie {

using AlgebraPtr = std::shared_ptr<const RestrictedLieAlgebra>;

/// A module for a restricted Lie algebra, given by one action matrix per
/// algebra basis vector. Elements are column vectors; ρ(x)v = act(x) * v.
/// Construction checks shapes and the dimension cap only; bracket
/// compatibility is checked by verify_module so that deliberately corrupt
/// modules can still be represented and reported on.
class LModule {
 public:
  LModule(AlgebraPtr algebra, std::size_t dim, std::vector<Matrix> action);

  const AlgebraPtr& algebra_ptr() const { return alg_; }
  const RestrictedLieAlgebra& algebra() const { return *alg_; }
  const FieldCtx* ctx() const { return alg_->ctx(); }
  std::size_t dim() const { return dim_; }
  const Matrix& action(std::size_t i) const { return act_[i]; }
  const std::vector<Matrix>& actions() const { return act_; }

  /// ρ(x) for an arbitrary algebra element, by linearity.
  Matrix act(const std::vector<FieldElem>& x) const;

  friend bool operator==(const LModule& a, const LModule& b);
  friend bool operator!=(const LModule& a, const LModule& b) { return !(a == b); }

 private:
  AlgebraPtr alg_;
  std::size_t dim_;
  std::vector<Matrix> act_;
};

LModule trivial_module(AlgebraPtr algebra, std::size_t dim);

/// True when the two modules are over the same algebra (pointer or value).
bool same_algebra(const LModule& a, const LModule& b);

/// Bracket compatibility ρ([e_i,e_j]) = [ρ(e_i), ρ(e_j)] on all pairs.
VerifyReport verify_module(const LModule& M);

/// ρ(e_i)^p = ρ(e_i^[p]) on every basis vector; p-semilinearity of the
/// defect makes the basis check sufficient. Requires a p-map.
bool is_restricted_module(const LModule& M);

LModule direct_sum(const LModule& a, const LModule& b);
LModule direct_sum(const std::vector<LModule>& parts);
/// Tensor basis ordering is row-major: a_i ⊗ b_j has index i*dim(b) + j.
LModule tensor(const LModule& a, const LModule& b);
LModule dual(const LModule& a);
/// Hom(A,B): elements are dim(b) x dim(a) matrices flattened row-major;
/// the action is x·F = ρ_B(x) F - F ρ_A(x).
LModule hom_module(const LModule& a, const LModule& b);

/// An intertwining map of modules over one algebra.
struct ModuleMap {
  LModule source, target;
  Matrix matrix;  // dim(target) x dim(source)
};

bool is_intertwiner(const LModule& src, const LModule& dst, const Matrix& m);
/// Validates shapes and the intertwining property; throws otherwise.
ModuleMap make_module_map(LModule src, LModule dst, Matrix m);

/// The canonical isomorphism tensor(dual(A), B) -> hom_module(A, B),
/// a_i^* ⊗ b_j -> (v -> v_i b_j). Verified on construction.
ModuleMap hom_from_dual_tensor(const LModule& a, const LModule& b);

/// Smallest invariant subspace containing the generators.
Subspace submodule(const LModule& M, const std::vector<std::vector<FieldElem>>& generators);
bool is_invariant(const LModule& M, const Subspace& U);

/// The factor outer/inner with its induced action; both must be invariant
/// and nested. Coordinates: echelon basis of outer, then the canonical
/// complement coordinates of the embedded inner.
LModule sub_quotient(const LModule& M, const Subspace& inner, const Subspace& outer);

struct IrreducibilityResult {
  bool irreducible = false;
  Subspace witness;  // a proper nonzero invariant subspace when reducible
};

/// Meataxe-style decision. Seeded word sampling with kernel spinning and
/// the transpose criterion certifies either way; exhaustive fallbacks keep
/// the answer correct at desk scale regardless of sampling luck.
IrreducibilityResult irreducibility_test(const LModule& M, uint64_t seed);

/// Chain 0 = U_0 < U_1 < ... < U_r = M with irreducible factors.
std::vector<Subspace> composition_series(const LModule& M, uint64_t seed);
std::vector<LModule> composition_factors(const LModule& M, uint64_t seed);

/// Dimension of the commutant {T : T ρ(e_i) = ρ(e_i) T for all i}.
std::size_t endomorphism_algebra_dim(const LModule& M);

/// Same module with entries (and algebra) carried across the embedding.
LModule extend_scalars(const LModule& M, const Embedding& e);
/// Variant reusing an already-embedded algebra handle (must match).
LModule extend_scalars(const LModule& M, const Embedding& e, AlgebraPtr embedded_algebra);

/// Structure constants of S in its echelon basis. The p-map is kept only
/// when S is closed under the parent's p-map; otherwise the result carries
/// no p-map (subalgebras need not be p-closed).
AlgebraPtr induced_subalgebra_structure(const Subalgebra& S);

/// M viewed as a module over the induced structure of S; S must be nonzero
/// and M must be a module over S's parent.
LModule restrict_to_subalgebra(const LModule& M, const Subalgebra& S);

/// Extends an S-module to the whole parent L, where S is an ideal that
/// generates L as a restricted algebra. New basis directions arise only as
/// p-map images: whenever t^[p] = s + c with s in the assigned span and c
/// new, the rule ρ(c) := ρ(t)^p - ρ(s) applies. The output verifies as an
/// L-module and restricts back to M exactly; this is one valid extension
/// among possibly several.
LModule extend_action_to_penvelope(const Subalgebra& S, const LModule& M);

}  // namespace modlie
