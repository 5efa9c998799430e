#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "modlie/linalg.hpp"

namespace modlie {

/// A finite-dimensional Lie algebra by structure constants:
/// [e_i, e_j] = sum_k c(i,j,k) e_k.
class LieAlgebra {
 public:
  LieAlgebra(const FieldCtx* ctx, std::size_t dim)
      : ctx_(ctx), n_(dim), c_(dim * dim * dim, ctx->zero()) {}

  const FieldCtx* ctx() const { return ctx_; }
  std::size_t dim() const { return n_; }

  const FieldElem& c(std::size_t i, std::size_t j, std::size_t k) const {
    return c_[(i * n_ + j) * n_ + k];
  }
  /// Sets [e_i, e_j] = value and [e_j, e_i] = -value; i and j must differ.
  void set_bracket(std::size_t i, std::size_t j, const std::vector<FieldElem>& value);

  std::vector<FieldElem> bracket(const std::vector<FieldElem>& x,
                                 const std::vector<FieldElem>& y) const;
  Matrix ad_basis(std::size_t i) const;
  Matrix ad(const std::vector<FieldElem>& x) const;

  /// Structure constants of the algebra carried over an embedding.
  LieAlgebra embedded(const Embedding& emb) const;

  friend bool operator==(const LieAlgebra& a, const LieAlgebra& b);
  friend bool operator!=(const LieAlgebra& a, const LieAlgebra& b) { return !(a == b); }

 private:
  const FieldCtx* ctx_;
  std::size_t n_;
  std::vector<FieldElem> c_;
};

/// A Lie algebra together with the images e_i^[p] of its basis under the
/// p-operation. A value may also carry no p-map at all (has_pmap() false);
/// that state represents a plain subalgebra whose span is not closed under
/// the parent's p-operation, and every p-map-dependent call rejects it.
class RestrictedLieAlgebra {
 public:
  RestrictedLieAlgebra(LieAlgebra alg, std::vector<std::vector<FieldElem>> pmap_images);
  static RestrictedLieAlgebra without_pmap(LieAlgebra alg);

  const LieAlgebra& alg() const { return alg_; }
  const FieldCtx* ctx() const { return alg_.ctx(); }
  std::size_t dim() const { return alg_.dim(); }
  bool has_pmap() const { return has_pmap_; }

  const std::vector<FieldElem>& pmap_image(std::size_t i) const;
  /// x^[p] for an arbitrary coordinate vector, by Jacobson's rule:
  /// fold the basis terms with (a+b)^[p] = a^[p] + b^[p] + sum_i s_i(a,b).
  std::vector<FieldElem> pmap(const std::vector<FieldElem>& x) const;

  RestrictedLieAlgebra embedded(const Embedding& emb) const;

  friend bool operator==(const RestrictedLieAlgebra& a, const RestrictedLieAlgebra& b);
  friend bool operator!=(const RestrictedLieAlgebra& a, const RestrictedLieAlgebra& b) {
    return !(a == b);
  }

 private:
  RestrictedLieAlgebra(LieAlgebra alg, std::vector<std::vector<FieldElem>> imgs, bool has);
  LieAlgebra alg_;
  std::vector<std::vector<FieldElem>> pimg_;
  bool has_pmap_;
};

/// A subalgebra handle: the parent algebra plus a bracket-closed subspace
/// in the parent's coordinates.
struct Subalgebra {
  std::shared_ptr<const RestrictedLieAlgebra> parent;
  Subspace space;
};

/// Validates bracket closure of the subspace; throws std::invalid_argument.
Subalgebra make_subalgebra(std::shared_ptr<const RestrictedLieAlgebra> parent, Subspace space);
bool is_bracket_closed(const LieAlgebra& A, const Subspace& U);

struct AxiomViolation {
  std::string axiom;                 // "alternating" | "antisymmetry" | "jacobi" | "pmap-..."
  std::vector<std::size_t> indices;  // offending basis indices
  std::string detail;
};
using VerifyReport = std::vector<AxiomViolation>;

VerifyReport verify_lie(const LieAlgebra& A);
VerifyReport verify_pmap(const RestrictedLieAlgebra& L);

/// sum_{i=1}^{p-1} s_i(x,y), where i*s_i(x,y) is the t^(i-1) coefficient of
/// ad(tx+y)^(p-1)(x). This is the correction term in Jacobson's formula for
/// (x+y)^[p].
std::vector<FieldElem> jacobson_sum(const LieAlgebra& A, const std::vector<FieldElem>& x,
                                    const std::vector<FieldElem>& y);

/// {z : [z, L] = 0}, the intersection of the kernels of ad(e_i).
Subspace centre(const LieAlgebra& A);

/// Span of all brackets [u, v] with u in U, v in V.
Subspace bracket_span(const LieAlgebra& A, const Subspace& U, const Subspace& V);

std::vector<Subspace> lower_central_series(const LieAlgebra& A, const Subspace& S);
std::vector<Subspace> derived_series(const LieAlgebra& A, const Subspace& S);
bool is_nilpotent(const LieAlgebra& A, const Subspace& S);
bool is_soluble(const LieAlgebra& A, const Subspace& S);

/// Smallest subspace of M containing S and closed under brackets with all
/// of M. Requires S ⊆ M and M bracket-closed.
Subspace ideal_closure(const LieAlgebra& A, const Subspace& S, const Subspace& M);

struct SubnormalChain {
  bool subnormal = false;
  std::vector<Subspace> chain;  // L = L_0 ⊇ L_1 ⊇ ..., each the ideal closure in the last
};

/// Descending ideal-closure chain from the whole algebra; subnormal iff it
/// reaches S.
SubnormalChain is_subnormal(const LieAlgebra& A, const Subspace& S);

/// A restricted Lie algebra together with a designated faithful matrix
/// realization of its basis.
struct PClosure {
  RestrictedLieAlgebra algebra;
  std::vector<Matrix> basis_matrices;
};

/// Smallest subspace of n x n matrices containing the generators and closed
/// under commutators and p-th matrix powers, with the induced structure.
PClosure matrix_p_closure(const std::vector<Matrix>& generators);

struct PEnvelope {
  RestrictedLieAlgebra algebra;        // the envelope E
  std::vector<Matrix> basis_matrices;  // faithful realization of E's basis
  Matrix s_embedding;                  // dim(E) x dim(S), S-basis images in E-coordinates
  Subspace s_image;                    // the embedded copy of S inside E
};

/// p-envelope via the adjoint representation; requires centre(S) = 0.
PEnvelope p_envelope(const LieAlgebra& S);
/// p-envelope from a user-supplied faithful matrix representation of S.
PEnvelope p_envelope(const LieAlgebra& S, const std::vector<Matrix>& faithful);

/// Replaces the p-map by x^[p] - phi(x) with phi p-semilinear, phi = [p] on
/// a centre basis and 0 on the complement coordinates. The result satisfies
/// z^[p] = 0 for every central z; all p-map axioms are re-verified.
RestrictedLieAlgebra adjust_pmap_centre_kill(const RestrictedLieAlgebra& L);

}  // namespace modlie
