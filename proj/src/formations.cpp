#include "modlie/formations.hpp"

#include <stdexcept>

namespace modlie {

Formation nilpotent_formation() {
  Formation F;
  F.name = "nilpotent";
  F.is_member = [](const LieAlgebra& A) {
    return is_nilpotent(A, Subspace::full(A.ctx(), A.dim()));
  };
  F.is_central_factor = [](const Subalgebra&, const LModule& T) {
    for (std::size_t i = 0; i < T.algebra().dim(); ++i)
      if (!T.action(i).is_zero()) return false;
    return true;
  };
  return F;
}

Formation formation_by_name(const std::string& name) {
  if (name == "nilpotent") return nilpotent_formation();
  throw std::invalid_argument("unknown formation: " + name);
}

namespace {

// Sum of all F-central irreducible submodules of Q. Every irreducible
// submodule is isomorphic to some Jordan-Holder factor, so it suffices to
// range over the factors: for each central factor T, the intertwiner space
// Hom(T, Q) is the joint kernel of the hom-module actions, and the images
// of its basis elements sweep out the full T-isotypic central part.
Subspace central_socle_part(const Subalgebra& S, const LModule& Q, const Formation& F,
                            uint64_t seed) {
  const FieldCtx* K = Q.ctx();
  Subspace Z = Subspace::zero(K, Q.dim());
  for (const LModule& T : composition_factors(Q, seed)) {
    if (!F.is_central_factor(S, T)) continue;
    LModule H = hom_module(T, Q);
    Subspace inter = Subspace::full(K, H.dim());
    for (std::size_t i = 0; i < H.algebra().dim(); ++i)
      inter = intersect(inter, kernel(H.action(i)));
    for (std::size_t b = 0; b < inter.dim(); ++b) {
      std::vector<FieldElem> flat = inter.basis_vector(b);
      Matrix f(K, Q.dim(), T.dim());
      for (std::size_t r = 0; r < Q.dim(); ++r)
        for (std::size_t c = 0; c < T.dim(); ++c) f.at(r, c) = flat[r * T.dim() + c];
      Z = sum(Z, column_space(f));
    }
  }
  return Z;
}

}  // namespace

std::vector<Subspace> hypercentre_series(const Subalgebra& S, const LModule& M,
                                         const Formation& F, uint64_t seed) {
  if (S.space.dim() == 0) throw std::invalid_argument("hypercentre: S must be nonzero");
  const FieldCtx* K = M.ctx();
  std::vector<Subspace> series = {Subspace::zero(K, M.dim())};
  uint64_t step = 0;
  while (series.back().dim() < M.dim()) {
    const Subspace& U = series.back();
    LModule Q = sub_quotient(M, U, Subspace::full(K, M.dim()));
    Subspace Z = central_socle_part(S, Q, F, seed + 0x9E3779B97F4A7C15ull * ++step);
    if (Z.dim() == 0) break;
    std::vector<std::vector<FieldElem>> lifts;
    for (std::size_t b = 0; b < Z.dim(); ++b)
      lifts.push_back(quotient_lift(U, Z.basis_vector(b)));
    series.push_back(sum(U, Subspace::span(K, M.dim(), lifts)));
  }
  return series;
}

Subspace hypercentre(const Subalgebra& S, const LModule& M, const Formation& F, uint64_t seed) {
  return hypercentre_series(S, M, F, seed).back();
}

Subspace hypercentre_nilpotent_fast(const Subalgebra& S, const LModule& M) {
  if (S.space.dim() == 0) throw std::invalid_argument("hypercentre: S must be nonzero");
  const FieldCtx* K = M.ctx();
  const std::size_t d = M.dim();
  Subspace U = Subspace::zero(K, d);
  for (;;) {
    // {v : rho(s) v in U for every basis s}, via the map to U's complement
    // coordinates.
    Matrix P(K, d - U.dim(), d);
    for (std::size_t c = 0; c < d; ++c) {
      std::vector<FieldElem> e(d, K->zero());
      e[c] = K->one();
      std::vector<FieldElem> q = quotient_coords(U, e);
      for (std::size_t r = 0; r < q.size(); ++r) P.at(r, c) = q[r];
    }
    Subspace next = Subspace::full(K, d);
    for (std::size_t j = 0; j < M.algebra().dim(); ++j)
      next = intersect(next, kernel(P * M.action(j)));
    if (next == U) return U;
    U = next;
  }
}

HypercentralReport is_hypercentral(const Subalgebra& S, const LModule& M, const Formation& F,
                                   uint64_t seed) {
  HypercentralReport rep;
  rep.module_dim = M.dim();
  rep.series = hypercentre_series(S, M, F, seed);
  const Subspace& U = rep.series.back();
  rep.is_hypercentral = U.dim() == M.dim();
  if (!rep.is_hypercentral) {
    LModule Q = sub_quotient(M, U, Subspace::full(M.ctx(), M.dim()));
    std::vector<Subspace> chain = composition_series(Q, seed);
    LModule bottom = sub_quotient(Q, chain[0], chain[1]);
    if (F.is_central_factor(S, bottom))
      throw std::logic_error("hypercentre stabilized below a central submodule");
    rep.obstruction = std::move(bottom);
  }
  return rep;
}

}  // namespace modlie
