#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>
#include <vector>

#include "doctest.h"
#include "modlie/liealg.hpp"

using namespace modlie;

namespace oracle {

// Independent reference facts for this suite:
//  * matrix realizations, where the p-operation is a literal p-th matrix
//    power computed by exponentiation, validate the Jacobson machinery;
//  * exhaustive enumeration of subspaces and of ideal chains validates the
//    subnormality decision at desk scale.

std::vector<std::vector<FieldElem>> all_vectors(const FieldCtx* K, std::size_t n) {
  std::vector<std::vector<FieldElem>> out;
  const uint64_t q = K->order();
  uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= q;
  for (uint64_t t = 0; t < total; ++t) {
    std::vector<FieldElem> v;
    uint64_t r = t;
    for (std::size_t i = 0; i < n; ++i) {
      v.push_back(K->from_index(r % q));
      r /= q;
    }
    out.push_back(std::move(v));
  }
  return out;
}

// Every subspace of K^n for n <= 3: spans of all singletons and pairs,
// plus the full space. Deduplicated through the canonical echelon form.
std::vector<Subspace> all_subspaces(const FieldCtx* K, std::size_t n) {
  REQUIRE(n <= 3);
  auto vecs = all_vectors(K, n);
  std::vector<Subspace> found = {Subspace::zero(K, n), Subspace::full(K, n)};
  auto offer = [&](const Subspace& s) {
    for (const Subspace& f : found)
      if (f == s) return;
    found.push_back(s);
  };
  for (const auto& v : vecs) offer(Subspace::span(K, n, {v}));
  for (const auto& v : vecs)
    for (const auto& w : vecs) offer(Subspace::span(K, n, {v, w}));
  return found;
}

bool is_ideal_in(const LieAlgebra& A, const Subspace& U, const Subspace& V) {
  return U.contains(bracket_span(A, V, U));
}

// S is subnormal iff some chain S = S_0 < S_1 < ... < S_k = L exists with
// each link an ideal of the next. Reachability search over all subspaces;
// a subspace that is an ideal of a subalgebra is itself bracket-closed, so
// closedness only needs enforcing on the upper end of each link.
struct ChainOracle {
  const std::vector<Subspace>* subspaces;
  std::size_t full_index = 0;
  std::vector<std::vector<char>> edge;  // edge[u][v]: u < v, v closed, u ideal in v

  ChainOracle(const LieAlgebra& A, const std::vector<Subspace>& subs) : subspaces(&subs) {
    const std::size_t n = subs.size();
    std::vector<char> closed(n);
    for (std::size_t v = 0; v < n; ++v) {
      closed[v] = is_bracket_closed(A, subs[v]);
      if (subs[v].dim() == A.dim()) full_index = v;
    }
    edge.assign(n, std::vector<char>(n, 0));
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = 0; v < n; ++v)
        edge[u][v] = u != v && closed[v] && subs[u].dim() < subs[v].dim() &&
                     subs[v].contains(subs[u]) && is_ideal_in(A, subs[u], subs[v]);
  }

  bool subnormal(const Subspace& S) const {
    const std::size_t n = subspaces->size();
    std::vector<char> reach(n, 0);
    std::vector<std::size_t> frontier;
    for (std::size_t i = 0; i < n; ++i)
      if ((*subspaces)[i] == S) {
        reach[i] = 1;
        frontier.push_back(i);
      }
    while (!frontier.empty()) {
      const std::size_t u = frontier.back();
      frontier.pop_back();
      if (u == full_index) return true;
      for (std::size_t v = 0; v < n; ++v)
        if (edge[u][v] && !reach[v]) {
          reach[v] = 1;
          frontier.push_back(v);
        }
    }
    return reach[full_index] != 0;
  }
};

}  // namespace oracle

namespace {

std::vector<FieldElem> vec(const FieldCtx* K, const std::vector<int>& a) {
  std::vector<FieldElem> v;
  const uint32_t p = K->p();
  for (int x : a) v.push_back(K->from_prime(static_cast<uint32_t>(((x % int(p)) + int(p)) % int(p))));
  return v;
}

Matrix mat(const FieldCtx* K, std::size_t n, const std::vector<int>& entries) {
  Matrix M(K, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      int x = entries[i * n + j];
      const int p = int(K->p());
      M.at(i, j) = K->from_prime(static_cast<uint32_t>(((x % p) + p) % p));
    }
  return M;
}

Matrix realize(const std::vector<Matrix>& basis, const std::vector<FieldElem>& coords) {
  Matrix M(basis[0].ctx(), basis[0].rows(), basis[0].cols());
  for (std::size_t k = 0; k < basis.size(); ++k)
    if (!coords[k].is_zero()) M = M + coords[k] * basis[k];
  return M;
}

// [e_1, e_2] = e_2 over the given field.
LieAlgebra two_dim_nonabelian(const FieldCtx* K) {
  LieAlgebra A(K, 2);
  A.set_bracket(0, 1, vec(K, {0, 1}));
  return A;
}

// [e_1, e_2] = e_3, e_3 central.
LieAlgebra heisenberg(const FieldCtx* K) {
  LieAlgebra A(K, 3);
  A.set_bracket(0, 1, vec(K, {0, 0, 1}));
  return A;
}

std::vector<FieldElem> random_coords(const FieldCtx* K, std::size_t n, std::mt19937_64& rng) {
  std::vector<FieldElem> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(K->from_index(rng() % K->order()));
  return v;
}

}  // namespace

TEST_CASE("bracket on pinned algebras") {
  const FieldCtx* K = FieldCtx::get(3, 1);
  LieAlgebra A = two_dim_nonabelian(K);

  CHECK(A.bracket(vec(K, {1, 0}), vec(K, {0, 1})) == vec(K, {0, 1}));
  CHECK(A.bracket(vec(K, {0, 1}), vec(K, {1, 0})) == vec(K, {0, -1}));
  // [x, x] = 0 for arbitrary x, including mixed coordinates.
  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    auto x = random_coords(K, 2, rng);
    auto z = A.bracket(x, x);
    CHECK(z == vec(K, {0, 0}));
  }
  // Abelian algebra: every bracket is zero.
  LieAlgebra Ab(K, 3);
  CHECK(Ab.bracket(vec(K, {1, 2, 0}), vec(K, {0, 1, 1})) == vec(K, {0, 0, 0}));

  // ad matrices follow the structure constants: ad(e_1) fixes e_2.
  Matrix ad0 = A.ad_basis(0);
  CHECK(ad0 == mat(K, 2, {0, 0, 0, 1}));
  CHECK(A.ad(vec(K, {1, 0})) == ad0);
  CHECK(A.ad_basis(1) == mat(K, 2, {0, 0, -1, 0}));

  CHECK_THROWS_AS(A.set_bracket(1, 1, vec(K, {0, 1})), std::invalid_argument);
}

TEST_CASE("verify_lie accepts valid tables and localizes jacobi failures") {
  const FieldCtx* K = FieldCtx::get(2, 1);
  CHECK(verify_lie(two_dim_nonabelian(K)).empty());
  CHECK(verify_lie(heisenberg(K)).empty());
  CHECK(verify_lie(LieAlgebra(K, 4)).empty());

  // [e_1,e_2] = e_3 and [e_1,e_3] = e_1 breaks Jacobi on the only triple.
  LieAlgebra bad(K, 3);
  bad.set_bracket(0, 1, vec(K, {0, 0, 1}));
  bad.set_bracket(0, 2, vec(K, {1, 0, 0}));
  VerifyReport rep = verify_lie(bad);
  REQUIRE(rep.size() == 1);
  CHECK(rep[0].axiom == "jacobi");
  CHECK(rep[0].indices == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("verify_pmap pinned examples") {
  for (uint32_t p : {2u, 3u, 5u}) {
    CAPTURE(p);
    const FieldCtx* K = FieldCtx::get(p, 1);
    LieAlgebra A = two_dim_nonabelian(K);

    // e_1^[p] = e_1, e_2^[p] = 0 is a valid p-map for [e_1,e_2] = e_2.
    RestrictedLieAlgebra good(A, {vec(K, {1, 0}), vec(K, {0, 0})});
    CHECK(verify_pmap(good).empty());

    // e_2^[p] = e_1 is not: ad(e_2)^p = 0 but ad(e_1) != 0.
    RestrictedLieAlgebra bad(A, {vec(K, {1, 0}), vec(K, {1, 0})});
    VerifyReport rep = verify_pmap(bad);
    REQUIRE(!rep.empty());
    CHECK(rep[0].axiom == "pmap-adjoint");
    CHECK(rep[0].indices == std::vector<std::size_t>{1});

    // Abelian algebra with the zero p-map.
    LieAlgebra Ab(K, 3);
    RestrictedLieAlgebra zero_p(Ab, {vec(K, {0, 0, 0}), vec(K, {0, 0, 0}), vec(K, {0, 0, 0})});
    CHECK(verify_pmap(zero_p).empty());
  }

  // Restricted Heisenberg over F_2: e_1^[2] = e_3 is legitimate because
  // ad(e_1)^2 = 0 = ad(e_3).
  const FieldCtx* F2 = FieldCtx::get(2, 1);
  LieAlgebra H = heisenberg(F2);
  RestrictedLieAlgebra rh(H, {vec(F2, {0, 0, 1}), vec(F2, {0, 0, 0}), vec(F2, {0, 0, 0})});
  CHECK(verify_pmap(rh).empty());

  RestrictedLieAlgebra no_p = RestrictedLieAlgebra::without_pmap(H);
  CHECK(!no_p.has_pmap());
  CHECK_THROWS_AS(no_p.pmap(vec(F2, {1, 0, 0})), std::logic_error);
  CHECK_THROWS_AS(no_p.pmap_image(0), std::logic_error);
  REQUIRE(verify_pmap(no_p).size() == 1);
  CHECK(verify_pmap(no_p)[0].axiom == "pmap-missing");
}

TEST_CASE("jacobson machinery agrees with literal matrix p-th powers") {
  struct Probe {
    uint32_t p, m;
    std::size_t n;
  };
  for (Probe pr : {Probe{2, 1, 3}, Probe{3, 1, 3}, Probe{5, 1, 2}, Probe{2, 2, 3}, Probe{3, 2, 2}}) {
    CAPTURE(pr.p);
    CAPTURE(pr.m);
    const FieldCtx* K = FieldCtx::get(pr.p, pr.m);
    std::mt19937_64 rng(1000 * pr.p + pr.m);
    std::vector<Matrix> gens;
    for (int g = 0; g < 2; ++g) {
      Matrix M(K, pr.n, pr.n);
      for (std::size_t i = 0; i < pr.n; ++i)
        for (std::size_t j = 0; j < pr.n; ++j) M.at(i, j) = K->from_index(rng() % K->order());
      gens.push_back(M);
    }
    PClosure cl = matrix_p_closure(gens);
    CHECK(verify_lie(cl.algebra.alg()).empty());
    CHECK(verify_pmap(cl.algebra).empty());

    const std::size_t d = cl.algebra.dim();
    for (int t = 0; t < 20; ++t) {
      auto x = random_coords(K, d, rng);
      auto y = random_coords(K, d, rng);
      Matrix Mx = realize(cl.basis_matrices, x);
      Matrix My = realize(cl.basis_matrices, y);
      // The abstract p-map must be the matrix p-th power.
      CHECK(realize(cl.basis_matrices, cl.algebra.pmap(x)) == Mx.pow(pr.p));
      // The Jacobson correction must be (X+Y)^p - X^p - Y^p.
      Matrix want = (Mx + My).pow(pr.p) - Mx.pow(pr.p) - My.pow(pr.p);
      CHECK(realize(cl.basis_matrices, jacobson_sum(cl.algebra.alg(), x, y)) == want);
    }
  }
}

TEST_CASE("centre pinned examples") {
  const FieldCtx* K = FieldCtx::get(3, 1);
  CHECK(centre(LieAlgebra(K, 3)) == Subspace::full(K, 3));
  CHECK(centre(two_dim_nonabelian(K)).dim() == 0);
  Subspace zH = centre(heisenberg(K));
  CHECK(zH == Subspace::span(K, 3, {vec(K, {0, 0, 1})}));
}

TEST_CASE("series, nilpotency, solubility") {
  const FieldCtx* K = FieldCtx::get(3, 1);
  const Subspace full2 = Subspace::full(K, 2);
  const Subspace full3 = Subspace::full(K, 3);

  LieAlgebra Ab(K, 3);
  CHECK(is_nilpotent(Ab, full3));
  CHECK(is_soluble(Ab, full3));

  LieAlgebra A = two_dim_nonabelian(K);
  CHECK(is_soluble(A, full2));
  CHECK(!is_nilpotent(A, full2));
  auto lcs = lower_central_series(A, full2);
  CHECK(lcs.back() == Subspace::span(K, 2, {vec(K, {0, 1})}));
  auto ds = derived_series(A, full2);
  CHECK(ds.back().dim() == 0);
  CHECK(ds.size() == 3);

  LieAlgebra H = heisenberg(K);
  auto hl = lower_central_series(H, full3);
  REQUIRE(hl.size() == 3);  // L > [L,L] = span(e_3) > 0: class 2
  CHECK(hl[1] == Subspace::span(K, 3, {vec(K, {0, 0, 1})}));
  CHECK(hl[2].dim() == 0);
  CHECK(is_nilpotent(H, full3));

  // sl_2 via its matrix p-closure: neither soluble nor nilpotent.
  PClosure sl2 = matrix_p_closure({mat(K, 2, {0, 1, 0, 0}), mat(K, 2, {0, 0, 1, 0})});
  REQUIRE(sl2.algebra.dim() == 3);
  const Subspace fsl = Subspace::full(K, 3);
  CHECK(!is_soluble(sl2.algebra.alg(), fsl));
  CHECK(!is_nilpotent(sl2.algebra.alg(), fsl));
  CHECK(centre(sl2.algebra.alg()).dim() == 0);
}

TEST_CASE("ideal closure pinned examples") {
  const FieldCtx* K = FieldCtx::get(2, 1);
  LieAlgebra A = two_dim_nonabelian(K);
  const Subspace full = Subspace::full(K, 2);
  const Subspace s1 = Subspace::span(K, 2, {vec(K, {1, 0})});
  const Subspace s2 = Subspace::span(K, 2, {vec(K, {0, 1})});

  CHECK(ideal_closure(A, s1, full) == full);
  CHECK(ideal_closure(A, s2, full) == s2);
  CHECK(ideal_closure(A, s2, s2) == s2);
  CHECK_THROWS_AS(ideal_closure(A, full, s2), std::invalid_argument);
}

TEST_CASE("subnormality pinned examples") {
  const FieldCtx* K = FieldCtx::get(3, 1);
  LieAlgebra A = two_dim_nonabelian(K);
  const Subspace full = Subspace::full(K, 2);

  SubnormalChain whole = is_subnormal(A, full);
  CHECK(whole.subnormal);
  CHECK(whole.chain.size() == 1);

  SubnormalChain ideal = is_subnormal(A, Subspace::span(K, 2, {vec(K, {0, 1})}));
  CHECK(ideal.subnormal);
  CHECK(ideal.chain.size() == 2);

  SubnormalChain not_sub = is_subnormal(A, Subspace::span(K, 2, {vec(K, {1, 0})}));
  CHECK(!not_sub.subnormal);

  // Heisenberg is nilpotent, so every subalgebra is subnormal.
  LieAlgebra H = heisenberg(K);
  for (const Subspace& S : oracle::all_subspaces(K, 3))
    if (is_bracket_closed(H, S)) CHECK(is_subnormal(H, S).subnormal);
}

TEST_CASE("subnormality agrees with exhaustive chain search") {
  // Every antisymmetric table on two generators is a Lie algebra; on three
  // generators we filter by verify_lie. Oracle: reachability over all
  // ideal-inclusion links.
  const FieldCtx* F2 = FieldCtx::get(2, 1);
  const FieldCtx* F3 = FieldCtx::get(3, 1);

  std::size_t algebras_checked = 0, subnormal_seen = 0, not_subnormal_seen = 0;

  // All 2-dim algebras over F_3: [e_1,e_2] ranges over all 9 vectors.
  {
    auto subspaces = oracle::all_subspaces(F3, 2);
    for (const auto& v : oracle::all_vectors(F3, 2)) {
      LieAlgebra A(F3, 2);
      A.set_bracket(0, 1, v);
      REQUIRE(verify_lie(A).empty());
      ++algebras_checked;
      oracle::ChainOracle ref(A, subspaces);
      for (const Subspace& S : subspaces) {
        if (!is_bracket_closed(A, S)) continue;
        SubnormalChain got = is_subnormal(A, S);
        CHECK(got.subnormal == ref.subnormal(S));
        (got.subnormal ? subnormal_seen : not_subnormal_seen)++;
      }
    }
  }

  // All 3-dim tables over F_2 (2^9 candidates), filtered by verify_lie.
  {
    auto subspaces = oracle::all_subspaces(F2, 3);
    auto vecs3 = oracle::all_vectors(F2, 3);
    for (const auto& a : vecs3)
      for (const auto& b : vecs3)
        for (const auto& c : vecs3) {
          LieAlgebra A(F2, 3);
          A.set_bracket(0, 1, a);
          A.set_bracket(0, 2, b);
          A.set_bracket(1, 2, c);
          if (!verify_lie(A).empty()) continue;
          ++algebras_checked;
          oracle::ChainOracle ref(A, subspaces);
          for (const Subspace& S : subspaces) {
            if (!is_bracket_closed(A, S)) continue;
            SubnormalChain got = is_subnormal(A, S);
            CHECK(got.subnormal == ref.subnormal(S));
            (got.subnormal ? subnormal_seen : not_subnormal_seen)++;
            // Chain shape: starts at L, consecutive links are ideals.
            CHECK(got.chain.front() == Subspace::full(F2, 3));
            for (std::size_t t = 0; t + 1 < got.chain.size(); ++t) {
              CHECK(got.chain[t].contains(got.chain[t + 1]));
              CHECK(oracle::is_ideal_in(A, got.chain[t + 1], got.chain[t]));
            }
            if (got.subnormal) CHECK(got.chain.back() == S);
          }
        }
  }
  CHECK(algebras_checked > 100);
  CHECK(subnormal_seen > 0);
  CHECK(not_subnormal_seen > 0);
}

TEST_CASE("matrix p-closure pinned examples") {
  // Single square-zero matrix over F_2: one-dimensional abelian, zero p-map.
  const FieldCtx* F2 = FieldCtx::get(2, 1);
  PClosure nil = matrix_p_closure({mat(F2, 2, {0, 1, 0, 0})});
  CHECK(nil.algebra.dim() == 1);
  CHECK(nil.algebra.pmap_image(0) == vec(F2, {0}));

  // Single diagonal idempotent over F_3: d^[3] = d.
  const FieldCtx* F3 = FieldCtx::get(3, 1);
  PClosure idem = matrix_p_closure({mat(F3, 2, {0, 0, 0, 1})});
  CHECK(idem.algebra.dim() == 1);
  CHECK(idem.algebra.pmap_image(0) == vec(F3, {1}));

  // {E_12, diag(0,1)} over F_2: two-dimensional with [d, E_12] = E_12.
  PClosure pair = matrix_p_closure({mat(F2, 2, {0, 1, 0, 0}), mat(F2, 2, {0, 0, 0, 1})});
  REQUIRE(pair.algebra.dim() == 2);
  CHECK(pair.basis_matrices[0] == mat(F2, 2, {0, 1, 0, 0}));
  CHECK(pair.basis_matrices[1] == mat(F2, 2, {0, 0, 0, 1}));
  // With x = diag(0,1) (second basis vector) and y = E_12 (first): [x,y] = y.
  CHECK(pair.algebra.alg().bracket(vec(F2, {0, 1}), vec(F2, {1, 0})) == vec(F2, {1, 0}));
  CHECK(pair.algebra.pmap_image(0) == vec(F2, {0, 0}));
  CHECK(pair.algebra.pmap_image(1) == vec(F2, {0, 1}));
  CHECK(verify_pmap(pair.algebra).empty());

  // Idempotence: closing the closure basis changes nothing.
  PClosure again = matrix_p_closure(pair.basis_matrices);
  CHECK(again.algebra == pair.algebra);
  CHECK(again.basis_matrices == pair.basis_matrices);

  CHECK_THROWS_AS(matrix_p_closure({}), std::invalid_argument);
}

TEST_CASE("p-envelope via adjoint representation") {
  for (uint32_t p : {2u, 3u, 5u}) {
    CAPTURE(p);
    const FieldCtx* K = FieldCtx::get(p, 1);
    LieAlgebra S = two_dim_nonabelian(K);
    PEnvelope env = p_envelope(S);

    // The closure of the ad matrices is again two-dimensional, and under
    // the embedding e_1^[p] = e_1, e_2^[p] = 0.
    REQUIRE(env.algebra.dim() == 2);
    CHECK(verify_pmap(env.algebra).empty());
    std::vector<FieldElem> im1 = env.s_embedding.col(0);
    std::vector<FieldElem> im2 = env.s_embedding.col(1);
    CHECK(env.algebra.pmap(im1) == im1);
    CHECK(env.algebra.pmap(im2) == vec(K, {0, 0}));
    // Bracket transported: [im1, im2] = im2.
    CHECK(env.algebra.alg().bracket(im1, im2) == im2);

    CHECK(env.s_image == Subspace::full(K, 2));
    CHECK(is_subnormal(env.algebra.alg(), env.s_image).subnormal);
  }

  // Nontrivial centre and no supplied representation: rejected.
  const FieldCtx* F2 = FieldCtx::get(2, 1);
  CHECK_THROWS_AS(p_envelope(LieAlgebra(F2, 1)), std::invalid_argument);
  CHECK_THROWS_AS(p_envelope(heisenberg(F2)), std::invalid_argument);
}

TEST_CASE("p-envelope from a faithful representation") {
  const FieldCtx* F2 = FieldCtx::get(2, 1);

  // 1-dim S spanned by N with N^2 = 0: envelope is S itself, zero p-map.
  LieAlgebra S1(F2, 1);
  PEnvelope e1 = p_envelope(S1, {mat(F2, 2, {0, 1, 0, 0})});
  CHECK(e1.algebra.dim() == 1);
  CHECK(e1.algebra.pmap_image(0) == vec(F2, {0}));
  CHECK(e1.s_image == Subspace::full(F2, 1));

  // Heisenberg as strictly upper triangular 3x3: the p-closure is S itself
  // (all p-th powers already vanish or land inside), and S is an ideal.
  LieAlgebra H = heisenberg(F2);
  std::vector<Matrix> rep = {
      mat(F2, 3, {0, 1, 0, 0, 0, 0, 0, 0, 0}),
      mat(F2, 3, {0, 0, 0, 0, 0, 1, 0, 0, 0}),
      mat(F2, 3, {0, 0, 1, 0, 0, 0, 0, 0, 0}),
  };
  PEnvelope eh = p_envelope(H, rep);
  CHECK(eh.algebra.dim() == 3);
  CHECK(eh.s_image == Subspace::full(F2, 3));
  CHECK(verify_pmap(eh.algebra).empty());
  CHECK(is_subnormal(eh.algebra.alg(), eh.s_image).subnormal);

  // A proper envelope: the swap matrix squares to the identity, so the
  // closure of its line is two-dimensional and the p-map leaves S.
  LieAlgebra S2(F2, 1);
  PEnvelope e2 = p_envelope(S2, {mat(F2, 2, {0, 1, 1, 0})});
  CHECK(e2.algebra.dim() == 2);
  CHECK(e2.s_image.dim() == 1);
  CHECK(is_subnormal(e2.algebra.alg(), e2.s_image).subnormal);
  std::vector<FieldElem> swap_coords = e2.s_embedding.col(0);
  CHECK(!e2.s_image.contains(e2.algebra.pmap(swap_coords)));
  // [E, E] lands inside the embedded copy of S.
  Subspace derived = bracket_span(e2.algebra.alg(), Subspace::full(F2, 2), Subspace::full(F2, 2));
  CHECK(e2.s_image.contains(derived));

  // Dependent images are rejected.
  LieAlgebra S3(F2, 2);
  CHECK_THROWS_AS(p_envelope(S3, {mat(F2, 2, {0, 1, 0, 0}), mat(F2, 2, {0, 1, 0, 0})}),
                  std::invalid_argument);
  // Matrices that do not satisfy the claimed brackets are rejected.
  LieAlgebra S4(F2, 2);  // abelian claim
  CHECK_THROWS_AS(p_envelope(S4, {mat(F2, 2, {0, 1, 0, 0}), mat(F2, 2, {0, 0, 0, 1})}),
                  std::invalid_argument);
}

TEST_CASE("centre-kill adjustment") {
  const FieldCtx* F3 = FieldCtx::get(3, 1);

  // Zero p-map is a fixed point.
  LieAlgebra Ab(F3, 2);
  RestrictedLieAlgebra z(Ab, {vec(F3, {0, 0}), vec(F3, {0, 0})});
  CHECK(adjust_pmap_centre_kill(z) == z);

  // 1-dim abelian with e^[p] = e: adjusted to zero.
  LieAlgebra one(F3, 1);
  RestrictedLieAlgebra toral(one, {vec(F3, {1})});
  RestrictedLieAlgebra killed = adjust_pmap_centre_kill(toral);
  CHECK(killed.pmap_image(0) == vec(F3, {0}));

  // Heisenberg with e_3^[p] = e_3: only the central image changes.
  LieAlgebra H = heisenberg(F3);
  RestrictedLieAlgebra rh(H, {vec(F3, {0, 0, 0}), vec(F3, {0, 0, 0}), vec(F3, {0, 0, 1})});
  REQUIRE(verify_pmap(rh).empty());
  RestrictedLieAlgebra rk = adjust_pmap_centre_kill(rh);
  CHECK(rk.pmap_image(0) == vec(F3, {0, 0, 0}));
  CHECK(rk.pmap_image(1) == vec(F3, {0, 0, 0}));
  CHECK(rk.pmap_image(2) == vec(F3, {0, 0, 0}));
  CHECK(verify_pmap(rk).empty());

  // gl_2: centre is the scalar line; after adjustment every central element
  // has zero p-image while the adjoint action of each image is unchanged.
  for (uint32_t pm : {2u, 3u}) {
    for (uint32_t mm : {1u, 2u}) {
      CAPTURE(pm);
      CAPTURE(mm);
      const FieldCtx* K = FieldCtx::get(pm, mm);
      PClosure gl2 = matrix_p_closure({mat(K, 2, {0, 1, 0, 0}), mat(K, 2, {0, 0, 1, 0}),
                                       mat(K, 2, {1, 0, 0, 0})});
      REQUIRE(gl2.algebra.dim() == 4);
      const Subspace Z = centre(gl2.algebra.alg());
      REQUIRE(Z.dim() == 1);
      RestrictedLieAlgebra adj = adjust_pmap_centre_kill(gl2.algebra);
      CHECK(verify_pmap(adj).empty());
      std::mt19937_64 rng(77 * pm + mm);
      for (int t = 0; t < 10; ++t) {
        const FieldElem lam = K->from_index(rng() % K->order());
        std::vector<FieldElem> zv = Z.basis_vector(0);
        for (auto& c : zv) c = c * lam;
        std::vector<FieldElem> out = adj.pmap(zv);
        for (const auto& c : out) CHECK(c.is_zero());
      }
      for (std::size_t i = 0; i < 4; ++i)
        CHECK(gl2.algebra.alg().ad(adj.pmap_image(i)) == gl2.algebra.alg().ad_basis(i).pow(pm));
    }
  }
}

TEST_CASE("subalgebra handles validate bracket closure") {
  const FieldCtx* K = FieldCtx::get(3, 1);
  auto H = std::make_shared<RestrictedLieAlgebra>(
      heisenberg(K),
      std::vector<std::vector<FieldElem>>{vec(K, {0, 0, 0}), vec(K, {0, 0, 0}), vec(K, {0, 0, 0})});

  Subalgebra ok = make_subalgebra(H, Subspace::span(K, 3, {vec(K, {1, 0, 0}), vec(K, {0, 0, 1})}));
  CHECK(ok.space.dim() == 2);

  CHECK(is_bracket_closed(H->alg(), Subspace::span(K, 3, {vec(K, {1, 0, 0})})));
  CHECK(!is_bracket_closed(H->alg(), Subspace::span(K, 3, {vec(K, {1, 0, 0}), vec(K, {0, 1, 0})})));
  CHECK_THROWS_AS(
      make_subalgebra(H, Subspace::span(K, 3, {vec(K, {1, 0, 0}), vec(K, {0, 1, 0})})),
      std::invalid_argument);
  CHECK_THROWS_AS(make_subalgebra(H, Subspace::full(K, 2)), std::invalid_argument);
  CHECK_THROWS_AS(make_subalgebra(nullptr, Subspace::full(K, 3)), std::invalid_argument);
}

TEST_CASE("carrying an algebra across a field embedding") {
  const FieldCtx* F2 = FieldCtx::get(2, 1);
  const FieldCtx* F4 = FieldCtx::get(2, 2);
  Embedding emb = canonical_embedding(F2, F4);

  LieAlgebra A = two_dim_nonabelian(F2);
  RestrictedLieAlgebra R(A, {vec(F2, {1, 0}), vec(F2, {0, 0})});
  RestrictedLieAlgebra R4 = R.embedded(emb);
  CHECK(R4.ctx() == F4);
  CHECK(verify_lie(R4.alg()).empty());
  CHECK(verify_pmap(R4).empty());
  CHECK(R4.alg().bracket(vec(F4, {1, 0}), vec(F4, {0, 1})) == vec(F4, {0, 1}));

  RestrictedLieAlgebra N4 = RestrictedLieAlgebra::without_pmap(A).embedded(emb);
  CHECK(!N4.has_pmap());
}
