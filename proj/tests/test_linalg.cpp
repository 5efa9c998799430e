#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "modlie/linalg.hpp"

using namespace modlie;

namespace {

Matrix random_matrix(const FieldCtx* K, std::size_t rows, std::size_t cols,
                     std::mt19937_64& rng) {
  Matrix m(K, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = K->from_index(rng() % K->order());
  return m;
}

std::vector<FieldElem> random_vector(const FieldCtx* K, std::size_t n, std::mt19937_64& rng) {
  std::vector<FieldElem> v(n, K->zero());
  for (std::size_t i = 0; i < n; ++i) v[i] = K->from_index(rng() % K->order());
  return v;
}

}  // namespace

// -----------------------------------------------------------------------
// Oracles: structural predicates and an independent elimination routine.
// -----------------------------------------------------------------------
namespace oracle {

bool is_rref(const Matrix& M) {
  std::size_t last_pivot = 0;
  bool seen_zero_row = false, first = true;
  for (std::size_t i = 0; i < M.rows(); ++i) {
    std::size_t lead = M.cols();
    for (std::size_t j = 0; j < M.cols(); ++j)
      if (!M.at(i, j).is_zero()) { lead = j; break; }
    if (lead == M.cols()) { seen_zero_row = true; continue; }
    if (seen_zero_row) return false;  // nonzero row below a zero row
    if (!first && lead <= last_pivot) return false;
    if (M.at(i, lead) != M.ctx()->one()) return false;
    for (std::size_t r = 0; r < M.rows(); ++r)
      if (r != i && !M.at(r, lead).is_zero()) return false;
    last_pivot = lead;
    first = false;
  }
  return true;
}

// Row rank by independent forward elimination (no normalization, no
// back-substitution; shares nothing with the library's rref).
std::size_t rank(Matrix A) {
  std::size_t rk = 0;
  for (std::size_t c = 0; c < A.cols() && rk < A.rows(); ++c) {
    std::size_t p = rk;
    while (p < A.rows() && A.at(p, c).is_zero()) ++p;
    if (p == A.rows()) continue;
    for (std::size_t j = 0; j < A.cols(); ++j) std::swap(A.at(p, j), A.at(rk, j));
    for (std::size_t i = rk + 1; i < A.rows(); ++i) {
      if (A.at(i, c).is_zero()) continue;
      FieldElem f = A.at(i, c) / A.at(rk, c);
      for (std::size_t j = c; j < A.cols(); ++j) A.at(i, j) -= f * A.at(rk, j);
    }
    ++rk;
  }
  return rk;
}

bool same_row_space(const Matrix& A, const Matrix& B) {
  std::size_t ra = rank(A), rb = rank(B);
  return ra == rb && rank(stack(A, B)) == ra;
}

}  // namespace oracle

TEST_CASE("rref on the pinned examples") {
  const FieldCtx* F2 = FieldCtx::get(2, 1);
  Matrix z(F2, 2, 3);
  RrefResult rz = rref(z);
  CHECK(rz.rank == 0);
  CHECK(rz.mat == z);

  Matrix id = Matrix::identity(F2, 3);
  RrefResult ri = rref(id);
  CHECK(ri.rank == 3);
  CHECK(ri.mat == id);

  Matrix m(F2, 2, 2);
  m.at(0, 0) = m.at(0, 1) = m.at(1, 0) = m.at(1, 1) = F2->one();
  RrefResult rm = rref(m);
  CHECK(rm.rank == 1);
  Matrix want(F2, 2, 2);
  want.at(0, 0) = want.at(0, 1) = F2->one();
  CHECK(rm.mat == want);
  CHECK(rm.pivots == std::vector<std::size_t>{0});
}

TEST_CASE("rref is idempotent, structurally reduced, row-space preserving") {
  std::mt19937_64 rng(7);
  for (const FieldCtx* K : {FieldCtx::get(2, 1), FieldCtx::get(3, 1), FieldCtx::get(2, 2),
                            FieldCtx::get(5, 1)}) {
    for (int iter = 0; iter < 100; ++iter) {
      std::size_t rows = 1 + rng() % 5, cols = 1 + rng() % 5;
      Matrix M = random_matrix(K, rows, cols, rng);
      RrefResult r = rref(M);
      CHECK(oracle::is_rref(r.mat));
      CHECK(oracle::same_row_space(M, r.mat));
      CHECK(oracle::rank(M) == r.rank);
      RrefResult again = rref(r.mat);
      CHECK(again.mat == r.mat);
      CHECK(again.pivots == r.pivots);
    }
  }
}

TEST_CASE("kernel on the pinned examples") {
  const FieldCtx* F3 = FieldCtx::get(3, 1);
  CHECK(kernel(Matrix::identity(F3, 4)).dim() == 0);
  CHECK(kernel(Matrix(F3, 3, 3)) == Subspace::full(F3, 3));

  // [[1,2],[2,1]] over F_3 has the rank-1 kernel spanned by (1,1).
  Matrix m(F3, 2, 2);
  m.at(0, 0) = F3->one();
  m.at(0, 1) = F3->from_prime(2);
  m.at(1, 0) = F3->from_prime(2);
  m.at(1, 1) = F3->one();
  Subspace k = kernel(m);
  REQUIRE(k.dim() == 1);
  CHECK(k.basis_vector(0) == std::vector<FieldElem>{F3->one(), F3->one()});
}

TEST_CASE("kernel vectors are annihilated; rank-nullity holds") {
  std::mt19937_64 rng(11);
  for (const FieldCtx* K : {FieldCtx::get(2, 1), FieldCtx::get(3, 1), FieldCtx::get(2, 2),
                            FieldCtx::get(5, 1)}) {
    for (int iter = 0; iter < 100; ++iter) {
      std::size_t rows = 1 + rng() % 5, cols = 1 + rng() % 5;
      Matrix M = random_matrix(K, rows, cols, rng);
      Subspace k = kernel(M);
      CHECK(k.dim() + rref(M).rank == cols);
      for (std::size_t i = 0; i < k.dim(); ++i) {
        std::vector<FieldElem> img = (M * k.basis_vector(i));
        for (const FieldElem& x : img) CHECK(x.is_zero());
      }
    }
  }
}

TEST_CASE("subspace lattice on pinned examples") {
  const FieldCtx* F2 = FieldCtx::get(2, 1);
  std::vector<FieldElem> e1 = {F2->one(), F2->zero()};
  std::vector<FieldElem> e2 = {F2->zero(), F2->one()};
  Subspace A = Subspace::span(F2, 2, {e1});
  Subspace B = Subspace::span(F2, 2, {e2});
  CHECK(intersect(A, A) == A);
  CHECK(sum(A, Subspace::zero(F2, 2)) == A);
  CHECK(intersect(A, B) == Subspace::zero(F2, 2));
  CHECK(sum(A, B) == Subspace::full(F2, 2));
}

TEST_CASE("lattice dimension formula on random pairs") {
  std::mt19937_64 rng(13);
  for (const FieldCtx* K : {FieldCtx::get(2, 1), FieldCtx::get(3, 1), FieldCtx::get(2, 2)}) {
    for (int iter = 0; iter < 120; ++iter) {
      std::size_t n = 1 + rng() % 5;
      Subspace A = Subspace::row_span(random_matrix(K, rng() % (n + 1), n, rng));
      Subspace B = Subspace::row_span(random_matrix(K, rng() % (n + 1), n, rng));
      Subspace I = intersect(A, B), S = sum(A, B);
      CHECK(A.dim() + B.dim() == S.dim() + I.dim());
      CHECK(A.contains(I));
      CHECK(B.contains(I));
      CHECK(S.contains(A));
      CHECK(S.contains(B));
      // Intersection members lie in both; sum is the smallest such space.
      for (std::size_t i = 0; i < I.dim(); ++i) {
        CHECK(A.contains(I.basis_vector(i)));
        CHECK(B.contains(I.basis_vector(i)));
      }
    }
  }
}

TEST_CASE("containment, coords, reduce") {
  const FieldCtx* F3 = FieldCtx::get(3, 1);
  std::mt19937_64 rng(17);
  for (int iter = 0; iter < 60; ++iter) {
    std::size_t n = 2 + rng() % 4;
    Subspace U = Subspace::row_span(random_matrix(F3, 1 + rng() % n, n, rng));
    // random element of U: random combination of basis rows
    std::vector<FieldElem> v(n, F3->zero());
    for (std::size_t i = 0; i < U.dim(); ++i) {
      FieldElem c = F3->from_index(rng() % 3);
      std::vector<FieldElem> b = U.basis_vector(i);
      for (std::size_t j = 0; j < n; ++j) v[j] += c * b[j];
    }
    CHECK(U.contains(v));
    std::vector<FieldElem> c = U.coords(v);
    std::vector<FieldElem> back(n, F3->zero());
    for (std::size_t i = 0; i < U.dim(); ++i) {
      std::vector<FieldElem> b = U.basis_vector(i);
      for (std::size_t j = 0; j < n; ++j) back[j] += c[i] * b[j];
    }
    CHECK(back == v);
    // reduce lands on a canonical representative with zero pivot entries
    std::vector<FieldElem> w = random_vector(F3, n, rng);
    std::vector<FieldElem> r = U.reduce(w);
    for (std::size_t p : U.pivots()) CHECK(r[p].is_zero());
    // w - r is in U
    std::vector<FieldElem> diff(n, F3->zero());
    for (std::size_t j = 0; j < n; ++j) diff[j] = w[j] - r[j];
    CHECK(U.contains(diff));
  }
}

TEST_CASE("spin on pinned examples") {
  const FieldCtx* F3 = FieldCtx::get(3, 1);
  CHECK(spin(F3, 3, {}, {Matrix::identity(F3, 3)}).dim() == 0);

  std::vector<FieldElem> e1 = {F3->one(), F3->zero(), F3->zero()};
  Subspace s = spin(F3, 3, {e1}, {Matrix(F3, 3, 3)});
  CHECK(s == Subspace::span(F3, 3, {e1}));

  // Nilpotent Jordan block J e_i = e_{i+1}; spinning e_1 fills the space.
  Matrix J(F3, 3, 3);
  J.at(1, 0) = F3->one();
  J.at(2, 1) = F3->one();
  CHECK(spin(F3, 3, {e1}, {J}) == Subspace::full(F3, 3));
}

TEST_CASE("spin is monotone, idempotent, and operator-invariant") {
  std::mt19937_64 rng(23);
  const FieldCtx* K = FieldCtx::get(2, 1);
  for (int iter = 0; iter < 80; ++iter) {
    std::size_t n = 1 + rng() % 5;
    std::vector<Matrix> ops;
    for (std::size_t i = 0; i < 1 + rng() % 3; ++i) ops.push_back(random_matrix(K, n, n, rng));
    std::vector<std::vector<FieldElem>> gens;
    for (std::size_t i = 0; i < 1 + rng() % 2; ++i) gens.push_back(random_vector(K, n, rng));
    Subspace s = spin(K, n, gens, ops);
    for (const std::vector<FieldElem>& g : gens) CHECK(s.contains(g));
    for (const Matrix& op : ops)
      for (std::size_t i = 0; i < s.dim(); ++i) CHECK(s.contains((op * s.basis_vector(i))));
    // idempotent: spinning the result's basis adds nothing
    std::vector<std::vector<FieldElem>> basis;
    for (std::size_t i = 0; i < s.dim(); ++i) basis.push_back(s.basis_vector(i));
    CHECK(spin(K, n, basis, ops) == s);
  }
}

TEST_CASE("restrict and quotient actions on pinned examples") {
  const FieldCtx* F3 = FieldCtx::get(3, 1);
  std::mt19937_64 rng(29);
  Matrix M = random_matrix(F3, 3, 3, rng);
  CHECK(quotient_action(M, Subspace::zero(F3, 3)) == M);
  Matrix q = quotient_action(M, Subspace::full(F3, 3));
  CHECK(q.rows() == 0);
  CHECK(q.cols() == 0);

  // Upper triangular [[a,b],[0,d]] with U = span(e_1): restriction [a],
  // quotient [d].
  Matrix T(F3, 2, 2);
  T.at(0, 0) = F3->from_prime(2);
  T.at(0, 1) = F3->one();
  T.at(1, 1) = F3->from_prime(1);
  Subspace U = Subspace::span(F3, 2, {{F3->one(), F3->zero()}});
  Matrix R = restrict_action(T, U);
  REQUIRE(R.rows() == 1);
  CHECK(R.at(0, 0) == F3->from_prime(2));
  Matrix Q = quotient_action(T, U);
  REQUIRE(Q.rows() == 1);
  CHECK(Q.at(0, 0) == F3->from_prime(1));
}

TEST_CASE("restrict and quotient commute with inclusion and projection") {
  std::mt19937_64 rng(31);
  const FieldCtx* K = FieldCtx::get(3, 1);
  int checked = 0;
  for (int iter = 0; iter < 300 && checked < 60; ++iter) {
    std::size_t n = 2 + rng() % 4;
    Matrix M = random_matrix(K, n, n, rng);
    // invariant subspace: spin a random vector under M
    Subspace U = spin(K, n, {random_vector(K, n, rng)}, {M});
    if (U.dim() == 0 || U.dim() == n) continue;
    ++checked;
    Matrix R = restrict_action(M, U);
    for (std::size_t i = 0; i < U.dim(); ++i) {
      std::vector<FieldElem> lhs = (M * U.basis_vector(i));
      std::vector<FieldElem> c(U.dim(), K->zero());
      for (std::size_t j = 0; j < U.dim(); ++j) c[j] = R.at(j, i);
      std::vector<FieldElem> rhs(n, K->zero());
      for (std::size_t j = 0; j < U.dim(); ++j) {
        std::vector<FieldElem> b = U.basis_vector(j);
        for (std::size_t t = 0; t < n; ++t) rhs[t] += c[j] * b[t];
      }
      CHECK(lhs == rhs);
    }
    Matrix Q = quotient_action(M, U);
    for (int k = 0; k < 5; ++k) {
      std::vector<FieldElem> v = random_vector(K, n, rng);
      CHECK((Q * quotient_coords(U, v)) == quotient_coords(U, (M * v)));
    }
    // lift is a section of the projection
    std::vector<FieldElem> qc = quotient_coords(U, random_vector(K, n, rng));
    CHECK(quotient_coords(U, quotient_lift(U, qc)) == qc);
  }
  CHECK(checked >= 30);
}

TEST_CASE("non-invariant subspaces are rejected") {
  const FieldCtx* F2 = FieldCtx::get(2, 1);
  // J swaps the two coordinates; span(e_1) is not invariant.
  Matrix J(F2, 2, 2);
  J.at(0, 1) = F2->one();
  J.at(1, 0) = F2->one();
  Subspace U = Subspace::span(F2, 2, {{F2->one(), F2->zero()}});
  CHECK_THROWS_AS(restrict_action(J, U), std::domain_error);
  CHECK_THROWS_AS(quotient_action(J, U), std::domain_error);
}

TEST_CASE("matrix utilities") {
  const FieldCtx* F5 = FieldCtx::get(5, 1);
  std::mt19937_64 rng(37);
  Matrix A = random_matrix(F5, 3, 3, rng);
  CHECK(A.pow(0) == Matrix::identity(F5, 3));
  CHECK(A.pow(3) == A * A * A);
  CHECK(A.transpose().transpose() == A);
  CHECK((A - A).is_zero());
  CHECK(F5->from_prime(2) * A == A + A);

  const Embedding& e = canonical_embedding(FieldCtx::get(5, 1), FieldCtx::get(5, 2));
  Matrix Ae = A.embedded(e);
  CHECK(Ae.ctx() == FieldCtx::get(5, 2));
  Matrix B = random_matrix(F5, 3, 3, rng);
  CHECK((A * B).embedded(e) == Ae * B.embedded(e));
}

TEST_CASE("kronecker product") {
  const FieldCtx* F3 = FieldCtx::get(3, 1);
  // Pinned 2x2 example: rows of the product are a(i,j)*B laid out in blocks.
  Matrix A(F3, 2, 2), B(F3, 2, 2);
  A.at(0, 0) = F3->from_prime(1);
  A.at(0, 1) = F3->from_prime(2);
  A.at(1, 1) = F3->from_prime(1);
  B.at(0, 0) = F3->from_prime(1);
  B.at(1, 0) = F3->from_prime(2);
  B.at(1, 1) = F3->from_prime(1);
  Matrix K = kron(A, B);
  REQUIRE(K.rows() == 4);
  int want[4][4] = {{1, 0, 2, 0}, {2, 1, 1, 2}, {0, 0, 1, 0}, {0, 0, 2, 1}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(K.at(i, j) == F3->from_prime(want[i][j]));

  // Mixed product: (A⊗B)(C⊗D) = AC ⊗ BD, and identity ⊗ identity = identity.
  std::mt19937_64 rng(404);
  for (const FieldCtx* Kctx : {FieldCtx::get(2, 1), FieldCtx::get(3, 1), FieldCtx::get(2, 2)}) {
    for (int t = 0; t < 10; ++t) {
      Matrix a = random_matrix(Kctx, 2, 3, rng), b = random_matrix(Kctx, 3, 2, rng);
      Matrix c = random_matrix(Kctx, 3, 2, rng), d = random_matrix(Kctx, 2, 3, rng);
      CHECK(kron(a, b) * kron(c, d) == kron(a * c, b * d));
    }
    CHECK(kron(Matrix::identity(Kctx, 2), Matrix::identity(Kctx, 3)) ==
          Matrix::identity(Kctx, 6));
  }
}

TEST_CASE("linear solve") {
  const FieldCtx* F3 = FieldCtx::get(3, 1);
  // Pinned: [[1,2],[2,1]] x = (0,0) has only 0 in the image sense; use b=(2,1):
  // x = (0,1) since 2*1=2, 1*1=1.
  Matrix A(F3, 2, 2);
  A.at(0, 0) = F3->from_prime(1);
  A.at(0, 1) = F3->from_prime(2);
  A.at(1, 0) = F3->from_prime(2);
  A.at(1, 1) = F3->from_prime(1);
  auto x = solve(A, {F3->from_prime(2), F3->from_prime(1)});
  REQUIRE(x.has_value());
  CHECK((A * *x) == std::vector<FieldElem>{F3->from_prime(2), F3->from_prime(1)});

  // Inconsistent: rank-1 matrix, rhs outside the column space.
  Matrix R(F3, 2, 2);
  R.at(0, 0) = F3->from_prime(1);
  R.at(1, 0) = F3->from_prime(2);
  CHECK(!solve(R, {F3->from_prime(1), F3->from_prime(1)}).has_value());

  // Property: A*solve(A, A*v) = A*v on randoms (solution may differ from v).
  std::mt19937_64 rng(405);
  for (const FieldCtx* K : {FieldCtx::get(2, 1), FieldCtx::get(5, 1), FieldCtx::get(3, 2)}) {
    for (int t = 0; t < 25; ++t) {
      Matrix M = random_matrix(K, 4, 3, rng);
      auto v = random_vector(K, 3, rng);
      auto b = M * v;
      auto s = solve(M, b);
      REQUIRE(s.has_value());
      CHECK(M * *s == b);
    }
  }
}
