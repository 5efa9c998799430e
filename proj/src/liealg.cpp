#include "modlie/liealg.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace modlie {

namespace {

std::vector<FieldElem> zero_vec(const FieldCtx* K, std::size_t n) {
  return std::vector<FieldElem>(n, K->zero());
}

bool vec_is_zero(const std::vector<FieldElem>& v) {
  for (const FieldElem& x : v)
    if (!x.is_zero()) return false;
  return true;
}

std::vector<FieldElem> flatten(const Matrix& M) {
  std::vector<FieldElem> v;
  v.reserve(M.rows() * M.cols());
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j) v.push_back(M.at(i, j));
  return v;
}

Matrix unflatten(const FieldCtx* K, std::size_t n, const std::vector<FieldElem>& v) {
  Matrix M(K, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) M.at(i, j) = v[i * n + j];
  return M;
}

Matrix commutator(const Matrix& A, const Matrix& B) { return A * B - B * A; }

}  // namespace

// ---------------------------------------------------------------------
// LieAlgebra
// ---------------------------------------------------------------------

void LieAlgebra::set_bracket(std::size_t i, std::size_t j, const std::vector<FieldElem>& value) {
  if (i == j) throw std::invalid_argument("set_bracket: [e_i, e_i] is fixed at zero");
  if (value.size() != n_) throw std::invalid_argument("set_bracket: value length mismatch");
  for (std::size_t k = 0; k < n_; ++k) {
    c_[(i * n_ + j) * n_ + k] = value[k];
    c_[(j * n_ + i) * n_ + k] = -value[k];
  }
}

std::vector<FieldElem> LieAlgebra::bracket(const std::vector<FieldElem>& x,
                                           const std::vector<FieldElem>& y) const {
  if (x.size() != n_ || y.size() != n_) throw std::invalid_argument("bracket: length mismatch");
  std::vector<FieldElem> r = zero_vec(ctx_, n_);
  for (std::size_t i = 0; i < n_; ++i) {
    if (x[i].is_zero()) continue;
    for (std::size_t j = 0; j < n_; ++j) {
      if (y[j].is_zero()) continue;
      const FieldElem s = x[i] * y[j];
      for (std::size_t k = 0; k < n_; ++k) {
        const FieldElem& cc = c(i, j, k);
        if (!cc.is_zero()) r[k] += s * cc;
      }
    }
  }
  return r;
}

Matrix LieAlgebra::ad_basis(std::size_t i) const {
  Matrix m(ctx_, n_, n_);
  for (std::size_t j = 0; j < n_; ++j)
    for (std::size_t k = 0; k < n_; ++k) m.at(k, j) = c(i, j, k);
  return m;
}

Matrix LieAlgebra::ad(const std::vector<FieldElem>& x) const {
  Matrix m(ctx_, n_, n_);
  for (std::size_t i = 0; i < n_; ++i) {
    if (x[i].is_zero()) continue;
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t k = 0; k < n_; ++k) {
        const FieldElem& cc = c(i, j, k);
        if (!cc.is_zero()) m.at(k, j) += x[i] * cc;
      }
  }
  return m;
}

LieAlgebra LieAlgebra::embedded(const Embedding& emb) const {
  if (emb.source() != ctx_) throw std::invalid_argument("embedding source mismatch");
  LieAlgebra out(emb.target(), n_);
  for (std::size_t i = 0; i < c_.size(); ++i) out.c_[i] = emb(c_[i]);
  return out;
}

bool operator==(const LieAlgebra& a, const LieAlgebra& b) {
  return a.ctx_ == b.ctx_ && a.n_ == b.n_ && a.c_ == b.c_;
}

// ---------------------------------------------------------------------
// RestrictedLieAlgebra
// ---------------------------------------------------------------------

RestrictedLieAlgebra::RestrictedLieAlgebra(LieAlgebra alg,
                                           std::vector<std::vector<FieldElem>> imgs, bool has)
    : alg_(std::move(alg)), pimg_(std::move(imgs)), has_pmap_(has) {}

RestrictedLieAlgebra::RestrictedLieAlgebra(LieAlgebra alg,
                                           std::vector<std::vector<FieldElem>> pmap_images)
    : RestrictedLieAlgebra(std::move(alg), std::move(pmap_images), true) {
  if (pimg_.size() != alg_.dim()) throw std::invalid_argument("p-map image count mismatch");
  for (const auto& v : pimg_)
    if (v.size() != alg_.dim()) throw std::invalid_argument("p-map image length mismatch");
}

RestrictedLieAlgebra RestrictedLieAlgebra::without_pmap(LieAlgebra alg) {
  return RestrictedLieAlgebra(std::move(alg), {}, false);
}

const std::vector<FieldElem>& RestrictedLieAlgebra::pmap_image(std::size_t i) const {
  if (!has_pmap_) throw std::logic_error("algebra carries no p-map");
  return pimg_[i];
}

std::vector<FieldElem> RestrictedLieAlgebra::pmap(const std::vector<FieldElem>& x) const {
  if (!has_pmap_) throw std::logic_error("algebra carries no p-map");
  const std::size_t n = alg_.dim();
  if (x.size() != n) throw std::invalid_argument("pmap: length mismatch");
  const FieldCtx* K = ctx();
  const uint32_t p = K->p();
  std::vector<FieldElem> acc_vec, acc_p;
  bool started = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i].is_zero()) continue;
    std::vector<FieldElem> term_vec = zero_vec(K, n);
    term_vec[i] = x[i];
    std::vector<FieldElem> term_p = zero_vec(K, n);
    const FieldElem lp = x[i].pow(p);
    for (std::size_t k = 0; k < n; ++k) term_p[k] = lp * pimg_[i][k];
    if (!started) {
      acc_vec = std::move(term_vec);
      acc_p = std::move(term_p);
      started = true;
      continue;
    }
    std::vector<FieldElem> corr = jacobson_sum(alg_, acc_vec, term_vec);
    for (std::size_t k = 0; k < n; ++k) acc_p[k] += term_p[k] + corr[k];
    for (std::size_t k = 0; k < n; ++k) acc_vec[k] += term_vec[k];
  }
  if (!started) return zero_vec(K, n);
  return acc_p;
}

RestrictedLieAlgebra RestrictedLieAlgebra::embedded(const Embedding& emb) const {
  LieAlgebra a = alg_.embedded(emb);
  if (!has_pmap_) return without_pmap(std::move(a));
  std::vector<std::vector<FieldElem>> imgs(pimg_.size());
  for (std::size_t i = 0; i < pimg_.size(); ++i) {
    imgs[i].reserve(pimg_[i].size());
    for (const FieldElem& x : pimg_[i]) imgs[i].push_back(emb(x));
  }
  return RestrictedLieAlgebra(std::move(a), std::move(imgs));
}

bool operator==(const RestrictedLieAlgebra& a, const RestrictedLieAlgebra& b) {
  return a.alg_ == b.alg_ && a.has_pmap_ == b.has_pmap_ && a.pimg_ == b.pimg_;
}

// ---------------------------------------------------------------------
// Subalgebra handles
// ---------------------------------------------------------------------

bool is_bracket_closed(const LieAlgebra& A, const Subspace& U) {
  for (std::size_t i = 0; i < U.dim(); ++i)
    for (std::size_t j = i + 1; j < U.dim(); ++j)
      if (!U.contains(A.bracket(U.basis_vector(i), U.basis_vector(j)))) return false;
  return true;
}

Subalgebra make_subalgebra(std::shared_ptr<const RestrictedLieAlgebra> parent, Subspace space) {
  if (!parent) throw std::invalid_argument("subalgebra: null parent");
  if (space.ambient_dim() != parent->dim())
    throw std::invalid_argument("subalgebra: ambient dimension mismatch");
  if (!is_bracket_closed(parent->alg(), space))
    throw std::invalid_argument("subalgebra: subspace is not bracket-closed");
  return Subalgebra{std::move(parent), std::move(space)};
}

// ---------------------------------------------------------------------
// Axiom verification
// ---------------------------------------------------------------------

VerifyReport verify_lie(const LieAlgebra& A) {
  VerifyReport rep;
  const std::size_t n = A.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (!A.c(i, i, k).is_zero()) {
        rep.push_back({"alternating", {i}, "[e_i, e_i] != 0"});
        break;
      }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (A.c(i, j, k) + A.c(j, i, k) != A.ctx()->zero()) {
          rep.push_back({"antisymmetry", {i, j}, "c(i,j,.) != -c(j,i,.)"});
          break;
        }
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<FieldElem> ei = zero_vec(A.ctx(), n);
    ei[i] = A.ctx()->one();
    for (std::size_t j = i + 1; j < n; ++j) {
      std::vector<FieldElem> ej = zero_vec(A.ctx(), n);
      ej[j] = A.ctx()->one();
      for (std::size_t k = j + 1; k < n; ++k) {
        std::vector<FieldElem> ek = zero_vec(A.ctx(), n);
        ek[k] = A.ctx()->one();
        std::vector<FieldElem> s = A.bracket(ei, A.bracket(ej, ek));
        std::vector<FieldElem> t = A.bracket(ej, A.bracket(ek, ei));
        std::vector<FieldElem> u = A.bracket(ek, A.bracket(ei, ej));
        bool ok = true;
        for (std::size_t d = 0; d < n && ok; ++d) ok = (s[d] + t[d] + u[d]).is_zero();
        if (!ok) rep.push_back({"jacobi", {i, j, k}, "jacobi identity fails"});
      }
    }
  }
  return rep;
}

VerifyReport verify_pmap(const RestrictedLieAlgebra& L) {
  VerifyReport rep;
  if (!L.has_pmap()) {
    rep.push_back({"pmap-missing", {}, "algebra carries no p-map"});
    return rep;
  }
  const LieAlgebra& A = L.alg();
  const std::size_t n = A.dim();
  const FieldCtx* K = A.ctx();
  const uint32_t p = K->p();
  for (std::size_t i = 0; i < n; ++i) {
    if (A.ad(L.pmap_image(i)) != A.ad_basis(i).pow(p))
      rep.push_back({"pmap-adjoint", {i}, "ad(e_i^[p]) != ad(e_i)^p"});
  }
  // Semilinearity: evaluate the p-map at lambda*e_i and compare against
  // lambda^p e_i^[p], also confirming the value is restricted.
  const uint64_t sample = std::min<uint64_t>(K->order(), 9);
  for (std::size_t i = 0; i < n; ++i) {
    for (uint64_t s = 0; s < sample; ++s) {
      const FieldElem lam = K->from_index(s);
      std::vector<FieldElem> x = zero_vec(K, n);
      x[i] = lam;
      std::vector<FieldElem> z = L.pmap(x);
      std::vector<FieldElem> want = zero_vec(K, n);
      const FieldElem lp = lam.pow(p);
      for (std::size_t k = 0; k < n; ++k) want[k] = lp * L.pmap_image(i)[k];
      if (z != want || A.ad(z) != A.ad(x).pow(p)) {
        rep.push_back({"pmap-semilinear", {i}, "(lambda e_i)^[p] != lambda^p e_i^[p]"});
        break;
      }
    }
  }
  // Jacobson additivity: the folded value at e_i + e_j must itself satisfy
  // ad((e_i+e_j)^[p]) = ad(e_i+e_j)^p.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      std::vector<FieldElem> x = zero_vec(K, n);
      x[i] = K->one();
      x[j] = K->one();
      std::vector<FieldElem> z = L.pmap(x);
      if (A.ad(z) != A.ad(x).pow(p))
        rep.push_back({"pmap-additivity", {i, j}, "ad((e_i+e_j)^[p]) != ad(e_i+e_j)^p"});
    }
  return rep;
}

std::vector<FieldElem> jacobson_sum(const LieAlgebra& A, const std::vector<FieldElem>& x,
                                    const std::vector<FieldElem>& y) {
  const FieldCtx* K = A.ctx();
  const uint32_t p = K->p();
  const std::size_t n = A.dim();
  if (p == 2) return A.bracket(y, x);
  const Matrix adx = A.ad(x), ady = A.ad(y);
  // v(t) = ad(tx+y)^(p-1) applied to x, kept as t-coefficient vectors.
  std::vector<std::vector<FieldElem>> v(p, zero_vec(K, n));
  v[0] = x;
  for (uint32_t step = 0; step < p - 1; ++step) {
    std::vector<std::vector<FieldElem>> next(p, zero_vec(K, n));
    for (uint32_t d = 0; d < p; ++d) {
      std::vector<FieldElem> a = (ady * v[d]);
      for (std::size_t k = 0; k < n; ++k) next[d][k] += a[k];
      if (d + 1 < p) {
        std::vector<FieldElem> b = (adx * v[d]);
        for (std::size_t k = 0; k < n; ++k) next[d + 1][k] += b[k];
      }
    }
    v = std::move(next);
  }
  std::vector<FieldElem> s = zero_vec(K, n);
  for (uint32_t i = 1; i <= p - 1; ++i) {
    const FieldElem inv_i = K->from_prime(i).inverse();
    for (std::size_t k = 0; k < n; ++k) s[k] += inv_i * v[i - 1][k];
  }
  return s;
}

// ---------------------------------------------------------------------
// Centre, series, subnormality
// ---------------------------------------------------------------------

Subspace centre(const LieAlgebra& A) {
  const std::size_t n = A.dim();
  Subspace z = Subspace::full(A.ctx(), n);
  for (std::size_t i = 0; i < n; ++i) z = intersect(z, kernel(A.ad_basis(i)));
  return z;
}

Subspace bracket_span(const LieAlgebra& A, const Subspace& U, const Subspace& V) {
  std::vector<std::vector<FieldElem>> gens;
  for (std::size_t i = 0; i < U.dim(); ++i)
    for (std::size_t j = 0; j < V.dim(); ++j)
      gens.push_back(A.bracket(U.basis_vector(i), V.basis_vector(j)));
  return Subspace::span(A.ctx(), A.dim(), gens);
}

std::vector<Subspace> lower_central_series(const LieAlgebra& A, const Subspace& S) {
  std::vector<Subspace> chain = {S};
  for (;;) {
    Subspace next = bracket_span(A, S, chain.back());
    if (next == chain.back()) break;
    chain.push_back(next);
    if (next.dim() == 0) break;
  }
  return chain;
}

std::vector<Subspace> derived_series(const LieAlgebra& A, const Subspace& S) {
  std::vector<Subspace> chain = {S};
  for (;;) {
    Subspace next = bracket_span(A, chain.back(), chain.back());
    if (next == chain.back()) break;
    chain.push_back(next);
    if (next.dim() == 0) break;
  }
  return chain;
}

bool is_nilpotent(const LieAlgebra& A, const Subspace& S) {
  return lower_central_series(A, S).back().dim() == 0;
}

bool is_soluble(const LieAlgebra& A, const Subspace& S) {
  return derived_series(A, S).back().dim() == 0;
}

Subspace ideal_closure(const LieAlgebra& A, const Subspace& S, const Subspace& M) {
  if (!M.contains(S)) throw std::invalid_argument("ideal_closure: S not inside M");
  Subspace U = S;
  for (;;) {
    Subspace next = sum(U, bracket_span(A, M, U));
    if (next == U) return U;
    U = next;
  }
}

SubnormalChain is_subnormal(const LieAlgebra& A, const Subspace& S) {
  SubnormalChain res;
  res.chain.push_back(Subspace::full(A.ctx(), A.dim()));
  for (std::size_t step = 0; step <= A.dim(); ++step) {
    if (res.chain.back() == S) {
      res.subnormal = true;
      return res;
    }
    Subspace next = ideal_closure(A, S, res.chain.back());
    if (next == res.chain.back()) break;  // stabilized above S
    res.chain.push_back(next);
  }
  res.subnormal = (res.chain.back() == S);
  return res;
}

// ---------------------------------------------------------------------
// Matrix p-closure and p-envelopes
// ---------------------------------------------------------------------

PClosure matrix_p_closure(const std::vector<Matrix>& generators) {
  if (generators.empty()) throw std::invalid_argument("p-closure: no generators");
  const FieldCtx* K = generators[0].ctx();
  const std::size_t n = generators[0].rows();
  const uint32_t p = K->p();
  for (const Matrix& g : generators)
    if (g.ctx() != K || g.rows() != n || g.cols() != n)
      throw std::invalid_argument("p-closure: generator shape mismatch");

  EchelonBasis ech(K, n * n);
  std::vector<Matrix> pool;
  std::deque<std::size_t> work;
  auto offer = [&](const Matrix& M) {
    if (ech.insert(flatten(M))) {
      pool.push_back(M);
      work.push_back(pool.size() - 1);
    }
  };
  for (const Matrix& g : generators) offer(g);
  while (!work.empty()) {
    const std::size_t idx = work.front();
    work.pop_front();
    offer(pool[idx].pow(p));
    for (std::size_t j = 0; j < pool.size(); ++j) offer(commutator(pool[idx], pool[j]));
  }

  Subspace span = ech.to_subspace();
  const std::size_t d = span.dim();
  std::vector<Matrix> basis;
  for (std::size_t i = 0; i < d; ++i) basis.push_back(unflatten(K, n, span.basis_vector(i)));

  LieAlgebra alg(K, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      alg.set_bracket(i, j, span.coords(flatten(commutator(basis[i], basis[j]))));
  std::vector<std::vector<FieldElem>> pimg;
  for (std::size_t i = 0; i < d; ++i) pimg.push_back(span.coords(flatten(basis[i].pow(p))));
  return PClosure{RestrictedLieAlgebra(std::move(alg), std::move(pimg)), std::move(basis)};
}

PEnvelope p_envelope(const LieAlgebra& S) {
  if (centre(S).dim() != 0)
    throw std::invalid_argument(
        "p_envelope: adjoint route needs trivial centre; supply a faithful representation");
  std::vector<Matrix> ads;
  for (std::size_t i = 0; i < S.dim(); ++i) ads.push_back(S.ad_basis(i));
  return p_envelope(S, ads);
}

PEnvelope p_envelope(const LieAlgebra& S, const std::vector<Matrix>& faithful) {
  if (faithful.size() != S.dim())
    throw std::invalid_argument("p_envelope: one matrix per basis vector required");
  if (S.dim() == 0) throw std::invalid_argument("p_envelope: zero algebra");
  const FieldCtx* K = S.ctx();
  const std::size_t m = faithful[0].rows();

  // Faithfulness: images linearly independent.
  EchelonBasis indep(K, m * m);
  for (const Matrix& f : faithful)
    if (f.ctx() != K || !indep.insert(flatten(f)))
      throw std::invalid_argument("p_envelope: representation is not faithful");
  // Homomorphism: [f_i, f_j] matches the structure constants.
  for (std::size_t i = 0; i < S.dim(); ++i)
    for (std::size_t j = i + 1; j < S.dim(); ++j) {
      Matrix want(K, m, m);
      for (std::size_t k = 0; k < S.dim(); ++k) {
        const FieldElem& cc = S.c(i, j, k);
        if (!cc.is_zero()) want = want + cc * faithful[k];
      }
      if (commutator(faithful[i], faithful[j]) != want)
        throw std::invalid_argument("p_envelope: matrices do not represent the brackets");
    }

  PClosure closure = matrix_p_closure(faithful);
  const std::size_t d = closure.algebra.dim();

  // S-basis images in envelope coordinates.
  EchelonBasis env_span(K, m * m);
  for (const Matrix& b : closure.basis_matrices) env_span.insert(flatten(b));
  Subspace env = env_span.to_subspace();
  Matrix s_emb(K, d, S.dim());
  std::vector<std::vector<FieldElem>> s_rows;
  for (std::size_t i = 0; i < S.dim(); ++i) {
    std::vector<FieldElem> co = env.coords(flatten(faithful[i]));
    for (std::size_t k = 0; k < d; ++k) s_emb.at(k, i) = co[k];
    s_rows.push_back(std::move(co));
  }
  Subspace s_image = Subspace::span(K, d, s_rows);

  const Subspace full = Subspace::full(K, d);
  if (!s_image.contains(bracket_span(closure.algebra.alg(), full, s_image)))
    throw std::logic_error("p_envelope: embedded subalgebra is not an ideal");
  if (!s_image.contains(bracket_span(closure.algebra.alg(), full, full)))
    throw std::logic_error("p_envelope: derived algebra escapes the embedded subalgebra");

  return PEnvelope{std::move(closure.algebra), std::move(closure.basis_matrices),
                   std::move(s_emb), std::move(s_image)};
}

// ---------------------------------------------------------------------
// Centre-kill adjustment
// ---------------------------------------------------------------------

RestrictedLieAlgebra adjust_pmap_centre_kill(const RestrictedLieAlgebra& L) {
  const LieAlgebra& A = L.alg();
  const FieldCtx* K = A.ctx();
  const std::size_t n = A.dim();
  const uint32_t p = K->p();
  const Subspace Z = centre(A);

  // phi(x) = sum_i a_i^p z_i^[p] where a_i are the centre coordinates of x
  // in the basis adapted to centre + complement (complement = non-pivot
  // coordinates, where phi vanishes).
  std::vector<std::vector<FieldElem>> zp;
  for (std::size_t i = 0; i < Z.dim(); ++i) zp.push_back(L.pmap(Z.basis_vector(i)));

  auto phi = [&](const std::vector<FieldElem>& x) {
    std::vector<FieldElem> rem = Z.reduce(x);
    std::vector<FieldElem> in_z(n, K->zero());
    for (std::size_t k = 0; k < n; ++k) in_z[k] = x[k] - rem[k];
    std::vector<FieldElem> a = Z.coords(in_z);
    std::vector<FieldElem> out(n, K->zero());
    for (std::size_t i = 0; i < Z.dim(); ++i) {
      const FieldElem ap = a[i].pow(p);
      if (ap.is_zero()) continue;
      for (std::size_t k = 0; k < n; ++k) out[k] += ap * zp[i][k];
    }
    return out;
  };

  std::vector<std::vector<FieldElem>> imgs;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<FieldElem> ej(n, K->zero());
    ej[j] = K->one();
    std::vector<FieldElem> img = L.pmap_image(j);
    std::vector<FieldElem> ph = phi(ej);
    for (std::size_t k = 0; k < n; ++k) img[k] -= ph[k];
    imgs.push_back(std::move(img));
  }
  RestrictedLieAlgebra out(A, std::move(imgs));

  if (!verify_pmap(out).empty())
    throw std::logic_error("centre-kill adjustment produced an invalid p-map");
  for (std::size_t i = 0; i < Z.dim(); ++i)
    if (!vec_is_zero(out.pmap(Z.basis_vector(i))))
      throw std::logic_error("centre-kill adjustment left a central element with z^[p] != 0");
  return out;
}

}  // namespace modlie
