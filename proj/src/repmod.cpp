#include "modlie/repmod.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

#include "modlie/limits.hpp"

namespace modlie {

namespace {

std::vector<FieldElem> zero_vec(const FieldCtx* K, std::size_t n) {
  return std::vector<FieldElem>(n, K->zero());
}

// q^d saturating at a ceiling; used for enumeration budgets.
uint64_t sat_pow(uint64_t q, std::size_t d, uint64_t cap) {
  uint64_t r = 1;
  for (std::size_t i = 0; i < d; ++i) {
    if (r > cap / q) return cap + 1;
    r *= q;
  }
  return r;
}

Matrix eval_poly(const std::vector<FieldElem>& f, const Matrix& w) {
  const FieldCtx* K = w.ctx();
  Matrix acc(K, w.rows(), w.cols());
  for (std::size_t i = f.size(); i-- > 0;) {
    acc = acc * w;
    if (!f[i].is_zero()) acc = acc + f[i] * Matrix::identity(K, w.rows());
  }
  return acc;
}

// Minimal monic f with f(w)v = 0; divides the minimal polynomial of w.
std::vector<FieldElem> krylov_minpoly(const Matrix& w, const std::vector<FieldElem>& v) {
  const FieldCtx* K = w.ctx();
  const std::size_t d = w.rows();
  std::vector<std::vector<FieldElem>> pow = {v};
  for (std::size_t k = 1; k <= d; ++k) {
    pow.push_back(w * pow.back());
    Matrix A(K, d, k);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < k; ++j) A.at(i, j) = pow[j][i];
    if (auto lam = solve(A, pow[k])) {
      std::vector<FieldElem> f(k + 1, K->zero());
      for (std::size_t j = 0; j < k; ++j) f[j] = -(*lam)[j];
      f[k] = K->one();
      return f;
    }
  }
  throw std::logic_error("krylov_minpoly: no dependency within the dimension");
}

// A monic proper divisor of the monic polynomial f, or empty when none is
// found (f irreducible, or an equal-degree cluster this routine skips).
std::vector<FieldElem> proper_factor(const FieldCtx* K, const std::vector<FieldElem>& f) {
  const std::size_t deg = f.size() - 1;
  if (deg <= 1) return {};
  std::vector<FieldElem> rts = roots_over(K, f);
  if (!rts.empty()) return {-rts[0], K->one()};
  std::vector<FieldElem> h = {K->zero(), K->one()};
  for (std::size_t d = 2; d < deg; ++d) {
    h = poly_powmod(K, std::move(h), K->order(), f);
    std::vector<FieldElem> diff = h;
    diff.resize(std::max<std::size_t>(diff.size(), 2), K->zero());
    diff[1] -= K->one();
    std::vector<FieldElem> g = poly_gcd(K, std::move(diff), f);
    if (g.size() >= 2 && g.size() <= deg) return g;
  }
  return {};
}

// Enumerates canonical line representatives of U (first nonzero coordinate
// equal to one) into ambient vectors. Count is (q^dim - 1)/(q - 1).
std::vector<std::vector<FieldElem>> line_reps(const Subspace& U) {
  const FieldCtx* K = U.ctx();
  const uint64_t q = K->order();
  const std::size_t c = U.dim();
  std::vector<std::vector<FieldElem>> out;
  for (std::size_t f = 0; f < c; ++f) {
    const std::size_t free_digits = c - 1 - f;
    const uint64_t total = sat_pow(q, free_digits, uint64_t(1) << 62);
    for (uint64_t t = 0; t < total; ++t) {
      std::vector<FieldElem> coords(c, K->zero());
      coords[f] = K->one();
      uint64_t r = t;
      for (std::size_t j = f + 1; j < c; ++j) {
        coords[j] = K->from_index(r % q);
        r /= q;
      }
      std::vector<FieldElem> amb = zero_vec(K, U.ambient_dim());
      for (std::size_t j = 0; j < c; ++j) {
        if (coords[j].is_zero()) continue;
        std::vector<FieldElem> b = U.basis_vector(j);
        for (std::size_t i = 0; i < amb.size(); ++i) amb[i] += coords[j] * b[i];
      }
      out.push_back(std::move(amb));
    }
  }
  return out;
}

uint64_t line_count(uint64_t q, std::size_t c) {
  uint64_t total = 0;
  for (std::size_t f = 0; f < c; ++f) {
    uint64_t block = sat_pow(q, c - 1 - f, uint64_t(1) << 32);
    if (total > (uint64_t(1) << 32) - block) return uint64_t(1) << 32;
    total += block;
  }
  return total;
}

}  // namespace

// ---------------------------------------------------------------------
// LModule
// ---------------------------------------------------------------------

LModule::LModule(AlgebraPtr algebra, std::size_t dim, std::vector<Matrix> action)
    : alg_(std::move(algebra)), dim_(dim), act_(std::move(action)) {
  if (!alg_) throw std::invalid_argument("module: null algebra");
  if (dim_ > limits::max_module_dim()) {
    std::ostringstream os;
    os << "module dimension " << dim_ << " exceeds the cap " << limits::max_module_dim();
    throw CapExceeded(os.str());
  }
  if (act_.size() != alg_->dim())
    throw std::invalid_argument("module: one action matrix per algebra basis vector required");
  for (const Matrix& m : act_)
    if (m.ctx() != alg_->ctx() || m.rows() != dim_ || m.cols() != dim_)
      throw std::invalid_argument("module: action matrix shape mismatch");
}

Matrix LModule::act(const std::vector<FieldElem>& x) const {
  if (x.size() != alg_->dim()) throw std::invalid_argument("act: coordinate length mismatch");
  Matrix m(ctx(), dim_, dim_);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!x[i].is_zero()) m = m + x[i] * act_[i];
  return m;
}

bool operator==(const LModule& a, const LModule& b) {
  return a.dim_ == b.dim_ && *a.alg_ == *b.alg_ && a.act_ == b.act_;
}

LModule trivial_module(AlgebraPtr algebra, std::size_t dim) {
  const FieldCtx* K = algebra->ctx();
  std::vector<Matrix> acts(algebra->dim(), Matrix(K, dim, dim));
  return LModule(std::move(algebra), dim, std::move(acts));
}

bool same_algebra(const LModule& a, const LModule& b) {
  return a.algebra_ptr() == b.algebra_ptr() || a.algebra() == b.algebra();
}

VerifyReport verify_module(const LModule& M) {
  VerifyReport rep;
  const LieAlgebra& A = M.algebra().alg();
  for (std::size_t i = 0; i < A.dim(); ++i)
    for (std::size_t j = i + 1; j < A.dim(); ++j) {
      std::vector<FieldElem> br(A.dim(), A.ctx()->zero());
      for (std::size_t k = 0; k < A.dim(); ++k) br[k] = A.c(i, j, k);
      Matrix lhs = M.act(br);
      Matrix rhs = M.action(i) * M.action(j) - M.action(j) * M.action(i);
      if (lhs != rhs)
        rep.push_back({"module-bracket", {i, j}, "rho([e_i,e_j]) != [rho(e_i),rho(e_j)]"});
    }
  return rep;
}

bool is_restricted_module(const LModule& M) {
  const RestrictedLieAlgebra& L = M.algebra();
  if (!L.has_pmap()) throw std::logic_error("is_restricted_module: algebra carries no p-map");
  const uint32_t p = L.ctx()->p();
  for (std::size_t i = 0; i < L.dim(); ++i)
    if (M.action(i).pow(p) != M.act(L.pmap_image(i))) return false;
  return true;
}

// ---------------------------------------------------------------------
// Constructions
// ---------------------------------------------------------------------

LModule direct_sum(const LModule& a, const LModule& b) {
  if (!same_algebra(a, b)) throw std::invalid_argument("direct_sum: algebra mismatch");
  const FieldCtx* K = a.ctx();
  const std::size_t da = a.dim(), db = b.dim();
  std::vector<Matrix> acts;
  for (std::size_t i = 0; i < a.algebra().dim(); ++i) {
    Matrix m(K, da + db, da + db);
    for (std::size_t r = 0; r < da; ++r)
      for (std::size_t c = 0; c < da; ++c) m.at(r, c) = a.action(i).at(r, c);
    for (std::size_t r = 0; r < db; ++r)
      for (std::size_t c = 0; c < db; ++c) m.at(da + r, da + c) = b.action(i).at(r, c);
    acts.push_back(std::move(m));
  }
  return LModule(a.algebra_ptr(), da + db, std::move(acts));
}

LModule direct_sum(const std::vector<LModule>& parts) {
  if (parts.empty()) throw std::invalid_argument("direct_sum: no summands");
  LModule acc = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) acc = direct_sum(acc, parts[i]);
  return acc;
}

LModule tensor(const LModule& a, const LModule& b) {
  if (!same_algebra(a, b)) throw std::invalid_argument("tensor: algebra mismatch");
  if (a.dim() * b.dim() > limits::max_module_dim()) {
    std::ostringstream os;
    os << "tensor dimension " << a.dim() * b.dim() << " exceeds the cap "
       << limits::max_module_dim();
    throw CapExceeded(os.str());
  }
  const FieldCtx* K = a.ctx();
  Matrix Ia = Matrix::identity(K, a.dim()), Ib = Matrix::identity(K, b.dim());
  std::vector<Matrix> acts;
  for (std::size_t i = 0; i < a.algebra().dim(); ++i)
    acts.push_back(kron(a.action(i), Ib) + kron(Ia, b.action(i)));
  return LModule(a.algebra_ptr(), a.dim() * b.dim(), std::move(acts));
}

LModule dual(const LModule& a) {
  std::vector<Matrix> acts;
  for (std::size_t i = 0; i < a.algebra().dim(); ++i) acts.push_back(-a.action(i).transpose());
  return LModule(a.algebra_ptr(), a.dim(), std::move(acts));
}

LModule hom_module(const LModule& a, const LModule& b) {
  if (!same_algebra(a, b)) throw std::invalid_argument("hom_module: algebra mismatch");
  if (a.dim() * b.dim() > limits::max_module_dim()) {
    std::ostringstream os;
    os << "hom dimension " << a.dim() * b.dim() << " exceeds the cap " << limits::max_module_dim();
    throw CapExceeded(os.str());
  }
  const FieldCtx* K = a.ctx();
  Matrix Ia = Matrix::identity(K, a.dim()), Ib = Matrix::identity(K, b.dim());
  std::vector<Matrix> acts;
  for (std::size_t i = 0; i < a.algebra().dim(); ++i)
    acts.push_back(kron(b.action(i), Ia) - kron(Ib, a.action(i).transpose()));
  return LModule(a.algebra_ptr(), a.dim() * b.dim(), std::move(acts));
}

bool is_intertwiner(const LModule& src, const LModule& dst, const Matrix& m) {
  if (!same_algebra(src, dst)) return false;
  if (m.rows() != dst.dim() || m.cols() != src.dim() || m.ctx() != src.ctx()) return false;
  for (std::size_t i = 0; i < src.algebra().dim(); ++i)
    if (m * src.action(i) != dst.action(i) * m) return false;
  return true;
}

ModuleMap make_module_map(LModule src, LModule dst, Matrix m) {
  if (!is_intertwiner(src, dst, m))
    throw std::invalid_argument("module map does not intertwine the actions");
  return ModuleMap{std::move(src), std::move(dst), std::move(m)};
}

ModuleMap hom_from_dual_tensor(const LModule& a, const LModule& b) {
  LModule T = tensor(dual(a), b);
  LModule H = hom_module(a, b);
  const std::size_t da = a.dim(), db = b.dim();
  Matrix P(a.ctx(), da * db, da * db);
  // a_i^* (x) b_j  ->  the matrix unit with 1 at row j, column i.
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < db; ++j) P.at(j * da + i, i * db + j) = a.ctx()->one();
  return make_module_map(std::move(T), std::move(H), std::move(P));
}

// ---------------------------------------------------------------------
// Submodules and factors
// ---------------------------------------------------------------------

Subspace submodule(const LModule& M, const std::vector<std::vector<FieldElem>>& generators) {
  return spin(M.ctx(), M.dim(), generators, M.actions());
}

bool is_invariant(const LModule& M, const Subspace& U) {
  for (std::size_t i = 0; i < M.algebra().dim(); ++i)
    for (std::size_t j = 0; j < U.dim(); ++j)
      if (!U.contains(M.action(i) * U.basis_vector(j))) return false;
  return true;
}

LModule sub_quotient(const LModule& M, const Subspace& inner, const Subspace& outer) {
  if (!outer.contains(inner)) throw std::invalid_argument("sub_quotient: inner not inside outer");
  if (!is_invariant(M, inner) || !is_invariant(M, outer))
    throw std::invalid_argument("sub_quotient: subspace is not invariant");
  std::vector<std::vector<FieldElem>> emb;
  for (std::size_t j = 0; j < inner.dim(); ++j) emb.push_back(outer.coords(inner.basis_vector(j)));
  Subspace inner_in_outer = Subspace::span(M.ctx(), outer.dim(), emb);
  std::vector<Matrix> acts;
  for (std::size_t i = 0; i < M.algebra().dim(); ++i)
    acts.push_back(quotient_action(restrict_action(M.action(i), outer), inner_in_outer));
  return LModule(M.algebra_ptr(), outer.dim() - inner.dim(), std::move(acts));
}

// ---------------------------------------------------------------------
// Irreducibility and composition series
// ---------------------------------------------------------------------

namespace {

Matrix random_combination(const LModule& M, std::mt19937_64& rng) {
  const FieldCtx* K = M.ctx();
  Matrix c(K, M.dim(), M.dim());
  for (std::size_t i = 0; i < M.algebra().dim(); ++i) {
    FieldElem lam = K->from_index(rng() % K->order());
    if (!lam.is_zero()) c = c + lam * M.action(i);
  }
  FieldElem mu = K->from_index(rng() % K->order());
  if (!mu.is_zero()) c = c + mu * Matrix::identity(K, M.dim());
  return c;
}

Matrix random_algebra_word(const LModule& M, std::mt19937_64& rng) {
  Matrix w = random_combination(M, rng);
  const std::size_t len = rng() % 8;
  for (std::size_t s = 0; s < len; ++s) w = w * random_combination(M, rng);
  return w;
}

// Spin every line of ker(s); a proper spin is a witness. nullopt = all full.
std::optional<Subspace> spin_kernel_lines(const std::vector<Matrix>& ops, const Subspace& ker,
                                          const FieldCtx* K, std::size_t d) {
  for (const auto& v : line_reps(ker)) {
    Subspace U = spin(K, d, {v}, ops);
    if (U.dim() < d) return U;
  }
  return std::nullopt;
}

}  // namespace

IrreducibilityResult irreducibility_test(const LModule& M, uint64_t seed) {
  const std::size_t d = M.dim();
  const FieldCtx* K = M.ctx();
  if (d == 0) throw std::invalid_argument("irreducibility_test: zero module");
  if (d == 1) return {true, Subspace::zero(K, 1)};

  auto basis_spin = [&](std::size_t i) -> std::optional<Subspace> {
    std::vector<FieldElem> e = zero_vec(K, d);
    e[i] = K->one();
    Subspace U = submodule(M, {e});
    if (U.dim() < d) return U;
    return std::nullopt;
  };

  // Stage A: cyclic submodules from a few basis vectors. Cheap, and it
  // settles trivial actions and division-algebra style reducibility.
  const std::size_t quick = std::min<std::size_t>(d, 8);
  for (std::size_t i = 0; i < quick; ++i)
    if (auto U = basis_spin(i)) return {false, *U};

  std::vector<Matrix> transposed;
  for (const Matrix& m : M.actions()) transposed.push_back(m.transpose());

  // Stage B: seeded words. Any singular nonzero algebra element s yields a
  // complete certificate once every line of ker(s) spins full on both the
  // module and its transpose: a proper submodule U either meets ker(s), or
  // s acts invertibly on U and therefore singularly on V/U, putting a line
  // of ker(s^T) inside the annihilator of U.
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 48; ++attempt) {
    Matrix w = random_algebra_word(M, rng);
    if (w.is_zero()) continue;
    Matrix s = w;
    Subspace ker_s = kernel(s);
    if (ker_s.dim() == 0) {
      // Nonsingular word: manufacture a singular element from a minimal
      // polynomial. f(w) kills the Krylov seed, so it is singular; when
      // f(w) = 0, f is the true minimal polynomial and a proper factor of
      // it evaluates to a singular nonzero matrix.
      std::vector<FieldElem> v = zero_vec(K, d);
      for (std::size_t i = 0; i < d; ++i) v[i] = K->from_index(rng() % K->order());
      bool zero = true;
      for (const auto& x : v) zero = zero && x.is_zero();
      if (zero) v[0] = K->one();
      std::vector<FieldElem> f = krylov_minpoly(w, v);
      Matrix fw = eval_poly(f, w);
      if (fw.is_zero()) {
        std::vector<FieldElem> g = proper_factor(K, f);
        if (g.empty()) continue;
        fw = eval_poly(g, w);
      }
      if (fw.is_zero()) continue;
      s = fw;
      ker_s = kernel(s);
      if (ker_s.dim() == 0) continue;
    }
    if (line_count(K->order(), ker_s.dim()) > 256) continue;
    if (auto U = spin_kernel_lines(M.actions(), ker_s, K, d)) return {false, *U};
    Subspace ker_st = kernel(s.transpose());
    for (const auto& u : line_reps(ker_st)) {
      Subspace Ut = spin(K, d, {u}, transposed);
      if (Ut.dim() < d) {
        // Annihilator of the transpose-side submodule is invariant.
        Matrix rows(K, Ut.dim(), d);
        for (std::size_t r = 0; r < Ut.dim(); ++r)
          for (std::size_t c = 0; c < d; ++c) rows.at(r, c) = Ut.basis_vector(r)[c];
        Subspace W = kernel(rows);
        if (W.dim() == 0 || W.dim() >= d || !is_invariant(M, W))
          throw std::logic_error("irreducibility_test: annihilator witness failed validation");
        return {false, W};
      }
    }
    return {true, Subspace::zero(K, d)};
  }

  // Stage C: remaining cyclic submodules.
  for (std::size_t i = quick; i < d; ++i)
    if (auto U = basis_spin(i)) return {false, *U};

  // Stage D: exhaustive spin over every nonzero vector at desk scale.
  const uint64_t q = K->order();
  const uint64_t total = sat_pow(q, d, 1u << 16);
  if (total <= (1u << 16)) {
    for (uint64_t t = 1; t < total; ++t) {
      std::vector<FieldElem> v = zero_vec(K, d);
      uint64_t r = t;
      for (std::size_t i = 0; i < d; ++i) {
        v[i] = K->from_index(r % q);
        r /= q;
      }
      Subspace U = submodule(M, {v});
      if (U.dim() < d) return {false, U};
    }
    return {true, Subspace::zero(K, d)};
  }
  throw std::logic_error("irreducibility_test: sampling exhausted without a certificate");
}

namespace {

// Ambient subspace strictly between inner and outer realizing the factor
// subspace T (given in the factor's complement coordinates).
Subspace lift_factor_subspace(const LModule& M, const Subspace& inner, const Subspace& outer,
                              const Subspace& T) {
  std::vector<std::vector<FieldElem>> emb;
  for (std::size_t j = 0; j < inner.dim(); ++j) emb.push_back(outer.coords(inner.basis_vector(j)));
  Subspace inner_in_outer = Subspace::span(M.ctx(), outer.dim(), emb);
  std::vector<std::vector<FieldElem>> amb;
  for (std::size_t j = 0; j < T.dim(); ++j) {
    std::vector<FieldElem> in_outer = quotient_lift(inner_in_outer, T.basis_vector(j));
    std::vector<FieldElem> v = zero_vec(M.ctx(), M.dim());
    for (std::size_t r = 0; r < outer.dim(); ++r) {
      if (in_outer[r].is_zero()) continue;
      std::vector<FieldElem> b = outer.basis_vector(r);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += in_outer[r] * b[i];
    }
    amb.push_back(std::move(v));
  }
  Subspace mid = sum(inner, Subspace::span(M.ctx(), M.dim(), amb));
  if (!is_invariant(M, mid)) throw std::logic_error("composition series: lifted cut not invariant");
  return mid;
}

}  // namespace

std::vector<Subspace> composition_series(const LModule& M, uint64_t seed) {
  const FieldCtx* K = M.ctx();
  std::vector<Subspace> chain = {Subspace::zero(K, M.dim())};
  if (M.dim() == 0) return chain;
  chain.push_back(Subspace::full(K, M.dim()));
  uint64_t counter = 0;
  std::size_t i = 0;
  while (i + 1 < chain.size()) {
    LModule factor = sub_quotient(M, chain[i], chain[i + 1]);
    IrreducibilityResult r =
        irreducibility_test(factor, seed + 0x9E3779B97F4A7C15ull * ++counter);
    if (r.irreducible) {
      ++i;
      continue;
    }
    chain.insert(chain.begin() + i + 1, lift_factor_subspace(M, chain[i], chain[i + 1], r.witness));
  }
  return chain;
}

std::vector<LModule> composition_factors(const LModule& M, uint64_t seed) {
  std::vector<Subspace> chain = composition_series(M, seed);
  std::vector<LModule> factors;
  for (std::size_t i = 0; i + 1 < chain.size(); ++i)
    factors.push_back(sub_quotient(M, chain[i], chain[i + 1]));
  return factors;
}

std::size_t endomorphism_algebra_dim(const LModule& M) {
  const FieldCtx* K = M.ctx();
  const std::size_t d = M.dim();
  Matrix I = Matrix::identity(K, d);
  Subspace comm = Subspace::full(K, d * d);
  for (std::size_t i = 0; i < M.algebra().dim(); ++i)
    comm = intersect(comm, kernel(kron(M.action(i), I) - kron(I, M.action(i).transpose())));
  return comm.dim();
}

// ---------------------------------------------------------------------
// Scalar extension, restriction, envelope extension
// ---------------------------------------------------------------------

LModule extend_scalars(const LModule& M, const Embedding& e) {
  return extend_scalars(M, e,
                        std::make_shared<const RestrictedLieAlgebra>(M.algebra().embedded(e)));
}

LModule extend_scalars(const LModule& M, const Embedding& e, AlgebraPtr embedded_algebra) {
  if (e.source() != M.ctx()) throw std::invalid_argument("extend_scalars: embedding source mismatch");
  if (!embedded_algebra || !(*embedded_algebra == M.algebra().embedded(e)))
    throw std::invalid_argument("extend_scalars: algebra is not the embedded original");
  std::vector<Matrix> acts;
  for (const Matrix& m : M.actions()) acts.push_back(m.embedded(e));
  return LModule(std::move(embedded_algebra), M.dim(), std::move(acts));
}

AlgebraPtr induced_subalgebra_structure(const Subalgebra& S) {
  if (!S.parent) throw std::invalid_argument("subalgebra: null parent");
  const RestrictedLieAlgebra& P = *S.parent;
  const FieldCtx* K = P.ctx();
  const std::size_t k = S.space.dim();
  if (k == 0) throw std::invalid_argument("subalgebra must be nonzero");
  LieAlgebra A(K, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      std::vector<FieldElem> w = P.alg().bracket(S.space.basis_vector(i), S.space.basis_vector(j));
      if (!S.space.contains(w))
        throw std::invalid_argument("subalgebra subspace is not bracket-closed");
      A.set_bracket(i, j, S.space.coords(w));
    }
  if (P.has_pmap()) {
    std::vector<std::vector<FieldElem>> imgs;
    bool closed = true;
    for (std::size_t i = 0; i < k && closed; ++i) {
      std::vector<FieldElem> u = P.pmap(S.space.basis_vector(i));
      if (S.space.contains(u))
        imgs.push_back(S.space.coords(u));
      else
        closed = false;
    }
    if (closed)
      return std::make_shared<const RestrictedLieAlgebra>(std::move(A), std::move(imgs));
  }
  return std::make_shared<const RestrictedLieAlgebra>(RestrictedLieAlgebra::without_pmap(std::move(A)));
}

LModule restrict_to_subalgebra(const LModule& M, const Subalgebra& S) {
  if (!S.parent || !(M.algebra() == *S.parent))
    throw std::invalid_argument("restrict_to_subalgebra: module is not over the parent algebra");
  AlgebraPtr ind = induced_subalgebra_structure(S);
  std::vector<Matrix> acts;
  for (std::size_t i = 0; i < S.space.dim(); ++i) acts.push_back(M.act(S.space.basis_vector(i)));
  return LModule(std::move(ind), M.dim(), std::move(acts));
}

LModule extend_action_to_penvelope(const Subalgebra& S, const LModule& M) {
  if (!S.parent) throw std::invalid_argument("envelope extension: null parent");
  const RestrictedLieAlgebra& L = *S.parent;
  const FieldCtx* K = L.ctx();
  const std::size_t n = L.dim(), k = S.space.dim(), d = M.dim();
  const uint32_t p = K->p();
  if (!L.has_pmap()) throw std::invalid_argument("envelope extension: parent carries no p-map");
  {
    AlgebraPtr ind = induced_subalgebra_structure(S);
    if (!(M.algebra() == *ind))
      throw std::invalid_argument("envelope extension: module is not over the induced S-structure");
  }
  if (!S.space.contains(bracket_span(L.alg(), Subspace::full(K, n), S.space)))
    throw std::invalid_argument("envelope extension: S is not an ideal");

  // Fully reduced echelon rows over L's coordinates, each carrying the
  // action matrix of the row vector. Row reduction and back-substitution
  // apply the same operations to the payloads, so remainders arrive with
  // the action dictated by linearity, and a p-map image t^[p] = s + c
  // inserts c with payload rho(t)^p - rho(s).
  std::vector<std::vector<FieldElem>> rows;
  std::vector<Matrix> pay;
  std::vector<std::size_t> lead;
  auto reduce_insert = [&](std::vector<FieldElem> v, Matrix R) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const FieldElem c = v[lead[r]];
      if (c.is_zero()) continue;
      for (std::size_t j = 0; j < n; ++j) v[j] -= c * rows[r][j];
      R = R - c * pay[r];
    }
    std::size_t l = n;
    for (std::size_t j = 0; j < n; ++j)
      if (!v[j].is_zero()) {
        l = j;
        break;
      }
    if (l == n) return;  // already in the span; consistency is re-verified at the end
    const FieldElem inv = v[l].inverse();
    for (std::size_t j = 0; j < n; ++j) v[j] = inv * v[j];
    R = inv * R;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const FieldElem c = rows[r][l];
      if (c.is_zero()) continue;
      for (std::size_t j = 0; j < n; ++j) rows[r][j] -= c * v[j];
      pay[r] = pay[r] - c * R;
    }
    rows.push_back(std::move(v));
    pay.push_back(std::move(R));
    lead.push_back(l);
  };

  for (std::size_t i = 0; i < k; ++i) reduce_insert(S.space.basis_vector(i), M.action(i));
  for (std::size_t idx = 0; idx < rows.size(); ++idx) {
    std::vector<FieldElem> u = L.pmap(rows[idx]);
    Matrix Rp = pay[idx].pow(p);
    reduce_insert(std::move(u), std::move(Rp));
  }
  if (rows.size() != n)
    throw std::invalid_argument("envelope extension: S does not generate the parent under the p-map");

  std::vector<std::size_t> by_lead(n);
  for (std::size_t r = 0; r < n; ++r) by_lead[lead[r]] = r;
  std::vector<Matrix> acts;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<FieldElem> v = zero_vec(K, n);
    v[j] = K->one();
    Matrix acc(K, d, d);
    for (std::size_t l = 0; l < n; ++l) {
      const FieldElem c = v[l];
      if (c.is_zero()) continue;
      const std::size_t r = by_lead[l];
      for (std::size_t t = 0; t < n; ++t) v[t] -= c * rows[r][t];
      acc = acc + c * pay[r];
    }
    acts.push_back(std::move(acc));
  }

  LModule out(S.parent, d, std::move(acts));
  VerifyReport rep = verify_module(out);
  if (!rep.empty()) {
    std::ostringstream os;
    os << "envelope extension is inconsistent at basis pair (" << rep[0].indices[0] << ", "
       << rep[0].indices[1] << ")";
    throw std::logic_error(os.str());
  }
  for (std::size_t i = 0; i < k; ++i)
    if (out.act(S.space.basis_vector(i)) != M.action(i))
      throw std::logic_error("envelope extension does not restrict back to the input module");
  return out;
}

}  // namespace modlie
