#include "modlie/gf.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>

#include "modlie/limits.hpp"

namespace modlie {

namespace {

// ---------------------------------------------------------------------
// Polynomials over F_p, little-endian coefficient vectors.
// ---------------------------------------------------------------------

using Poly = std::vector<uint32_t>;

void ptrim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

int pdeg(const Poly& f) { return static_cast<int>(f.size()) - 1; }

// f mod g, g monic.
Poly pmod(Poly f, const Poly& g, uint32_t p) {
  ptrim(f);
  const int dg = pdeg(g);
  while (pdeg(f) >= dg) {
    const uint32_t lead = f.back();
    const int shift = pdeg(f) - dg;
    if (lead != 0) {
      for (int i = 0; i <= dg; ++i) {
        uint64_t v = f[i + shift] + static_cast<uint64_t>(p - 1) * lead * g[i];
        f[i + shift] = static_cast<uint32_t>(v % p);
      }
    }
    f.pop_back();
    ptrim(f);
  }
  return f;
}

Poly pmul(const Poly& a, const Poly& b, uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) {
      r[i + j] = static_cast<uint32_t>((r[i + j] + static_cast<uint64_t>(a[i]) * b[j]) % p);
    }
  }
  ptrim(r);
  return r;
}

uint32_t inv_mod_p(uint32_t a, uint32_t p) {
  // extended Euclid on integers
  int64_t t = 0, newt = 1, r = p, newr = a % p;
  while (newr != 0) {
    int64_t q = r / newr;
    std::swap(t -= q * newt, newt);
    std::swap(r -= q * newr, newr);
  }
  if (r != 1) throw std::domain_error("inv_mod_p: not invertible");
  return static_cast<uint32_t>((t % p + p) % p);
}

// ---------------------------------------------------------------------
// Field context registry
// ---------------------------------------------------------------------

struct Registry {
  std::mutex mu;
  std::map<std::pair<uint32_t, Poly>, std::unique_ptr<FieldCtx>> by_modulus;
  std::map<std::pair<uint32_t, uint32_t>, const FieldCtx*> canonical;
  std::map<std::pair<const FieldCtx*, const FieldCtx*>, std::unique_ptr<Embedding>> embeddings;
};

Registry& registry() {
  static Registry* r = new Registry();  // never destroyed; contexts live forever
  return *r;
}

// p^e with saturation; only used as a loop bound for exhaustive searches.
uint64_t sat_pow(uint64_t p, uint32_t e) {
  uint64_t r = 1;
  for (uint32_t i = 0; i < e; ++i) {
    if (r > UINT64_MAX / p) return UINT64_MAX;
    r *= p;
  }
  return r;
}

bool is_prime(uint32_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

bool is_irreducible_mod_p(uint32_t p, const std::vector<uint32_t>& poly) {
  Poly f = poly;
  ptrim(f);
  const int m = pdeg(f);
  if (m < 1) return false;
  if (m == 1) return true;
  // Try every monic divisor of degree up to m/2.
  for (int d = 1; 2 * d <= m; ++d) {
    const uint64_t count = sat_pow(p, static_cast<uint32_t>(d));
    for (uint64_t idx = 0; idx < count; ++idx) {
      Poly g(d + 1, 0);
      uint64_t v = idx;
      for (int i = 0; i < d; ++i) {
        g[i] = static_cast<uint32_t>(v % p);
        v /= p;
      }
      g[d] = 1;
      if (pmod(f, g, p).empty()) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------
// FieldCtx
// ---------------------------------------------------------------------

FieldCtx::FieldCtx(uint32_t p, std::vector<uint32_t> modulus, bool canonical)
    : p_(p), m_(static_cast<uint32_t>(modulus.size()) - 1), modulus_(std::move(modulus)),
      canonical_(canonical) {
  order_ = 1;
  for (uint32_t i = 0; i < m_; ++i) {
    if (order_ > UINT64_MAX / p_) throw std::overflow_error("field order overflow");
    order_ *= p_;
  }
  // Precompute x^(m+j) mod modulus for schoolbook reduction.
  Poly x(m_ + 1, 0);
  x[m_] = 1;
  Poly cur = pmod(x, modulus_, p_);
  for (uint32_t j = 0; j + 1 < m_; ++j) {
    Poly row(m_, 0);
    for (size_t i = 0; i < cur.size(); ++i) row[i] = cur[i];
    xpow_.push_back(row);
    cur.insert(cur.begin(), 0);  // multiply by x
    cur = pmod(cur, modulus_, p_);
  }
}

const FieldCtx* FieldCtx::get(uint32_t p, const std::vector<uint32_t>& modulus) {
  if (!is_prime(p)) throw std::invalid_argument("field characteristic must be prime");
  if (p > (1u << 20)) throw std::invalid_argument("characteristic too large");
  Poly f = modulus;
  ptrim(f);
  if (pdeg(f) < 1) throw std::invalid_argument("modulus must have degree >= 1");
  if (f.back() != 1) throw std::invalid_argument("modulus must be monic");
  for (auto& c : f) c %= p;
  if (f.back() != 1) throw std::invalid_argument("modulus must be monic mod p");
  if (pdeg(f) > static_cast<int>(kMaxTotalDegree))
    throw CapExceeded("modulus degree exceeds structural ceiling");
  if (pdeg(f) > static_cast<int>(limits::max_extension_degree()))
    throw CapExceeded("modulus degree " + std::to_string(pdeg(f)) + " exceeds cap " +
                      std::to_string(limits::max_extension_degree()));
  if (!is_irreducible_mod_p(p, f)) throw std::invalid_argument("modulus is reducible");

  Registry& reg = registry();
  std::lock_guard<std::mutex> lock(reg.mu);
  auto key = std::make_pair(p, f);
  auto it = reg.by_modulus.find(key);
  if (it != reg.by_modulus.end()) return it->second.get();

  // Canonical iff it matches the lexicographically-first irreducible.
  const uint32_t m = static_cast<uint32_t>(pdeg(f));
  bool canonical = true;
  {
    const uint64_t limit = sat_pow(p, m);
    for (uint64_t idx = 0; idx < limit; ++idx) {
      Poly g(m + 1, 0);
      uint64_t v = idx;
      for (uint32_t i = 0; i < m; ++i) {
        g[i] = static_cast<uint32_t>(v % p);
        v /= p;
      }
      g[m] = 1;
      if (is_irreducible_mod_p(p, g)) {
        canonical = (g == f);
        break;
      }
    }
  }
  auto ctx = std::unique_ptr<FieldCtx>(new FieldCtx(p, f, canonical));
  const FieldCtx* raw = ctx.get();
  reg.by_modulus.emplace(std::move(key), std::move(ctx));
  if (canonical) reg.canonical[{p, m}] = raw;
  return raw;
}

const FieldCtx* FieldCtx::get(uint32_t p, uint32_t m) {
  if (!is_prime(p)) throw std::invalid_argument("field characteristic must be prime");
  if (m < 1) throw std::invalid_argument("extension degree must be >= 1");
  if (m > kMaxTotalDegree) throw CapExceeded("extension degree exceeds structural ceiling");
  if (m > limits::max_extension_degree())
    throw CapExceeded("extension degree " + std::to_string(m) + " exceeds cap " +
                      std::to_string(limits::max_extension_degree()));
  {
    Registry& reg = registry();
    std::lock_guard<std::mutex> lock(reg.mu);
    auto it = reg.canonical.find({p, m});
    if (it != reg.canonical.end()) return it->second;
  }
  // Lexicographically-first monic irreducible: base-p digits of an
  // increasing counter, constant term least significant.
  const uint64_t limit = sat_pow(p, m);
  for (uint64_t idx = 0; idx < limit; ++idx) {
    Poly g(m + 1, 0);
    uint64_t v = idx;
    for (uint32_t i = 0; i < m; ++i) {
      g[i] = static_cast<uint32_t>(v % p);
      v /= p;
    }
    g[m] = 1;
    if (is_irreducible_mod_p(p, g)) return get(p, g);
  }
  throw std::logic_error("no irreducible polynomial found");  // unreachable
}

FieldElem FieldCtx::zero() const {
  FieldElem e;
  e.ctx_ = this;
  return e;
}

FieldElem FieldCtx::one() const { return from_prime(1); }

FieldElem FieldCtx::from_prime(uint32_t a) const {
  FieldElem e;
  e.ctx_ = this;
  e.c_[0] = a % p_;
  return e;
}

FieldElem FieldCtx::generator() const {
  FieldElem e;
  e.ctx_ = this;
  if (m_ == 1) {
    // class of x is the constant -c0
    e.c_[0] = (p_ - modulus_[0] % p_) % p_;
  } else {
    e.c_[1] = 1;
  }
  return e;
}

FieldElem FieldCtx::from_coeffs(const std::vector<uint32_t>& coeffs) const {
  if (coeffs.size() > m_) throw std::invalid_argument("coefficient vector too long");
  FieldElem e;
  e.ctx_ = this;
  for (size_t i = 0; i < coeffs.size(); ++i) e.c_[i] = coeffs[i] % p_;
  return e;
}

FieldElem FieldCtx::from_index(uint64_t index) const {
  FieldElem e;
  e.ctx_ = this;
  for (uint32_t i = 0; i < m_; ++i) {
    e.c_[i] = static_cast<uint32_t>(index % p_);
    index /= p_;
  }
  return e;
}

std::string FieldCtx::name() const {
  std::ostringstream os;
  os << "GF(" << p_;
  if (m_ > 1) os << "^" << m_;
  os << ")";
  return os.str();
}

// ---------------------------------------------------------------------
// FieldElem
// ---------------------------------------------------------------------

namespace {
void require_same_ctx(const FieldElem& a, const FieldElem& b) {
  if (!a.valid() || !b.valid()) throw std::invalid_argument("uninitialized field element");
  if (a.ctx() != b.ctx()) throw std::invalid_argument("field context mismatch");
}
}  // namespace

std::vector<uint32_t> FieldElem::coeffs() const {
  std::vector<uint32_t> v(ctx_->degree());
  for (uint32_t i = 0; i < ctx_->degree(); ++i) v[i] = c_[i];
  return v;
}

bool FieldElem::is_zero() const {
  for (uint32_t i = 0; i < ctx_->degree(); ++i)
    if (c_[i] != 0) return false;
  return true;
}

uint64_t FieldElem::to_index() const {
  uint64_t idx = 0;
  for (uint32_t i = ctx_->degree(); i-- > 0;) idx = idx * ctx_->p() + c_[i];
  return idx;
}

FieldElem operator+(const FieldElem& a, const FieldElem& b) {
  require_same_ctx(a, b);
  const uint32_t p = a.ctx_->p(), m = a.ctx_->degree();
  FieldElem r;
  r.ctx_ = a.ctx_;
  for (uint32_t i = 0; i < m; ++i) r.c_[i] = (a.c_[i] + b.c_[i]) % p;
  return r;
}

FieldElem operator-(const FieldElem& a, const FieldElem& b) {
  require_same_ctx(a, b);
  const uint32_t p = a.ctx_->p(), m = a.ctx_->degree();
  FieldElem r;
  r.ctx_ = a.ctx_;
  for (uint32_t i = 0; i < m; ++i) r.c_[i] = (a.c_[i] + p - b.c_[i]) % p;
  return r;
}

FieldElem FieldElem::operator-() const {
  if (!valid()) throw std::invalid_argument("uninitialized field element");
  const uint32_t p = ctx_->p(), m = ctx_->degree();
  FieldElem r;
  r.ctx_ = ctx_;
  for (uint32_t i = 0; i < m; ++i) r.c_[i] = (p - c_[i]) % p;
  return r;
}

FieldElem operator*(const FieldElem& a, const FieldElem& b) {
  require_same_ctx(a, b);
  const FieldCtx* ctx = a.ctx_;
  const uint32_t p = ctx->p(), m = ctx->degree();
  FieldElem r;
  r.ctx_ = ctx;
  if (m == 1) {
    r.c_[0] = static_cast<uint32_t>(static_cast<uint64_t>(a.c_[0]) * b.c_[0] % p);
    return r;
  }
  // schoolbook product, then fold the high part with precomputed x^(m+j)
  std::array<uint64_t, 2 * kMaxTotalDegree> prod{};
  for (uint32_t i = 0; i < m; ++i) {
    if (a.c_[i] == 0) continue;
    for (uint32_t j = 0; j < m; ++j) prod[i + j] += static_cast<uint64_t>(a.c_[i]) * b.c_[j];
  }
  std::array<uint64_t, kMaxTotalDegree> acc{};
  for (uint32_t i = 0; i < m; ++i) acc[i] = prod[i] % p;
  for (uint32_t j = 0; j + 1 < m; ++j) {
    const uint64_t hi = prod[m + j] % p;
    if (hi == 0) continue;
    const auto& row = ctx->xpow_[j];
    for (uint32_t i = 0; i < m; ++i) acc[i] += hi * row[i];
  }
  for (uint32_t i = 0; i < m; ++i) r.c_[i] = static_cast<uint32_t>(acc[i] % p);
  return r;
}

FieldElem FieldElem::inverse() const {
  if (!valid()) throw std::invalid_argument("uninitialized field element");
  if (is_zero()) throw std::domain_error("division by zero in " + ctx_->name());
  const uint32_t p = ctx_->p();
  // extended Euclid in F_p[x] on (element, modulus)
  Poly r0 = coeffs();
  ptrim(r0);
  Poly r1 = ctx_->modulus();
  Poly s0 = {1}, s1 = {};
  while (!r1.empty()) {
    // divide r0 by r1
    Poly q;
    Poly rem = r0;
    const uint32_t lead_inv = inv_mod_p(r1.back(), p);
    while (pdeg(rem) >= pdeg(r1)) {
      const int shift = pdeg(rem) - pdeg(r1);
      const uint32_t coef = static_cast<uint32_t>(
          static_cast<uint64_t>(rem.back()) * lead_inv % p);
      if (static_cast<int>(q.size()) <= shift) q.resize(shift + 1, 0);
      q[shift] = coef;
      for (int i = 0; i <= pdeg(r1); ++i) {
        uint64_t v = rem[i + shift] + static_cast<uint64_t>(p - 1) * coef * r1[i];
        rem[i + shift] = static_cast<uint32_t>(v % p);
      }
      ptrim(rem);
      if (rem.empty()) break;
    }
    Poly qs1 = pmul(q, s1, p);
    Poly next_s(std::max(s0.size(), qs1.size()), 0);
    for (size_t i = 0; i < next_s.size(); ++i) {
      uint32_t x = i < s0.size() ? s0[i] : 0;
      uint32_t y = i < qs1.size() ? qs1[i] : 0;
      next_s[i] = (x + p - y) % p;
    }
    ptrim(next_s);
    r0 = std::move(r1);
    r1 = std::move(rem);
    s0 = std::move(s1);
    s1 = std::move(next_s);
  }
  // r0 = gcd (a nonzero constant, as modulus is irreducible)
  if (pdeg(r0) != 0) throw std::logic_error("inverse: gcd not constant");
  const uint32_t scale = inv_mod_p(r0[0], p);
  Poly inv = s0;
  for (auto& c : inv) c = static_cast<uint32_t>(static_cast<uint64_t>(c) * scale % p);
  inv = pmod(inv, ctx_->modulus(), p);
  FieldElem out;
  out.ctx_ = ctx_;
  for (size_t i = 0; i < inv.size(); ++i) out.c_[i] = inv[i];
  return out;
}

FieldElem operator/(const FieldElem& a, const FieldElem& b) { return a * b.inverse(); }

FieldElem FieldElem::pow(uint64_t e) const {
  if (!valid()) throw std::invalid_argument("uninitialized field element");
  FieldElem base = *this;
  FieldElem result = ctx_->one();
  while (e > 0) {
    if (e & 1) result = result * base;
    base = base * base;
    e >>= 1;
  }
  return result;
}

bool operator==(const FieldElem& a, const FieldElem& b) {
  require_same_ctx(a, b);
  for (uint32_t i = 0; i < a.ctx_->degree(); ++i)
    if (a.c_[i] != b.c_[i]) return false;
  return true;
}

bool operator<(const FieldElem& a, const FieldElem& b) {
  require_same_ctx(a, b);
  return a.to_index() < b.to_index();
}

std::string FieldElem::str() const {
  std::ostringstream os;
  os << "[";
  for (uint32_t i = 0; i < ctx_->degree(); ++i) {
    if (i) os << ",";
    os << c_[i];
  }
  os << "]";
  return os.str();
}

FieldElem frobenius(const FieldElem& a) { return a.pow(a.ctx()->p()); }

FieldElem pth_root(const FieldElem& a) {
  uint64_t e = 1;
  for (uint32_t i = 0; i + 1 < a.ctx()->degree(); ++i) e *= a.ctx()->p();
  return a.pow(e);
}

// ---------------------------------------------------------------------
// Polynomials with FieldElem coefficients (for root finding)
// ---------------------------------------------------------------------

namespace {

using FqPoly = std::vector<FieldElem>;

void qtrim(FqPoly& f) {
  while (!f.empty() && f.back().is_zero()) f.pop_back();
}

int qdeg(const FqPoly& f) { return static_cast<int>(f.size()) - 1; }

FqPoly qmul(const FqPoly& a, const FqPoly& b, const FieldCtx* K) {
  if (a.empty() || b.empty()) return {};
  FqPoly r(a.size() + b.size() - 1, K->zero());
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  qtrim(r);
  return r;
}

FqPoly qmod(FqPoly f, const FqPoly& g, const FieldCtx* K) {
  qtrim(f);
  const int dg = qdeg(g);
  const FieldElem lead_inv = g.back().inverse();
  while (qdeg(f) >= dg) {
    const FieldElem c = f.back() * lead_inv;
    const int shift = qdeg(f) - dg;
    if (!c.is_zero())
      for (int i = 0; i <= dg; ++i) f[i + shift] -= c * g[i];
    f.pop_back();
    qtrim(f);
  }
  (void)K;
  return f;
}

FqPoly qmonic(FqPoly f) {
  qtrim(f);
  if (f.empty()) return f;
  const FieldElem inv = f.back().inverse();
  for (auto& c : f) c = c * inv;
  return f;
}

FqPoly qgcd(FqPoly a, FqPoly b, const FieldCtx* K) {
  qtrim(a);
  qtrim(b);
  while (!b.empty()) {
    FqPoly r = qmod(a, b, K);
    a = std::move(b);
    b = std::move(r);
  }
  return qmonic(a);
}

// base^e mod f
FqPoly qpowmod(FqPoly base, uint64_t e, const FqPoly& f, const FieldCtx* K) {
  FqPoly result = {K->one()};
  base = qmod(std::move(base), f, K);
  while (e > 0) {
    if (e & 1) result = qmod(qmul(result, base, K), f, K);
    base = qmod(qmul(base, base, K), f, K);
    e >>= 1;
  }
  return result;
}

// Split a monic product of distinct linear factors into roots.
void qsplit_roots(const FqPoly& f, const FieldCtx* K, std::vector<FieldElem>& out) {
  const int d = qdeg(f);
  if (d <= 0) return;
  if (d == 1) {
    out.push_back(-(f[0] * f[1].inverse()));
    return;
  }
  const uint64_t q = K->order();
  // Deterministic Cantor–Zassenhaus: sweep shift elements in index order.
  for (uint64_t shift_idx = 0;; ++shift_idx) {
    if (shift_idx >= q) throw std::logic_error("root splitting failed to converge");
    const FieldElem a = K->from_index(shift_idx);
    FqPoly g;
    if (K->p() == 2) {
      // trace polynomial of (a*x): sum_{i<M} (a x)^(2^i) mod f
      uint32_t M = K->degree();
      FqPoly term = qmod({K->zero(), a}, f, K);
      FqPoly acc = term;
      for (uint32_t i = 1; i < M; ++i) {
        term = qmod(qmul(term, term, K), f, K);
        acc.resize(std::max(acc.size(), term.size()), K->zero());
        for (size_t j = 0; j < term.size(); ++j) acc[j] += term[j];
        qtrim(acc);
      }
      g = qgcd(f, acc, K);
    } else {
      // gcd(f, (x+a)^((q-1)/2) - 1)
      FqPoly base = {a, K->one()};
      FqPoly powed = qpowmod(base, (q - 1) / 2, f, K);
      if (powed.empty()) powed = {K->zero()};
      powed[0] -= K->one();
      qtrim(powed);
      g = qgcd(f, powed, K);
    }
    if (qdeg(g) > 0 && qdeg(g) < d) {
      // f = g * h with both proper
      FqPoly h = f;
      // divide f by g exactly
      FqPoly quotient;
      {
        FqPoly rem = f;
        const FieldElem lead_inv = g.back().inverse();
        quotient.assign(d - qdeg(g) + 1, K->zero());
        while (qdeg(rem) >= qdeg(g)) {
          const FieldElem c = rem.back() * lead_inv;
          const int shift = qdeg(rem) - qdeg(g);
          quotient[shift] = c;
          for (int i = 0; i <= qdeg(g); ++i) rem[i + shift] -= c * g[i];
          qtrim(rem);
        }
      }
      qsplit_roots(g, K, out);
      qsplit_roots(qmonic(std::move(quotient)), K, out);
      return;
    }
  }
}

}  // namespace

std::vector<FieldElem> roots_over(const FieldCtx* K, const std::vector<FieldElem>& poly) {
  FqPoly f = poly;
  qtrim(f);
  if (qdeg(f) < 1) return {};
  f = qmonic(std::move(f));
  // Keep only the part that splits into distinct roots in K:
  // gcd(f, x^q - x) = product of (x - r) over roots r in K.
  FqPoly x = {K->zero(), K->one()};
  FqPoly xq = qpowmod(x, K->order(), f, K);
  xq.resize(std::max<size_t>(xq.size(), 2), K->zero());
  xq[1] -= K->one();
  qtrim(xq);
  FqPoly g = qgcd(f, xq, K);
  std::vector<FieldElem> roots;
  qsplit_roots(g, K, roots);
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::vector<FieldElem> roots_over(const FieldCtx* K, const std::vector<uint32_t>& prime_poly) {
  std::vector<FieldElem> f;
  for (uint32_t c : prime_poly) f.push_back(K->from_prime(c));
  return roots_over(K, f);
}

std::vector<FieldElem> poly_gcd(const FieldCtx* K, std::vector<FieldElem> a,
                                std::vector<FieldElem> b) {
  return qgcd(std::move(a), std::move(b), K);
}

std::vector<FieldElem> poly_powmod(const FieldCtx* K, std::vector<FieldElem> base, uint64_t e,
                                   const std::vector<FieldElem>& modulus) {
  FqPoly f = modulus;
  qtrim(f);
  if (qdeg(f) < 1) throw std::invalid_argument("poly_powmod: modulus must have positive degree");
  return qpowmod(std::move(base), e, f, K);
}

// ---------------------------------------------------------------------
// Embeddings
// ---------------------------------------------------------------------

Embedding Embedding::identity(const FieldCtx* c) {
  Embedding e;
  e.src_ = c;
  e.dst_ = c;
  e.powers_.resize(c->degree(), c->one());
  FieldElem g = c->generator();
  FieldElem acc = c->one();
  for (uint32_t i = 0; i < c->degree(); ++i) {
    e.powers_[i] = acc;
    acc = acc * g;
  }
  return e;
}

Embedding Embedding::make(const FieldCtx* src, const FieldCtx* dst, const FieldElem& gen_image) {
  if (gen_image.ctx() != dst) throw std::invalid_argument("generator image not in target field");
  if (src->p() != dst->p()) throw std::invalid_argument("embedding requires equal characteristic");
  if (dst->degree() % src->degree() != 0)
    throw std::invalid_argument("source degree must divide target degree");
  // gen_image must be a root of the source modulus.
  FieldElem val = dst->zero();
  FieldElem power = dst->one();
  for (uint32_t i = 0; i < src->modulus().size(); ++i) {
    val += power * dst->from_prime(src->modulus()[i]);
    power = power * gen_image;
  }
  if (!val.is_zero()) throw std::invalid_argument("generator image is not a root of the modulus");
  Embedding e;
  e.src_ = src;
  e.dst_ = dst;
  FieldElem acc = dst->one();
  for (uint32_t i = 0; i < src->degree(); ++i) {
    e.powers_.push_back(acc);
    acc = acc * gen_image;
  }
  return e;
}

FieldElem Embedding::operator()(const FieldElem& a) const {
  if (a.ctx() != src_) throw std::invalid_argument("embed: element not in source field");
  FieldElem r = dst_->zero();
  for (uint32_t i = 0; i < src_->degree(); ++i) {
    if (a.coeff(i) == 0) continue;
    r += powers_[i] * dst_->from_prime(a.coeff(i));
  }
  return r;
}

Embedding compose(const Embedding& first, const Embedding& then) {
  if (first.target() != then.source())
    throw std::invalid_argument("compose: embeddings do not chain");
  return Embedding::make(first.source(), then.target(),
                         then(first(first.source()->generator())));
}

const Embedding& canonical_embedding(const FieldCtx* src, const FieldCtx* dst) {
  Registry& reg = registry();
  {
    std::lock_guard<std::mutex> lock(reg.mu);
    auto it = reg.embeddings.find({src, dst});
    if (it != reg.embeddings.end()) return *it->second;
  }
  std::unique_ptr<Embedding> e;
  if (src == dst) {
    e = std::make_unique<Embedding>(Embedding::identity(src));
  } else {
    if (src->p() != dst->p()) throw std::invalid_argument("embedding requires equal characteristic");
    if (dst->degree() % src->degree() != 0)
      throw std::invalid_argument("source degree must divide target degree");
    std::vector<FieldElem> roots = roots_over(dst, src->modulus());
    if (roots.empty()) throw std::logic_error("no root of source modulus in target field");
    e = std::make_unique<Embedding>(Embedding::make(src, dst, roots.front()));
  }
  std::lock_guard<std::mutex> lock(reg.mu);
  auto [it, inserted] = reg.embeddings.emplace(std::make_pair(src, dst), std::move(e));
  return *it->second;
}

std::pair<const FieldCtx*, Embedding> extend_field(const FieldCtx* ctx, uint32_t k) {
  if (k < 1) throw std::invalid_argument("extension multiplier must be >= 1");
  if (k == 1) return {ctx, Embedding::identity(ctx)};
  const uint64_t total = static_cast<uint64_t>(ctx->degree()) * k;
  if (total > limits::max_extension_degree())
    throw CapExceeded("extension degree " + std::to_string(total) + " exceeds cap " +
                      std::to_string(limits::max_extension_degree()));
  const FieldCtx* target = FieldCtx::get(ctx->p(), static_cast<uint32_t>(total));
  return {target, canonical_embedding(ctx, target)};
}

CommonField common_field(const FieldCtx* a, const FieldCtx* b) {
  if (a->p() != b->p()) throw std::invalid_argument("common_field: different characteristics");
  const uint32_t m = std::lcm(a->degree(), b->degree());
  if (m > limits::max_extension_degree())
    throw CapExceeded("common field degree " + std::to_string(m) + " exceeds cap " +
                      std::to_string(limits::max_extension_degree()));
  CommonField cf;
  if (a == b) {
    cf.field = a;
    cf.left = Embedding::identity(a);
    cf.right = Embedding::identity(b);
    return cf;
  }
  cf.field = FieldCtx::get(a->p(), m);
  cf.left = canonical_embedding(a, cf.field);
  cf.right = canonical_embedding(b, cf.field);
  return cf;
}

}  // namespace modlie
