#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace modlie {

// Structural ceiling on the total extension degree over the prime field.
// Field elements keep their coefficient vector inline, sized by this
// constant; the runtime cap (limits::max_extension_degree) must not exceed it.
inline constexpr uint32_t kMaxTotalDegree = 16;

struct CapExceeded : std::runtime_error {
  explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

class FieldElem;

/// GF(p^m) presented as F_p[x]/(modulus), modulus monic irreducible.
///
/// Contexts are interned and immutable: get() hands out one object per
/// (p, modulus), so pointer equality decides whether two elements live in
/// the same field. The no-modulus overload picks the lexicographically
/// first monic irreducible of degree m (coefficients enumerated as base-p
/// digits of an increasing counter, constant term least significant),
/// which keeps field descriptions reproducible across runs.
class FieldCtx {
 public:
  static const FieldCtx* get(uint32_t p, uint32_t m);
  static const FieldCtx* get(uint32_t p, const std::vector<uint32_t>& modulus);

  uint32_t p() const { return p_; }
  uint32_t degree() const { return m_; }
  uint64_t order() const { return order_; }  // p^m
  const std::vector<uint32_t>& modulus() const { return modulus_; }
  bool is_canonical() const { return canonical_; }

  FieldElem zero() const;
  FieldElem one() const;
  FieldElem generator() const;  // the class of x
  FieldElem from_prime(uint32_t a) const;
  FieldElem from_coeffs(const std::vector<uint32_t>& coeffs) const;
  FieldElem from_index(uint64_t index) const;  // base-p digits of index

  std::string name() const;  // "GF(3^2)"

 private:
  FieldCtx(uint32_t p, std::vector<uint32_t> modulus, bool canonical);
  FieldCtx(const FieldCtx&) = delete;
  FieldCtx& operator=(const FieldCtx&) = delete;

  uint32_t p_;
  uint32_t m_;
  uint64_t order_;
  std::vector<uint32_t> modulus_;
  bool canonical_;
  // x^(m+j) reduced mod modulus, j = 0 .. m-2; used by schoolbook products.
  std::vector<std::vector<uint32_t>> xpow_;

  friend class FieldElem;
  friend FieldElem operator*(const FieldElem& a, const FieldElem& b);
};

/// An element of a FieldCtx: a polynomial residue with coefficients in F_p,
/// stored little-endian in the generator (coeff(0) is the constant term).
class FieldElem {
 public:
  FieldElem() = default;  // invalid until assigned; for containers only

  const FieldCtx* ctx() const { return ctx_; }
  bool valid() const { return ctx_ != nullptr; }
  uint32_t coeff(uint32_t i) const { return c_[i]; }
  std::vector<uint32_t> coeffs() const;
  bool is_zero() const;
  uint64_t to_index() const;

  FieldElem operator-() const;
  FieldElem inverse() const;
  FieldElem pow(uint64_t e) const;

  friend FieldElem operator+(const FieldElem& a, const FieldElem& b);
  friend FieldElem operator-(const FieldElem& a, const FieldElem& b);
  friend FieldElem operator*(const FieldElem& a, const FieldElem& b);
  friend FieldElem operator/(const FieldElem& a, const FieldElem& b);
  FieldElem& operator+=(const FieldElem& b) { return *this = *this + b; }
  FieldElem& operator-=(const FieldElem& b) { return *this = *this - b; }
  FieldElem& operator*=(const FieldElem& b) { return *this = *this * b; }

  friend bool operator==(const FieldElem& a, const FieldElem& b);
  friend bool operator!=(const FieldElem& a, const FieldElem& b) { return !(a == b); }
  // Total order inside one field (index order); used for canonical choices.
  friend bool operator<(const FieldElem& a, const FieldElem& b);

  std::string str() const;

 private:
  const FieldCtx* ctx_ = nullptr;
  std::array<uint32_t, kMaxTotalDegree> c_{};

  friend class FieldCtx;
};

/// Frobenius a -> a^p, a field automorphism fixing the prime field.
FieldElem frobenius(const FieldElem& a);

/// The unique b with b^p = a (Frobenius inverse), computed as a^(p^(m-1)).
FieldElem pth_root(const FieldElem& a);

/// Injective field homomorphism source -> target determined by a root of
/// the source modulus in the target field. Fixes the prime field.
class Embedding {
 public:
  Embedding() = default;
  static Embedding identity(const FieldCtx* c);
  // Validates that gen_image is a root of src->modulus() in *dst.
  static Embedding make(const FieldCtx* src, const FieldCtx* dst,
                        const FieldElem& gen_image);

  const FieldCtx* source() const { return src_; }
  const FieldCtx* target() const { return dst_; }
  const FieldElem& image_of_generator() const { return powers_[1 < powers_.size() ? 1 : 0]; }

  FieldElem operator()(const FieldElem& a) const;

 private:
  const FieldCtx* src_ = nullptr;
  const FieldCtx* dst_ = nullptr;
  std::vector<FieldElem> powers_;  // gen_image^0 .. gen_image^(src.m-1)
};

/// then(first(a)); requires first.target == then.source.
Embedding compose(const Embedding& first, const Embedding& then);

/// The cached embedding of src into dst (src.m must divide dst.m, same p).
/// Deterministic: the image of the generator is the smallest root of the
/// source modulus in dst, in index order.
const Embedding& canonical_embedding(const FieldCtx* src, const FieldCtx* dst);

/// GF(p^(m*k)) with the canonical modulus, plus an embedding of ctx.
/// Throws CapExceeded if m*k exceeds the configured extension cap.
std::pair<const FieldCtx*, Embedding> extend_field(const FieldCtx* ctx, uint32_t k);

struct CommonField {
  const FieldCtx* field = nullptr;
  Embedding left;   // from a
  Embedding right;  // from b
};

/// Lexicographically-first field containing copies of both arguments
/// (degree lcm over the prime field), with canonical embeddings.
CommonField common_field(const FieldCtx* a, const FieldCtx* b);

/// Exhaustive small-degree factor search; poly is little-endian over F_p.
bool is_irreducible_mod_p(uint32_t p, const std::vector<uint32_t>& poly);

/// All roots in K of a monic polynomial with prime-field coefficients,
/// sorted in index order. Deterministic.
std::vector<FieldElem> roots_over(const FieldCtx* K,
                                  const std::vector<uint32_t>& prime_poly);
/// Same, for a polynomial with coefficients in K itself.
std::vector<FieldElem> roots_over(const FieldCtx* K, const std::vector<FieldElem>& poly);

/// Polynomials over K itself, as low-degree-first coefficient vectors; the
/// zero polynomial may be empty or all-zero. Results are trimmed.
std::vector<FieldElem> poly_gcd(const FieldCtx* K, std::vector<FieldElem> a,
                                std::vector<FieldElem> b);  // monic
std::vector<FieldElem> poly_powmod(const FieldCtx* K, std::vector<FieldElem> base, uint64_t e,
                                   const std::vector<FieldElem>& modulus);

}  // namespace modlie
