#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "modlie/gf.hpp"

namespace modlie {

/// Dense matrix over one FieldCtx, row-major. Vectors are columns: the
/// action of M on v is M*v, and kernel(M) = {v : Mv = 0}.
class Matrix {
 public:
  Matrix() = default;  // invalid until assigned
  Matrix(const FieldCtx* ctx, std::size_t rows, std::size_t cols);  // zero-filled
  static Matrix identity(const FieldCtx* ctx, std::size_t n);
  static Matrix from_rows(const FieldCtx* ctx, std::size_t cols,
                          const std::vector<std::vector<FieldElem>>& rows);

  const FieldCtx* ctx() const { return ctx_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  FieldElem& at(std::size_t r, std::size_t c) { return e_[r * cols_ + c]; }
  const FieldElem& at(std::size_t r, std::size_t c) const { return e_[r * cols_ + c]; }

  bool is_zero() const;
  bool is_square() const { return rows_ == cols_; }

  std::vector<FieldElem> row(std::size_t r) const;
  std::vector<FieldElem> col(std::size_t c) const;

  Matrix transpose() const;
  Matrix pow(uint64_t e) const;                 // square matrices
  Matrix embedded(const Embedding& emb) const;  // entrywise field embedding

  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator*(const FieldElem& s, const Matrix& a);
  Matrix operator-() const;
  friend bool operator==(const Matrix& a, const Matrix& b);
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

 private:
  const FieldCtx* ctx_ = nullptr;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<FieldElem> e_;
};

/// M*v with v a column vector of length cols.
std::vector<FieldElem> operator*(const Matrix& M, const std::vector<FieldElem>& v);

/// Vertical concatenation; both blocks share ctx and column count.
Matrix stack(const Matrix& top, const Matrix& bottom);

struct RrefResult {
  Matrix mat;
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

/// Reduced row echelon form by exact Gauss-Jordan elimination.
RrefResult rref(const Matrix& M);

/// A subspace of a coordinate space, stored as a reduced-row-echelon basis
/// (one basis vector per row). The representation is canonical: equal
/// subspaces have identical basis matrices.
class Subspace {
 public:
  Subspace() = default;
  static Subspace zero(const FieldCtx* ctx, std::size_t ambient);
  static Subspace full(const FieldCtx* ctx, std::size_t ambient);
  static Subspace row_span(const Matrix& rows);
  static Subspace span(const FieldCtx* ctx, std::size_t ambient,
                       const std::vector<std::vector<FieldElem>>& vecs);

  const FieldCtx* ctx() const { return basis_.ctx(); }
  std::size_t ambient_dim() const { return basis_.cols(); }
  std::size_t dim() const { return basis_.rows(); }
  const Matrix& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }
  std::vector<FieldElem> basis_vector(std::size_t i) const { return basis_.row(i); }

  bool contains(const std::vector<FieldElem>& v) const;
  bool contains(const Subspace& other) const;
  /// Coefficients of v against the echelon basis; throws std::domain_error
  /// if v is outside the subspace.
  std::vector<FieldElem> coords(const std::vector<FieldElem>& v) const;
  /// v minus its component in the subspace: the canonical coset
  /// representative, zero at every pivot column.
  std::vector<FieldElem> reduce(std::vector<FieldElem> v) const;

  friend bool operator==(const Subspace& a, const Subspace& b);
  friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }

 private:
  Matrix basis_;
  std::vector<std::size_t> pivots_;
};

/// Growable echelon basis (not fully reduced): constant-time membership
/// filtering for closure algorithms. Convert with to_subspace() for the
/// canonical form.
class EchelonBasis {
 public:
  EchelonBasis(const FieldCtx* ctx, std::size_t ambient) : ctx_(ctx), ambient_(ambient) {}

  /// Reduces v against the rows and inserts the remainder if nonzero.
  /// Returns true if the dimension grew.
  bool insert(std::vector<FieldElem> v);
  bool member(std::vector<FieldElem> v) const;

  const FieldCtx* ctx() const { return ctx_; }
  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return rows_.size(); }
  const std::vector<std::vector<FieldElem>>& rows() const { return rows_; }
  Subspace to_subspace() const;

 private:
  const FieldCtx* ctx_;
  std::size_t ambient_;
  std::vector<std::vector<FieldElem>> rows_;  // each with leading 1
  std::vector<std::size_t> lead_;
};

Subspace kernel(const Matrix& M);
Subspace row_space(const Matrix& M);
Subspace column_space(const Matrix& M);

/// Kronecker product: entry ((i,k),(j,l)) = a(i,j)·b(k,l), with the left
/// factor's index varying slower in both row and column blocks.
Matrix kron(const Matrix& a, const Matrix& b);

/// One solution of A·x = b, or nullopt if the system is inconsistent.
std::optional<std::vector<FieldElem>> solve(const Matrix& A, const std::vector<FieldElem>& b);

Subspace intersect(const Subspace& A, const Subspace& B);
Subspace sum(const Subspace& A, const Subspace& B);

/// Smallest subspace containing the generators and invariant under every
/// operator (square matrices acting on column vectors).
Subspace spin(const FieldCtx* ctx, std::size_t ambient,
              const std::vector<std::vector<FieldElem>>& generators,
              const std::vector<Matrix>& operators);

/// Columns of the ambient space not used as pivots by U; these index the
/// canonical complement coordinates for the quotient space.
std::vector<std::size_t> complement_columns(const Subspace& U);

/// Coordinates of v + U in the complement coordinate system.
std::vector<FieldElem> quotient_coords(const Subspace& U, const std::vector<FieldElem>& v);

/// The canonical ambient representative with the given complement coords.
std::vector<FieldElem> quotient_lift(const Subspace& U, const std::vector<FieldElem>& coords);

/// Induced operator on U in its echelon basis; throws if MU is not inside U.
Matrix restrict_action(const Matrix& M, const Subspace& U);

/// Induced operator on the complement coordinates of U; throws if MU ⊄ U.
Matrix quotient_action(const Matrix& M, const Subspace& U);

}  // namespace modlie
