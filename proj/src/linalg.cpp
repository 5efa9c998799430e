#include "modlie/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace modlie {

namespace {

void require_ctx(const Matrix& a, const Matrix& b) {
  if (a.ctx() == nullptr || b.ctx() == nullptr)
    throw std::invalid_argument("uninitialized matrix");
  if (a.ctx() != b.ctx()) throw std::invalid_argument("matrix field mismatch");
}

}  // namespace

Matrix::Matrix(const FieldCtx* ctx, std::size_t rows, std::size_t cols)
    : ctx_(ctx), rows_(rows), cols_(cols), e_(rows * cols, ctx->zero()) {}

Matrix Matrix::identity(const FieldCtx* ctx, std::size_t n) {
  Matrix m(ctx, n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = ctx->one();
  return m;
}

Matrix Matrix::from_rows(const FieldCtx* ctx, std::size_t cols,
                         const std::vector<std::vector<FieldElem>>& rows) {
  Matrix m(ctx, rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw std::invalid_argument("row length mismatch");
    for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = rows[r][c];
  }
  return m;
}

bool Matrix::is_zero() const {
  for (const FieldElem& x : e_)
    if (!x.is_zero()) return false;
  return true;
}

std::vector<FieldElem> Matrix::row(std::size_t r) const {
  return std::vector<FieldElem>(e_.begin() + r * cols_, e_.begin() + (r + 1) * cols_);
}

std::vector<FieldElem> Matrix::col(std::size_t c) const {
  std::vector<FieldElem> v(rows_, ctx_->zero());
  for (std::size_t r = 0; r < rows_; ++r) v[r] = at(r, c);
  return v;
}

Matrix Matrix::transpose() const {
  Matrix t(ctx_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
  return t;
}

Matrix Matrix::pow(uint64_t e) const {
  if (!is_square()) throw std::invalid_argument("pow requires a square matrix");
  Matrix result = identity(ctx_, rows_);
  Matrix base = *this;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

Matrix Matrix::embedded(const Embedding& emb) const {
  if (emb.source() != ctx_) throw std::invalid_argument("embedding source mismatch");
  Matrix m(emb.target(), rows_, cols_);
  for (std::size_t i = 0; i < e_.size(); ++i) m.e_[i] = emb(e_[i]);
  return m;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  require_ctx(a, b);
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
    throw std::invalid_argument("matrix shape mismatch");
  Matrix r = a;
  for (std::size_t i = 0; i < r.e_.size(); ++i) r.e_[i] += b.e_[i];
  return r;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require_ctx(a, b);
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
    throw std::invalid_argument("matrix shape mismatch");
  Matrix r = a;
  for (std::size_t i = 0; i < r.e_.size(); ++i) r.e_[i] -= b.e_[i];
  return r;
}

Matrix Matrix::operator-() const {
  Matrix r = *this;
  for (FieldElem& x : r.e_) x = -x;
  return r;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  require_ctx(a, b);
  if (a.cols_ != b.rows_) throw std::invalid_argument("matrix shape mismatch in product");
  Matrix r(a.ctx_, a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const FieldElem& aik = a.at(i, k);
      if (aik.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        const FieldElem& bkj = b.at(k, j);
        if (!bkj.is_zero()) r.at(i, j) += aik * bkj;
      }
    }
  }
  return r;
}

Matrix operator*(const FieldElem& s, const Matrix& a) {
  Matrix r = a;
  for (FieldElem& x : r.e_) x = s * x;
  return r;
}

bool operator==(const Matrix& a, const Matrix& b) {
  if (a.ctx_ != b.ctx_ || a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
  for (std::size_t i = 0; i < a.e_.size(); ++i)
    if (a.e_[i] != b.e_[i]) return false;
  return true;
}

std::vector<FieldElem> operator*(const Matrix& M, const std::vector<FieldElem>& v) {
  if (v.size() != M.cols()) throw std::invalid_argument("vector length mismatch");
  std::vector<FieldElem> r(M.rows(), M.ctx()->zero());
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j) {
      const FieldElem& m = M.at(i, j);
      if (!m.is_zero() && !v[j].is_zero()) r[i] += m * v[j];
    }
  return r;
}

Matrix stack(const Matrix& top, const Matrix& bottom) {
  require_ctx(top, bottom);
  if (top.cols() != bottom.cols()) throw std::invalid_argument("stack: column mismatch");
  Matrix r(top.ctx(), top.rows() + bottom.rows(), top.cols());
  for (std::size_t i = 0; i < top.rows(); ++i)
    for (std::size_t j = 0; j < top.cols(); ++j) r.at(i, j) = top.at(i, j);
  for (std::size_t i = 0; i < bottom.rows(); ++i)
    for (std::size_t j = 0; j < top.cols(); ++j) r.at(top.rows() + i, j) = bottom.at(i, j);
  return r;
}

RrefResult rref(const Matrix& M) {
  RrefResult res;
  res.mat = M;
  Matrix& A = res.mat;
  std::size_t r = 0;
  for (std::size_t c = 0; c < A.cols() && r < A.rows(); ++c) {
    std::size_t pivot = r;
    while (pivot < A.rows() && A.at(pivot, c).is_zero()) ++pivot;
    if (pivot == A.rows()) continue;
    if (pivot != r)
      for (std::size_t j = 0; j < A.cols(); ++j) std::swap(A.at(pivot, j), A.at(r, j));
    const FieldElem inv = A.at(r, c).inverse();
    for (std::size_t j = c; j < A.cols(); ++j) A.at(r, j) = inv * A.at(r, j);
    for (std::size_t i = 0; i < A.rows(); ++i) {
      if (i == r) continue;
      const FieldElem f = A.at(i, c);
      if (f.is_zero()) continue;
      for (std::size_t j = c; j < A.cols(); ++j) A.at(i, j) -= f * A.at(r, j);
    }
    res.pivots.push_back(c);
    ++r;
  }
  res.rank = r;
  return res;
}

// ---------------------------------------------------------------------
// Subspace
// ---------------------------------------------------------------------

Subspace Subspace::zero(const FieldCtx* ctx, std::size_t ambient) {
  Subspace s;
  s.basis_ = Matrix(ctx, 0, ambient);
  return s;
}

Subspace Subspace::full(const FieldCtx* ctx, std::size_t ambient) {
  Subspace s;
  s.basis_ = Matrix::identity(ctx, ambient);
  s.pivots_.resize(ambient);
  for (std::size_t i = 0; i < ambient; ++i) s.pivots_[i] = i;
  return s;
}

Subspace Subspace::row_span(const Matrix& rows) {
  RrefResult r = rref(rows);
  Subspace s;
  s.basis_ = Matrix(rows.ctx(), r.rank, rows.cols());
  for (std::size_t i = 0; i < r.rank; ++i)
    for (std::size_t j = 0; j < rows.cols(); ++j) s.basis_.at(i, j) = r.mat.at(i, j);
  s.pivots_ = std::move(r.pivots);
  return s;
}

Subspace Subspace::span(const FieldCtx* ctx, std::size_t ambient,
                        const std::vector<std::vector<FieldElem>>& vecs) {
  return row_span(Matrix::from_rows(ctx, ambient, vecs));
}

bool Subspace::contains(const std::vector<FieldElem>& v) const {
  std::vector<FieldElem> r = reduce(v);
  for (const FieldElem& x : r)
    if (!x.is_zero()) return false;
  return true;
}

bool Subspace::contains(const Subspace& other) const {
  if (ambient_dim() != other.ambient_dim()) throw std::invalid_argument("ambient mismatch");
  for (std::size_t i = 0; i < other.dim(); ++i)
    if (!contains(other.basis_vector(i))) return false;
  return true;
}

std::vector<FieldElem> Subspace::coords(const std::vector<FieldElem>& v) const {
  if (v.size() != ambient_dim()) throw std::invalid_argument("vector length mismatch");
  // Echelon basis: the coefficient of row i is v's entry at pivot i after
  // clearing previous rows; since rows are fully reduced it is just
  // v[pivots_[i]].
  std::vector<FieldElem> c(dim(), ctx()->zero());
  std::vector<FieldElem> rem = v;
  for (std::size_t i = 0; i < dim(); ++i) {
    c[i] = rem[pivots_[i]];
    if (!c[i].is_zero())
      for (std::size_t j = 0; j < ambient_dim(); ++j) rem[j] -= c[i] * basis_.at(i, j);
  }
  for (const FieldElem& x : rem)
    if (!x.is_zero()) throw std::domain_error("vector is not in the subspace");
  return c;
}

std::vector<FieldElem> Subspace::reduce(std::vector<FieldElem> v) const {
  if (v.size() != ambient_dim()) throw std::invalid_argument("vector length mismatch");
  for (std::size_t i = 0; i < dim(); ++i) {
    const FieldElem c = v[pivots_[i]];
    if (!c.is_zero())
      for (std::size_t j = 0; j < ambient_dim(); ++j) v[j] -= c * basis_.at(i, j);
  }
  return v;
}

bool operator==(const Subspace& a, const Subspace& b) {
  return a.basis_ == b.basis_;  // canonical representation
}

Subspace kernel(const Matrix& M) {
  RrefResult r = rref(M);
  const std::size_t n = M.cols();
  std::vector<bool> is_pivot(n, false);
  for (std::size_t p : r.pivots) is_pivot[p] = true;
  std::vector<std::vector<FieldElem>> basis;
  for (std::size_t c = 0; c < n; ++c) {
    if (is_pivot[c]) continue;
    std::vector<FieldElem> v(n, M.ctx()->zero());
    v[c] = M.ctx()->one();
    for (std::size_t i = 0; i < r.rank; ++i) v[r.pivots[i]] = -r.mat.at(i, c);
    basis.push_back(std::move(v));
  }
  return Subspace::span(M.ctx(), n, basis);
}

Subspace row_space(const Matrix& M) { return Subspace::row_span(M); }

Subspace column_space(const Matrix& M) { return Subspace::row_span(M.transpose()); }

Matrix kron(const Matrix& a, const Matrix& b) {
  if (a.ctx() != b.ctx()) throw std::invalid_argument("kron: mixed field contexts");
  Matrix r(a.ctx(), a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a.at(i, j).is_zero()) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          r.at(i * b.rows() + k, j * b.cols() + l) = a.at(i, j) * b.at(k, l);
    }
  return r;
}

std::optional<std::vector<FieldElem>> solve(const Matrix& A, const std::vector<FieldElem>& b) {
  if (b.size() != A.rows()) throw std::invalid_argument("solve: rhs length mismatch");
  Matrix aug(A.ctx(), A.rows(), A.cols() + 1);
  for (std::size_t i = 0; i < A.rows(); ++i) {
    for (std::size_t j = 0; j < A.cols(); ++j) aug.at(i, j) = A.at(i, j);
    aug.at(i, A.cols()) = b[i];
  }
  RrefResult r = rref(aug);
  std::vector<FieldElem> x(A.cols(), A.ctx()->zero());
  for (std::size_t i = 0; i < r.rank; ++i) {
    if (r.pivots[i] == A.cols()) return std::nullopt;  // inconsistent row
    x[r.pivots[i]] = r.mat.at(i, A.cols());
  }
  return x;
}

Subspace intersect(const Subspace& A, const Subspace& B) {
  if (A.ambient_dim() != B.ambient_dim()) throw std::invalid_argument("ambient mismatch");
  const FieldCtx* K = A.ctx();
  const std::size_t n = A.ambient_dim();
  // Zassenhaus: rows [a | a] for a in A, [b | 0] for b in B; rows of the
  // echelon form with zero left half carry the intersection on the right.
  Matrix block(K, A.dim() + B.dim(), 2 * n);
  for (std::size_t i = 0; i < A.dim(); ++i)
    for (std::size_t j = 0; j < n; ++j) {
      block.at(i, j) = A.basis().at(i, j);
      block.at(i, n + j) = A.basis().at(i, j);
    }
  for (std::size_t i = 0; i < B.dim(); ++i)
    for (std::size_t j = 0; j < n; ++j) block.at(A.dim() + i, j) = B.basis().at(i, j);
  RrefResult r = rref(block);
  std::vector<std::vector<FieldElem>> rows;
  for (std::size_t i = 0; i < r.rank; ++i) {
    bool left_zero = true;
    for (std::size_t j = 0; j < n && left_zero; ++j) left_zero = r.mat.at(i, j).is_zero();
    if (!left_zero) continue;
    std::vector<FieldElem> v(n, K->zero());
    for (std::size_t j = 0; j < n; ++j) v[j] = r.mat.at(i, n + j);
    rows.push_back(std::move(v));
  }
  return Subspace::span(K, n, rows);
}

Subspace sum(const Subspace& A, const Subspace& B) {
  if (A.ambient_dim() != B.ambient_dim()) throw std::invalid_argument("ambient mismatch");
  return Subspace::row_span(stack(A.basis(), B.basis()));
}

bool EchelonBasis::insert(std::vector<FieldElem> v) {
  if (v.size() != ambient_) throw std::invalid_argument("echelon: vector length mismatch");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const FieldElem c = v[lead_[i]];
    if (c.is_zero()) continue;
    for (std::size_t j = lead_[i]; j < v.size(); ++j) v[j] -= c * rows_[i][j];
  }
  std::size_t l = 0;
  while (l < v.size() && v[l].is_zero()) ++l;
  if (l == v.size()) return false;
  const FieldElem inv = v[l].inverse();
  for (std::size_t j = l; j < v.size(); ++j) v[j] = inv * v[j];
  rows_.push_back(std::move(v));
  lead_.push_back(l);
  return true;
}

bool EchelonBasis::member(std::vector<FieldElem> v) const {
  if (v.size() != ambient_) throw std::invalid_argument("echelon: vector length mismatch");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const FieldElem c = v[lead_[i]];
    if (c.is_zero()) continue;
    for (std::size_t j = lead_[i]; j < v.size(); ++j) v[j] -= c * rows_[i][j];
  }
  for (const FieldElem& x : v)
    if (!x.is_zero()) return false;
  return true;
}

Subspace EchelonBasis::to_subspace() const {
  return Subspace::span(ctx_, ambient_, rows_);
}

Subspace spin(const FieldCtx* ctx, std::size_t ambient,
              const std::vector<std::vector<FieldElem>>& generators,
              const std::vector<Matrix>& operators) {
  for (const Matrix& op : operators)
    if (op.rows() != ambient || op.cols() != ambient)
      throw std::invalid_argument("spin: operator shape mismatch");
  EchelonBasis ech(ctx, ambient);
  std::vector<std::vector<FieldElem>> work;
  for (const std::vector<FieldElem>& g : generators) {
    if (g.size() != ambient) throw std::invalid_argument("spin: generator length mismatch");
    if (ech.insert(g)) work.push_back(ech.rows().back());
  }
  while (!work.empty()) {
    std::vector<FieldElem> v = std::move(work.back());
    work.pop_back();
    for (const Matrix& op : operators) {
      std::vector<FieldElem> w = (op * v);
      if (ech.insert(w)) work.push_back(ech.rows().back());
    }
  }
  return ech.to_subspace();
}

std::vector<std::size_t> complement_columns(const Subspace& U) {
  std::vector<bool> is_pivot(U.ambient_dim(), false);
  for (std::size_t p : U.pivots()) is_pivot[p] = true;
  std::vector<std::size_t> comp;
  for (std::size_t c = 0; c < U.ambient_dim(); ++c)
    if (!is_pivot[c]) comp.push_back(c);
  return comp;
}

std::vector<FieldElem> quotient_coords(const Subspace& U, const std::vector<FieldElem>& v) {
  std::vector<FieldElem> rem = U.reduce(v);
  std::vector<FieldElem> out;
  for (std::size_t c : complement_columns(U)) out.push_back(rem[c]);
  return out;
}

std::vector<FieldElem> quotient_lift(const Subspace& U, const std::vector<FieldElem>& coords) {
  std::vector<std::size_t> comp = complement_columns(U);
  if (coords.size() != comp.size()) throw std::invalid_argument("quotient coordinate mismatch");
  std::vector<FieldElem> v(U.ambient_dim(), U.ctx()->zero());
  for (std::size_t i = 0; i < comp.size(); ++i) v[comp[i]] = coords[i];
  return v;
}

Matrix restrict_action(const Matrix& M, const Subspace& U) {
  if (M.cols() != U.ambient_dim() || !M.is_square())
    throw std::invalid_argument("restrict_action: shape mismatch");
  Matrix R(M.ctx(), U.dim(), U.dim());
  for (std::size_t i = 0; i < U.dim(); ++i) {
    std::vector<FieldElem> img = (M * U.basis_vector(i));
    std::vector<FieldElem> c;
    try {
      c = U.coords(img);
    } catch (const std::domain_error&) {
      throw std::domain_error("restrict_action: subspace is not invariant");
    }
    for (std::size_t j = 0; j < U.dim(); ++j) R.at(j, i) = c[j];
  }
  return R;
}

Matrix quotient_action(const Matrix& M, const Subspace& U) {
  if (M.cols() != U.ambient_dim() || !M.is_square())
    throw std::invalid_argument("quotient_action: shape mismatch");
  // Invariance check: M maps U into U.
  for (std::size_t i = 0; i < U.dim(); ++i)
    if (!U.contains((M * U.basis_vector(i))))
      throw std::domain_error("quotient_action: subspace is not invariant");
  std::vector<std::size_t> comp = complement_columns(U);
  Matrix Q(M.ctx(), comp.size(), comp.size());
  for (std::size_t j = 0; j < comp.size(); ++j) {
    std::vector<FieldElem> e(U.ambient_dim(), M.ctx()->zero());
    e[comp[j]] = M.ctx()->one();
    std::vector<FieldElem> qc = quotient_coords(U, (M * e));
    for (std::size_t i = 0; i < comp.size(); ++i) Q.at(i, j) = qc[i];
  }
  return Q;
}

}  // namespace modlie
