// Dense exact linear algebra over prime fields F_p.
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dualizer {

using Scalar = std::uint32_t;
using Vector = std::vector<Scalar>;

inline constexpr Scalar kDefaultPrime = 101;

/// Thrown on shape mismatches and other caller errors in the linear algebra layer.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Field arithmetic on reduced residues. Intermediates are 64-bit, so any
// prime below 2^32 is safe.
struct Fp {
  static Scalar reduce(std::int64_t v, Scalar p) {
    std::int64_t r = v % static_cast<std::int64_t>(p);
    return static_cast<Scalar>(r < 0 ? r + p : r);
  }
  static Scalar add(Scalar a, Scalar b, Scalar p) {
    std::uint64_t s = std::uint64_t{a} + b;
    return static_cast<Scalar>(s >= p ? s - p : s);
  }
  static Scalar sub(Scalar a, Scalar b, Scalar p) { return a >= b ? a - b : a + p - b; }
  static Scalar neg(Scalar a, Scalar p) { return a == 0 ? 0 : p - a; }
  static Scalar mul(Scalar a, Scalar b, Scalar p) {
    return static_cast<Scalar>((std::uint64_t{a} * b) % p);
  }
  static Scalar pow(Scalar a, std::uint64_t e, Scalar p) {
    Scalar r = 1 % p;
    while (e) {
      if (e & 1) r = mul(r, a, p);
      a = mul(a, a, p);
      e >>= 1;
    }
    return r;
  }
  static Scalar inv(Scalar a, Scalar p) {
    if (a == 0) throw std::domain_error("inverse of zero in F_p");
    return pow(a, p - 2, p);
  }
  // (-1)^k as a residue
  static Scalar sign(long long k, Scalar p) { return (k % 2 == 0) ? 1 % p : p - 1; }
};

/// v += c * w (entrywise, mod p)
inline void axpy(std::span<Scalar> v, Scalar c, std::span<const Scalar> w, Scalar p) {
  if (c == 0) return;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (w[i]) v[i] = static_cast<Scalar>((v[i] + std::uint64_t{c} * w[i]) % p);
}

inline bool is_zero(std::span<const Scalar> v) {
  return std::all_of(v.begin(), v.end(), [](Scalar x) { return x == 0; });
}

/// Row-major dense matrix over F_p. The prime travels with the value.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, Scalar p)
      : rows_(rows), cols_(cols), p_(p), data_(rows * cols, 0) {
    if (!is_prime(p)) throw DimensionError("matrix modulus " + std::to_string(p) + " is not prime");
  }

  static Matrix identity(std::size_t n, Scalar p) {
    Matrix m(n, n, p);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static Matrix from_rows(const std::vector<std::vector<std::int64_t>>& rows, Scalar p) {
    std::size_t c = rows.empty() ? 0 : rows.front().size();
    Matrix m(rows.size(), c, p);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != c) throw DimensionError("ragged row list");
      for (std::size_t j = 0; j < c; ++j) m(i, j) = Fp::reduce(rows[i][j], p);
    }
    return m;
  }

  static Matrix from_rows(std::initializer_list<std::initializer_list<std::int64_t>> rows, Scalar p) {
    std::vector<std::vector<std::int64_t>> v;
    for (auto& r : rows) v.emplace_back(r);
    return from_rows(v, p);
  }

  // Columns given as vectors of length `rows`.
  static Matrix from_columns(const std::vector<Vector>& cols, std::size_t rows, Scalar p) {
    Matrix m(rows, cols.size(), p);
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != rows) throw DimensionError("column length mismatch");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Scalar prime() const { return p_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Scalar operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Scalar> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Scalar> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  Vector column(std::size_t c) const {
    Vector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, c);
    return v;
  }

  std::vector<Vector> column_list() const {
    std::vector<Vector> out;
    out.reserve(cols_);
    for (std::size_t j = 0; j < cols_; ++j) out.push_back(column(j));
    return out;
  }

  void set_column(std::size_t c, std::span<const Scalar> v) {
    if (v.size() != rows_) throw DimensionError("set_column: length mismatch");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, c) = v[i];
  }

  bool is_zero() const { return dualizer::is_zero(data_); }

  Matrix transpose() const {
    Matrix t(cols_, rows_, p_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix scaled(Scalar c) const {
    Matrix m = *this;
    for (auto& x : m.data_) x = Fp::mul(x, c, p_);
    return m;
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionError("block out of range");
    Matrix b(nr, nc, p_);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }

  void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw DimensionError("set_block out of range");
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

  Vector apply(std::span<const Scalar> v) const {
    if (v.size() != cols_) throw DimensionError("apply: vector length mismatch");
    Vector out(rows_, 0);
    for (std::size_t i = 0; i < rows_; ++i) {
      std::uint64_t acc = 0;
      auto r = row(i);
      for (std::size_t j = 0; j < cols_; ++j) {
        if (r[j] && v[j]) acc = (acc + std::uint64_t{r[j]} * v[j]) % p_;
      }
      out[i] = static_cast<Scalar>(acc);
    }
    return out;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DimensionError("matrix product: inner dimension mismatch");
    Matrix c(a.rows_, b.cols_, a.p_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      auto crow = c.row(i);
      for (std::size_t k = 0; k < a.cols_; ++k) {
        Scalar x = a(i, k);
        if (x) axpy(crow, x, b.row(k), a.p_);
      }
    }
    return c;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    a.check_same_shape(b);
    Matrix c = a;
    for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] = Fp::add(a.data_[i], b.data_[i], a.p_);
    return c;
  }

  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    a.check_same_shape(b);
    Matrix c = a;
    for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] = Fp::sub(a.data_[i], b.data_[i], a.p_);
    return c;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.p_ == b.p_ && a.data_ == b.data_;
  }

  friend std::ostream& operator<<(std::ostream& os, const Matrix& m) {
    os << '[';
    for (std::size_t i = 0; i < m.rows_; ++i) {
      if (i) os << "; ";
      for (std::size_t j = 0; j < m.cols_; ++j) os << (j ? " " : "") << m(i, j);
    }
    return os << ']';
  }

 private:
  void check_same_shape(const Matrix& b) const {
    if (rows_ != b.rows_ || cols_ != b.cols_) throw DimensionError("shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Scalar p_ = kDefaultPrime;
  Vector data_;
};

inline Matrix hstack(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw DimensionError("hstack: row mismatch");
  Matrix m(a.rows(), a.cols() + b.cols(), a.prime());
  m.set_block(0, 0, a);
  m.set_block(0, a.cols(), b);
  return m;
}

inline Matrix vstack(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw DimensionError("vstack: column mismatch");
  Matrix m(a.rows() + b.rows(), a.cols(), a.prime());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), 0, b);
  return m;
}

// Block diagonal [a 0; 0 b].
inline Matrix direct_sum(const Matrix& a, const Matrix& b) {
  Matrix m(a.rows() + b.rows(), a.cols() + b.cols(), a.prime());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), a.cols(), b);
  return m;
}

struct RrefResult {
  Matrix reduced;
  std::vector<std::size_t> pivots;
};

/// Reduced row echelon form. Pivot choice is the first nonzero entry in
/// the column scan, which makes every downstream result reproducible.
inline RrefResult rref(Matrix m) {
  const Scalar p = m.prime();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t piv = r;
    while (piv < m.rows() && m(piv, c) == 0) ++piv;
    if (piv == m.rows()) continue;
    if (piv != r) std::swap_ranges(m.row(piv).begin(), m.row(piv).end(), m.row(r).begin());
    Scalar inv = Fp::inv(m(r, c), p);
    for (auto& x : m.row(r)) x = Fp::mul(x, inv, p);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      axpy(m.row(i), Fp::neg(m(i, c), p), m.row(r), p);
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(m), std::move(pivots)};
}

/// Incrementally maintained semi-echelon basis of a subspace of F_p^n.
/// Each stored vector has its pivot (first nonzero entry) normalized to 1
/// and pivots are pairwise distinct.
class EchelonBasis {
 public:
  EchelonBasis(std::size_t ambient, Scalar p) : n_(ambient), p_(p) {}

  std::size_t ambient_dim() const { return n_; }
  std::size_t dim() const { return rows_.size(); }

  // Residue of v modulo the span, reduced in ascending pivot order.
  Vector reduce(Vector v) const {
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      Scalar c = v[pivots_[k]];
      if (c) axpy(v, Fp::neg(c, p_), rows_[k], p_);
    }
    return v;
  }

  bool contains(const Vector& v) const { return dualizer::is_zero(reduce(v)); }

  // Returns true when v was independent of the current span.
  bool insert(const Vector& v) {
    if (v.size() != n_) throw DimensionError("EchelonBasis::insert: length mismatch");
    Vector w = reduce(v);
    auto it = std::find_if(w.begin(), w.end(), [](Scalar x) { return x != 0; });
    if (it == w.end()) return false;
    std::size_t piv = static_cast<std::size_t>(it - w.begin());
    Scalar inv = Fp::inv(*it, p_);
    for (auto& x : w) x = Fp::mul(x, inv, p_);
    auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), piv);
    auto idx = pos - pivots_.begin();
    pivots_.insert(pos, piv);
    rows_.insert(rows_.begin() + idx, std::move(w));
    return true;
  }

  const std::vector<Vector>& vectors() const { return rows_; }

 private:
  std::size_t n_;
  Scalar p_;
  std::vector<Vector> rows_;
  std::vector<std::size_t> pivots_;
};

inline std::size_t rank(const Matrix& m) {
  if (m.rows() <= m.cols()) return rref(m).pivots.size();
  return rref(m.transpose()).pivots.size();
}

/// Columns form a basis of {x : m x = 0}. Free variables are set to the
/// standard basis vectors in ascending column order.
inline Matrix kernel_basis(const Matrix& m) {
  const Scalar p = m.prime();
  auto [red, piv] = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : piv) is_pivot[c] = true;
  std::vector<Vector> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vector v(m.cols(), 0);
    v[f] = 1;
    for (std::size_t k = 0; k < piv.size(); ++k) v[piv[k]] = Fp::neg(red(k, f), p);
    basis.push_back(std::move(v));
  }
  return Matrix::from_columns(basis, m.cols(), p);
}

/// Some x with m x = b, free variables fixed to zero; nullopt if inconsistent.
inline std::optional<Vector> solve_linear(const Matrix& m, const Vector& b) {
  if (b.size() != m.rows()) throw DimensionError("solve_linear: right-hand side length mismatch");
  Matrix aug(m.rows(), m.cols() + 1, m.prime());
  aug.set_block(0, 0, m);
  for (std::size_t i = 0; i < m.rows(); ++i) aug(i, m.cols()) = b[i];
  auto [red, piv] = rref(aug);
  if (!piv.empty() && piv.back() == m.cols()) return std::nullopt;
  Vector x(m.cols(), 0);
  for (std::size_t k = 0; k < piv.size(); ++k) x[piv[k]] = red(k, m.cols());
  return x;
}

/// Solves m X = B column by column, throwing if some column is unsolvable.
inline Matrix solve_columns(const Matrix& m, const Matrix& b) {
  if (b.rows() != m.rows()) throw DimensionError("solve_columns: row mismatch");
  Matrix aug = hstack(m, b);
  auto [red, piv] = rref(aug);
  Matrix x(m.cols(), b.cols(), m.prime());
  for (std::size_t k = 0; k < piv.size(); ++k) {
    if (piv[k] >= m.cols()) throw DimensionError("solve_columns: inconsistent system");
    for (std::size_t j = 0; j < b.cols(); ++j) x(piv[k], j) = red(k, m.cols() + j);
  }
  return x;
}

/// Indices of a maximal independent subset of the columns, chosen greedily left to right.
inline std::vector<std::size_t> independent_columns(const Matrix& m) { return rref(m).pivots; }

/// Basis (as columns) of the column space.
inline Matrix image_basis(const Matrix& m) {
  auto piv = independent_columns(m);
  std::vector<Vector> cols;
  for (auto c : piv) cols.push_back(m.column(c));
  return Matrix::from_columns(cols, m.rows(), m.prime());
}

/// Columns of `candidates` (in order) extending a basis of span(base) to a basis of
/// span(base) + span(candidates); returns the indices of the chosen candidates.
inline std::vector<std::size_t> complement_columns(const Matrix& base, const Matrix& candidates) {
  EchelonBasis eb(candidates.rows(), candidates.prime());
  for (std::size_t j = 0; j < base.cols(); ++j) eb.insert(base.column(j));
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < candidates.cols(); ++j)
    if (eb.insert(candidates.column(j))) out.push_back(j);
  return out;
}

/// Coordinates of vectors with respect to a fixed basis (the columns of `basis`,
/// assumed independent). Uses an invertible square row-subset of the basis.
class SubspaceCoordinates {
 public:
  SubspaceCoordinates() = default;
  explicit SubspaceCoordinates(const Matrix& basis) : basis_(basis) {
    const Scalar p = basis.prime();
    rows_ = rref(basis.transpose()).pivots;
    if (rows_.size() != basis.cols()) throw DimensionError("SubspaceCoordinates: basis columns are dependent");
    Matrix sq(rows_.size(), basis.cols(), p);
    for (std::size_t k = 0; k < rows_.size(); ++k)
      for (std::size_t j = 0; j < basis.cols(); ++j) sq(k, j) = basis(rows_[k], j);
    inv_ = solve_columns(sq, Matrix::identity(rows_.size(), p));
  }

  std::size_t dim() const { return rows_.size(); }

  // Does not check membership; use `in_span` when unsure.
  Vector coords(std::span<const Scalar> v) const {
    Vector sub(rows_.size());
    for (std::size_t k = 0; k < rows_.size(); ++k) sub[k] = v[rows_[k]];
    return inv_.apply(sub);
  }

  bool in_span(std::span<const Scalar> v) const {
    Vector c = coords(v);
    return basis_.apply(c) == Vector(v.begin(), v.end());
  }

  // Coordinates of every column of m.
  Matrix coords(const Matrix& m) const {
    Matrix out(rows_.size(), m.cols(), m.prime());
    for (std::size_t j = 0; j < m.cols(); ++j) out.set_column(j, coords(m.column(j)));
    return out;
  }

 private:
  Matrix basis_;
  std::vector<std::size_t> rows_;
  Matrix inv_;
};

}  // namespace dualizer
