// Bounded chain complexes of A-modules, homologically graded (d has degree -1).
//
// Sign conventions used throughout the project:
//   suspension      (Σ^s X)_i = X_{i-s},  d = (-1)^s d_X
//   Hom complex     Hom(X,Y)_n = Π_i Hom_A(X_i, Y_{i+n}),  d f = d_Y f - (-1)^n f d_X
//   Matlis dual     (X^∨)_i = (X_{-i})^∨,  d_i = (-1)^i (d_{-i+1})^T
#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modulecat.hpp"

namespace dualizer {

class ComplexError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ChainComplex {
 public:
  ChainComplex() = default;

  /// diffs[k] is d_{lo+k+1} : X_{lo+k+1} -> X_{lo+k}; diffs.size() == terms.size() - 1.
  ChainComplex(AlgebraPtr ring, int lo, std::vector<AModule> terms, std::vector<Matrix> diffs)
      : ring_(std::move(ring)), lo_(lo), terms_(std::move(terms)), diffs_(std::move(diffs)) {
    validate(true);
  }

  struct Trusted {};
  ChainComplex(AlgebraPtr ring, int lo, std::vector<AModule> terms, std::vector<Matrix> diffs, Trusted)
      : ring_(std::move(ring)), lo_(lo), terms_(std::move(terms)), diffs_(std::move(diffs)) {
    validate(false);
  }

  static ChainComplex zero(AlgebraPtr ring) { return ChainComplex(std::move(ring), 0, {}, {}); }

  static ChainComplex concentrated(const AModule& m, int degree) {
    return ChainComplex(m.ring_ptr(), degree, {m}, {});
  }

  const AlgebraPtr& ring_ptr() const { return ring_; }
  const LocalAlgebra& ring() const { return *ring_; }
  Scalar prime() const { return ring_->prime(); }
  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(terms_.size()) - 1; }
  bool in_range(int i) const { return i >= lo_ && i <= hi(); }

  std::size_t dim(int i) const { return in_range(i) ? terms_[i - lo_].dim() : 0; }

  AModule term(int i) const { return in_range(i) ? terms_[i - lo_] : zero_module(ring_); }
  const AModule& term_ref(int i) const { return terms_.at(i - lo_); }

  /// d_i : X_i -> X_{i-1}; a zero matrix of the right shape outside the stored range.
  Matrix diff(int i) const {
    if (in_range(i) && in_range(i - 1)) return diffs_[i - 1 - lo_];
    return Matrix(dim(i - 1), dim(i), prime());
  }

  std::size_t total_dim() const {
    std::size_t s = 0;
    for (auto& t : terms_) s += t.dim();
    return s;
  }

  // Checks d∘d = 0 and A-linearity; throws ComplexError.
  void check() const { validate(true); }

 private:
  void validate(bool full) const {
    if (!ring_) throw ComplexError("complex without a base ring");
    if (terms_.empty() ? !diffs_.empty() : diffs_.size() + 1 != terms_.size())
      throw ComplexError("complex needs one differential between consecutive terms");
    for (int i = lo_ + 1; i <= hi(); ++i) {
      const Matrix& d = diffs_[i - 1 - lo_];
      if (d.rows() != dim(i - 1) || d.cols() != dim(i))
        throw ComplexError("differential d_" + std::to_string(i) + " has the wrong shape");
    }
    if (!full) return;
    for (int i = lo_ + 2; i <= hi(); ++i)
      if (!(diff(i - 1) * diff(i)).is_zero()) throw ComplexError("d_" + std::to_string(i - 1) + " d_" + std::to_string(i) + " != 0");
    for (int i = lo_ + 1; i <= hi(); ++i) {
      ModuleMap f{term(i), term(i - 1), diff(i)};
      if (!f.is_linear()) throw ComplexError("d_" + std::to_string(i) + " is not A-linear");
    }
  }

  AlgebraPtr ring_;
  int lo_ = 0;
  std::vector<AModule> terms_;
  std::vector<Matrix> diffs_;
};

/// Degreewise A-linear maps commuting with the differentials.
struct ChainMap {
  ChainComplex source;
  ChainComplex target;
  std::map<int, Matrix> components;  // missing degrees are zero

  Matrix component(int i) const {
    auto it = components.find(i);
    if (it != components.end()) return it->second;
    return Matrix(target.dim(i), source.dim(i), source.prime());
  }

  int lo() const { return std::min(source.lo(), target.lo()); }
  int hi() const { return std::max(source.hi(), target.hi()); }

  bool commutes() const {
    for (int i = lo(); i <= hi() + 1; ++i)
      if (!(target.diff(i) * component(i) == component(i - 1) * source.diff(i))) return false;
    return true;
  }

  bool is_linear() const {
    for (int i = lo(); i <= hi(); ++i)
      if (!ModuleMap{source.term(i), target.term(i), component(i)}.is_linear()) return false;
    return true;
  }
};

inline ChainMap identity_map(const ChainComplex& x) {
  ChainMap f{x, x, {}};
  for (int i = x.lo(); i <= x.hi(); ++i) f.components[i] = Matrix::identity(x.dim(i), x.prime());
  return f;
}

inline std::size_t homology_dim(const ChainComplex& x, int i) {
  if (x.dim(i) == 0) return 0;
  std::size_t z = x.dim(i) - rank(x.diff(i));
  return z - rank(x.diff(i + 1));
}

/// dim H_i for every i in [lo, hi].
inline std::map<int, std::size_t> homology(const ChainComplex& x) {
  std::map<int, std::size_t> h;
  for (int i = x.lo(); i <= x.hi(); ++i) h[i] = homology_dim(x, i);
  return h;
}

inline bool is_acyclic(const ChainComplex& x) {
  for (int i = x.lo(); i <= x.hi(); ++i)
    if (homology_dim(x, i)) return false;
  return true;
}

/// H_i as an A-module: Z_i / B_i with the induced action.
inline AModule homology_module(const ChainComplex& x, int i) {
  if (x.dim(i) == 0) return zero_module(x.ring_ptr());
  ModuleMap z = submodule(x.term(i), kernel_basis(x.diff(i)));
  Matrix bd = x.diff(i + 1);
  SubspaceCoordinates zc(z.matrix);
  Matrix bz = bd.cols() ? zc.coords(bd) : Matrix(z.matrix.cols(), 0, x.prime());
  return quotient_module(z.source, bz).target;
}

inline ChainComplex suspend(const ChainComplex& x, int s) {
  Scalar sg = Fp::sign(s, x.prime());
  std::vector<AModule> terms;
  std::vector<Matrix> diffs;
  for (int i = x.lo(); i <= x.hi(); ++i) {
    terms.push_back(x.term(i));
    if (i > x.lo()) diffs.push_back(x.diff(i).scaled(sg));
  }
  return ChainComplex(x.ring_ptr(), x.lo() + s, std::move(terms), std::move(diffs), ChainComplex::Trusted{});
}

inline ChainComplex matlis_dual_complex(const ChainComplex& x) {
  std::vector<AModule> terms;
  std::vector<Matrix> diffs;
  for (int i = -x.hi(); i <= -x.lo(); ++i) {
    terms.push_back(matlis_dual_module(x.term(-i)));
    if (i > -x.hi()) diffs.push_back(x.diff(-i + 1).transpose().scaled(Fp::sign(i, x.prime())));
  }
  if (terms.empty()) return ChainComplex::zero(x.ring_ptr());
  return ChainComplex(x.ring_ptr(), -x.hi(), std::move(terms), std::move(diffs), ChainComplex::Trusted{});
}

/// The canonical isomorphism X -> (X^∨)^∨; it is (-1)^i on degree i under the
/// sign convention above.
inline ChainMap double_dual_iso(const ChainComplex& x) {
  ChainMap f{x, matlis_dual_complex(matlis_dual_complex(x)), {}};
  for (int i = x.lo(); i <= x.hi(); ++i)
    f.components[i] = Matrix::identity(x.dim(i), x.prime()).scaled(Fp::sign(i, x.prime()));
  return f;
}

inline ChainComplex direct_sum(const ChainComplex& x, const ChainComplex& y) {
  if (x.total_dim() == 0 && x.lo() > x.hi()) return y;
  if (y.lo() > y.hi()) return x;
  int lo = std::min(x.lo(), y.lo()), hi = std::max(x.hi(), y.hi());
  std::vector<AModule> terms;
  std::vector<Matrix> diffs;
  for (int i = lo; i <= hi; ++i) {
    terms.push_back(direct_sum(x.term(i), y.term(i)));
    if (i > lo) diffs.push_back(direct_sum(x.diff(i), y.diff(i)));
  }
  return ChainComplex(x.ring_ptr(), lo, std::move(terms), std::move(diffs), ChainComplex::Trusted{});
}

/// Dimension of the image of H_i(f).
inline std::size_t homology_image_dim(const ChainMap& f, int i) {
  const auto& x = f.source;
  const auto& y = f.target;
  if (x.dim(i) == 0 || y.dim(i) == 0) return 0;
  Matrix z = kernel_basis(x.diff(i));
  Matrix fz = f.component(i) * z;
  Matrix b = y.diff(i + 1);
  std::size_t rb = rank(b);
  return rank(hstack(b, fz)) - rb;
}

/// H_i(f) bijective for every i in [lo, hi].
inline bool is_quasi_iso_in_range(const ChainMap& f, int lo, int hi) {
  for (int i = lo; i <= hi; ++i) {
    std::size_t hx = homology_dim(f.source, i), hy = homology_dim(f.target, i);
    if (hx != hy) return false;
    if (homology_image_dim(f, i) != hx) return false;
  }
  return true;
}

inline bool is_quasi_iso(const ChainMap& f) { return is_quasi_iso_in_range(f, f.lo(), f.hi()); }

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Truncation {
  ChainComplex complex;
  ChainMap map;  // truncation -> original (sub) or original -> truncation (quotient)
};

/// τ_{≥n}: ... -> X_{n+1} -> Z_n -> 0, with its inclusion.
inline Truncation truncate_below(const ChainComplex& x, int n) {
  if (n <= x.lo()) return {x, identity_map(x)};
  std::vector<AModule> terms;
  std::vector<Matrix> diffs;
  ModuleMap z = submodule(x.term(n), kernel_basis(x.diff(n)));
  terms.push_back(z.source);
  ChainMap incl{{}, x, {}};
  incl.components[n] = z.matrix;
  if (x.hi() > n) {
    SubspaceCoordinates zc(z.matrix.cols() ? z.matrix : Matrix(x.dim(n), 0, x.prime()));
    Matrix d = z.matrix.cols() ? zc.coords(x.diff(n + 1)) : Matrix(0, x.dim(n + 1), x.prime());
    diffs.push_back(d);
    for (int i = n + 1; i <= x.hi(); ++i) {
      terms.push_back(x.term(i));
      if (i > n + 1) diffs.push_back(x.diff(i));
      incl.components[i] = Matrix::identity(x.dim(i), x.prime());
    }
  }
  incl.source = ChainComplex(x.ring_ptr(), n, std::move(terms), std::move(diffs), ChainComplex::Trusted{});
  return {incl.source, incl};
}

/// τ_{≤n}: 0 -> X_n / B_n -> X_{n-1} -> ..., with the projection from X.
inline Truncation truncate_above(const ChainComplex& x, int n) {
  if (n >= x.hi()) return {x, identity_map(x)};
  ModuleMap q = quotient_module(x.term(n), x.diff(n + 1));
  std::vector<AModule> terms;
  std::vector<Matrix> diffs;
  ChainMap proj{x, {}, {}};
  for (int i = x.lo(); i < n; ++i) {
    terms.push_back(x.term(i));
    if (i > x.lo()) diffs.push_back(x.diff(i));
    proj.components[i] = Matrix::identity(x.dim(i), x.prime());
  }
  terms.push_back(q.target);
  proj.components[n] = q.matrix;
  if (n > x.lo()) {
    // d_n factors through the quotient: d_n = dbar ∘ proj, evaluate on the section
    Matrix dn = x.diff(n);
    Matrix sect = solve_columns(q.matrix, Matrix::identity(q.target.dim(), x.prime()));
    diffs.push_back(dn * sect);
  }
  int lo = std::min(x.lo(), n);
  proj.target = ChainComplex(x.ring_ptr(), lo, std::move(terms), std::move(diffs), ChainComplex::Trusted{});
  return {proj.target, proj};
}

/// Replaces X by a quasi-isomorphic complex concentrated in degrees >= 0 (degree-0
/// term ker d_0). Requires H_i X = 0 for i < 0.
inline Truncation soft_truncate_nonneg(const ChainComplex& x) {
  for (int i = x.lo(); i < 0; ++i)
    if (homology_dim(x, i)) throw PreconditionError("nonzero homology in negative degree " + std::to_string(i));
  if (x.lo() >= 0) return {x, identity_map(x)};
  if (x.hi() < 0) {
    auto z = ChainComplex::concentrated(zero_module(x.ring_ptr()), 0);
    return {z, ChainMap{z, x, {}}};
  }
  auto t = truncate_below(x, 0);
  if (!is_quasi_iso(t.map)) throw ComplexError("soft truncation failed to be a quasi-isomorphism");
  return t;
}

/// Hom complex with bookkeeping of its Hom_A(X_i, Y_j) summands.
struct HomComplex {
  struct Summand {
    int source_degree;  // i
    HomModule hom;      // Hom_A(X_i, Y_{i+n})
    std::size_t offset;
  };
  ChainComplex complex;
  std::map<int, std::vector<Summand>> summands;  // by total degree n

  /// Coordinates in Hom_n of the family of maps f_i : X_i -> Y_{i+n}.
  Vector coords(int n, const std::map<int, Matrix>& family) const {
    Vector v(complex.dim(n), 0);
    auto it = summands.find(n);
    if (it == summands.end()) return v;
    for (auto& s : it->second) {
      auto f = family.find(s.source_degree);
      if (f == family.end()) continue;
      Vector c = s.hom.coords(f->second);
      std::copy(c.begin(), c.end(), v.begin() + static_cast<std::ptrdiff_t>(s.offset));
    }
    return v;
  }

  /// The family of maps represented by a vector of Hom_n.
  std::map<int, Matrix> family(int n, const Vector& v, const ChainComplex& x, const ChainComplex& y) const {
    std::map<int, Matrix> out;
    auto it = summands.find(n);
    if (it == summands.end()) return out;
    for (auto& s : it->second) {
      std::span<const Scalar> c(v.data() + s.offset, s.hom.basis.size());
      out[s.source_degree] = s.hom.map_of(c, y.dim(s.source_degree + n), x.dim(s.source_degree), x.prime());
    }
    return out;
  }
};

inline HomComplex hom_complex(const ChainComplex& x, const ChainComplex& y) {
  const Scalar p = x.prime();
  HomComplex hc;
  const int nlo = y.lo() - x.hi(), nhi = y.hi() - x.lo();
  std::map<std::pair<int, int>, HomModule> cache;
  auto hom = [&](int i, int j) -> const HomModule& {
    auto key = std::make_pair(i, j);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, hom_module(x.term(i), y.term(j))).first;
    return it->second;
  };
  std::vector<AModule> terms;
  for (int n = nlo; n <= nhi; ++n) {
    auto& list = hc.summands[n];
    std::size_t off = 0;
    AModule sum = zero_module(x.ring_ptr());
    for (int i = x.lo(); i <= x.hi(); ++i) {
      if (!y.in_range(i + n)) continue;
      const HomModule& h = hom(i, i + n);
      list.push_back({i, h, off});
      off += h.basis.size();
      sum = direct_sum(sum, h.module);
    }
    terms.push_back(sum);
  }
  std::vector<Matrix> diffs;
  for (int n = nlo + 1; n <= nhi; ++n) {
    const std::size_t src = terms[n - nlo].dim(), tgt = terms[n - 1 - nlo].dim();
    Matrix d(tgt, src, p);
    Scalar sg = Fp::sign(n, p);
    for (auto& s : hc.summands[n]) {
      const int i = s.source_degree;
      for (std::size_t k = 0; k < s.hom.basis.size(); ++k) {
        const Matrix& f = s.hom.basis[k];
        std::map<int, Matrix> fam;
        if (y.in_range(i + n - 1)) fam[i] = y.diff(i + n) * f;
        if (x.in_range(i + 1)) fam[i + 1] = (f * x.diff(i + 1)).scaled(Fp::neg(sg, p));
        // coordinates in degree n-1 need all summands present
        Vector col(tgt, 0);
        for (auto& t : hc.summands[n - 1]) {
          auto it = fam.find(t.source_degree);
          if (it == fam.end()) continue;
          Vector c = t.hom.coords(it->second);
          for (std::size_t q = 0; q < c.size(); ++q) col[t.offset + q] = Fp::add(col[t.offset + q], c[q], p);
        }
        d.set_column(s.offset + k, col);
      }
    }
    diffs.push_back(std::move(d));
  }
  if (terms.empty()) {
    hc.complex = ChainComplex::zero(x.ring_ptr());
    return hc;
  }
  hc.complex = ChainComplex(x.ring_ptr(), nlo, std::move(terms), std::move(diffs));
  return hc;
}

}  // namespace dualizer
