// Finite-dimensional commutative local algebras over F_p.
#pragma once

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "exactla.hpp"

namespace dualizer {

enum class AlgebraDefect {
  malformed,
  non_associative,
  non_commutative,
  no_unit,
  not_local,
  infinite_dimensional,
  non_monomial_relation,
};

inline const char* to_string(AlgebraDefect d) {
  switch (d) {
    case AlgebraDefect::malformed: return "malformed";
    case AlgebraDefect::non_associative: return "non-associative";
    case AlgebraDefect::non_commutative: return "non-commutative";
    case AlgebraDefect::no_unit: return "no unit";
    case AlgebraDefect::not_local: return "not local";
    case AlgebraDefect::infinite_dimensional: return "infinite-dimensional quotient";
    case AlgebraDefect::non_monomial_relation: return "non-monomial relation";
  }
  return "?";
}

class AlgebraError : public std::invalid_argument {
 public:
  AlgebraError(AlgebraDefect d, const std::string& detail)
      : std::invalid_argument(std::string(to_string(d)) + (detail.empty() ? "" : ": " + detail)), defect_(d) {}
  AlgebraDefect defect() const { return defect_; }

 private:
  AlgebraDefect defect_;
};

/// Structure constants of a finite-dimensional algebra: table[i * dim + j] is the
/// coordinate vector of b_i * b_j.
struct StructureConstants {
  Scalar p = kDefaultPrime;
  std::size_t dim = 0;
  std::size_t unit_index = 0;
  std::vector<Vector> table;
  std::vector<std::string> labels;

  const Vector& product(std::size_t i, std::size_t j) const { return table[i * dim + j]; }

  Vector multiply(const Vector& a, const Vector& b) const {
    Vector out(dim, 0);
    for (std::size_t i = 0; i < dim; ++i) {
      if (!a[i]) continue;
      for (std::size_t j = 0; j < dim; ++j) {
        if (!b[j]) continue;
        axpy(out, Fp::mul(a[i], b[j], p), product(i, j), p);
      }
    }
    return out;
  }
};

/// A commutative local F_p-algebra with residue field F_p. The basis is kept
/// normalized: b_0 = 1 and b_1, ..., b_{dim-1} span the maximal ideal.
class LocalAlgebra {
 public:
  LocalAlgebra() = default;

  /// Validates the table exhaustively; the basis is re-chosen as {1} plus a basis of
  /// the nilradical (computed as the kernel of an iterated Frobenius).
  static LocalAlgebra build_from_structure_constants(StructureConstants sc) {
    const std::size_t n = sc.dim;
    const Scalar p = sc.p;
    if (!is_prime(p)) throw AlgebraError(AlgebraDefect::malformed, "modulus " + std::to_string(p) + " is not prime");
    if (n == 0) throw AlgebraError(AlgebraDefect::malformed, "zero-dimensional algebra");
    if (sc.table.size() != n * n) throw AlgebraError(AlgebraDefect::malformed, "table must have dim^2 entries");
    for (auto& v : sc.table) {
      if (v.size() != n) throw AlgebraError(AlgebraDefect::malformed, "product vector has wrong length");
      for (auto& x : v) x %= p;
    }
    if (sc.unit_index >= n) throw AlgebraError(AlgebraDefect::no_unit, "unit index out of range");
    if (sc.labels.size() != n) {
      sc.labels.clear();
      for (std::size_t i = 0; i < n; ++i) sc.labels.push_back("b" + std::to_string(i));
    }

    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (sc.product(i, j) != sc.product(j, i))
          throw AlgebraError(AlgebraDefect::non_commutative,
                             "b" + std::to_string(i) + "*b" + std::to_string(j) + " != b" + std::to_string(j) + "*b" +
                                 std::to_string(i));

    for (std::size_t j = 0; j < n; ++j) {
      Vector e(n, 0);
      e[j] = 1;
      if (sc.product(sc.unit_index, j) != e || sc.product(j, sc.unit_index) != e)
        throw AlgebraError(AlgebraDefect::no_unit, "basis element " + std::to_string(sc.unit_index) + " is not a unit");
    }

    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          Vector ek(n, 0), ei(n, 0);
          ek[k] = 1;
          ei[i] = 1;
          if (sc.multiply(sc.product(i, j), ek) != sc.multiply(ei, sc.product(j, k)))
            throw AlgebraError(AlgebraDefect::non_associative, "(b" + std::to_string(i) + "b" + std::to_string(j) +
                                                                   ")b" + std::to_string(k));
        }

    // x -> x^p is F_p-linear in a commutative algebra of characteristic p; a power
    // p^r >= dim of it kills exactly the nilpotent elements.
    Matrix frob(n, n, p);
    for (std::size_t j = 0; j < n; ++j) {
      Vector e(n, 0);
      e[j] = 1;
      Vector pw(n, 0);
      pw[sc.unit_index] = 1;
      for (std::uint64_t k = p; k; k >>= 1) {
        if (k & 1) pw = sc.multiply(pw, e);
        e = sc.multiply(e, e);
      }
      frob.set_column(j, pw);
    }
    Matrix iter = frob;
    for (std::uint64_t q = p; q < n; q *= p) iter = iter * frob;
    Matrix nil = kernel_basis(iter);
    if (nil.cols() + 1 != n)
      throw AlgebraError(AlgebraDefect::not_local, "nilradical has codimension " + std::to_string(n - nil.cols()));

    // Change of basis: columns of `basis` are the new basis in old coordinates.
    Matrix basis(n, n, p);
    basis(sc.unit_index, 0) = 1;
    std::vector<std::string> labels{sc.labels[sc.unit_index]};
    for (std::size_t k = 0; k < nil.cols(); ++k) {
      Vector v = nil.column(k);
      basis.set_column(k + 1, v);
      std::size_t nz = 0, where = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (v[i]) ++nz, where = i;
      labels.push_back(nz == 1 && v[where] == 1 ? sc.labels[where] : "m" + std::to_string(k + 1));
    }
    if (rank(basis) != n) throw AlgebraError(AlgebraDefect::not_local, "unit lies in the nilradical");
    Matrix inv = solve_columns(basis, Matrix::identity(n, p));

    LocalAlgebra a;
    a.p_ = p;
    a.dim_ = n;
    a.labels_ = std::move(labels);
    a.table_.assign(n * n, Vector(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a.table_[i * n + j] = inv.apply(sc.multiply(basis.column(i), basis.column(j)));
    a.finish();
    return a;
  }

  /// F_p[vars]/(monomials). Each relation is an exponent vector; some pure power of
  /// every variable must be among them.
  static LocalAlgebra build_from_quotient(const std::vector<std::string>& vars,
                                          const std::vector<std::vector<int>>& relations, Scalar p) {
    const std::size_t nv = vars.size();
    std::vector<int> bound(nv, 0);
    for (auto& r : relations) {
      if (r.size() != nv) throw AlgebraError(AlgebraDefect::malformed, "relation arity mismatch");
      int support = 0, which = 0;
      for (std::size_t v = 0; v < nv; ++v) {
        if (r[v] < 0) throw AlgebraError(AlgebraDefect::malformed, "negative exponent");
        if (r[v] > 0) ++support, which = static_cast<int>(v);
      }
      if (support == 0) throw AlgebraError(AlgebraDefect::malformed, "the unit ideal is not local");
      if (support == 1 && (bound[which] == 0 || r[which] < bound[which])) bound[which] = r[which];
    }
    for (std::size_t v = 0; v < nv; ++v)
      if (bound[v] == 0) throw AlgebraError(AlgebraDefect::infinite_dimensional, "no pure power of " + vars[v]);

    auto divisible = [&](const std::vector<int>& m) {
      for (auto& r : relations) {
        bool div = true;
        for (std::size_t v = 0; v < nv && div; ++v) div = m[v] >= r[v];
        if (div) return true;
      }
      return false;
    };

    // Standard monomials, ordered by total degree then lexicographically.
    std::vector<std::vector<int>> monos;
    std::vector<int> cur(nv, 0);
    while (true) {
      if (!divisible(cur)) monos.push_back(cur);
      std::size_t v = 0;
      while (v < nv && ++cur[v] >= bound[v]) cur[v++] = 0;
      if (v == nv) break;
    }
    auto total = [](const std::vector<int>& m) {
      int s = 0;
      for (int e : m) s += e;
      return s;
    };
    std::stable_sort(monos.begin(), monos.end(), [&](auto& a, auto& b) {
      if (total(a) != total(b)) return total(a) < total(b);
      return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
    });

    std::map<std::vector<int>, std::size_t> index;
    for (std::size_t i = 0; i < monos.size(); ++i) index[monos[i]] = i;

    StructureConstants sc;
    sc.p = p;
    sc.dim = monos.size();
    sc.unit_index = 0;
    sc.table.assign(sc.dim * sc.dim, Vector(sc.dim, 0));
    for (std::size_t i = 0; i < sc.dim; ++i) {
      sc.labels.push_back(monomial_label(vars, monos[i]));
      for (std::size_t j = 0; j < sc.dim; ++j) {
        std::vector<int> prod(nv);
        for (std::size_t v = 0; v < nv; ++v) prod[v] = monos[i][v] + monos[j][v];
        auto it = index.find(prod);
        if (it != index.end() && !divisible(prod)) sc.table[i * sc.dim + j][it->second] = 1;
      }
    }
    LocalAlgebra a = build_from_structure_constants(sc);
    a.vars_ = vars;
    a.exponents_ = monos;
    return a;
  }

  static std::string monomial_label(const std::vector<std::string>& vars, const std::vector<int>& m) {
    std::string s;
    for (std::size_t v = 0; v < vars.size(); ++v) {
      if (m[v] == 0) continue;
      if (!s.empty()) s += "*";
      s += vars[v];
      if (m[v] > 1) s += "^" + std::to_string(m[v]);
    }
    return s.empty() ? "1" : s;
  }

  Scalar prime() const { return p_; }
  std::size_t dim() const { return dim_; }
  std::size_t unit_index() const { return 0; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::string>& vars() const { return vars_; }
  // Exponent vectors of the basis monomials (quotient mode only; empty otherwise).
  const std::vector<std::vector<int>>& exponents() const { return exponents_; }

  std::vector<std::size_t> maxideal_basis() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i < dim_; ++i) out.push_back(i);
    return out;
  }

  const Vector& product(std::size_t i, std::size_t j) const { return table_[i * dim_ + j]; }

  StructureConstants structure_constants() const { return {p_, dim_, 0, table_, labels_}; }

  // Matrix of multiplication by b_i.
  const Matrix& mult_matrix(std::size_t i) const { return mult_[i]; }

  Matrix mult_matrix(const Vector& a) const {
    Matrix m(dim_, dim_, p_);
    for (std::size_t i = 0; i < dim_; ++i)
      if (a[i]) m = m + mult_[i].scaled(a[i]);
    return m;
  }

  Vector multiply(const Vector& a, const Vector& b) const { return mult_matrix(a).apply(b); }

  Vector basis_vector(std::size_t i) const {
    Vector e(dim_, 0);
    e[i] = 1;
    return e;
  }

  bool in_maxideal(std::span<const Scalar> a) const { return a[0] == 0; }

  /// Indices of basis elements of m whose classes form a basis of m/m^2.
  const std::vector<std::size_t>& maxideal_generators() const { return generators_; }

  /// dim_k m^i for i = 0, 1, ... until the power vanishes (m^0 = A).
  std::vector<std::size_t> maxideal_power_dims() const {
    std::vector<std::size_t> dims{dim_};
    std::vector<Vector> power;
    for (std::size_t i = 1; i < dim_; ++i) power.push_back(basis_vector(i));
    while (true) {
      EchelonBasis eb(dim_, p_);
      for (auto& v : power) eb.insert(v);
      dims.push_back(eb.dim());
      if (eb.dim() == 0) break;
      std::vector<Vector> next;
      for (auto& v : eb.vectors())
        for (std::size_t g = 1; g < dim_; ++g) next.push_back(mult_[g].apply(v));
      power = std::move(next);
    }
    return dims;
  }

  friend bool operator==(const LocalAlgebra& a, const LocalAlgebra& b) {
    return a.p_ == b.p_ && a.dim_ == b.dim_ && a.table_ == b.table_;
  }

 private:
  void finish() {
    mult_.clear();
    for (std::size_t i = 0; i < dim_; ++i) {
      Matrix m(dim_, dim_, p_);
      for (std::size_t j = 0; j < dim_; ++j) m.set_column(j, product(i, j));
      mult_.push_back(std::move(m));
    }
    // m^2 spanned by products of pairs from m; lift a complement basis of m/m^2.
    EchelonBasis sq(dim_, p_);
    for (std::size_t i = 1; i < dim_; ++i)
      for (std::size_t j = i; j < dim_; ++j) sq.insert(product(i, j));
    generators_.clear();
    for (std::size_t i = 1; i < dim_; ++i)
      if (sq.insert(basis_vector(i))) generators_.push_back(i);
  }

  Scalar p_ = kDefaultPrime;
  std::size_t dim_ = 0;
  std::vector<std::string> labels_;
  std::vector<Vector> table_;
  std::vector<Matrix> mult_;
  std::vector<std::size_t> generators_;
  std::vector<std::string> vars_;
  std::vector<std::vector<int>> exponents_;
};

/// dim {a in A : a m = 0}, as the intersection of the kernels of multiplication by
/// each element of the maximal ideal.
inline std::size_t socle_dimension(const LocalAlgebra& a) {
  if (a.dim() == 1) return 1;
  Matrix stacked(0, a.dim(), a.prime());
  for (std::size_t i = 1; i < a.dim(); ++i) stacked = vstack(stacked, a.mult_matrix(i));
  return kernel_basis(stacked).cols();
}

/// Structure constants of sc / I, where the columns of `ideal` span a two-sided
/// ideal. The image of the unit becomes basis element 0.
inline StructureConstants quotient_structure(const StructureConstants& sc, const Matrix& ideal) {
  const std::size_t n = sc.dim;
  const Scalar p = sc.p;
  EchelonBasis eb(n, p);
  for (std::size_t j = 0; j < ideal.cols(); ++j) eb.insert(ideal.column(j));
  std::size_t idim = eb.dim();
  std::vector<Vector> reps;
  std::vector<std::string> labels;
  Vector unit(n, 0);
  unit[sc.unit_index] = 1;
  if (eb.insert(unit)) reps.push_back(unit), labels.push_back(sc.labels.empty() ? "1" : sc.labels[sc.unit_index]);
  for (std::size_t i = 0; i < n; ++i) {
    Vector e(n, 0);
    e[i] = 1;
    if (eb.insert(e)) reps.push_back(e), labels.push_back(sc.labels.empty() ? "b" + std::to_string(i) : sc.labels[i]);
  }
  const std::size_t q = reps.size();
  StructureConstants out;
  out.p = p;
  out.dim = q;
  out.unit_index = 0;
  out.labels = labels;
  if (q == 0) return out;
  // coordinates of v in basis reps ∪ ideal-basis; keep the reps part
  Matrix full(n, q + idim, p);
  for (std::size_t j = 0; j < q; ++j) full.set_column(j, reps[j]);
  Matrix ib = image_basis(ideal.cols() ? ideal : Matrix(n, 0, p));
  for (std::size_t j = 0; j < ib.cols(); ++j) full.set_column(q + j, ib.column(j));
  out.table.assign(q * q, Vector(q, 0));
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = 0; j < q; ++j) {
      auto x = solve_linear(full, sc.multiply(reps[i], reps[j]));
      if (!x) throw AlgebraError(AlgebraDefect::malformed, "quotient coordinates unsolvable");
      out.table[i * q + j] = Vector(x->begin(), x->begin() + static_cast<std::ptrdiff_t>(q));
    }
  return out;
}

}  // namespace dualizer
