// Finitely generated modules over a LocalAlgebra, realized as F_p-vector spaces
// with one action matrix per algebra basis element.
#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "algebra.hpp"

namespace dualizer {

class ModuleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using AlgebraPtr = std::shared_ptr<const LocalAlgebra>;

class AModule {
 public:
  AModule() = default;

  /// `action[i]` is the matrix of b_i. Module axioms are verified against the
  /// structure constants.
  AModule(AlgebraPtr ring, std::size_t dim, std::vector<Matrix> action)
      : ring_(std::move(ring)), dim_(dim), action_(std::move(action)) {
    validate();
  }

  struct Trusted {};
  // Skips the axiom check; for constructions that are modules by design.
  AModule(AlgebraPtr ring, std::size_t dim, std::vector<Matrix> action, Trusted)
      : ring_(std::move(ring)), dim_(dim), action_(std::move(action)) {}

  void check_axioms() const { validate(); }

  const AlgebraPtr& ring_ptr() const { return ring_; }
  const LocalAlgebra& ring() const { return *ring_; }
  Scalar prime() const { return ring_->prime(); }
  std::size_t dim() const { return dim_; }
  const Matrix& action(std::size_t i) const { return action_[i]; }
  const std::vector<Matrix>& actions() const { return action_; }

  Matrix action(const Vector& a) const {
    Matrix m(dim_, dim_, prime());
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i]) m = m + action_[i].scaled(a[i]);
    return m;
  }

  Vector act(std::size_t i, std::span<const Scalar> v) const { return action_[i].apply(v); }

  // Vectors spanning m * M: images of the basis under the m generators.
  std::vector<Vector> maxideal_image() const {
    std::vector<Vector> out;
    for (std::size_t g : ring_->maxideal_generators())
      for (std::size_t j = 0; j < dim_; ++j) out.push_back(action_[g].column(j));
    return out;
  }

 private:
  void validate() const {
    const auto& a = *ring_;
    if (action_.size() != a.dim()) throw ModuleError("module needs one action matrix per algebra basis element");
    for (auto& m : action_)
      if (m.rows() != dim_ || m.cols() != dim_) throw ModuleError("action matrix has wrong shape");
    if (!(action_[0] == Matrix::identity(dim_, a.prime()))) throw ModuleError("unit does not act as the identity");
    for (std::size_t i = 1; i < a.dim(); ++i)
      for (std::size_t j = i; j < a.dim(); ++j) {
        if (!(action_[i] * action_[j] == action(a.product(i, j))))
          throw ModuleError("action violates the structure constants at (" + a.labels()[i] + ")*(" + a.labels()[j] +
                            ")");
      }
  }

  AlgebraPtr ring_;
  std::size_t dim_ = 0;
  std::vector<Matrix> action_;
};

/// A-linear map; `matrix` is target.dim x source.dim.
struct ModuleMap {
  AModule source;
  AModule target;
  Matrix matrix;

  bool is_linear() const {
    if (matrix.rows() != target.dim() || matrix.cols() != source.dim()) return false;
    for (std::size_t g : source.ring().maxideal_generators())
      if (!(matrix * source.action(g) == target.action(g) * matrix)) return false;
    return true;
  }

  bool is_bijective() const { return source.dim() == target.dim() && rank(matrix) == source.dim(); }
};

inline AModule zero_module(const AlgebraPtr& a) {
  return AModule(a, 0, std::vector<Matrix>(a->dim(), Matrix(0, 0, a->prime())));
}

/// A^rank with generator-major coordinates: index g * dim A + l is b_l e_g.
inline AModule free_module(const AlgebraPtr& a, std::size_t rank) {
  const std::size_t n = a->dim();
  std::vector<Matrix> act;
  for (std::size_t i = 0; i < n; ++i) {
    Matrix m(rank * n, rank * n, a->prime());
    for (std::size_t g = 0; g < rank; ++g) m.set_block(g * n, g * n, a->mult_matrix(i));
    act.push_back(std::move(m));
  }
  return AModule(a, rank * n, std::move(act), AModule::Trusted{});
}

inline AModule residue_field_module(const AlgebraPtr& a) {
  std::vector<Matrix> act;
  for (std::size_t i = 0; i < a->dim(); ++i) act.push_back(Matrix(1, 1, a->prime()));
  act[0](0, 0) = 1;
  return AModule(a, 1, std::move(act));
}

// The dual space with transposed action; over an artinian local ring this exchanges
// projectives and injectives.
inline AModule matlis_dual_module(const AModule& m) {
  std::vector<Matrix> act;
  for (auto& x : m.actions()) act.push_back(x.transpose());
  return AModule(m.ring_ptr(), m.dim(), std::move(act), AModule::Trusted{});
}

inline AModule direct_sum(const AModule& x, const AModule& y) {
  std::vector<Matrix> act;
  for (std::size_t i = 0; i < x.ring().dim(); ++i) act.push_back(direct_sum(x.action(i), y.action(i)));
  return AModule(x.ring_ptr(), x.dim() + y.dim(), std::move(act), AModule::Trusted{});
}

/// The A-linear map A^r -> target sending e_g to images[g].
inline Matrix free_map_matrix(const AModule& target, const std::vector<Vector>& images) {
  const std::size_t n = target.ring().dim();
  Matrix m(target.dim(), images.size() * n, target.prime());
  for (std::size_t g = 0; g < images.size(); ++g)
    for (std::size_t l = 0; l < n; ++l) m.set_column(g * n + l, target.act(l, images[g]));
  return m;
}

/// Hom_A(M, N) with basis maps and the natural A-action (a f)(x) = a f(x).
struct HomModule {
  AModule module;
  std::vector<Matrix> basis;  // each N.dim x M.dim
  SubspaceCoordinates coordinates;

  // Coordinates of an A-linear map in `basis`.
  Vector coords(const Matrix& f) const {
    Vector flat(f.rows() * f.cols());
    for (std::size_t r = 0; r < f.rows(); ++r)
      for (std::size_t c = 0; c < f.cols(); ++c) flat[r * f.cols() + c] = f(r, c);
    return coordinates.coords(flat);
  }

  Matrix map_of(std::span<const Scalar> coords, std::size_t rows, std::size_t cols, Scalar p) const {
    Matrix f(rows, cols, p);
    for (std::size_t k = 0; k < basis.size(); ++k)
      if (coords[k]) f = f + basis[k].scaled(coords[k]);
    return f;
  }
};

inline HomModule hom_module(const AModule& m, const AModule& n) {
  const Scalar p = m.prime();
  const std::size_t dm = m.dim(), dn = n.dim(), unknowns = dm * dn;
  const auto& gens = m.ring().maxideal_generators();
  // vec(X) row-major; equations act_N(g) X - X act_M(g) = 0
  Matrix sys(gens.size() * unknowns, unknowns, p);
  std::size_t row0 = 0;
  for (std::size_t g : gens) {
    const Matrix& an = n.action(g);
    const Matrix& am = m.action(g);
    for (std::size_t r = 0; r < dn; ++r)
      for (std::size_t c = 0; c < dm; ++c) {
        std::size_t eq = row0 + r * dm + c;
        for (std::size_t s = 0; s < dn; ++s)
          if (an(r, s)) sys(eq, s * dm + c) = Fp::add(sys(eq, s * dm + c), an(r, s), p);
        for (std::size_t t = 0; t < dm; ++t)
          if (am(t, c)) sys(eq, r * dm + t) = Fp::sub(sys(eq, r * dm + t), am(t, c), p);
      }
    row0 += unknowns;
  }
  Matrix ker = gens.empty() ? Matrix::identity(unknowns, p) : kernel_basis(sys);
  HomModule h;
  for (std::size_t k = 0; k < ker.cols(); ++k) {
    Matrix f(dn, dm, p);
    for (std::size_t r = 0; r < dn; ++r)
      for (std::size_t c = 0; c < dm; ++c) f(r, c) = ker(r * dm + c, k);
    h.basis.push_back(std::move(f));
  }
  h.coordinates = SubspaceCoordinates(ker);
  std::vector<Matrix> act;
  for (std::size_t i = 0; i < m.ring().dim(); ++i) {
    Matrix a(ker.cols(), ker.cols(), p);
    for (std::size_t k = 0; k < ker.cols(); ++k) a.set_column(k, h.coords(n.action(i) * h.basis[k]));
    act.push_back(std::move(a));
  }
  h.module = AModule(m.ring_ptr(), ker.cols(), std::move(act));
  return h;
}

/// The submodule spanned by the (independent, invariant) columns of `basis`, with its inclusion.
inline ModuleMap submodule(const AModule& m, const Matrix& basis) {
  const Scalar p = m.prime();
  if (basis.cols() == 0) return {zero_module(m.ring_ptr()), m, Matrix(m.dim(), 0, p)};
  SubspaceCoordinates sc(basis);
  std::vector<Matrix> act;
  for (std::size_t i = 0; i < m.ring().dim(); ++i) {
    Matrix img = m.action(i) * basis;
    for (std::size_t j = 0; j < img.cols(); ++j)
      if (!sc.in_span(img.column(j))) throw ModuleError("subspace is not a submodule");
    act.push_back(sc.coords(img));
  }
  return {AModule(m.ring_ptr(), basis.cols(), std::move(act)), m, basis};
}

/// M / span(sub) with its projection. The quotient basis is the image of the first
/// standard basis vectors of M independent modulo `sub`.
inline ModuleMap quotient_module(const AModule& m, const Matrix& sub) {
  const Scalar p = m.prime();
  const std::size_t n = m.dim();
  EchelonBasis eb(n, p);
  for (std::size_t j = 0; j < sub.cols(); ++j) eb.insert(sub.column(j));
  const std::size_t sdim = eb.dim();
  std::vector<Vector> reps;
  for (std::size_t i = 0; i < n; ++i) {
    Vector e(n, 0);
    e[i] = 1;
    if (eb.insert(e)) reps.push_back(std::move(e));
  }
  const std::size_t q = reps.size();
  if (q == 0) return {m, zero_module(m.ring_ptr()), Matrix(0, n, p)};
  Matrix full(n, n, p);
  for (std::size_t j = 0; j < q; ++j) full.set_column(j, reps[j]);
  Matrix sb = image_basis(sub.cols() ? sub : Matrix(n, 0, p));
  for (std::size_t j = 0; j < sdim; ++j) full.set_column(q + j, sb.column(j));
  SubspaceCoordinates sc(full);
  Matrix proj = sc.coords(Matrix::identity(n, p)).block(0, 0, q, n);
  std::vector<Matrix> act;
  for (std::size_t i = 0; i < m.ring().dim(); ++i) {
    Matrix repm = Matrix::from_columns(reps, n, p);
    act.push_back(proj * (m.action(i) * repm));
  }
  return {m, AModule(m.ring_ptr(), q, std::move(act)), proj};
}

/// mu(M) = dim M / mM.
inline std::size_t minimal_generators(const AModule& m) {
  EchelonBasis eb(m.dim(), m.prime());
  for (auto& v : m.maxideal_image()) eb.insert(v);
  return m.dim() - eb.dim();
}

/// Lifts of a basis of M / mM (standard basis vectors of M, chosen greedily).
inline std::vector<Vector> generator_lifts(const AModule& m) {
  EchelonBasis eb(m.dim(), m.prime());
  for (auto& v : m.maxideal_image()) eb.insert(v);
  std::vector<Vector> out;
  for (std::size_t i = 0; i < m.dim(); ++i) {
    Vector e(m.dim(), 0);
    e[i] = 1;
    if (eb.insert(e)) out.push_back(std::move(e));
  }
  return out;
}

/// M ≅ A^mu: the surjection A^mu -> M built from generator lifts is injective.
inline bool is_free(const AModule& m) {
  auto gens = generator_lifts(m);
  if (m.dim() != gens.size() * m.ring().dim()) return false;
  return rank(free_map_matrix(m, gens)) == m.dim();
}

/// Basis (columns) of soc M = {x : m x = 0}.
inline Matrix socle_basis(const AModule& m) {
  const Scalar p = m.prime();
  Matrix stacked(0, m.dim(), p);
  for (std::size_t g : m.ring().maxideal_generators()) stacked = vstack(stacked, m.action(g));
  if (stacked.rows() == 0) return Matrix::identity(m.dim(), p);
  return kernel_basis(stacked);
}

inline std::size_t socle_dimension(const AModule& m) { return socle_basis(m).cols(); }

}  // namespace dualizer
