// Minimal free resolutions, injective resolutions through Matlis duality, Ext,
// depth, and the dualizing-complex test.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "complex.hpp"

namespace dualizer {

class CutoffError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// Action of b_l on a vector of A^r (generator-major coordinates).
inline Vector free_act(const LocalAlgebra& a, std::size_t l, std::span<const Scalar> v) {
  const std::size_t d = a.dim();
  Vector out(v.size(), 0);
  const Matrix& m = a.mult_matrix(l);
  for (std::size_t g = 0; g * d < v.size(); ++g) {
    Vector blk = m.apply(v.subspan(g * d, d));
    std::copy(blk.begin(), blk.end(), out.begin() + static_cast<std::ptrdiff_t>(g * d));
  }
  return out;
}

// Matrix of the A-linear map A^{images.size()} -> A^r sending e_g to images[g].
inline Matrix free_map(const LocalAlgebra& a, std::size_t target_rank, const std::vector<Vector>& images) {
  const std::size_t d = a.dim();
  Matrix m(target_rank * d, images.size() * d, a.prime());
  for (std::size_t g = 0; g < images.size(); ++g)
    for (std::size_t l = 0; l < d; ++l) m.set_column(g * d + l, free_act(a, l, images[g]));
  return m;
}

}  // namespace detail

/// A minimal free resolution F -> X built by killing the homology of the mapping
/// cone degree by degree. Generator g of F_i has boundary `boundary[i-lo][g]` in
/// F_{i-1} and augmentation `augmentation[i-lo][g]` in X_i.
struct FreeResolution {
  AlgebraPtr base;
  ChainComplex target;
  int lo = 0;
  std::vector<std::size_t> betti;
  std::vector<std::vector<Vector>> boundary;
  std::vector<std::vector<Vector>> augmentation;
  int watermark = -1;  // highest degree built
  bool terminated = false;

  std::size_t rank(int i) const {
    if (i < lo || i > watermark) return 0;
    return betti[static_cast<std::size_t>(i - lo)];
  }
  std::size_t dim(int i) const { return rank(i) * base->dim(); }

  // Betti numbers keyed by degree, nonzero entries only.
  std::map<int, std::size_t> betti_table() const {
    std::map<int, std::size_t> t;
    for (int i = lo; i <= watermark; ++i)
      if (rank(i)) t[i] = rank(i);
    return t;
  }

  /// d_i : F_i -> F_{i-1} over F_p.
  Matrix differential(int i) const {
    if (i <= lo || i > watermark) return Matrix(dim(i - 1), dim(i), base->prime());
    return detail::free_map(*base, rank(i - 1), boundary[static_cast<std::size_t>(i - lo)]);
  }

  /// α_i : F_i -> X_i over F_p.
  Matrix augmentation_matrix(int i) const {
    if (i < lo || i > watermark) return Matrix(target.dim(i), dim(i), base->prime());
    return free_map_matrix(target.term(i), augmentation[static_cast<std::size_t>(i - lo)]);
  }

  // Highest degree with a generator (watermark if none).
  int top() const {
    for (int i = watermark; i >= lo; --i)
      if (rank(i)) return i;
    return watermark;
  }

  // Trailing empty stages of a terminated resolution are dropped.
  ChainComplex complex() const {
    const int hi = terminated ? top() : watermark;
    if (hi < lo) return ChainComplex::zero(base);
    std::vector<AModule> terms;
    std::vector<Matrix> diffs;
    for (int i = lo; i <= hi; ++i) {
      terms.push_back(free_module(base, rank(i)));
      if (i > lo) diffs.push_back(differential(i));
    }
    return ChainComplex(base, lo, std::move(terms), std::move(diffs), ChainComplex::Trusted{});
  }

  ChainMap augmentation_map() const {
    ChainMap f{complex(), target, {}};
    for (int i = lo; i <= watermark; ++i) f.components[i] = augmentation_matrix(i);
    return f;
  }

  /// Every boundary has coefficients in m (no unit component on any generator).
  bool is_minimal() const {
    const std::size_t d = base->dim();
    for (auto& stage : boundary)
      for (auto& v : stage)
        for (std::size_t g = 0; g * d < v.size(); ++g)
          if (v[g * d] != 0) return false;
    return true;
  }
};

namespace detail {

// Cone of F_{<n} -> X in degree n: C_n = F_{n-1} ⊕ X_n, d(f, x) = (-d f, α f + d x).
inline Matrix cone_differential(const FreeResolution& r, int n) {
  const Scalar p = r.base->prime();
  const std::size_t f1 = r.dim(n - 1), f2 = r.dim(n - 2);
  const std::size_t x0 = r.target.dim(n), x1 = r.target.dim(n - 1);
  Matrix d(f2 + x1, f1 + x0, p);
  if (f1 && f2) d.set_block(0, 0, r.differential(n - 1).scaled(p - 1));
  if (f1 && x1) d.set_block(f2, 0, r.augmentation_matrix(n - 1));
  if (x0 && x1) d.set_block(f2, f1, r.target.diff(n));
  return d;
}

}  // namespace detail

/// Cycles of the cone in degree n (columns, coordinates F_{n-1} ⊕ X_n).
inline Matrix cone_cycles(const FreeResolution& r, int n) { return kernel_basis(detail::cone_differential(r, n)); }

/// Builds further stages of `r` until degree `cutoff` or termination.
inline void extend_resolution(FreeResolution& r, int cutoff) {
  const LocalAlgebra& a = *r.base;
  const auto& x = r.target;
  const auto& gens = a.maxideal_generators();
  while (!r.terminated && r.watermark < cutoff) {
    const int n = r.watermark + 1;
    const std::size_t f1 = r.dim(n - 1), x0 = x.dim(n);
    Matrix z = cone_cycles(r, n);
    EchelonBasis w(f1 + x0, a.prime());
    Matrix bd = x.diff(n + 1);
    for (std::size_t j = 0; j < bd.cols(); ++j) {
      Vector v(f1 + x0, 0);
      for (std::size_t i = 0; i < x0; ++i) v[f1 + i] = bd(i, j);
      w.insert(v);
    }
    for (std::size_t j = 0; j < z.cols(); ++j) {
      Vector c = z.column(j);
      std::span<const Scalar> fpart(c.data(), f1), xpart(c.data() + f1, x0);
      for (std::size_t g : gens) {
        Vector v = detail::free_act(a, g, fpart);
        Vector xv = x0 ? x.term_ref(n).act(g, xpart) : Vector{};
        v.insert(v.end(), xv.begin(), xv.end());
        w.insert(v);
      }
    }
    std::vector<Vector> bnd, aug;
    for (std::size_t j = 0; j < z.cols(); ++j) {
      Vector c = z.column(j);
      if (!w.insert(c)) continue;
      Vector f(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(f1));
      for (auto& e : f) e = Fp::neg(e, a.prime());
      bnd.push_back(std::move(f));
      aug.emplace_back(c.begin() + static_cast<std::ptrdiff_t>(f1), c.end());
    }
    r.betti.push_back(bnd.size());
    r.boundary.push_back(std::move(bnd));
    r.augmentation.push_back(std::move(aug));
    r.watermark = n;
    if (n > x.hi() && r.betti.back() == 0) r.terminated = true;
  }
}

inline FreeResolution minimal_free_resolution(const ChainComplex& x, int cutoff) {
  FreeResolution r;
  r.base = x.ring_ptr();
  r.target = x;
  r.lo = x.lo();
  r.watermark = x.lo() - 1;
  if (x.total_dim() == 0) {
    r.terminated = true;
    return r;
  }
  extend_resolution(r, cutoff);
  return r;
}

/// The syzygy governing the resolution past the top of X: cycles of the cone in
/// degree hi(X) + 1, a submodule of F_{hi(X)}.
inline AModule stable_syzygy(const ChainComplex& x) {
  const int t = x.hi() + 1;
  auto r = minimal_free_resolution(x, t - 1);
  Matrix z = cone_cycles(r, t);
  return submodule(free_module(x.ring_ptr(), r.rank(t - 1)), z).source;
}

/// pd X < ∞ exactly when the stable syzygy is free (depth-zero Auslander–Buchsbaum).
inline bool finite_projective_dimension(const ChainComplex& x) {
  if (x.total_dim() == 0) return true;
  return is_free(stable_syzygy(x));
}

/// Hom_A(F, Y) for a (partial) free resolution F, assembled blockwise: a degree-n
/// element is a list of images f(e_g) ∈ Y_{j+n} of the generators of each F_j.
class FreeHomComplex {
 public:
  FreeHomComplex(const FreeResolution& f, const ChainComplex& y) : f_(f), y_(y) {}

  struct Summand {
    int j;
    std::size_t offset;
    std::size_t rank;
    std::size_t ydim;
  };

  std::vector<Summand> summands(int n) const {
    std::vector<Summand> out;
    std::size_t off = 0;
    for (int j = f_.lo; j <= f_.watermark; ++j) {
      std::size_t r = f_.rank(j), yd = y_.dim(j + n);
      if (!r || !yd) continue;
      out.push_back({j, off, r, yd});
      off += r * yd;
    }
    return out;
  }

  std::size_t dim(int n) const {
    std::size_t s = 0;
    for (auto& sm : summands(n)) s += sm.rank * sm.ydim;
    return s;
  }

  /// ∂f = d_Y f - (-1)^n f d_F, as a matrix Hom_n -> Hom_{n-1}.
  Matrix differential(int n) const {
    const Scalar p = y_.prime();
    const LocalAlgebra& a = *f_.base;
    const std::size_t d = a.dim();
    auto src = summands(n), tgt = summands(n - 1);
    std::size_t sd = 0, td = 0;
    for (auto& s : src) sd += s.rank * s.ydim;
    for (auto& t : tgt) td += t.rank * t.ydim;
    Matrix m(td, sd, p);
    auto find = [&](int j) -> const Summand* {
      for (auto& t : tgt)
        if (t.j == j) return &t;
      return nullptr;
    };
    const Scalar sg = Fp::neg(Fp::sign(n, p), p);
    for (auto& s : src) {
      const AModule& yt = y_.term_ref(s.j + n);
      if (const Summand* t = find(s.j)) {
        Matrix dy = y_.diff(s.j + n);
        for (std::size_t g = 0; g < s.rank; ++g) m.set_block(t->offset + g * t->ydim, s.offset + g * s.ydim, dy);
      }
      if (const Summand* t = find(s.j + 1)) {
        const auto& bnd = f_.boundary[static_cast<std::size_t>(s.j + 1 - f_.lo)];
        for (std::size_t h = 0; h < t->rank; ++h)
          for (std::size_t g = 0; g < s.rank; ++g) {
            Matrix blk(s.ydim, s.ydim, p);
            for (std::size_t l = 0; l < d; ++l) {
              Scalar c = bnd[h][g * d + l];
              if (c) blk = blk + yt.action(l).scaled(Fp::mul(c, sg, p));
            }
            m.set_block(t->offset + h * t->ydim, s.offset + g * s.ydim, blk);
          }
      }
    }
    return m;
  }

  std::size_t homology_dim(int n) const {
    std::size_t dn = dim(n);
    if (!dn) return 0;
    return dn - rank(differential(n)) - rank(differential(n + 1));
  }

  /// Vector of the degree-0 element given by maps F_j -> Y_j (columns per generator).
  Vector element(int n, const std::map<int, Matrix>& images) const {
    Vector v(dim(n), 0);
    for (auto& s : summands(n)) {
      auto it = images.find(s.j);
      if (it == images.end()) continue;
      for (std::size_t g = 0; g < s.rank; ++g)
        for (std::size_t t = 0; t < s.ydim; ++t) v[s.offset + g * s.ydim + t] = it->second(t, g);
    }
    return v;
  }

  /// b_l acting on Hom_n (through the target).
  Vector act(int n, std::size_t l, const Vector& v) const {
    Vector out(v.size(), 0);
    for (auto& s : summands(n)) {
      const AModule& yt = y_.term_ref(s.j + n);
      for (std::size_t g = 0; g < s.rank; ++g) {
        std::span<const Scalar> blk(v.data() + s.offset + g * s.ydim, s.ydim);
        Vector w = yt.act(l, blk);
        std::copy(w.begin(), w.end(), out.begin() + static_cast<std::ptrdiff_t>(s.offset + g * s.ydim));
      }
    }
    return out;
  }

 private:
  const FreeResolution& f_;
  const ChainComplex& y_;
};

/// Ext^i(X, Y) = H_{-i} Hom(F, Y) for i in [a, b], resolving X as deep as needed.
inline std::map<int, std::size_t> ext_dims(const ChainComplex& x, const ChainComplex& y, int a, int b) {
  std::map<int, std::size_t> out;
  if (b < a) return out;
  auto f = minimal_free_resolution(x, y.hi() + b + 1);
  FreeHomComplex h(f, y);
  for (int i = a; i <= b; ++i) out[i] = h.homology_dim(-i);
  return out;
}

/// Cached free resolution of k, deepened on demand, for Ext^i(k, -) scans.
class ResidueExt {
 public:
  explicit ResidueExt(AlgebraPtr a)
      : res_(minimal_free_resolution(ChainComplex::concentrated(residue_field_module(a), 0), 0)) {}

  std::size_t ext(int i, const ChainComplex& m) {
    extend_resolution(res_, m.hi() + i + 1);
    return FreeHomComplex(res_, m).homology_dim(-i);
  }

  const FreeResolution& resolution() const { return res_; }

 private:
  FreeResolution res_;
};

/// I = (free resolution of X^∨)^∨ with ρ : X -> I. Terms of I in degrees below
/// `complete_from` are missing when the resolution was cut off; homology of I and
/// ρ are exact in degrees >= complete_from + 1 (all degrees when `finite`).
struct InjectiveResolution {
  ChainComplex complex;
  ChainMap rho;
  bool finite = false;
  int complete_from = 0;
  FreeResolution dual_resolution;
};

inline InjectiveResolution injective_resolution(const ChainComplex& x, int cutoff) {
  ChainComplex xd = matlis_dual_complex(x);
  InjectiveResolution out;
  out.dual_resolution = minimal_free_resolution(xd, cutoff);
  const auto& f = out.dual_resolution;
  out.finite = f.terminated;
  out.complete_from = -f.watermark;
  out.complex = matlis_dual_complex(f.complex());
  out.rho = ChainMap{x, out.complex, {}};
  const Scalar p = x.prime();
  for (int i = x.lo(); i <= x.hi(); ++i) {
    if (-i < f.lo || -i > f.watermark) continue;
    out.rho.components[i] = f.augmentation_matrix(-i).transpose().scaled(Fp::sign(i, p));
  }
  return out;
}

/// Ext^i(X, Y) = H_{-i} Hom(X, I_Y), the injective route; window [a, b].
inline std::map<int, std::size_t> ext_dims_injective(const ChainComplex& x, const ChainComplex& y, int a, int b) {
  std::map<int, std::size_t> out;
  if (b < a) return out;
  // H_{-i} needs I in degrees >= x.lo() - i - 1
  auto inj = injective_resolution(y, b - x.lo() + 1);
  auto hc = hom_complex(x, inj.complex);
  for (int i = a; i <= b; ++i) out[i] = homology_dim(hc.complex, -i);
  return out;
}

/// Lowest i with Ext^i(k, M) != 0, scanning [-hi(M), -hi(M) + radius].
inline std::optional<int> depth(const AlgebraPtr& a, const ChainComplex& m, int radius = 8) {
  ResidueExt ext(a);
  for (int i = -m.hi(); i <= -m.hi() + radius; ++i)
    if (ext.ext(i, m)) return i;
  return std::nullopt;
}

enum class DualizingFailure { none, zero_homology, negative_homology, infinite_injective_dimension, ext_dim_not_delta };

inline const char* to_string(DualizingFailure f) {
  switch (f) {
    case DualizingFailure::none: return "none";
    case DualizingFailure::zero_homology: return "zero-homology";
    case DualizingFailure::negative_homology: return "negative-homology";
    case DualizingFailure::infinite_injective_dimension: return "infinite-injective-dimension";
    case DualizingFailure::ext_dim_not_delta: return "ext-dim-not-delta";
  }
  return "?";
}

/// `ext_table` is keyed by the cohomological degree i of Ext^i(k, M). The pivot is
/// homological: the single nonzero entry sits at i = -pivot, so Σ^s moves it by s.
struct DualizingReport {
  bool verdict = false;
  std::optional<int> pivot;
  std::map<int, std::size_t> ext_table;
  int window_lo = 0;
  int window_hi = 0;
  bool window_exact = false;
  bool finite_injective_dimension = false;
  DualizingFailure reason = DualizingFailure::none;

  std::optional<int> ext_degree() const {
    if (!pivot) return std::nullopt;
    return -*pivot;
  }
};

inline bool has_homology(const ChainComplex& x) {
  for (int i = x.lo(); i <= x.hi(); ++i)
    if (homology_dim(x, i)) return true;
  return false;
}

inline DualizingReport is_dualizing(const AlgebraPtr& a, const ChainComplex& m, int radius = 8) {
  DualizingReport rep;
  if (!has_homology(m)) {
    rep.reason = DualizingFailure::zero_homology;
    return rep;
  }
  ChainComplex md = matlis_dual_complex(m);
  rep.finite_injective_dimension = finite_projective_dimension(md);
  rep.window_lo = -m.hi();
  if (rep.finite_injective_dimension) {
    // Ext^i(k, M) lives in [-hi(I), -lo(I)] and lo(I) = -(top degree of F(M^∨)).
    auto f = minimal_free_resolution(md, md.hi() + 2);
    rep.window_hi = f.top();
    rep.window_exact = true;
  } else {
    rep.window_hi = rep.window_lo + radius;
  }
  ResidueExt ext(a);
  std::optional<int> found;
  for (int i = rep.window_lo; i <= rep.window_hi; ++i) {
    std::size_t e = ext.ext(i, m);
    rep.ext_table[i] = e;
    if (e == 0) continue;
    if (e > 1 || found) {
      rep.reason = DualizingFailure::ext_dim_not_delta;
      return rep;
    }
    found = i;
  }
  if (!rep.finite_injective_dimension) {
    rep.reason = DualizingFailure::infinite_injective_dimension;
    return rep;
  }
  if (!found) {
    rep.reason = DualizingFailure::ext_dim_not_delta;
    return rep;
  }
  rep.verdict = true;
  rep.pivot = -*found;
  return rep;
}

/// A -> RHom_A(M, M) is an isomorphism, computed as H Hom(F_M, I_M): homology is
/// zero in every certified degree except 0, and a |-> a·[ρα] maps A onto H_0
/// bijectively. Throws CutoffError when degree 0 is not certified.
struct EndomorphismReport {
  bool holds = false;
  int window_lo = 0;
  int window_hi = 0;
  std::map<int, std::size_t> homology;
};

inline EndomorphismReport endomorphism_check(const AlgebraPtr& a, const ChainComplex& m, int cutoff = 8) {
  EndomorphismReport rep;
  const Scalar p = a->prime();
  auto f = minimal_free_resolution(m, m.hi() + cutoff);
  auto inj = injective_resolution(m, -m.lo() + cutoff);
  const auto& i = inj.complex;
  int lo = std::numeric_limits<int>::min() / 2;
  if (!f.terminated) lo = std::max(lo, i.hi() - f.watermark + 1);
  if (!inj.finite) lo = std::max(lo, inj.complete_from - f.lo + 1);
  int hi = i.hi() - f.lo;
  if (f.terminated) lo = std::max(lo, i.lo() - f.top());
  if (lo > 0 || hi < 0) throw CutoffError("degree 0 of Hom(F, I) is not certified at this cutoff");
  rep.window_lo = lo;
  rep.window_hi = hi;
  FreeHomComplex h(f, i);
  bool ok = true;
  for (int n = lo; n <= hi; ++n) {
    rep.homology[n] = h.homology_dim(n);
    if (n != 0 && rep.homology[n]) ok = false;
  }
  if (ok && rep.homology[0] == a->dim()) {
    std::map<int, Matrix> comp;
    for (int j = f.lo; j <= f.watermark; ++j) {
      if (!i.in_range(j)) continue;
      comp[j] = inj.rho.component(j) * f.augmentation_matrix(j);
      // e_g columns sit at generator-major positions g * dim A
      Matrix cols(i.dim(j), f.rank(j), p);
      for (std::size_t g = 0; g < f.rank(j); ++g) cols.set_column(g, comp[j].column(g * a->dim()));
      comp[j] = cols;
    }
    Vector id = h.element(0, comp);
    Matrix bnd = h.differential(1);
    Matrix orbit(h.dim(0), a->dim(), p);
    for (std::size_t l = 0; l < a->dim(); ++l) orbit.set_column(l, h.act(0, l, id));
    ok = h.differential(0).apply(id) == Vector(h.dim(-1), 0) && rank(hstack(bnd, orbit)) - rank(bnd) == a->dim();
  } else {
    ok = false;
  }
  rep.holds = ok;
  return rep;
}

}  // namespace dualizer
