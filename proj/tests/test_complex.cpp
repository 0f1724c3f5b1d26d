#include <catch_amalgamated.hpp>

#include <random>

#include "dualizer/complex.hpp"

using namespace dualizer;

namespace {

AlgebraPtr ring(std::vector<std::string> vars, std::vector<std::vector<int>> rels, Scalar p = 101) {
  return std::make_shared<const LocalAlgebra>(LocalAlgebra::build_from_quotient(vars, rels, p));
}

AlgebraPtr dual_numbers() { return ring({"x"}, {{2}}); }
AlgebraPtr square_zero2() { return ring({"x", "y"}, {{2, 0}, {1, 1}, {0, 2}}); }

// 0 -> A --a--> A -> 0 in degrees 1, 0.
ChainComplex two_term(const AlgebraPtr& a, const Vector& mult) {
  auto f = free_module(a, 1);
  return ChainComplex(a, 0, {f, f}, {a->mult_matrix(mult)});
}

// A random complex of free modules built from a random chain of maps with d^2 = 0:
// F_2 --d2--> F_1 --d1--> F_0 where d1 = multiplication data and d2 spans ker d1 partially.
ChainComplex random_free_complex(const AlgebraPtr& a, std::mt19937& rng) {
  std::uniform_int_distribution<Scalar> coef(0, a->prime() - 1);
  std::size_t r0 = 1 + rng() % 2, r1 = 1 + rng() % 2;
  std::vector<Vector> img1;
  for (std::size_t g = 0; g < r1; ++g) {
    Vector v(r0 * a->dim(), 0);
    for (std::size_t i = 0; i < v.size(); ++i)
      if (i % a->dim() != 0) v[i] = coef(rng);
    img1.push_back(v);
  }
  auto f0 = free_module(a, r0), f1 = free_module(a, r1);
  Matrix d1 = free_map_matrix(f0, img1);
  Matrix z = kernel_basis(d1);
  std::vector<Vector> img2;
  for (std::size_t j = 0; j < z.cols() && j < 2; ++j) img2.push_back(z.column(j));
  auto f2 = free_module(a, img2.size());
  Matrix d2 = free_map_matrix(f1, img2);
  return ChainComplex(a, -1, {f0, f1, f2}, {d1, d2});
}

}  // namespace

TEST_CASE("homology of small complexes") {
  auto a = dual_numbers();
  auto f = free_module(a, 1);
  auto zero_diff = ChainComplex(a, 0, {f, f}, {Matrix(2, 2, 101)});
  auto h = homology(zero_diff);
  CHECK(h[0] == 2);
  CHECK(h[1] == 2);

  auto x = two_term(a, a->basis_vector(1));
  auto hx = homology(x);
  CHECK(hx[0] == 1);
  CHECK(hx[1] == 1);
  CHECK(homology_module(x, 0).dim() == 1);
  CHECK(socle_dimension(homology_module(x, 1)) == 1);
}

TEST_CASE("d^2 != 0 is rejected") {
  auto a = dual_numbers();
  auto f = free_module(a, 1);
  Matrix one = Matrix::identity(2, 101);
  CHECK_THROWS_AS(ChainComplex(a, 0, {f, f, f}, {one, one}), ComplexError);
  // a non-A-linear differential
  CHECK_THROWS_AS(ChainComplex(a, 0, {f, f}, {Matrix::from_rows({{1, 0}, {0, 0}}, 101)}), ComplexError);
}

TEST_CASE("suspension") {
  auto a = square_zero2();
  auto x = two_term(a, a->basis_vector(1));
  for (int s = -3; s <= 3; ++s) {
    auto y = suspend(x, s);
    y.check();
    for (int i = -5; i <= 5; ++i) CHECK(homology_dim(y, i) == homology_dim(x, i - s));
  }
  auto back = suspend(suspend(x, 1), -1);
  CHECK(back.lo() == x.lo());
  CHECK(back.diff(1) == x.diff(1));
  CHECK(suspend(x, 0).diff(1) == x.diff(1));
}

TEST_CASE("soft truncation") {
  auto a = dual_numbers();
  auto x = two_term(a, a->basis_vector(1));
  CHECK(soft_truncate_nonneg(x).complex.lo() == 0);

  // exact tail in negative degrees: A --1--> A in degrees 0, -1, then x in degrees 1, 0
  auto f = free_module(a, 1);
  Matrix id = Matrix::identity(2, 101);
  // degrees -1..1: d_0 = id, d_1 = 0
  auto y = ChainComplex(a, -1, {f, f, f}, {id, Matrix(2, 2, 101)});
  auto t = soft_truncate_nonneg(y);
  CHECK(t.complex.lo() >= 0);
  for (int i = -2; i <= 2; ++i) CHECK(homology_dim(t.complex, i) == homology_dim(y, i));
  CHECK(is_quasi_iso(t.map));

  auto k = ChainComplex::concentrated(residue_field_module(a), -1);
  CHECK_THROWS_AS(soft_truncate_nonneg(k), PreconditionError);
}

TEST_CASE("good truncations") {
  auto a = square_zero2();
  std::mt19937 rng(17);
  for (int trial = 0; trial < 6; ++trial) {
    auto x = random_free_complex(a, rng);
    for (int n = x.lo(); n <= x.hi(); ++n) {
      auto below = truncate_below(x, n);
      below.complex.check();
      CHECK(below.map.commutes());
      for (int i = x.lo() - 1; i <= x.hi() + 1; ++i)
        CHECK(homology_dim(below.complex, i) == (i >= n ? homology_dim(x, i) : 0));
      CHECK(is_quasi_iso_in_range(below.map, n, x.hi()));
      auto above = truncate_above(x, n);
      above.complex.check();
      CHECK(above.map.commutes());
      for (int i = x.lo() - 1; i <= x.hi() + 1; ++i)
        CHECK(homology_dim(above.complex, i) == (i <= n ? homology_dim(x, i) : 0));
      CHECK(is_quasi_iso_in_range(above.map, x.lo(), n));
    }
  }
}

TEST_CASE("Matlis dual complex") {
  auto a = square_zero2();
  std::mt19937 rng(23);
  for (int trial = 0; trial < 6; ++trial) {
    auto x = random_free_complex(a, rng);
    auto d = matlis_dual_complex(x);
    d.check();
    for (int i = -4; i <= 4; ++i) CHECK(homology_dim(d, i) == homology_dim(x, -i));
    auto iso = double_dual_iso(x);
    CHECK(iso.commutes());
    CHECK(iso.is_linear());
    CHECK(is_quasi_iso(iso));
  }
  auto x = two_term(dual_numbers(), Vector{0, 1});
  auto d = matlis_dual_complex(x);
  CHECK(homology_dim(d, 0) == 1);
  CHECK(homology_dim(d, -1) == 1);
}

TEST_CASE("Hom complexes") {
  auto a = square_zero2();
  std::mt19937 rng(29);
  auto reg = ChainComplex::concentrated(free_module(a, 1), 0);
  for (int trial = 0; trial < 4; ++trial) {
    auto y = random_free_complex(a, rng);
    auto hc = hom_complex(reg, y);
    hc.complex.check();
    // Hom(A[0], Y) = Y through evaluation at 1
    ChainMap ev{hc.complex, y, {}};
    for (int n = y.lo(); n <= y.hi(); ++n) {
      Matrix e(y.dim(n), hc.complex.dim(n), 101);
      for (std::size_t j = 0; j < hc.complex.dim(n); ++j) {
        Vector v(hc.complex.dim(n), 0);
        v[j] = 1;
        e.set_column(j, hc.family(n, v, reg, y).at(0).column(0));
      }
      ev.components[n] = e;
      CHECK(rank(e) == y.dim(n));
      CHECK(hc.complex.dim(n) == y.dim(n));
    }
    CHECK(ev.commutes());
    CHECK(ev.is_linear());

    auto self = hom_complex(y, y);
    self.complex.check();
    std::map<int, Matrix> ident;
    for (int i = y.lo(); i <= y.hi(); ++i) ident[i] = Matrix::identity(y.dim(i), 101);
    Vector id = self.coords(0, ident);
    CHECK((self.complex.diff(0).apply(id) == Vector(self.complex.dim(-1), 0)));
    CHECK(self.family(0, id, y, y).at(y.lo()) == ident.at(y.lo()));
  }
}

TEST_CASE("quasi-isomorphism checks") {
  auto a = dual_numbers();
  auto x = two_term(a, a->basis_vector(1));
  ChainMap id{x, x, {}};
  for (int i = x.lo(); i <= x.hi(); ++i) id.components[i] = Matrix::identity(x.dim(i), 101);
  CHECK(is_quasi_iso(id));
  auto f = free_module(a, 1);
  auto acyclic = ChainComplex(a, 0, {f, f}, {Matrix::identity(2, 101)});
  CHECK(is_quasi_iso(ChainMap{acyclic, acyclic, {}}));
  CHECK_FALSE(is_quasi_iso(ChainMap{x, x, {}}));
}
