#include <catch_amalgamated.hpp>

#include <random>

#include "dualizer/exactla.hpp"

using namespace dualizer;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, Scalar p, std::mt19937& rng) {
  std::uniform_int_distribution<Scalar> dist(0, p - 1);
  Matrix m(r, c, p);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = dist(rng);
  return m;
}

// Determinant by cofactor expansion; only for the tiny minors below.
Scalar cofactor_det(const Matrix& m) {
  const std::size_t n = m.rows();
  const Scalar p = m.prime();
  if (n == 0) return 1;
  if (n == 1) return m(0, 0);
  Scalar det = 0;
  for (std::size_t j = 0; j < n; ++j) {
    Matrix minor(n - 1, n - 1, p);
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t c = 0, cc = 0; c < n; ++c)
        if (c != j) minor(r - 1, cc++) = m(r, c);
    Scalar term = Fp::mul(m(0, j), cofactor_det(minor), p);
    det = (j % 2 == 0) ? Fp::add(det, term, p) : Fp::sub(det, term, p);
  }
  return det;
}

// Largest k with a nonzero k x k minor.
std::size_t minor_rank(const Matrix& m) {
  std::size_t best = 0;
  const std::size_t r = m.rows(), c = m.cols();
  for (std::size_t k = 1; k <= std::min(r, c); ++k) {
    bool found = false;
    for (std::uint32_t rs = 0; rs < (1u << r) && !found; ++rs) {
      if (std::popcount(rs) != static_cast<int>(k)) continue;
      for (std::uint32_t cs = 0; cs < (1u << c) && !found; ++cs) {
        if (std::popcount(cs) != static_cast<int>(k)) continue;
        Matrix sub(k, k, m.prime());
        std::size_t ri = 0;
        for (std::size_t i = 0; i < r; ++i) {
          if (!(rs >> i & 1)) continue;
          std::size_t ci = 0;
          for (std::size_t j = 0; j < c; ++j)
            if (cs >> j & 1) sub(ri, ci++) = m(i, j);
          ++ri;
        }
        found = cofactor_det(sub) != 0;
      }
    }
    if (!found) break;
    best = k;
  }
  return best;
}

}  // namespace

TEST_CASE("rref of the identity") {
  auto r = rref(Matrix::identity(2, 5));
  CHECK(r.reduced == Matrix::identity(2, 5));
  CHECK(r.pivots == std::vector<std::size_t>{0, 1});
}

TEST_CASE("rref of a rank one matrix over F_2") {
  auto r = rref(Matrix::from_rows({{1, 1}, {1, 1}}, 2));
  CHECK(r.reduced == Matrix::from_rows({{1, 1}, {0, 0}}, 2));
  CHECK(r.pivots == std::vector<std::size_t>{0});
}

TEST_CASE("rank agrees with the minor oracle") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    Matrix m = random_matrix(4, 6, 7, rng);
    // force some rank deficiency now and then
    if (trial % 3 == 0)
      for (std::size_t j = 0; j < 6; ++j) m(3, j) = Fp::add(m(0, j), Fp::mul(2, m(1, j), 7), 7);
    if (trial % 5 == 0)
      for (std::size_t j = 0; j < 6; ++j) m(2, j) = 0;
    CHECK(rank(m) == minor_rank(m));
  }
}

TEST_CASE("kernel basis examples") {
  CHECK(kernel_basis(Matrix(2, 3, 101)).cols() == 3);
  Matrix k = kernel_basis(Matrix::from_rows({{1, 0}}, 3));
  REQUIRE(k.cols() == 1);
  CHECK(k.column(0) == Vector{0, 1});
}

TEST_CASE("kernel of random matrices multiplies back to zero") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    Matrix m = random_matrix(5, 5, 101, rng);
    if (trial % 2) m.set_column(4, m.column(0));
    if (trial % 3 == 0) m.set_column(3, Vector(5, 0));
    Matrix k = kernel_basis(m);
    CHECK(k.cols() == 5 - rank(m));
    CHECK((m * k).is_zero());
    CHECK(rank(k) == k.cols());
  }
}

TEST_CASE("solve_linear") {
  Vector b{3, 4};
  CHECK(solve_linear(Matrix::identity(2, 101), b) == b);
  auto x = solve_linear(Matrix::from_rows({{1, 1}}, 2), Vector{1});
  REQUIRE(x);
  CHECK(*x == Vector{1, 0});
  CHECK_FALSE(solve_linear(Matrix::from_rows({{1, 1}, {1, 1}}, 5), Vector{1, 2}));
  CHECK_THROWS_AS(solve_linear(Matrix::identity(2, 5), Vector{1}), DimensionError);
}

TEST_CASE("properties on random matrices") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t r = 1 + trial % 6, c = 1 + (trial * 7) % 5;
    Matrix m = random_matrix(r, c, 13, rng);
    if (trial % 4 == 0 && r > 1)
      for (std::size_t j = 0; j < c; ++j) m(r - 1, j) = m(0, j);
    auto once = rref(m);
    CHECK(rref(once.reduced).reduced == once.reduced);
    CHECK(rank(m) == rank(m.transpose()));
    CHECK(c == rank(m) + kernel_basis(m).cols());
    // pivots strictly increasing and row space preserved
    for (std::size_t i = 1; i < once.pivots.size(); ++i) CHECK(once.pivots[i - 1] < once.pivots[i]);
    CHECK(rank(vstack(m, once.reduced)) == rank(m));
  }
}

TEST_CASE("subspace coordinates round trip") {
  std::mt19937 rng(5);
  Matrix b = random_matrix(6, 3, 101, rng);
  REQUIRE(rank(b) == 3);
  SubspaceCoordinates sc(b);
  Vector c{4, 0, 9};
  Vector v = b.apply(c);
  CHECK(sc.coords(v) == c);
  CHECK(sc.in_span(v));
  Vector w(6, 0);
  w[0] = 1;
  if (rank(hstack(b, Matrix::from_columns({w}, 6, 101))) == 4) CHECK_FALSE(sc.in_span(w));
}

TEST_CASE("non-prime modulus rejected") { CHECK_THROWS(Matrix(1, 1, 12)); }
