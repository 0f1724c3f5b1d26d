#include <catch_amalgamated.hpp>

#include "dualizer/modulecat.hpp"

using namespace dualizer;

namespace {

AlgebraPtr ring(std::vector<std::string> vars, std::vector<std::vector<int>> rels, Scalar p = 101) {
  return std::make_shared<const LocalAlgebra>(LocalAlgebra::build_from_quotient(vars, rels, p));
}

AlgebraPtr dual_numbers() { return ring({"x"}, {{2}}); }
AlgebraPtr square_zero2() { return ring({"x", "y"}, {{2, 0}, {1, 1}, {0, 2}}); }
AlgebraPtr complete_intersection() { return ring({"x", "y"}, {{2, 0}, {0, 2}}); }

AModule regular(const AlgebraPtr& a) { return free_module(a, 1); }

}  // namespace

TEST_CASE("free modules") {
  auto a = dual_numbers();
  CHECK(free_module(a, 0).dim() == 0);
  auto f = free_module(a, 1);
  CHECK(f.dim() == 2);
  CHECK_FALSE(f.action(1).is_zero());
  CHECK((f.action(1) * f.action(1)).is_zero());
  auto b = square_zero2();
  auto f3 = free_module(b, 3);
  CHECK(f3.dim() == 9);
  CHECK(f3.action(1).block(0, 3, 3, 3).is_zero());
  f3.check_axioms();
}

TEST_CASE("residue field") {
  for (auto a : {dual_numbers(), square_zero2(), complete_intersection()}) {
    auto k = residue_field_module(a);
    CHECK(k.dim() == 1);
    for (std::size_t g : a->maxideal_generators()) CHECK(k.action(g).is_zero());
    // cokernel of m A -> A
    auto reg = regular(a);
    auto img = reg.maxideal_image();
    auto q = quotient_module(reg, Matrix::from_columns(img, reg.dim(), a->prime()));
    CHECK(q.target.dim() == 1);
    for (std::size_t i = 0; i < a->dim(); ++i) CHECK(q.target.action(i) == k.action(i));
  }
}

TEST_CASE("Matlis duality") {
  auto a = square_zero2();
  auto k = residue_field_module(a);
  CHECK(matlis_dual_module(k).dim() == 1);
  auto dual = matlis_dual_module(regular(a));
  dual.check_axioms();
  auto dd = matlis_dual_module(dual);
  ModuleMap id{regular(a), dd, Matrix::identity(a->dim(), a->prime())};
  CHECK(id.is_linear());
  CHECK(id.is_bijective());
  CHECK(socle_dimension(dual) == 1);
  CHECK(minimal_generators(regular(a)) == 1);
}

TEST_CASE("Hom modules") {
  for (auto a : {dual_numbers(), square_zero2(), complete_intersection()}) {
    auto k = residue_field_module(a);
    for (const AModule& n : {regular(a), k, matlis_dual_module(regular(a)), free_module(a, 2)}) {
      auto h = hom_module(regular(a), n);
      CHECK(h.module.dim() == n.dim());
      // evaluation at 1 is an A-isomorphism
      Matrix ev(n.dim(), h.basis.size(), a->prime());
      for (std::size_t j = 0; j < h.basis.size(); ++j) ev.set_column(j, h.basis[j].column(0));
      CHECK((ModuleMap{h.module, n, ev}.is_linear()));
      CHECK(rank(ev) == n.dim());
      // Hom(k, N) and the socle are computed independently
      CHECK(hom_module(k, n).module.dim() == socle_dimension(n));
    }
  }
  CHECK(hom_module(residue_field_module(dual_numbers()), regular(dual_numbers())).module.dim() == 1);
  CHECK(hom_module(residue_field_module(square_zero2()), regular(square_zero2())).module.dim() == 2);
}

TEST_CASE("generators and freeness") {
  auto a = square_zero2();
  auto f = free_module(a, 3);
  CHECK(minimal_generators(f) == 3);
  CHECK(is_free(f));
  auto k = residue_field_module(a);
  CHECK(minimal_generators(k) == 1);
  CHECK_FALSE(is_free(k));
  auto reg = regular(a);
  auto m = submodule(reg, Matrix::from_columns({a->basis_vector(1), a->basis_vector(2)}, 3, 101));
  CHECK(minimal_generators(m.source) == 2);
  CHECK_FALSE(is_free(m.source));
  CHECK(m.source.dim() != 2 * a->dim());
  CHECK(is_free(zero_module(a)));
}

TEST_CASE("bad modules rejected") {
  auto a = dual_numbers();
  Matrix x = Matrix::identity(1, 101);  // x acting invertibly violates x^2 = 0
  CHECK_THROWS_AS(AModule(a, 1, {Matrix::identity(1, 101), x}), ModuleError);
  auto reg = regular(a);
  Vector one = a->basis_vector(0);
  CHECK_THROWS_AS(submodule(reg, Matrix::from_columns({one}, 2, 101)), ModuleError);
}

TEST_CASE("direct sums and quotients") {
  auto a = complete_intersection();
  auto s = direct_sum(regular(a), residue_field_module(a));
  s.check_axioms();
  CHECK(s.dim() == 5);
  CHECK(minimal_generators(s) == 2);
  auto q = quotient_module(regular(a), Matrix::from_columns({a->basis_vector(a->dim() - 1)}, a->dim(), 101));
  CHECK(q.target.dim() == 3);
  CHECK((ModuleMap{q.source, q.target, q.matrix}.is_linear()));
}
