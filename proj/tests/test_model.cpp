#include <random>

#include "doctest.h"
#include "qf/fischer.hpp"
#include "qf/model.hpp"
#include "qf/model_io.hpp"
#include "qf/poly_io.hpp"

using namespace qf;

namespace {

ModelManifold quarter() { return make_diagonal_model({mpq_class(1, 4)}); }

}  // namespace

TEST_CASE("model validation") {
  CHECK_THROWS_AS(make_model(2, {mpq_class(1, 4)}, {0, 1}, {0, 1}),
                  ValidationError);
  CHECK_THROWS_AS(
      make_model(2, {mpq_class(1, 4), mpq_class(1, 3)}, {0, 0}, {0, 1}),
      ValidationError);
  CHECK_THROWS_AS(
      make_model(2, {mpq_class(1, 4), mpq_class(1, 3)}, {0, 1}, {0, 2}),
      ValidationError);
  CHECK_THROWS_AS(make_diagonal_model({mpq_class(1, 2)}, true), RegimeError);
  CHECK_THROWS_AS(make_diagonal_model({mpq_class(0)}, true), RegimeError);

  ModelManifold edge = make_diagonal_model({mpq_class(1, 2)});
  CHECK_FALSE(edge.in_regime);
  CHECK(quarter().in_regime);
  CHECK(quarter().is_diagonal());
  CHECK_FALSE(make_model(2, {mpq_class(1, 4), mpq_class(1, 3)}, {1, 0}, {0, 1})
                  .is_diagonal());
}

TEST_CASE("quadric rendering oracle") {
  CHECK(to_string(quadric(quarter(), 0)) ==
        "1/4*z1^2 + z1*Z1 + 1/4*Z1^2");
  // permuted tau couples different variables
  ModelManifold m =
      make_model(2, {mpq_class(1, 4), mpq_class(1, 3)}, {0, 1}, {1, 0});
  CHECK(to_string(quadric(m, 0)) == "1/4*z1^2 + z1*Z2 + 1/4*Z1^2");
  CHECK(quadric(quarter(), 0).is_real_valued());
}

TEST_CASE("trace operator oracles") {
  ModelManifold m = quarter();
  // tr(q) = 1 + 4 lambda^2 = 5/4
  Poly tq = trace_op(m, 0, quadric(m, 0));
  CHECK(tq == Poly::constant(1, Scalar(mpq_class(5, 4))));
  // tr(z^3) = 6 lambda z = 3/2 z
  CHECK(to_string(trace_op(m, 0, parse_poly("z1^3", 1))) == "3/2*z1");
  // traces annihilate everything below degree 2
  CHECK(trace_op(m, 0, parse_poly("z1 + 2*Z1", 1)).is_zero());
}

TEST_CASE("trace is the Fischer adjoint of quadric multiplication") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> coef(-5, 5);
  ModelManifold models[] = {
      quarter(),
      make_model(2, {mpq_class(1, 4), mpq_class(2, 5)}, {1, 0}, {0, 1}),
      make_model(2, {mpq_class(1, 3), mpq_class(1, 5)}, {0, 1}, {1, 0}),
  };
  for (const auto& m : models) {
    for (int p = 2; p <= 5; ++p) {
      Poly big(m.n), small(m.n);
      for (const auto& e : monomials_of_degree(m.n, p))
        big.add_term(e, Scalar(mpq_class(coef(rng)), mpq_class(coef(rng))));
      for (const auto& e : monomials_of_degree(m.n, p - 2))
        small.add_term(e, Scalar(mpq_class(coef(rng)), mpq_class(coef(rng))));
      for (int l = 0; l < m.n; ++l) {
        Scalar lhs = fischer_inner(small * quadric(m, l), big);
        Scalar rhs = fischer_inner(small, trace_op(m, l, big));
        CHECK(lhs == rhs);
      }
    }
  }
}

TEST_CASE("reality split") {
  RealitySplit rs = reality_split(quarter());
  CHECK(rs.n0 == 1);
  CHECK(rs.is_real_q[0]);
  // tau swapping two components makes both quadrics non-real
  ModelManifold m =
      make_model(2, {mpq_class(1, 4), mpq_class(1, 3)}, {0, 1}, {1, 0});
  RealitySplit rm = reality_split(m);
  CHECK(rm.n0 == 0);
  CHECK(rm.sort_perm.size() == 2);
}

TEST_CASE("perturbed manifolds") {
  ModelManifold m = quarter();
  Poly phi = parse_poly("z1^2*Z1^2", 1);
  PerturbedManifold pm = make_perturbed(m, 6, {{0, 4, phi}});
  Poly w = defining_series(pm, 0);
  CHECK(w == quadric(m, 0) + phi);

  CHECK_THROWS_AS(make_perturbed(m, 6, {{0, 2, parse_poly("z1*Z1", 1)}}),
                  ValidationError);
  CHECK_THROWS_AS(make_perturbed(m, 6, {{0, 4, parse_poly("z1^3", 1)}}),
                  ValidationError);
  CHECK_THROWS_AS(make_perturbed(m, 6, {{2, 4, phi}}), ValidationError);
  CHECK_THROWS_AS(make_perturbed(m, 3, {{0, 4, phi}}), ValidationError);
  CHECK_THROWS_AS(
      make_perturbed(m, 6, {{0, 3, parse_poly("i*z1^3 + z1^2*Z1", 1)}}, true),
      ValidationError);
}

TEST_CASE("model automorphism check") {
  ModelManifold m = quarter();
  CMat id = CMat::identity(1);
  CHECK(model_automorphism_check(m, id, id));

  // real scaling c: gamma = c, delta = c^2
  CMat g(1, 1), d(1, 1);
  g.at(0, 0) = Scalar(2);
  d.at(0, 0) = Scalar(4);
  CHECK(model_automorphism_check(m, g, d));

  // imaginary scaling flips the sign of the lambda part; not an automorphism
  g.at(0, 0) = Scalar::i();
  d.at(0, 0) = Scalar(1);
  CHECK_FALSE(model_automorphism_check(m, g, d));

  // swap is an automorphism only when the weights agree
  ModelManifold mm =
      make_model(2, {mpq_class(1, 4), mpq_class(1, 4)}, {0, 1}, {0, 1});
  ModelManifold mu =
      make_model(2, {mpq_class(1, 4), mpq_class(1, 3)}, {0, 1}, {0, 1});
  CMat swap(2, 2);
  swap.at(0, 1) = Scalar(1);
  swap.at(1, 0) = Scalar(1);
  CHECK(model_automorphism_check(mm, swap, swap));
  CHECK_FALSE(model_automorphism_check(mu, swap, swap));

  CHECK_THROWS_AS(model_automorphism_check(m, CMat(1, 1), CMat(1, 1)),
                  ValidationError);
}

TEST_CASE("manifold file round trip") {
  const std::string path = std::string(QF_FIXTURES) + "/m1_tilde.json";
  PerturbedManifold pm = load_manifold_file(path);
  CHECK(pm.base.n == 1);
  CHECK(pm.base.lambda[0] == mpq_class(1, 4));
  CHECK(pm.d_max == 5);
  REQUIRE(pm.perturbations.size() == 1);
  CHECK(pm.perturbations[0].k == 4);
  CHECK(pm.perturbations[0].phi.is_real_valued());

  // canonical writer round trip is byte-identical
  std::string text = write_manifold(pm);
  PerturbedManifold again = read_manifold(text);
  CHECK(write_manifold(again) == text);

  CHECK_THROWS_AS(read_manifold("{\"n\": 1}"), ValidationError);
  CHECK_THROWS_AS(read_manifold("{oops"), ParseError);
  CHECK_THROWS_AS(load_manifold_file("/nonexistent.json"), ValidationError);
}
