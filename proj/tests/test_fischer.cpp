#include <random>

#include "doctest.h"
#include "qf/fischer.hpp"
#include "qf/poly_io.hpp"

using namespace qf;

namespace {

ModelManifold quarter() { return make_diagonal_model({mpq_class(1, 4)}); }

// two-argument mpq_class leaves the fraction uncanonicalized
mpq_class frac(int a, int b) {
  mpq_class q(a, b);
  q.canonicalize();
  return q;
}

Poly random_poly(int n, int deg, std::mt19937_64& rng, bool real_valued) {
  std::uniform_int_distribution<int> coef(-6, 6);
  std::uniform_int_distribution<int> den(1, 4);
  Poly p(n);
  for (const auto& e : monomials_of_degree(n, deg)) {
    if (coef(rng) > 2) continue;  // keep the polynomials moderately sparse
    Scalar c(frac(coef(rng), den(rng)), frac(coef(rng), den(rng)));
    p.add_term(e, c);
  }
  if (real_valued) p += p.conjugate();
  if (p.is_zero()) {
    p.add_term(monomials_of_degree(n, deg).front(), Scalar(1));
    if (real_valued) p += p.conjugate();
  }
  return p;
}

}  // namespace

TEST_CASE("fischer inner product") {
  Poly a = parse_poly("z1^2*Z1", 1);
  CHECK(fischer_inner(a, a) == Scalar(2));  // 2! * 1!
  CHECK(fischer_inner(a, parse_poly("z1*Z1^2", 1)) == Scalar(0));
  // <q, q> = 1 + 4 lambda^2 = 5/4 at lambda = 1/4
  Poly q = quadric(quarter(), 0);
  CHECK(fischer_inner(q, q) == Scalar(mpq_class(5, 4)));
  // sesquilinearity in the second slot
  Poly ia = Scalar::i() * a;
  CHECK(fischer_inner(a, ia) == Scalar(mpq_class(0), mpq_class(-2)));
}

TEST_CASE("single decomposition oracle at z^3") {
  ModelManifold m = quarter();
  SingleDecomposition dec =
      fischer_decompose_single(parse_poly("z1^3", 1), m, 0);
  CHECK(to_string(dec.quotient) == "5/7*z1 - 2/7*Z1");
  CHECK(dec.quotient * quadric(m, 0) + dec.remainder == parse_poly("z1^3", 1));
  CHECK(trace_op(m, 0, dec.remainder).is_zero());
  CHECK(dec.cert.dimension == 2);
  CHECK(dec.cert.rank == 2);
  CHECK_FALSE(dec.cert.input_hash.empty());
}

TEST_CASE("single decomposition edge cases") {
  ModelManifold m = quarter();
  // degrees below 2 are pure remainder
  SingleDecomposition low = fischer_decompose_single(parse_poly("z1", 1), m, 0);
  CHECK(low.quotient.is_zero());
  CHECK(low.remainder == parse_poly("z1", 1));
  CHECK_THROWS_AS(fischer_decompose_single(parse_poly("z1 + z1^2", 1), m, 0),
                  ValidationError);
  CHECK_THROWS_AS(fischer_decompose_single(parse_poly("z1^2", 1), m, 5),
                  ValidationError);
}

TEST_CASE("joint decomposition reconstructs the input") {
  std::mt19937_64 rng(99);
  ModelManifold models[] = {
      quarter(),
      make_diagonal_model({mpq_class(1, 4), mpq_class(1, 3)}),
      make_model(2, {mpq_class(1, 4), mpq_class(1, 3)}, {1, 0}, {1, 0}),
  };
  for (const auto& m : models)
    for (int p = 2; p <= 4; ++p) {
      Poly input = random_poly(m.n, p, rng, false);
      JointDecomposition dec = fischer_decompose_joint(input, m);
      Poly rebuilt = dec.remainder;
      for (int l = 0; l < m.n; ++l) rebuilt += dec.coeffs[l] * quadric(m, l);
      CHECK(rebuilt == input);
      for (int l = 0; l < m.n; ++l)
        CHECK(trace_op(m, l, dec.remainder).is_zero());
    }
}

TEST_CASE("joint decomposition picks the minimal-norm coefficient stack") {
  // with two equal quadrics the syzygy A = (q2, -q1) is in the kernel; the
  // canonical representative must be orthogonal to it
  ModelManifold m = make_diagonal_model({mpq_class(1, 4), mpq_class(1, 4)});
  Poly input = parse_poly("z1^2*z2^2", 2);
  JointDecomposition dec = fischer_decompose_joint(input, m);
  CHECK(dec.cert.nullity > 0);
  Poly rebuilt = dec.remainder;
  for (int l = 0; l < m.n; ++l) rebuilt += dec.coeffs[l] * quadric(m, l);
  CHECK(rebuilt == input);
  // orthogonality to the syzygy direction in the Fischer pairing
  Scalar pairing = fischer_inner(dec.coeffs[0], quadric(m, 1)) -
                   fischer_inner(dec.coeffs[1], quadric(m, 0));
  CHECK(pairing.is_zero());
}

TEST_CASE("kernel dimensions at small degree") {
  ModelManifold m = quarter();
  CHECK(kernel_basis(m, 0).size() == 1);
  CHECK(kernel_basis(m, 1).size() == 2);
  CHECK(kernel_basis(m, 2).size() == 2);
  for (const Poly& b : kernel_basis(m, 3))
    CHECK(trace_op(m, 0, b).is_zero());
  CHECK(kernel_basis_bidegree(m, 1, 1).size() == 0);
  CHECK(kernel_basis_bidegree(m, 1, 0).size() == 1);
}

TEST_CASE("nested chain ladder structure") {
  ModelManifold m = quarter();
  std::mt19937_64 rng(5);
  Poly input = random_poly(1, 4, rng, true);
  DecompChain chain = nested_chain(input, m, 0, ChainFlavor::g_type);
  REQUIRE(chain.ladder.size() == 2);

  // telescoping: input = r0 + r1 q + p1 q^2
  Poly q = quadric(m, 0);
  Poly rebuilt = chain.ladder[0].remainder + chain.ladder[1].remainder * q +
                 chain.ladder[1].p_part * q * q;
  CHECK(rebuilt == input);

  // each remainder is annihilated and its residual is remainder - projection
  for (const auto& rung : chain.ladder) {
    CHECK(trace_op(m, 0, rung.remainder).is_zero());
    Poly proj = rung.remainder - rung.residual;
    Poly direct(1);
    for (size_t b = 0; b < rung.basis.size(); ++b)
      direct += rung.combo[b] * rung.basis[b].value;
    CHECK(proj == direct);
  }

  DecompChain fchain = nested_chain(input, m, 0, ChainFlavor::f_type);
  CHECK(fchain.ladder.size() == 1);
  for (const auto& el : fchain.ladder[0].basis) {
    CHECK(trace_op(m, 0, el.value).is_zero());
    if (el.border >= 0) CHECK(el.border < m.n);
  }

  CHECK_THROWS_AS(
      nested_chain(parse_poly("i*z1^2", 1), m, 0, ChainFlavor::g_type, true),
      ValidationError);
}

TEST_CASE("conjugate basis elements carry conjugate coefficients") {
  std::mt19937_64 rng(11);
  ModelManifold m = make_diagonal_model({mpq_class(1, 4), mpq_class(2, 5)});
  for (int p = 3; p <= 5; ++p) {
    Poly input = random_poly(2, p, rng, true);
    for (ChainFlavor fl : {ChainFlavor::g_type, ChainFlavor::f_type}) {
      DecompChain chain = nested_chain(input, m, 0, fl);
      for (const auto& rung : chain.ladder) {
        size_t half = rung.basis.size() / 2;
        for (size_t k = 0; k < half; ++k) {
          CHECK_FALSE(rung.basis[k].conjugated);
          CHECK(rung.basis[k + half].conjugated);
          CHECK(rung.basis[k + half].idx == rung.basis[k].idx);
          CHECK(rung.combo[k + half] == rung.combo[k].conj());
        }
      }
    }
  }
}

TEST_CASE("normalization-space membership") {
  ModelManifold m = quarter();
  // the quadric itself has zero chain remainders: member for any exclusions
  Poly q = quadric(m, 0);
  CHECK(project_normalization_space(q, m, 0, ChainFlavor::g_type).is_member);
  CHECK(project_normalization_space(q, m, 0, ChainFlavor::g_type, {{2}})
            .is_member);

  // z^2 has remainder exactly along the z^2 kernel direction
  Poly z2 = parse_poly("z1^2", 1);
  MembershipResult hit =
      project_normalization_space(z2, m, 0, ChainFlavor::g_type);
  CHECK_FALSE(hit.is_member);
  CHECK(hit.defect == z2 - Scalar(mpq_class(2, 5)) * q);

  // excluding the (2) label removes the whole obstruction span
  MembershipResult miss =
      project_normalization_space(z2, m, 0, ChainFlavor::g_type, {{2}});
  CHECK(miss.is_member);
  CHECK(miss.defect.is_zero());
}

TEST_CASE("real and imaginary split") {
  Poly phi = parse_poly("(1+2*i)*z1^2*Z1", 1);
  auto [re, im] = split_real_imag(phi);
  CHECK(re.is_real_valued());
  CHECK(im.is_real_valued());
  CHECK(re + Scalar::i() * im == phi);
}
