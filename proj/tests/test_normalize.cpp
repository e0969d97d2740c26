#include "doctest.h"
#include "qf/normalize.hpp"
#include "qf/poly_io.hpp"

using namespace qf;

namespace {

PerturbedManifold model(const std::vector<mpq_class>& lambda, int d_max = 5) {
  return make_perturbed(make_diagonal_model(lambda), d_max, {});
}

const mpq_class kQuarter(1, 4);
const mpq_class kThird(1, 3);

FormalMap scaled_map(const Scalar& c, int d_max = 5) {
  CMat g(1, 1), d(1, 1);
  g.at(0, 0) = c;
  d.at(0, 0) = c * c.conj();
  return apply_target_linear(standard_embedding(1, 1, d_max), g, d);
}

// the workhorse commuting-square fixture: the perturbed manifold carries
// w = q - q^2 and the vertical map (z, w + w^2) straightens it out
struct SquareFixture {
  PerturbedManifold tilde;
  PerturbedManifold flat;
  FormalMap vertical;
  FormalMap top;

  SquareFixture() {
    ModelManifold base = make_diagonal_model({kQuarter});
    Poly q = quadric(base, 0);
    tilde = make_perturbed(base, 5, {{0, 4, Scalar(-1) * q * q}});
    flat = make_perturbed(base, 5, {});
    vertical = standard_embedding(1, 1, 5);
    add_map_term(vertical, false, 0, {2}, Poly::constant(1, Scalar(1)));
    top = standard_embedding(1, 1, 5);
  }
};

}  // namespace

TEST_CASE("linear stage leaves the standard embedding alone") {
  PerturbedManifold m = model({kQuarter});
  LinearNormalization lin =
      normalize_linear_part(standard_embedding(1, 1, 5), m, m);
  CHECK(lin.status == NormalizeStatus::ok);
  CHECK(lin.stages.empty());
  CHECK(lin.map == standard_embedding(1, 1, 5));
  CHECK(lin.text.find("status: linear normal form reached") !=
        std::string::npos);
  REQUIRE(lin.weight_equalities.size() == 1);
  CHECK(lin.weight_equalities[0] == "lambda_1 = lambda'_1 = 1/4");
}

TEST_CASE("real rescaling is undone by a verified automorphism") {
  PerturbedManifold m = model({kQuarter});
  LinearNormalization lin =
      normalize_linear_part(scaled_map(Scalar(2)), m, m);
  CHECK(lin.status == NormalizeStatus::ok);
  REQUIRE(lin.stages.size() == 1);
  CHECK(lin.stages[0].name == "rescaling");
  CHECK(lin.stages[0].automorphism);
  CHECK(lin.map == standard_embedding(1, 1, 5));

  // negative scalings are fine too
  LinearNormalization neg =
      normalize_linear_part(scaled_map(Scalar(mpq_class(-3, 2))), m, m);
  CHECK(neg.status == NormalizeStatus::ok);
  CHECK(neg.map == standard_embedding(1, 1, 5));
}

TEST_CASE("imaginary scaling factors are obstructed") {
  PerturbedManifold m = model({kQuarter});
  FormalMap fm = standard_embedding(1, 1, 5);
  add_map_term(fm, true, 0, {0}, (Scalar::i() - Scalar(1)) * parse_poly("z1", 1));
  // now F = i z, G = w: the w-coefficient matches |c|^2 = 1 but the weight
  // identity needs conj(c)^2 real positive
  LinearNormalization lin = normalize_linear_part(fm, m, m);
  CHECK(lin.status == NormalizeStatus::obstruction);
  CHECK(lin.obstruction.find("incompatible with the weights") !=
        std::string::npos);
}

TEST_CASE("component permutation with equal weights") {
  PerturbedManifold m = model({kQuarter, kQuarter});
  FormalMap fm;
  fm.n_src = 2;
  fm.n_dst = 2;
  fm.d_max = 5;
  fm.f.resize(2);
  fm.g.resize(2);
  add_map_term(fm, true, 0, {0, 0}, parse_poly("z2", 2));
  add_map_term(fm, true, 1, {0, 0}, parse_poly("z1", 2));
  add_map_term(fm, false, 0, {0, 1}, Poly::constant(2, Scalar(1)));
  add_map_term(fm, false, 1, {1, 0}, Poly::constant(2, Scalar(1)));
  LinearNormalization lin = normalize_linear_part(fm, m, m);
  CHECK(lin.status == NormalizeStatus::ok);
  REQUIRE_FALSE(lin.stages.empty());
  CHECK(lin.stages[0].name == "permutation");
  CHECK(lin.map == standard_embedding(2, 2, 5));
}

TEST_CASE("permutation blocked by unequal target weights") {
  PerturbedManifold src = model({kQuarter});
  PerturbedManifold dst = model({kThird, kQuarter});
  FormalMap fm;
  fm.n_src = 1;
  fm.n_dst = 2;
  fm.d_max = 5;
  fm.f.resize(2);
  fm.g.resize(2);
  add_map_term(fm, true, 1, {0}, parse_poly("z1", 1));
  add_map_term(fm, false, 1, {1}, Poly::constant(1, Scalar(1)));
  LinearNormalization lin = normalize_linear_part(fm, src, dst);
  CHECK(lin.status == NormalizeStatus::obstruction);
  CHECK(lin.obstruction.find("cannot be permuted into place") !=
        std::string::npos);
  CHECK(lin.obstruction.find("1/3, 1/4") != std::string::npos);
}

TEST_CASE("planted weight mismatch is reported, not repaired") {
  PerturbedManifold src = model({kQuarter});
  PerturbedManifold dst = model({kThird});
  LinearNormalization lin =
      normalize_linear_part(standard_embedding(1, 1, 5), src, dst);
  CHECK(lin.status == NormalizeStatus::obstruction);
  CHECK(lin.obstruction ==
        "weight mismatch at component 1: lambda = 1/4 on the source but "
        "lambda' = 1/3 on the target; no linear embedding matches these "
        "components");
  CHECK(lin.text.find("status: obstruction:") != std::string::npos);
}

TEST_CASE("first-order z terms in G are obstructions") {
  PerturbedManifold m = model({kQuarter});
  FormalMap fm = standard_embedding(1, 1, 5);
  add_map_term(fm, false, 0, {0}, parse_poly("z1", 1));
  LinearNormalization lin = normalize_linear_part(fm, m, m);
  CHECK(lin.status == NormalizeStatus::obstruction);
  CHECK(lin.obstruction.find("first-order z term") != std::string::npos);
}

TEST_CASE("duplicated component is sheared away") {
  PerturbedManifold src = model({kQuarter});
  PerturbedManifold dst = model({kQuarter, kQuarter});
  FormalMap fm;
  fm.n_src = 1;
  fm.n_dst = 2;
  fm.d_max = 5;
  fm.f.resize(2);
  fm.g.resize(2);
  for (int l = 0; l < 2; ++l) {
    add_map_term(fm, true, l, {0}, parse_poly("z1", 1));
    add_map_term(fm, false, l, {1}, Poly::constant(1, Scalar(1)));
  }
  REQUIRE(verify_embedding_equation(fm, src, dst, 5).holds);

  LinearNormalization lin = normalize_linear_part(fm, src, dst);
  CHECK(lin.status == NormalizeStatus::ok);
  CHECK(lin.map == standard_embedding(1, 2, 5));
  bool saw_shear = false;
  for (const auto& st : lin.stages)
    if (st.name == "shear") {
      saw_shear = true;
      CHECK_FALSE(st.automorphism);
    }
  CHECK(saw_shear);

  // a duplicate landing on a different weight cannot be absorbed
  PerturbedManifold bad = model({kQuarter, kThird});
  LinearNormalization rej = normalize_linear_part(fm, src, bad);
  CHECK(rej.status == NormalizeStatus::obstruction);
  CHECK(rej.obstruction.find("duplicated component 2") != std::string::npos);
}

TEST_CASE("degree corrections vanish on twisted embeddings") {
  PerturbedManifold m = model({kQuarter});
  NormalizeResult res =
      normalize_to_degree(scaled_map(Scalar(mpq_class(-3, 2))), m, m, 5);
  CHECK(res.status == NormalizeStatus::ok);
  CHECK(res.map == standard_embedding(1, 1, 5));
  REQUIRE(res.corrections.size() == 3);
  for (const auto& corr : res.corrections) CHECK(corr.terms.empty());
  CHECK(res.audits.size() == 3);
  CHECK(res.text.find("no correction needed") != std::string::npos);
  CHECK(res.text.find(
            "final verification: mapping equation holds through degree 5") !=
        std::string::npos);
}

TEST_CASE("degree corrections repair a planted cubic defect") {
  PerturbedManifold m = model({kQuarter});
  FormalMap fm = standard_embedding(1, 1, 5);
  add_map_term(fm, false, 0, {0},
               Scalar(mpq_class(1, 3)) * parse_poly("z1^3", 1));
  REQUIRE_FALSE(verify_embedding_equation(fm, m, m, 5).holds);

  NormalizeResult res = normalize_to_degree(fm, m, m, 5);
  CHECK(res.status == NormalizeStatus::ok);
  bool fixed_cubic = false;
  for (const auto& corr : res.corrections)
    if (corr.p == 3 && !corr.terms.empty()) fixed_cubic = true;
  CHECK(fixed_cubic);
  CHECK(verify_embedding_equation(res.map, m, m, 5).holds);
}

TEST_CASE("normalization halts on a degenerate correction operator") {
  PerturbedManifold edge = model({mpq_class(1, 2)}, 3);
  NormalizeResult res =
      normalize_to_degree(standard_embedding(1, 1, 3), edge, edge, 3);
  CHECK(res.status == NormalizeStatus::halted);
  CHECK(res.obstruction == "degree-3 correction operator is singular");
  CHECK(res.text.find("halted:") != std::string::npos);
  CHECK(res.text.find("degenerate correction system") != std::string::npos);
}

TEST_CASE("rigidity holds for twisted standard embeddings") {
  PerturbedManifold src = model({kQuarter});
  CMat g(2, 2), d(2, 2);
  g.at(0, 0) = Scalar(mpq_class(5, 2));
  g.at(1, 1) = Scalar(mpq_class(-2));
  d.at(0, 0) = Scalar(mpq_class(25, 4));
  d.at(1, 1) = Scalar(4);
  FormalMap fm = apply_target_linear(standard_embedding(1, 2, 4), g, d);
  TheoremAReport rep =
      check_theorem_A(fm, model({kQuarter}, 4), model({kQuarter, kThird}, 4), 4);
  CHECK(rep.precondition_ok);
  CHECK(rep.holds);
  CHECK(rep.normalization.map == standard_embedding(1, 2, 4));
  CHECK(rep.text.find("normal form equals the standard embedding") !=
        std::string::npos);

  // a non-embedding input fails the precondition, loudly
  TheoremAReport bad = check_theorem_A(standard_embedding(1, 1, 5), src,
                                       model({kThird}), 5);
  CHECK_FALSE(bad.precondition_ok);
  CHECK(bad.text.find("precondition failed") != std::string::npos);
  CHECK(bad.text.find("degree 2") != std::string::npos);
}

TEST_CASE("commuting square fixture is coherent") {
  SquareFixture fx;
  TheoremBReport rep =
      check_theorem_B(fx.top, fx.vertical, fx.vertical, fx.tilde, fx.flat,
                      fx.tilde, fx.flat, 5);
  CHECK(rep.edges_ok);
  CHECK(rep.holds);
  REQUIRE(rep.weight_chain.size() == 1);
  CHECK(rep.weight_chain[0] ==
        "component 1: 1/4 = 1/4 = 1/4 = 1/4 (source model, perturbed source, "
        "perturbed target, target model)");
  CHECK(rep.text.find("verdict: square is coherent") != std::string::npos);
}

TEST_CASE("commuting square names the failing edge") {
  SquareFixture fx;
  // an identity right edge does not absorb the perturbation
  TheoremBReport rep =
      check_theorem_B(fx.top, fx.vertical, standard_embedding(1, 1, 5),
                      fx.tilde, fx.flat, fx.tilde, fx.flat, 5);
  CHECK_FALSE(rep.edges_ok);
  CHECK(rep.failing_edge == "right");
  CHECK_FALSE(rep.holds);
  CHECK(rep.text.find("edge right: mapping equation FAILS at degree 4") !=
        std::string::npos);
}

TEST_CASE("normalization argument guards") {
  PerturbedManifold m = model({kQuarter});
  CHECK_THROWS_AS(
      normalize_to_degree(standard_embedding(1, 1, 5), m, m, 1),
      ValidationError);
  CHECK_THROWS_AS(
      normalize_to_degree(standard_embedding(1, 1, 5), m, m, 6),
      ValidationError);
  CHECK_THROWS_AS(
      normalize_linear_part(standard_embedding(2, 2, 5), m, m),
      ValidationError);
}
