#include "doctest.h"
#include "qf/multi_index.hpp"
#include "qf/poly.hpp"
#include "qf/poly_io.hpp"

using namespace qf;

TEST_CASE("rational parsing") {
  CHECK(rational_from_string("3/6") == mpq_class(1, 2));
  CHECK(rational_from_string("-2/4") == mpq_class(-1, 2));
  CHECK(rational_from_string("7") == mpq_class(7));
  CHECK_THROWS_AS(rational_from_string("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(rational_from_string("abc"), std::invalid_argument);
  CHECK_THROWS_AS(rational_from_string(""), std::invalid_argument);
}

TEST_CASE("scalar arithmetic and rendering") {
  Scalar a(mpq_class(1, 2), mpq_class(-2));
  CHECK(to_string(a) == "1/2-2*i");
  CHECK(to_string(Scalar(mpq_class(0), mpq_class(-1, 3))) == "-1/3*i");
  CHECK(to_string(Scalar(mpq_class(3, 2))) == "3/2");
  CHECK(to_string(Scalar(0)) == "0");
  CHECK(Scalar::i() * Scalar::i() == Scalar(-1));
  CHECK(a * a.conj() == Scalar(a.norm_sq()));
  Scalar b(mpq_class(2), mpq_class(1));
  CHECK((a / b) * b == a);
  CHECK_THROWS_AS(a / Scalar(0), std::domain_error);
  CHECK(a.conj().conj() == a);
}

TEST_CASE("multi-index enumeration is descending lexicographic") {
  auto degs = monomials_of_degree(1, 3);
  REQUIRE(degs.size() == 4);
  CHECK(degs[0] == ExpKey{3, 0});
  CHECK(degs[1] == ExpKey{2, 1});
  CHECK(degs[2] == ExpKey{1, 2});
  CHECK(degs[3] == ExpKey{0, 3});

  auto exps = exponents_of_degree(2, 2);
  REQUIRE(exps.size() == 3);
  CHECK(exps[0] == MultiIndex{2, 0});
  CHECK(exps[1] == MultiIndex{1, 1});
  CHECK(exps[2] == MultiIndex{0, 2});

  auto bi = monomials_of_bidegree(2, 1, 1);
  CHECK(bi.size() == 4);
  for (const auto& e : bi) {
    CHECK(degree_of(holo_part(e)) == 1);
    CHECK(degree_of(anti_part(e)) == 1);
  }
}

TEST_CASE("factorials and binomials") {
  CHECK(factorial(0) == 1);
  CHECK(factorial(5) == 120);
  CHECK(binomial(6, 3) == 20);
  CHECK(binomial(3, 5) == 0);
  CHECK(binomial(8, 0) == 1);
}

TEST_CASE("poly term bookkeeping") {
  Poly p(2);
  p.add_term({1, 0, 0, 1}, Scalar(2));  // 2 z1 Z2
  p.add_term({1, 0, 0, 1}, Scalar(-2));
  CHECK(p.is_zero());
  CHECK(p.degree() == Poly::neg_inf_degree);

  p.add_term({2, 0, 0, 0}, Scalar(1));
  p.add_term({0, 0, 1, 1}, Scalar::i());
  CHECK(p.degree() == 2);
  CHECK(p.is_homogeneous());
  CHECK(p.coeff({2, 0, 0, 0}) == Scalar(1));
  CHECK(p.coeff({9, 9, 9, 9}) == Scalar(0));
}

TEST_CASE("conjugation swaps holomorphic and antiholomorphic slots") {
  Poly p = parse_poly("(1+i)*z1^2*Z2 + 3*z2", 2);
  Poly c = p.conjugate();
  CHECK(c.coeff({0, 1, 2, 0}) == Scalar(mpq_class(1), mpq_class(-1)));
  CHECK(c.coeff({0, 0, 0, 1}) == Scalar(3));
  CHECK(c.conjugate() == p);
}

TEST_CASE("differentiation") {
  Poly p = parse_poly("z1^2*Z1", 1);
  CHECK(to_string(p.diff(0)) == "2*z1*Z1");
  CHECK(to_string(p.diff(1)) == "z1^2");
  CHECK(p.diff(1).diff(1).is_zero());
}

TEST_CASE("homogeneous and bidegree slices") {
  Poly p = parse_poly("z1^3 + z1*Z1 + 2*Z1^2 + 5", 1);
  CHECK(to_string(p.homogeneous_component(2)) == "z1*Z1 + 2*Z1^2");
  CHECK(to_string(p.bidegree_component(0, 2)) == "2*Z1^2");
  CHECK(to_string(p.truncate_above(2)) == "z1*Z1 + 2*Z1^2 + 5");
  CHECK(p.homogeneous_component(7).is_zero());
  CHECK_FALSE(p.is_homogeneous());
  CHECK(parse_poly("z1*Z2 + z2*Z1", 2).is_real_valued());
  CHECK_FALSE(parse_poly("z1*Z2", 2).is_real_valued());
  CHECK(parse_poly("z1 + 1", 1).has_anti_part() == false);
}

TEST_CASE("substitution with truncation") {
  // p(z1, z2) = (z1 + z2)^2, substitute z2 -> z1
  Poly p = parse_poly("z1^2 + 2*z1*z2 + z2^2", 2);
  std::vector<Poly> images = {parse_poly("z1", 2), parse_poly("z1", 2),
                              parse_poly("Z1", 2), parse_poly("Z1", 2)};
  CHECK(to_string(p.substitute(images)) == "4*z1^2");

  // truncation drops the degree-4 part of (z1 + z1^2)^2
  Poly q = parse_poly("z1^2", 1);
  std::vector<Poly> im2 = {parse_poly("z1 + z1^2", 1), parse_poly("Z1", 1)};
  CHECK(to_string(q.substitute(im2, 3)) == "2*z1^3 + z1^2");
  CHECK(to_string(q.substitute(im2)) == "z1^4 + 2*z1^3 + z1^2");
}

TEST_CASE("canonical printing round trip") {
  const char* cases[] = {
      "z1^3 - 2/7*z1^2*Z1 + z1*Z1^2",
      "(1/2+3*i)*z1*z2 - Z2^2",
      "i*z1 - i*Z1",
      "0",
      "-z1 + Z1",
  };
  for (const char* s : cases) {
    Poly p = parse_poly(s, 2);
    CHECK(to_string(p) == s);
    CHECK(parse_poly(to_string(p), 2) == p);
  }
  // implicit multiplication and redundant whitespace normalize away
  CHECK(to_string(parse_poly("2z1Z2", 2)) == "2*z1*Z2");
  CHECK(to_string(parse_poly("  z1   *z1", 2)) == "z1^2");
  CHECK(to_string(parse_poly("(z1 + Z1)^2", 1)) == "z1^2 + 2*z1*Z1 + Z1^2");
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_poly("z1 + @", 1);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 1);
    CHECK(e.col == 6);
    CHECK(std::string(e.what()).find("line 1, column 6") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_poly("z3", 2), ParseError);
  CHECK_THROWS_AS(parse_poly("z0", 2), ParseError);
  CHECK_THROWS_AS(parse_poly("1/0", 2), ParseError);
  CHECK_THROWS_AS(parse_poly("(z1", 2), ParseError);
}
