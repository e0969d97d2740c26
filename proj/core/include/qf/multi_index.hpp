#pragma once

#include <gmpxx.h>

#include <vector>

namespace qf {

// Exponent vector over the z variables (length N).
using MultiIndex = std::vector<int>;
// Concatenated exponent vector (I;J) over z and conjugate-z (length 2N).
using ExpKey = std::vector<int>;

// Term order used everywhere: descending lexicographic comparison of the
// concatenated exponent vector, so (p,0,...;0,...) sorts first in its degree.
struct OdinGreater {
  bool operator()(const ExpKey& a, const ExpKey& b) const { return a > b; }
};

int degree_of(const MultiIndex& m);

ExpKey concat_exp(const MultiIndex& i, const MultiIndex& j);
MultiIndex holo_part(const ExpKey& e);
MultiIndex anti_part(const ExpKey& e);

mpz_class factorial(int n);
mpz_class binomial(int n, int k);

// All exponent vectors of the given length summing to deg, descending lex.
std::vector<MultiIndex> exponents_of_degree(int len, int deg);
// All (I;J) with |I|+|J| = deg over n z-variables, descending lex on (I;J).
std::vector<ExpKey> monomials_of_degree(int n, int deg);
// All (I;J) with |I| = zdeg, |J| = zbardeg, descending lex on (I;J).
std::vector<ExpKey> monomials_of_bidegree(int n, int zdeg, int zbardeg);

}  // namespace qf
