#include "qf/multi_index.hpp"

#include <stdexcept>

namespace qf {

int degree_of(const MultiIndex& m) {
  int d = 0;
  for (int e : m) d += e;
  return d;
}

ExpKey concat_exp(const MultiIndex& i, const MultiIndex& j) {
  ExpKey e = i;
  e.insert(e.end(), j.begin(), j.end());
  return e;
}

MultiIndex holo_part(const ExpKey& e) {
  return MultiIndex(e.begin(), e.begin() + e.size() / 2);
}

MultiIndex anti_part(const ExpKey& e) {
  return MultiIndex(e.begin() + e.size() / 2, e.end());
}

mpz_class factorial(int n) {
  if (n < 0) throw std::invalid_argument("factorial of negative integer");
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

mpz_class binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return r;
}

static void emit_exponents(int len, int deg, MultiIndex& cur,
                           std::vector<MultiIndex>& out) {
  if (len == 1) {
    cur.push_back(deg);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  // descending first coordinate gives descending lex overall
  for (int e = deg; e >= 0; --e) {
    cur.push_back(e);
    emit_exponents(len - 1, deg - e, cur, out);
    cur.pop_back();
  }
}

std::vector<MultiIndex> exponents_of_degree(int len, int deg) {
  if (len <= 0 || deg < 0) return {};
  std::vector<MultiIndex> out;
  MultiIndex cur;
  emit_exponents(len, deg, cur, out);
  return out;
}

std::vector<ExpKey> monomials_of_degree(int n, int deg) {
  return exponents_of_degree(2 * n, deg);
}

std::vector<ExpKey> monomials_of_bidegree(int n, int zdeg, int zbardeg) {
  std::vector<ExpKey> out;
  for (const auto& i : exponents_of_degree(n, zdeg))
    for (const auto& j : exponents_of_degree(n, zbardeg))
      out.push_back(concat_exp(i, j));
  return out;
}

}  // namespace qf
