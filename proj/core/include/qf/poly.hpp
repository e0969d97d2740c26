#pragma once

#include <limits>
#include <map>
#include <vector>

#include "qf/multi_index.hpp"
#include "qf/scalar.hpp"

namespace qf {

// Polynomial in z_1..z_N and their conjugates Z_1..Z_N with Scalar
// coefficients. Terms are keyed by the concatenated exponent vector (I;J)
// and kept in descending lexicographic order; zero coefficients are never
// stored. The zero polynomial has degree neg_inf_degree by convention.
class Poly {
 public:
  static constexpr int neg_inf_degree = std::numeric_limits<int>::min();
  using TermMap = std::map<ExpKey, Scalar, OdinGreater>;

  Poly() : n_(0) {}
  explicit Poly(int n_vars) : n_(n_vars) {}

  static Poly constant(int n_vars, const Scalar& c);
  static Poly monomial(int n_vars, const ExpKey& e, const Scalar& c);
  // z_{l+1} and its conjugate, l zero-based
  static Poly zvar(int n_vars, int l);
  static Poly zbar(int n_vars, int l);

  int n_vars() const { return n_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;
  const TermMap& terms() const { return terms_; }
  Scalar coeff(const ExpKey& e) const;
  // adds c*x^e, dropping the term if the sum cancels
  void add_term(const ExpKey& e, const Scalar& c);

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);
  Poly& operator*=(const Scalar& c);
  bool operator==(const Poly& o) const {
    return n_ == o.n_ && terms_ == o.terms_;
  }
  bool operator!=(const Poly& o) const { return !(*this == o); }

  // swaps I and J and conjugates every coefficient
  Poly conjugate() const;
  // partial derivative; var in [0,2N): first the z's, then the conjugates
  Poly diff(int var) const;
  Poly homogeneous_component(int k) const;
  Poly bidegree_component(int zdeg, int zbardeg) const;
  Poly truncate_above(int max_degree) const;
  // true when all terms share one total degree (zero counts as homogeneous)
  bool is_homogeneous() const;
  bool is_real_valued() const { return conjugate() == *this; }
  bool has_anti_part() const;

  // Replaces every variable by its image (images[0..N) for the z's,
  // images[N..2N) for the conjugates; all images share one variable count).
  // A nonnegative truncate_at discards total degrees above it throughout.
  Poly substitute(const std::vector<Poly>& images, int truncate_at = -1) const;

 private:
  int n_;
  TermMap terms_;
  void check_same_vars(const Poly& o) const;
};

inline Poly operator+(Poly a, const Poly& b) { return a += b; }
inline Poly operator-(Poly a, const Poly& b) { return a -= b; }
inline Poly operator*(Poly a, const Poly& b) { return a *= b; }
inline Poly operator*(Poly a, const Scalar& c) { return a *= c; }
inline Poly operator*(const Scalar& c, Poly a) { return a *= c; }

}  // namespace qf
