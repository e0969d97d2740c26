#include "qf/model.hpp"

#include <algorithm>
#include <numeric>

namespace qf {

bool ModelManifold::is_diagonal() const {
  for (int l = 0; l < n; ++l)
    if (sigma[l] != l || tau[l] != l) return false;
  return true;
}

namespace {

void check_permutation(const std::vector<int>& p, int n, const char* name) {
  if (static_cast<int>(p.size()) != n)
    throw ValidationError(std::string(name) + " has wrong length");
  std::vector<bool> seen(n, false);
  for (int v : p) {
    if (v < 0 || v >= n || seen[v])
      throw ValidationError(std::string(name) + " is not a permutation");
    seen[v] = true;
  }
}

}  // namespace

ModelManifold make_model(int n, std::vector<mpq_class> lambda,
                         std::vector<int> sigma, std::vector<int> tau,
                         bool strict) {
  if (n <= 0) throw ValidationError("model dimension must be positive");
  if (static_cast<int>(lambda.size()) != n)
    throw ValidationError("lambda has wrong length");
  check_permutation(sigma, n, "sigma");
  check_permutation(tau, n, "tau");
  ModelManifold m;
  m.n = n;
  m.lambda = std::move(lambda);
  m.sigma = std::move(sigma);
  m.tau = std::move(tau);
  m.in_regime = true;
  for (const auto& l : m.lambda)
    if (l <= 0 || l >= mpq_class(1, 2)) m.in_regime = false;
  if (strict && !m.in_regime)
    throw RegimeError("weight outside the (0,1/2) regime");
  return m;
}

ModelManifold make_diagonal_model(std::vector<mpq_class> lambda, bool strict) {
  int n = static_cast<int>(lambda.size());
  std::vector<int> id(n);
  std::iota(id.begin(), id.end(), 0);
  return make_model(n, std::move(lambda), id, id, strict);
}

Poly quadric(const ModelManifold& m, int l) {
  if (l < 0 || l >= m.n) throw ValidationError("quadric index out of range");
  int n = m.n;
  Poly q(n);
  // z_l * conj(z_{tau(l)})
  ExpKey e(2 * n, 0);
  e[l] += 1;
  e[n + m.tau[l]] += 1;
  q.add_term(e, 1);
  // lambda_l * (z_l z_{sigma(l)} + conj)
  ExpKey h(2 * n, 0);
  h[l] += 1;
  h[m.sigma[l]] += 1;
  q.add_term(h, Scalar(m.lambda[l]));
  ExpKey a(2 * n, 0);
  a[n + l] += 1;
  a[n + m.sigma[l]] += 1;
  q.add_term(a, Scalar(m.lambda[l]));
  return q;
}

Poly trace_op(const ModelManifold& m, int l, const Poly& p) {
  if (l < 0 || l >= m.n) throw ValidationError("trace index out of range");
  if (p.n_vars() != m.n)
    throw std::invalid_argument("polynomial variable count mismatch");
  int n = m.n;
  Scalar lam(m.lambda[l]);
  // adjoint of multiplication by each quadric monomial is the matching
  // second-order derivative
  Poly r = p.diff(l).diff(n + m.tau[l]);
  r += lam * p.diff(l).diff(m.sigma[l]);
  r += lam * p.diff(n + l).diff(n + m.sigma[l]);
  return r;
}

RealitySplit reality_split(const ModelManifold& m) {
  RealitySplit s;
  s.is_real_q.resize(m.n);
  for (int l = 0; l < m.n; ++l) {
    // q_l is real-valued exactly when its Hermitian part z_l conj(z_tau(l))
    // is symmetric under conjugation, i.e. tau(l) = l
    s.is_real_q[l] = quadric(m, l).is_real_valued();
    if (s.is_real_q[l]) ++s.n0;
  }
  s.sort_perm.resize(m.n);
  std::iota(s.sort_perm.begin(), s.sort_perm.end(), 0);
  std::stable_sort(s.sort_perm.begin(), s.sort_perm.end(),
                   [&](int a, int b) { return s.is_real_q[a] && !s.is_real_q[b]; });
  return s;
}

PerturbedManifold make_perturbed(ModelManifold base, int d_max,
                                 std::vector<Perturbation> perturbations,
                                 bool strict_real) {
  if (d_max < 2) throw ValidationError("d_max must be at least 2");
  for (const auto& pert : perturbations) {
    if (pert.l < 0 || pert.l >= base.n)
      throw ValidationError("perturbation component out of range");
    if (pert.k < 3) throw ValidationError("perturbation degree below 3");
    if (pert.k > d_max)
      throw ValidationError("perturbation degree above d_max");
    if (pert.phi.n_vars() != base.n)
      throw ValidationError("perturbation variable count mismatch");
    if (!pert.phi.is_zero() &&
        (!pert.phi.is_homogeneous() || pert.phi.degree() != pert.k))
      throw ValidationError("perturbation is not homogeneous of its degree");
    if (strict_real && !pert.phi.is_real_valued())
      throw ValidationError("perturbation is not real-valued");
  }
  PerturbedManifold pm;
  pm.base = std::move(base);
  pm.d_max = d_max;
  pm.perturbations = std::move(perturbations);
  return pm;
}

Poly defining_series(const PerturbedManifold& pm, int l) {
  Poly w = quadric(pm.base, l);
  for (const auto& pert : pm.perturbations)
    if (pert.l == l) w += pert.phi;
  return w.truncate_above(pm.d_max);
}

bool model_automorphism_check(const ModelManifold& m, const CMat& gamma,
                              const CMat& delta) {
  int n = m.n;
  if (gamma.rows() != n || gamma.cols() != n || delta.rows() != n ||
      delta.cols() != n)
    throw ValidationError("automorphism candidate has wrong shape");
  // singular candidates are not maps onto the model
  QMat rg = realify(gamma), rd = realify(delta);
  if (q_rank(rg) != 2 * n || q_rank(rd) != 2 * n)
    throw ValidationError("automorphism candidate is singular");
  // images of z and conj z under gamma
  std::vector<Poly> images(2 * n, Poly(n));
  for (int i = 0; i < n; ++i) {
    Poly zi(n), zbi(n);
    for (int t = 0; t < n; ++t) {
      zi += Scalar(gamma.at(i, t)) * Poly::zvar(n, t);
      zbi += Scalar(gamma.at(i, t)).conj() * Poly::zbar(n, t);
    }
    images[i] = zi;
    images[n + i] = zbi;
  }
  for (int l = 0; l < n; ++l) {
    Poly lhs(n);
    for (int j = 0; j < n; ++j) {
      if (delta.at(l, j).is_zero()) continue;
      lhs += Scalar(delta.at(l, j)) * quadric(m, j);
    }
    if (lhs != quadric(m, l).substitute(images)) return false;
  }
  return true;
}

}  // namespace qf
