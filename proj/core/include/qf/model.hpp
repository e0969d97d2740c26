#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qf/matrix.hpp"
#include "qf/poly.hpp"

namespace qf {

struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& w) : std::runtime_error(w) {}
};
struct RegimeError : ValidationError {
  explicit RegimeError(const std::string& w) : ValidationError(w) {}
};

// Quadric model in C^N x C^N: w_l = z_l * conj(z_{tau(l)})
//                                  + lambda_l * (z_l z_{sigma(l)} + conj).
// sigma and tau are stored zero-based.
struct ModelManifold {
  int n = 0;
  std::vector<mpq_class> lambda;
  std::vector<int> sigma;
  std::vector<int> tau;
  // every weight strictly inside (0, 1/2)
  bool in_regime = false;

  bool is_diagonal() const;
};

// Validates shapes and permutations. In strict mode a weight outside (0,1/2)
// raises RegimeError; otherwise the regime flag is recorded on the model.
ModelManifold make_model(int n, std::vector<mpq_class> lambda,
                         std::vector<int> sigma, std::vector<int> tau,
                         bool strict = false);

// identity sigma/tau convenience
ModelManifold make_diagonal_model(std::vector<mpq_class> lambda,
                                  bool strict = false);

// Defining quadric q_l as a Poly in 2N variables (l zero-based).
Poly quadric(const ModelManifold& m, int l);

// Fischer adjoint of multiplication by q_l, applied to p.
Poly trace_op(const ModelManifold& m, int l, const Poly& p);

struct RealitySplit {
  int n0 = 0;                    // number of real defining quadrics
  std::vector<bool> is_real_q;   // per l
  std::vector<int> sort_perm;    // permutation placing real quadrics first
};

RealitySplit reality_split(const ModelManifold& m);

struct Perturbation {
  int l = 0;  // zero-based component
  int k = 0;  // homogeneity degree, at least 3
  Poly phi;
};

struct PerturbedManifold {
  ModelManifold base;
  int d_max = 0;
  std::vector<Perturbation> perturbations;
};

// Validates degrees/components; strict_real additionally requires every
// perturbation to be a real-valued Poly.
PerturbedManifold make_perturbed(ModelManifold base, int d_max,
                                 std::vector<Perturbation> perturbations,
                                 bool strict_real = false);

// w_l as a function of (z, conj z): quadric plus perturbations, truncated
// at the manifold's d_max.
Poly defining_series(const PerturbedManifold& pm, int l);

// Checks that the linear candidate z -> gamma z, w -> delta w maps the model
// onto itself exactly: delta applied to the quadric vector must reproduce
// every quadric evaluated at gamma z. Throws ValidationError on non-square
// or singular candidates.
bool model_automorphism_check(const ModelManifold& m, const CMat& gamma,
                              const CMat& delta);

}  // namespace qf
