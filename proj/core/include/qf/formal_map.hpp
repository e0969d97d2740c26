#pragma once

#include <map>
#include <string>
#include <vector>

#include "qf/matrix.hpp"
#include "qf/model.hpp"
#include "qf/poly.hpp"

namespace qf {

// Holomorphic formal power series in (z, w): a sum over w-exponents n of
// coefficient polynomials in z alone (stored as 2N-slot Polys with empty
// conjugate part). Keys with zero coefficient polynomials are never stored.
using WSeries = std::map<MultiIndex, Poly>;

// Formal holomorphic map (F, G) from the source (z, w) space to the target
// (z', w') space, truncated at weighted degree d_max where z carries weight
// one and w weight two. Components fix the origin (no constant terms).
struct FormalMap {
  int n_src = 0;
  int n_dst = 0;
  int d_max = 0;
  std::vector<WSeries> f;  // z' components, one per target coordinate
  std::vector<WSeries> g;  // w' components
};

// F = (z, 0, ...), G = (w, 0, ...) truncated at d_max.
FormalMap standard_embedding(int n_src, int n_dst, int d_max);

// Shape, variable-count, constant-term and weighted-degree validation.
// Throws ValidationError with a component-qualified message.
void validate_map(const FormalMap& fm);

// Adds c * z^alpha w^n to the chosen component, dropping cancelled terms and
// terms above the weighted truncation degree.
void add_map_term(FormalMap& fm, bool f_side, int component,
                  const MultiIndex& w_exp, const Poly& zpoly);

// Coefficient of z^alpha w^n in the chosen component.
Scalar map_coeff(const FormalMap& fm, bool f_side, int component,
                 const MultiIndex& w_exp, const MultiIndex& alpha);

// Matrix of z-linear coefficients of F (rows: target components, columns:
// source variables) and of w-linear coefficients of G.
CMat linear_z_matrix(const FormalMap& fm);
CMat linear_w_matrix(const FormalMap& fm);

// Left-composes with the target linear change z' -> gamma z', w' -> delta w'
// (gamma, delta square over the target dimension): F <- gamma F, G <- delta G.
FormalMap apply_target_linear(const FormalMap& fm, const CMat& gamma,
                              const CMat& delta);

// Evaluates one component on the source manifold: substitutes
// w_j = defining_series(src, j) and truncates at total degree `degree`.
Poly eval_on_source(const FormalMap& fm, bool f_side, int component,
                    const PerturbedManifold& src, int degree);

struct EmbeddingCheck {
  bool holds = false;           // every residual vanishes through `degree`
  bool linear_rank_ok = false;  // z-linear block of F has full source rank
  int degree = 0;
  std::vector<Poly> residuals;  // per target component, in source variables
};

// Residuals of the mapping equation G_l(z, W) = Q'_l(F, conj F) + phi'_l
// on the source manifold, all series truncated at `degree`.
EmbeddingCheck verify_embedding_equation(const FormalMap& fm,
                                         const PerturbedManifold& src,
                                         const PerturbedManifold& dst,
                                         int degree);

bool operator==(const FormalMap& a, const FormalMap& b);

// Canonical JSON serialization (bit-exact round trip).
FormalMap read_map(const std::string& json_text);
FormalMap load_map_file(const std::string& path);
std::string write_map(const FormalMap& fm);

}  // namespace qf
