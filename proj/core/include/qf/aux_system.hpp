#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qf/matrix.hpp"
#include "qf/model.hpp"
#include "qf/multi_index.hpp"

namespace qf {

enum class AuxFlavor { plain, tilded };

struct SingularSystemError : std::runtime_error {
  std::vector<Scalar> kernel_witness;
  SingularSystemError(const std::string& w, std::vector<Scalar> wit)
      : std::runtime_error(w), kernel_witness(std::move(wit)) {}
};

// Degree-p slice of the linearized embedding equation for one target
// component. Rows are the degree-p monomials in (z, conj z) over the source
// variables, in the standard descending order. Columns:
//   dg       coefficient columns z^alpha * q^n of the w-component correction,
//            ordered by |n| ascending, then n descending lex, then alpha
//            descending lex  (|alpha| + 2|n| = p);
//   df_plus  columns v1 + v2 attached to the real parts of the z-component
//            correction, where for a label (n, beta) with |beta| + 2|n| = p-1
//              v1 = -(conj z_l + 2 lambda' z_l) * z^beta * q^n,
//              v2 = -(z_l + 2 lambda' conj z_l) * conj(z)^beta * q^n;
//   df_minus columns v1 - v2 attached to the imaginary parts.
// The df blocks put every |n| >= 1 label first (same label order as dg) and
// the pure top labels (n = 0, |beta| = p-1) last. Every column is a
// polynomial with rational coefficients, so the real and imaginary halves of
// the correction equation decouple against these columns.
struct DegreeColumns {
  int n = 0;
  int p = 0;
  std::vector<ExpKey> rows;
  QMat dg;
  QMat df_plus;
  QMat df_minus;
  int dg_top = 0;    // leading dg columns with n = 0
  int df_lower = 0;  // leading df columns with |n| >= 1
  std::vector<std::pair<MultiIndex, MultiIndex>> dg_labels;  // (n, alpha)
  std::vector<std::pair<MultiIndex, MultiIndex>> df_labels;  // (n, beta)
};

// Builds the slice for source model `source` and one target component with
// weight `target_weight`; `border_component` is the source variable paired
// with that component. with_border = false omits the df blocks (used for
// target components that the linear-part embedding sends to zero, and for
// the plain flavor below). Diagonal source models only.
DegreeColumns degree_columns(const ModelManifold& source,
                             const mpq_class& target_weight,
                             int border_component, int p, bool with_border);

// Reduced degree-p correction system in the normalized form
//   (I - Aux_p A) Z + B conj(Z) = V.
// Aux_p is a fixed ordered product of one-row modification factors with unit
// determinant weight lambda_1 each; A and B are recovered from the two real
// reduced operators
//   G_plus  = (I - Aux_p A) + B   (acting on Re Z)
//   G_minus = (I - Aux_p A) - B   (acting on Im Z),
// obtained by eliminating every non-top column against rows outside the
// designated top row block and restricting to that block.
//   plain:  Z = pure-z coefficients of the w-correction at degree p
//           (one block, designated rows z^alpha; B = 0 structurally);
//   tilded: Z = pure-z coefficients of the z-correction at degree p-1,
//           one block per equation l with designated rows z^beta conj(z_l),
//           Aux_p block diagonal with N identical factor-product copies.
struct AuxSystem {
  AuxFlavor flavor = AuxFlavor::plain;
  int n = 0;
  int p = 0;
  int dim = 0;  // unknowns in Z per conjugation half
  QMat aux;
  QMat a_mat;
  QMat b_mat;
  QMat g_plus;
  QMat g_minus;
  std::vector<mpq_class> rhs;  // baseline V (zero for the identity self-map)
};

AuxSystem assemble_aux_system(const ModelManifold& m, int p, AuxFlavor flavor);

// Ordered factor product Aux_p alone (tilded: the full block diagonal).
// Factor labels K run descending lex over degree p-2 (plain, on the degree-p
// pure-z space) or p-3 (tilded, on the degree-(p-1) pure-z space); the K
// factor replaces row pos(K + 2 e_1) by weights lambda_j at columns
// pos(K + 2 e_j). Requires lambda_1 != 0.
QMat aux_product(const ModelManifold& m, int p, AuxFlavor flavor);

// Solves (I - Aux A) Z + B conj(Z) = V by splitting Z = x + i y into the
// decoupled real solves G_plus x = Re V and G_minus y = Im V. Throws
// SingularSystemError carrying a kernel witness of the coupled operator when
// a half is singular.
std::vector<Scalar> solve_conjugate_coupled(const AuxSystem& sys,
                                            const std::vector<Scalar>& v);

struct InvertibilityReport {
  int n = 0;
  int p = 0;
  int dim = 0;         // top-block unknowns per conjugation half, all equations
  mpq_class det_plus;  // product over equations of det(R+^T R+)
  mpq_class det_minus;
  bool nonzero_plus = false;
  bool nonzero_minus = false;
  // per equation: surviving row counts, plus sign then minus sign
  std::vector<int> surviving_rows;
  std::string text;
};

// Exact determinant audit of the degree-p correction pair: per equation and
// conjugation sign, eliminates every dg and lower df column (first nonzero
// unconsumed row as pivot), restricts the surviving rows to the top df block
// R, and reports det(R^T R). Zero determinants are reported as findings,
// never raised as errors.
InvertibilityReport verify_invertibility(const ModelManifold& m, int p);

}  // namespace qf
