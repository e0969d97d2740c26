#pragma once

#include <string>
#include <vector>

#include "qf/matrix.hpp"
#include "qf/model.hpp"

namespace qf {

// Weighted sesquilinear pairing with <z^I Zbar^J, z^K Zbar^L> = I! J! on
// matching exponents, linear in the first argument.
Scalar fischer_inner(const Poly& f, const Poly& g);

struct SolverCertificate {
  int dimension = 0;  // unknown count of the underlying linear system
  int rank = 0;
  int nullity = 0;  // dimension of the solution space
  std::string input_hash;
};

struct DecompositionFailure : std::runtime_error {
  Poly witness;
  DecompositionFailure(const std::string& w, Poly wit)
      : std::runtime_error(w), witness(std::move(wit)) {}
};

struct SingleDecomposition {
  Poly quotient;   // A in P = A q_l + C
  Poly remainder;  // C with tr_l C = 0
  SolverCertificate cert;
};

// Exact decomposition against one quadric. Requires a homogeneous input of
// the same variable count; the normal operator A -> tr_l(A q_l) is positive
// definite over the rationals, so failure here indicates an engine bug and
// is reported with a witness.
SingleDecomposition fischer_decompose_single(const Poly& p,
                                             const ModelManifold& m, int l);

struct JointDecomposition {
  std::vector<Poly> coeffs;  // A_1..A_N
  Poly remainder;            // C in the intersection of all trace kernels
  SolverCertificate cert;
};

// P = sum_l A_l q_l + C with tr_l C = 0 for every l. The remainder is
// unique; among the A-stacks the canonical representative of minimal
// Fischer norm (orthogonal to the quadric syzygy kernel) is returned.
JointDecomposition fischer_decompose_joint(const Poly& p,
                                           const ModelManifold& m);

// Exact basis of the intersection of all trace kernels on the given
// homogeneous (or bihomogeneous) slice.
std::vector<Poly> kernel_basis(const ModelManifold& m, int degree);
std::vector<Poly> kernel_basis_bidegree(const ModelManifold& m, int zdeg,
                                        int zbardeg);

enum class ChainFlavor { g_type, f_type };

struct ChainBasisElement {
  int border;       // -1 for g_type; zero-based borderline component else
  MultiIndex idx;   // I (g_type) or J (f_type)
  bool conjugated;  // true for the conjugate partner
  Poly value;
};

struct ChainRung {
  Poly p_part;      // quotient continuing the ladder
  Poly remainder;   // trace-kernel part at this level
  std::vector<ChainBasisElement> basis;
  std::vector<Scalar> combo;  // projection coefficients along basis
  Poly residual;    // remainder minus its projection onto the basis span
};

struct DecompChain {
  ChainFlavor flavor = ChainFlavor::g_type;
  int l = 0;
  Poly input;
  std::vector<ChainRung> ladder;
  SolverCertificate cert;
};

// Iterated decomposition against q_l: floor(p/2) rungs for the g flavor,
// floor((p-1)/2) for the f flavor (p the input degree; nonpositive degrees
// yield an empty ladder). Basis elements are the trace-kernel parts of the
// monomials z^I (g flavor) or of (Zbar_b + 2 lambda_b z_b) z^J over all
// borderline components b (f flavor), together with their conjugates.
// strict_real rejects non-real input.
DecompChain nested_chain(const Poly& p, const ModelManifold& m, int l,
                         ChainFlavor flavor, bool strict_real = false);

struct MembershipResult {
  bool is_member = false;
  Poly defect;  // sum over rungs of the non-excluded projections
  DecompChain chain;
};

// Membership test: every rung remainder must project to zero onto the span
// of the basis elements whose index is not excluded. Exclusion matches the
// idx field for both flavors (an excluded index removes all borderline
// copies and both conjugation states).
MembershipResult project_normalization_space(
    const Poly& p, const ModelManifold& m, int l, ChainFlavor flavor,
    const std::vector<MultiIndex>& excluded = {});

// phi = re + i*im with both parts real-valued: re = (phi + conj phi)/2,
// im = (phi - conj phi)/(2i).
std::pair<Poly, Poly> split_real_imag(const Poly& phi);

}  // namespace qf
