#pragma once

#include <string>
#include <vector>

#include "qf/formal_map.hpp"
#include "qf/model.hpp"

namespace qf {

enum class NormalizeStatus { ok, obstruction, halted };

struct StageRecord {
  std::string name;
  std::string detail;
  bool automorphism = false;  // verified target self-map (shears are not)
};

// Degree <= 2 normalization of a map between diagonal models: brings the
// linear part to (z, 0, ...) / (w, 0, ...) by verified target automorphisms
// (component permutation, real rescaling) plus component shears for
// duplicated target coordinates, checking the first- and second-order
// mapping identities along the way. Weight mismatches and broken identities
// surface as obstruction reports, never as silent repairs.
struct LinearNormalization {
  NormalizeStatus status = NormalizeStatus::ok;
  FormalMap map;
  std::vector<StageRecord> stages;
  std::vector<std::string> weight_equalities;
  std::string obstruction;  // empty when status == ok
  std::string text;
};

LinearNormalization normalize_linear_part(const FormalMap& fm,
                                          const PerturbedManifold& src,
                                          const PerturbedManifold& dst);

struct DegreeCorrection {
  int p = 0;
  std::vector<std::string> terms;  // e.g. "G[2] += (1/2) * z1^2*w1"
};

// Degree-by-degree normalization: after the linear stage, for each degree
// p = 3..degree the correction system is audited for unique solvability
// (singular operator halts with the audit attached), then solved against
// minus the current residual. For maps that already satisfy the mapping
// equation every correction is zero; otherwise consistent corrections repair
// the map and an inconsistent degree stops with the defect reported. The z'
// components beyond the source dimension receive no corrections.
struct NormalizeResult {
  NormalizeStatus status = NormalizeStatus::ok;
  FormalMap map;
  LinearNormalization linear;
  std::vector<DegreeCorrection> corrections;
  std::vector<std::string> audits;  // full audit text per degree
  std::string obstruction;
  std::string text;
};

NormalizeResult normalize_to_degree(const FormalMap& fm,
                                    const PerturbedManifold& src,
                                    const PerturbedManifold& dst, int degree);

// Rigidity check: a map that embeds the source model into the target model
// through `degree` must normalize to the standard embedding exactly.
struct TheoremAReport {
  bool precondition_ok = false;  // input satisfies the mapping equation
  bool holds = false;
  NormalizeResult normalization;
  std::string text;
};

TheoremAReport check_theorem_A(const FormalMap& fm,
                               const PerturbedManifold& src,
                               const PerturbedManifold& dst, int degree);

// Commuting-square check: the top map connects two perturbed manifolds, the
// vertical edges connect each to its model. All three edges must satisfy
// their mapping equations; the weight chain
//   lambda_l (source model) = lambda_l (perturbed source)
//     = lambda_l (perturbed target) = lambda_l (target model)
// is forced by the linear stages and reported per component.
struct TheoremBReport {
  bool edges_ok = false;
  std::string failing_edge;  // "left", "right" or "top"
  bool holds = false;
  std::vector<std::string> weight_chain;
  std::string text;
};

TheoremBReport check_theorem_B(const FormalMap& top, const FormalMap& left,
                               const FormalMap& right,
                               const PerturbedManifold& src_tilde,
                               const PerturbedManifold& src_model,
                               const PerturbedManifold& dst_tilde,
                               const PerturbedManifold& dst_model, int degree);

// Truncated comparison helper: equality of all components through the given
// weighted degree.
bool maps_equal_to_degree(const FormalMap& a, const FormalMap& b, int degree);

}  // namespace qf
