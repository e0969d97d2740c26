#pragma once

#include <string>

#include "qf/index_table.hpp"
#include "qf/matrix.hpp"
#include "qf/model.hpp"

namespace qf {

// Square exact system expressing, for every equation k, the trace
// tr_k(sum_l A_l q_l) of an unknown stack (A_1..A_N) of homogeneous
// degree-(p-2) polynomials, in the basis of degree-(p-2) monomials.
// Assembled by direct index arithmetic (14 shift families), never by
// polynomial expansion. Unknowns and rows are ordered layer-major
// (ascending conjugate degree |J|), then by component, then by monomial.
// The right-hand side is the trace vector of the monomial z^target.
// Only diagonal models admit this layered banded form.
class BlockSystem {
 public:
  BlockSystem(const ModelManifold& m, const MultiIndex& target);

  int n() const { return model_.n; }
  int p() const { return p_; }
  int dim() const { return dim_; }
  const IndexTable& table() const { return table_; }
  const ModelManifold& model() const { return model_; }
  const std::vector<mpq_class>& rhs() const { return rhs_; }

  // stacked position of (component, table entry)
  int position(int comp, int table_idx) const;
  // inverse of position
  std::pair<int, int> unposition(int pos) const;

  std::vector<Scalar> apply(const std::vector<Scalar>& x) const;
  const std::vector<std::vector<std::pair<int, mpq_class>>>& rows() const {
    return rows_;
  }

  // layer label of a stacked position (|J| of its monomial)
  int layer_of_position(int pos) const;

  // human-readable dump: layer dimension table (with the naive uniform
  // count discrepancy), banded block inventory, entries, right-hand side
  std::string dump() const;

 private:
  ModelManifold model_;
  MultiIndex target_;
  int p_;    // |target|; unknowns live in degree p-2
  int dim_;  // n * (number of degree-(p-2) monomials)
  IndexTable table_;
  std::vector<int> layer_offset_;  // monomial offset of each |J| layer
  std::vector<std::vector<std::pair<int, mpq_class>>> rows_;
  std::vector<mpq_class> rhs_;

  void emit(int eq, const ExpKey& out, int col, const mpq_class& coeff);
  void assemble();
};

BlockSystem assemble_block_system(const ModelManifold& m,
                                  const MultiIndex& target);

}  // namespace qf
