#pragma once

#include <map>
#include <vector>

#include "qf/multi_index.hpp"

namespace qf {

// Ordered enumeration of the degree-p monomial exponents (I;J) over n
// variables, descending lexicographic on the concatenated vector, grouped
// into layers by the conjugate degree |J|.
class IndexTable {
 public:
  // layer_filter >= 0 keeps only entries with |J| == layer_filter
  IndexTable(int n, int p, int layer_filter = -1);

  int n() const { return n_; }
  int p() const { return p_; }
  int size() const { return static_cast<int>(entries_.size()); }
  const ExpKey& at(int i) const { return entries_[i]; }
  // -1 when absent
  int position(const ExpKey& e) const;
  int layer_of(int i) const { return layers_[i]; }
  // monomial count with |J| == j
  int layer_size(int j) const;
  // index of the entry within its own layer
  int position_in_layer(int i) const { return in_layer_[i]; }

  // closed form C(p-k+n-1, n-1) * C(k+n-1, n-1) for the |J| = k layer
  static mpz_class layer_dim_formula(int n, int p, int k);

 private:
  int n_, p_;
  std::vector<ExpKey> entries_;
  std::vector<int> layers_;
  std::vector<int> in_layer_;
  std::vector<int> layer_sizes_;
  std::map<ExpKey, int, OdinGreater> pos_;
};

}  // namespace qf
