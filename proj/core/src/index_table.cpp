#include "qf/index_table.hpp"

#include <stdexcept>

namespace qf {

IndexTable::IndexTable(int n, int p, int layer_filter) : n_(n), p_(p) {
  if (n <= 0 || p < 0) throw std::invalid_argument("bad index table shape");
  layer_sizes_.assign(p + 1, 0);
  std::vector<int> seen(p + 1, 0);
  for (auto& e : monomials_of_degree(n, p)) {
    int j = 0;
    for (int t = n; t < 2 * n; ++t) j += e[t];
    if (layer_filter >= 0 && j != layer_filter) continue;
    layers_.push_back(j);
    in_layer_.push_back(seen[j]++);
    layer_sizes_[j] += 1;
    pos_.emplace(e, static_cast<int>(entries_.size()));
    entries_.push_back(std::move(e));
  }
}

int IndexTable::position(const ExpKey& e) const {
  auto it = pos_.find(e);
  return it == pos_.end() ? -1 : it->second;
}

int IndexTable::layer_size(int j) const {
  if (j < 0 || j > p_) return 0;
  return layer_sizes_[j];
}

mpz_class IndexTable::layer_dim_formula(int n, int p, int k) {
  return binomial(p - k + n - 1, n - 1) * binomial(k + n - 1, n - 1);
}

}  // namespace qf
