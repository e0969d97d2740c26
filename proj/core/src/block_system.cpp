#include "qf/block_system.hpp"

#include <sstream>

namespace qf {

BlockSystem::BlockSystem(const ModelManifold& m, const MultiIndex& target)
    : model_(m),
      target_(target),
      p_(degree_of(target)),
      dim_(0),
      table_(m.n, degree_of(target) >= 2 ? degree_of(target) - 2 : 0) {
  if (static_cast<int>(target.size()) != m.n)
    throw ValidationError("target multi-index has wrong length");
  for (int x : target)
    if (x < 0) throw ValidationError("target multi-index must be nonnegative");
  if (p_ < 2) throw ValidationError("target degree must be at least 2");
  if (!m.is_diagonal())
    throw ValidationError("layered block assembly needs a diagonal model");
  layer_offset_.assign(p_ - 1, 0);
  for (int j = 1; j <= p_ - 2; ++j)
    layer_offset_[j] = layer_offset_[j - 1] + table_.layer_size(j - 1);
  dim_ = model_.n * table_.size();
  rows_.assign(dim_, {});
  rhs_.assign(dim_, 0);
  assemble();
}

int BlockSystem::position(int comp, int table_idx) const {
  int j = table_.layer_of(table_idx);
  return model_.n * layer_offset_[j] + comp * table_.layer_size(j) +
         table_.position_in_layer(table_idx);
}

std::pair<int, int> BlockSystem::unposition(int pos) const {
  // scan layers; sizes are tiny
  for (int j = 0; j <= p_ - 2; ++j) {
    int base = model_.n * layer_offset_[j];
    int span = model_.n * table_.layer_size(j);
    if (pos < base + span) {
      int local = pos - base;
      int comp = local / table_.layer_size(j);
      int in_layer = local % table_.layer_size(j);
      // recover the table index from (layer, in_layer)
      for (int i = 0; i < table_.size(); ++i)
        if (table_.layer_of(i) == j && table_.position_in_layer(i) == in_layer)
          return {comp, i};
    }
  }
  throw std::out_of_range("stacked position out of range");
}

int BlockSystem::layer_of_position(int pos) const {
  return table_.layer_of(unposition(pos).second);
}

void BlockSystem::emit(int eq, const ExpKey& out, int col,
                       const mpq_class& coeff) {
  if (sgn(coeff) == 0) return;
  for (int x : out)
    if (x < 0) return;  // shifted outside the monomial lattice
  int idx = table_.position(out);
  if (idx < 0) throw std::logic_error("emitted monomial outside the table");
  rows_[position(eq, idx)].emplace_back(col, coeff);
}

void BlockSystem::assemble() {
  int n = model_.n;
  std::vector<mpq_class> lam2(n);  // 1 + 4 lambda^2
  for (int k = 0; k < n; ++k)
    lam2[k] = 1 + 4 * model_.lambda[k] * model_.lambda[k];

  for (int l = 0; l < n; ++l) {
    for (int t = 0; t < table_.size(); ++t) {
      const ExpKey& e = table_.at(t);
      int col = position(l, t);
      auto shifted = [&](std::initializer_list<std::pair<int, int>> zs,
                         std::initializer_list<std::pair<int, int>> js) {
        ExpKey out = e;
        for (auto [v, d] : zs) out[v] += d;
        for (auto [v, d] : js) out[n + v] += d;
        return out;
      };
      // products tr_k(m q_l) for every equation k, plus the first-order and
      // identity terms that appear only on the diagonal l = k
      for (int k = 0; k < n; ++k) {
        int ik = e[k], jk = e[n + k];
        mpq_class lk = model_.lambda[k], ll = model_.lambda[l];
        if (ik >= 1 && jk >= 1) {
          // mixed second derivative against the three quadric monomials
          emit(k, shifted({{k, -1}, {l, +1}}, {{k, -1}, {l, +1}}), col,
               mpq_class(ik) * jk);
          emit(k, shifted({{k, -1}, {l, +2}}, {{k, -1}}), col,
               ll * ik * jk);
          emit(k, shifted({{k, -1}}, {{k, -1}, {l, +2}}), col,
               ll * ik * jk);
        }
        if (ik >= 2) {
          // holomorphic second derivative
          emit(k, shifted({{k, -2}, {l, +1}}, {{l, +1}}), col,
               lk * ik * (ik - 1));
          emit(k, shifted({{k, -2}, {l, +2}}, {}), col,
               lk * ll * ik * (ik - 1));
          emit(k, shifted({{k, -2}}, {{l, +2}}), col,
               lk * ll * ik * (ik - 1));
        }
        if (jk >= 2) {
          // antiholomorphic second derivative
          emit(k, shifted({{l, +1}}, {{k, -2}, {l, +1}}), col,
               lk * jk * (jk - 1));
          emit(k, shifted({{l, +2}}, {{k, -2}}), col,
               lk * ll * jk * (jk - 1));
          emit(k, shifted({}, {{k, -2}, {l, +2}}), col,
               lk * ll * jk * (jk - 1));
        }
      }
      // diagonal equation k = l: identity plus first-order shifts
      {
        int il = e[l], jl = e[n + l];
        mpq_class laml = model_.lambda[l];
        emit(l, e, col, mpq_class(il + jl + 1) * lam2[l]);
        if (il >= 1)
          emit(l, shifted({{l, -1}}, {{l, +1}}), col, 4 * laml * il);
        if (jl >= 1)
          emit(l, shifted({{l, +1}}, {{l, -1}}), col, 4 * laml * jl);
      }
    }
  }
  // canonical entry order within each row
  for (auto& row : rows_) {
    std::map<int, mpq_class> merged;
    for (auto& [c, v] : row) merged[c] += v;
    row.clear();
    for (auto& [c, v] : merged)
      if (sgn(v) != 0) row.emplace_back(c, v);
  }
  // right-hand side: trace vector of z^target
  for (int k = 0; k < n; ++k) {
    if (target_[k] < 2) continue;
    ExpKey out(2 * n, 0);
    for (int t = 0; t < n; ++t) out[t] = target_[t];
    out[k] -= 2;
    int idx = table_.position(out);
    if (idx < 0) throw std::logic_error("trace of target outside the table");
    rhs_[position(k, idx)] =
        model_.lambda[k] * target_[k] * (target_[k] - 1);
  }
}

std::vector<Scalar> BlockSystem::apply(const std::vector<Scalar>& x) const {
  if (static_cast<int>(x.size()) != dim_)
    throw std::invalid_argument("vector length mismatch");
  std::vector<Scalar> y(dim_);
  for (int r = 0; r < dim_; ++r)
    for (const auto& [c, v] : rows_[r]) y[r] += Scalar(v) * x[c];
  return y;
}

std::string BlockSystem::dump() const {
  std::ostringstream os;
  int n = model_.n;
  os << "block-system n=" << n << " p=" << p_ << " target=(";
  for (int t = 0; t < n; ++t) os << (t ? "," : "") << target_[t];
  os << ")\n";
  os << "unknown stack: " << n << " components x " << table_.size()
     << " degree-" << (p_ - 2) << " monomials = " << dim_ << "\n";
  os << "layers (conjugate degree 0.." << (p_ - 2) << "):\n";
  mpz_class naive = 1;
  for (int t = 0; t < p_ - 2; ++t) naive *= n;
  for (int j = 0; j <= p_ - 2; ++j) {
    os << "  |J|=" << j << " dim=" << table_.layer_size(j)
       << " (closed form "
       << IndexTable::layer_dim_formula(n, p_ - 2, j).get_str() << ")\n";
  }
  os << "note: the naive uniform count n^(p-2) = " << naive.get_str()
     << " per layer does not reproduce these dimensions; the actual sizes"
        " are the binomial products listed above and the matrices here are"
        " sized accordingly.\n";
  // banded block inventory over layer pairs
  int layers = p_ - 1;
  os << "blocks (row layer, column layer), band |r-c|<=2:\n";
  for (int r = 0; r < layers; ++r) {
    for (int c = 0; c < layers; ++c) {
      int count = 0;
      for (int pos = 0; pos < dim_; ++pos) {
        if (layer_of_position(pos) != r) continue;
        for (const auto& [cc, v] : rows_[pos])
          if (layer_of_position(cc) == c) ++count;
      }
      if (count > 0)
        os << "  M[" << r << "][" << c << "]: " << count << " entries\n";
      else if (r < c + 3 && c < r + 3)
        os << "  M[" << r << "][" << c << "]: 0\n";
    }
  }
  os << "entries (row component, row monomial) <- (col component, col"
        " monomial): value\n";
  auto label = [&](int pos) {
    auto [comp, idx] = unposition(pos);
    const ExpKey& e = table_.at(idx);
    std::ostringstream ss;
    ss << "k=" << comp + 1 << " (";
    for (int t = 0; t < n; ++t) ss << (t ? "," : "") << e[t];
    ss << ";";
    for (int t = 0; t < n; ++t) ss << (t ? "," : "") << e[n + t];
    ss << ")";
    return ss.str();
  };
  for (int r = 0; r < dim_; ++r)
    for (const auto& [c, v] : rows_[r])
      os << "  " << label(r) << " <- " << label(c) << ": " << v.get_str()
         << "\n";
  os << "rhs:\n";
  for (int r = 0; r < dim_; ++r)
    if (sgn(rhs_[r]) != 0)
      os << "  " << label(r) << ": " << rhs_[r].get_str() << "\n";
  return os.str();
}

BlockSystem assemble_block_system(const ModelManifold& m,
                                  const MultiIndex& target) {
  return BlockSystem(m, target);
}

}  // namespace qf
