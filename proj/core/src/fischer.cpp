#include "qf/fischer.hpp"

#include <map>

#include "qf/poly_io.hpp"
#include "qf/report.hpp"

namespace qf {

Scalar fischer_inner(const Poly& f, const Poly& g) {
  if (f.n_vars() != g.n_vars())
    throw std::invalid_argument("polynomial variable count mismatch");
  Scalar s;
  int n = f.n_vars();
  for (const auto& [e, cf] : f.terms()) {
    Scalar cg = g.coeff(e);
    if (cg.is_zero()) continue;
    mpz_class w = 1;
    for (int k = 0; k < 2 * n; ++k) w *= factorial(e[k]);
    s += cf * cg.conj() * Scalar(mpq_class(w));
  }
  return s;
}

namespace {

mpq_class monomial_weight(const ExpKey& e) {
  mpz_class w = 1;
  for (int x : e) w *= factorial(x);
  return mpq_class(w);
}

std::vector<int> parity_vector(const ExpKey& e, int n) {
  std::vector<int> p(n);
  for (int t = 0; t < n; ++t) p[t] = (e[t] + e[n + t]) & 1;
  return p;
}

// Sector split: for diagonal models every operator in play (multiplication
// by q_l, any trace) preserves the per-variable parity vector, so solvers
// run block-diagonally. Non-diagonal models use a single sector.
std::vector<std::vector<ExpKey>> split_sectors(const std::vector<ExpKey>& monos,
                                               const ModelManifold& m) {
  if (!m.is_diagonal()) return {monos};
  std::map<std::vector<int>, std::vector<ExpKey>> by_parity;
  for (const auto& e : monos) by_parity[parity_vector(e, m.n)].push_back(e);
  std::vector<std::vector<ExpKey>> out;
  for (auto& [p, v] : by_parity) out.push_back(std::move(v));
  return out;
}

std::string decomposition_hash(const Poly& p, const ModelManifold& m, int l) {
  std::string s = to_string(p) + "|n=" + std::to_string(m.n);
  for (const auto& q : m.lambda) s += "|" + q.get_str();
  for (int v : m.sigma) s += "|s" + std::to_string(v);
  for (int v : m.tau) s += "|t" + std::to_string(v);
  s += "|l=" + std::to_string(l);
  return hash_hex(s);
}

// coefficient column of poly over the listed monomials; entries not in the
// list must be absent from the poly (checked)
void scatter_columns(const Poly& poly, const std::map<ExpKey, int, OdinGreater>& pos,
                     QMat& re_col, QMat& im_col, int col) {
  for (const auto& [e, c] : poly.terms()) {
    auto it = pos.find(e);
    if (it == pos.end())
      throw std::logic_error("coefficient outside the expected span");
    re_col.at(it->second, col) = c.re;
    im_col.at(it->second, col) = c.im;
  }
}

}  // namespace

SingleDecomposition fischer_decompose_single(const Poly& p,
                                             const ModelManifold& m, int l) {
  if (l < 0 || l >= m.n) throw ValidationError("quadric index out of range");
  if (p.n_vars() != m.n)
    throw std::invalid_argument("polynomial variable count mismatch");
  if (!p.is_homogeneous())
    throw ValidationError("decomposition input must be homogeneous");
  SingleDecomposition out;
  out.cert.input_hash = decomposition_hash(p, m, l);
  int deg = p.degree();
  if (p.is_zero() || deg < 2) {
    out.quotient = Poly(m.n);
    out.remainder = p;
    return out;
  }
  Poly ql = quadric(m, l);
  auto monos = monomials_of_degree(m.n, deg - 2);
  out.cert.dimension = static_cast<int>(monos.size());
  Poly a(m.n);
  for (const auto& sector : split_sectors(monos, m)) {
    std::map<ExpKey, int, OdinGreater> pos;
    for (const auto& e : sector) pos.emplace(e, static_cast<int>(pos.size()));
    int s = static_cast<int>(sector.size());
    // normal operator B -> tr_l(B q_l) on this sector
    QMat t(s, s);
    {
      QMat t_im(s, s);  // stays zero: the operator is real
      for (int j = 0; j < s; ++j) {
        Poly img = trace_op(m, l, Poly::monomial(m.n, sector[j], 1) * ql);
        scatter_columns(img, pos, t, t_im, j);
      }
    }
    QMat rhs(s, 2);
    {
      Poly trp = trace_op(m, l, p);
      for (const auto& [e, c] : trp.terms()) {
        auto it = pos.find(e);
        if (it == pos.end()) continue;  // lives in another sector
        rhs.at(it->second, 0) = c.re;
        rhs.at(it->second, 1) = c.im;
      }
    }
    QSolveResult sol = q_solve(t, rhs);
    out.cert.rank += sol.rank;
    if (!sol.consistent || sol.rank < s) {
      // cannot happen for exact data: the operator is a positive definite
      // Gram; surface a witness instead of guessing
      Poly witness(m.n);
      if (sol.kernel.cols() > 0)
        for (int j = 0; j < s; ++j)
          witness.add_term(sector[j], Scalar(sol.kernel.at(j, 0)));
      throw DecompositionFailure("singular normal operator", witness);
    }
    for (int j = 0; j < s; ++j)
      a.add_term(sector[j], Scalar(sol.particular.at(j, 0),
                                   sol.particular.at(j, 1)));
  }
  out.quotient = a;
  out.remainder = p - a * ql;
  if (!trace_op(m, l, out.remainder).is_zero())
    throw std::logic_error("remainder escaped the trace kernel");
  return out;
}

JointDecomposition fischer_decompose_joint(const Poly& p,
                                           const ModelManifold& m) {
  if (p.n_vars() != m.n)
    throw std::invalid_argument("polynomial variable count mismatch");
  if (!p.is_homogeneous())
    throw ValidationError("decomposition input must be homogeneous");
  JointDecomposition out;
  out.cert.input_hash = decomposition_hash(p, m, -1);
  out.coeffs.assign(m.n, Poly(m.n));
  int deg = p.degree();
  if (p.is_zero() || deg < 2) {
    out.remainder = p;
    return out;
  }
  int n = m.n;
  std::vector<Poly> quads(n);
  for (int l = 0; l < n; ++l) quads[l] = quadric(m, l);
  auto monos = monomials_of_degree(n, deg - 2);
  out.cert.dimension = n * static_cast<int>(monos.size());

  for (const auto& sector : split_sectors(monos, m)) {
    int s = static_cast<int>(sector.size());
    std::map<ExpKey, int, OdinGreater> pos;
    for (const auto& e : sector) pos.emplace(e, static_cast<int>(pos.size()));
    int dim = n * s;
    // stacked operator: column (l, j) holds tr_k(mono_j q_l) for every
    // equation k; rows are (k, i)
    QMat tq(dim, dim);
    for (int l = 0; l < n; ++l)
      for (int j = 0; j < s; ++j) {
        Poly col_poly = Poly::monomial(n, sector[j], 1) * quads[l];
        for (int k = 0; k < n; ++k) {
          Poly img = trace_op(m, k, col_poly);
          for (const auto& [e, c] : img.terms()) {
            auto it = pos.find(e);
            if (it == pos.end())
              throw std::logic_error("trace image escaped the sector");
            tq.at(k * s + it->second, l * s + j) += c.re;  // real operator
          }
        }
      }
    QMat rhs(dim, 2);
    for (int k = 0; k < n; ++k) {
      Poly trp = trace_op(m, k, p);
      for (const auto& [e, c] : trp.terms()) {
        auto it = pos.find(e);
        if (it == pos.end()) continue;
        rhs.at(k * s + it->second, 0) = c.re;
        rhs.at(k * s + it->second, 1) = c.im;
      }
    }
    QSolveResult sol = q_solve(tq, rhs);
    if (!sol.consistent) {
      throw DecompositionFailure("inconsistent joint trace system", p);
    }
    out.cert.rank += sol.rank;
    int kappa = sol.kernel.cols();
    out.cert.nullity += kappa;
    QMat a = sol.particular;  // dim x 2
    if (kappa > 0) {
      // canonical representative: project the particular solution off the
      // syzygy kernel in the factorial-weighted inner product
      std::vector<mpq_class> w(dim);
      for (int l = 0; l < n; ++l)
        for (int j = 0; j < s; ++j)
          w[l * s + j] = monomial_weight(sector[j]);
      QMat ktdk(kappa, kappa), ktda(kappa, 2);
      for (int r = 0; r < kappa; ++r) {
        for (int c = 0; c < kappa; ++c) {
          mpq_class v(0);
          for (int i = 0; i < dim; ++i)
            v += sol.kernel.at(i, r) * w[i] * sol.kernel.at(i, c);
          ktdk.at(r, c) = v;
        }
        for (int c = 0; c < 2; ++c) {
          mpq_class v(0);
          for (int i = 0; i < dim; ++i)
            v += sol.kernel.at(i, r) * w[i] * a.at(i, c);
          ktda.at(r, c) = v;
        }
      }
      QSolveResult corr = q_solve(ktdk, ktda);
      if (!corr.consistent || corr.rank < kappa)
        throw std::logic_error("kernel Gram is not positive definite");
      for (int i = 0; i < dim; ++i)
        for (int c = 0; c < 2; ++c) {
          mpq_class v = a.at(i, c);
          for (int r = 0; r < kappa; ++r)
            v -= sol.kernel.at(i, r) * corr.particular.at(r, c);
          a.at(i, c) = v;
        }
    }
    for (int l = 0; l < n; ++l)
      for (int j = 0; j < s; ++j)
        out.coeffs[l].add_term(sector[j],
                               Scalar(a.at(l * s + j, 0), a.at(l * s + j, 1)));
  }

  out.remainder = p;
  for (int l = 0; l < n; ++l) out.remainder -= out.coeffs[l] * quads[l];
  for (int k = 0; k < n; ++k)
    if (!trace_op(m, k, out.remainder).is_zero())
      throw std::logic_error("joint remainder escaped a trace kernel");
  return out;
}

namespace {

std::vector<Poly> kernel_basis_for(const ModelManifold& m,
                                   const std::vector<ExpKey>& monos) {
  int n = m.n;
  if (monos.empty()) return {};
  int deg = 0;
  for (int x : monos[0]) deg += x;
  if (deg < 2) {
    // every trace annihilates degrees below 2
    std::vector<Poly> out;
    for (const auto& e : monos) out.push_back(Poly::monomial(n, e, 1));
    return out;
  }
  // stack the trace matrices of all equations; rows keyed by (monomial, k)
  std::vector<Poly> images(n * monos.size());
  std::map<ExpKey, int, OdinGreater> rowpos;
  for (size_t j = 0; j < monos.size(); ++j) {
    Poly mono = Poly::monomial(n, monos[j], 1);
    for (int k = 0; k < n; ++k) {
      Poly img = trace_op(m, k, mono);
      for (const auto& [e, c] : img.terms()) {
        ExpKey key = e;
        key.push_back(k);
        rowpos.emplace(key, 0);
      }
      images[j * n + k] = std::move(img);
    }
  }
  int r = 0;
  for (auto& [key, idx] : rowpos) idx = r++;
  QMat t(r, static_cast<int>(monos.size()));
  for (size_t j = 0; j < monos.size(); ++j)
    for (int k = 0; k < n; ++k)
      for (const auto& [e, c] : images[j * n + k].terms()) {
        ExpKey key = e;
        key.push_back(k);
        t.at(rowpos.at(key), static_cast<int>(j)) = c.re;
      }
  QSolveResult sol = q_solve(t, QMat(t.rows(), 0));
  std::vector<Poly> out;
  for (int c = 0; c < sol.kernel.cols(); ++c) {
    Poly b(n);
    for (size_t j = 0; j < monos.size(); ++j)
      b.add_term(monos[j], Scalar(sol.kernel.at(static_cast<int>(j), c)));
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace

std::vector<Poly> kernel_basis(const ModelManifold& m, int degree) {
  if (degree < 0) throw ValidationError("kernel degree must be nonnegative");
  return kernel_basis_for(m, monomials_of_degree(m.n, degree));
}

std::vector<Poly> kernel_basis_bidegree(const ModelManifold& m, int zdeg,
                                        int zbardeg) {
  if (zdeg < 0 || zbardeg < 0)
    throw ValidationError("kernel bidegree must be nonnegative");
  return kernel_basis_for(m, monomials_of_bidegree(m.n, zdeg, zbardeg));
}

namespace {

// least-squares projection of target onto the span of the family in the
// Fischer inner product; returns coefficients (free directions zeroed)
std::vector<Scalar> gram_project(const std::vector<Poly>& family,
                                 const Poly& target, Poly& projection) {
  int b = static_cast<int>(family.size());
  projection = Poly(target.n_vars());
  if (b == 0) return {};
  CMat gram(b, b), rhs(b, 1);
  for (int r = 0; r < b; ++r) {
    for (int c = 0; c < b; ++c) gram.at(r, c) = fischer_inner(family[c], family[r]);
    rhs.at(r, 0) = fischer_inner(target, family[r]);
  }
  CSolveResult sol = c_solve(gram, rhs);
  if (!sol.consistent)
    throw std::logic_error("Gram projection system inconsistent");
  std::vector<Scalar> combo(b);
  for (int c = 0; c < b; ++c) {
    combo[c] = sol.particular.at(c, 0);
    projection += combo[c] * family[c];
  }
  // exactness: the residual must be orthogonal to the whole family
  Poly residual = target - projection;
  for (int c = 0; c < b; ++c)
    if (!fischer_inner(residual, family[c]).is_zero())
      throw std::logic_error("projection residual not orthogonal");
  return combo;
}

std::vector<ChainBasisElement> chain_basis(const ModelManifold& m, int l,
                                           ChainFlavor flavor, int deg) {
  std::vector<ChainBasisElement> basis;
  int n = m.n;
  auto push_pair = [&](int border, const MultiIndex& idx, const Poly& seed) {
    ChainBasisElement e;
    e.border = border;
    e.idx = idx;
    e.conjugated = false;
    e.value = fischer_decompose_single(seed, m, l).remainder;
    basis.push_back(e);
  };
  if (flavor == ChainFlavor::g_type) {
    for (const auto& idx : exponents_of_degree(n, deg)) {
      ExpKey e(2 * n, 0);
      for (int t = 0; t < n; ++t) e[t] = idx[t];
      push_pair(-1, idx, Poly::monomial(n, e, 1));
    }
  } else {
    for (int b = 0; b < n; ++b) {
      Poly borderline = Poly::zbar(n, b) +
                        Scalar(mpq_class(2) * m.lambda[b]) * Poly::zvar(n, b);
      for (const auto& idx : exponents_of_degree(n, deg - 1)) {
        ExpKey e(2 * n, 0);
        for (int t = 0; t < n; ++t) e[t] = idx[t];
        push_pair(b, idx, borderline * Poly::monomial(n, e, 1));
      }
    }
  }
  // conjugate partners, same label order
  size_t plain = basis.size();
  for (size_t k = 0; k < plain; ++k) {
    ChainBasisElement e = basis[k];
    e.conjugated = true;
    e.value = e.value.conjugate();
    basis.push_back(std::move(e));
  }
  return basis;
}

}  // namespace

DecompChain nested_chain(const Poly& p, const ModelManifold& m, int l,
                         ChainFlavor flavor, bool strict_real) {
  if (l < 0 || l >= m.n) throw ValidationError("quadric index out of range");
  if (p.n_vars() != m.n)
    throw std::invalid_argument("polynomial variable count mismatch");
  if (!p.is_homogeneous())
    throw ValidationError("chain input must be homogeneous");
  if (strict_real && !p.is_real_valued())
    throw ValidationError("chain input must be real-valued");
  DecompChain chain;
  chain.flavor = flavor;
  chain.l = l;
  chain.input = p;
  chain.cert.input_hash = decomposition_hash(p, m, l);
  int deg = p.is_zero() ? 0 : p.degree();
  int rungs = (flavor == ChainFlavor::g_type) ? deg / 2 : (deg - 1) / 2;
  if (rungs < 0) rungs = 0;
  Poly cur = p;
  for (int k = 0; k < rungs; ++k) {
    SingleDecomposition dec = fischer_decompose_single(cur, m, l);
    ChainRung rung;
    rung.p_part = dec.quotient;
    rung.remainder = dec.remainder;
    rung.basis = chain_basis(m, l, flavor, deg - 2 * k);
    std::vector<Poly> family;
    for (const auto& e : rung.basis) family.push_back(e.value);
    Poly projection;
    rung.combo = gram_project(family, rung.remainder, projection);
    rung.residual = rung.remainder - projection;
    chain.cert.dimension += static_cast<int>(rung.basis.size());
    chain.ladder.push_back(std::move(rung));
    cur = dec.quotient;
  }
  return chain;
}

MembershipResult project_normalization_space(
    const Poly& p, const ModelManifold& m, int l, ChainFlavor flavor,
    const std::vector<MultiIndex>& excluded) {
  MembershipResult res;
  res.chain = nested_chain(p, m, l, flavor);
  res.defect = Poly(p.n_vars());
  for (const auto& rung : res.chain.ladder) {
    std::vector<Poly> family;
    for (const auto& e : rung.basis) {
      bool skip = false;
      for (const auto& ex : excluded)
        if (e.idx == ex) {
          skip = true;
          break;
        }
      if (!skip) family.push_back(e.value);
    }
    Poly projection;
    gram_project(family, rung.remainder, projection);
    res.defect += projection;
  }
  res.is_member = res.defect.is_zero();
  return res;
}

std::pair<Poly, Poly> split_real_imag(const Poly& phi) {
  Scalar half(mpq_class(1, 2));
  Poly conj = phi.conjugate();
  Poly re = half * (phi + conj);
  Poly im = (Scalar(mpq_class(0), mpq_class(-1, 2))) * (phi - conj);
  return {re, im};
}

}  // namespace qf
