#include "qf/aux_system.hpp"

#include <map>
#include <sstream>

namespace qf {

namespace {

using RowPos = std::map<ExpKey, int, OdinGreater>;

RowPos index_rows(const std::vector<ExpKey>& rows) {
  RowPos pos;
  for (size_t i = 0; i < rows.size(); ++i) pos.emplace(rows[i], int(i));
  return pos;
}

void scatter_column(const Poly& pol, const RowPos& pos, QMat& m, int col) {
  for (const auto& [e, c] : pol.terms()) {
    auto it = pos.find(e);
    if (it == pos.end())
      throw std::logic_error("correction column leaves its degree slice");
    if (c.im != 0)
      throw std::logic_error("correction column has a non-real coefficient");
    m.at(it->second, col) = c.re;
  }
}

Poly quadric_power(const ModelManifold& m, const MultiIndex& n_exp) {
  Poly out = Poly::constant(m.n, Scalar(1));
  for (int j = 0; j < m.n; ++j)
    for (int r = 0; r < n_exp[j]; ++r) out *= quadric(m, j);
  return out;
}

Poly pure_monomial(int n, const MultiIndex& alpha, bool conjugated) {
  MultiIndex zero(n, 0);
  ExpKey e = conjugated ? concat_exp(zero, alpha) : concat_exp(alpha, zero);
  return Poly::monomial(n, e, Scalar(1));
}

// Gauss-Jordan elimination of the columns of `elim` in order, carrying the
// same row operations through `top`. The pivot for a column is the first
// unconsumed row outside `keep_rows` (when given) holding a nonzero entry;
// the pivot row is then consumed. Columns with no eligible pivot are
// dependent on earlier ones and are skipped, except that a leftover nonzero
// entry on a kept row means the system cannot be reduced onto its top block.
struct ElimResult {
  std::vector<char> consumed;
  int eliminated = 0;
  int skipped = 0;  // dependent columns, each one a rank deficiency
};

ElimResult eliminate_columns(QMat& elim, QMat& top,
                             const std::vector<char>* keep_rows) {
  const int rows = elim.rows();
  ElimResult res;
  res.consumed.assign(rows, 0);
  for (int c = 0; c < elim.cols(); ++c) {
    int pivot = -1;
    for (int r = 0; r < rows; ++r) {
      if (res.consumed[r]) continue;
      if (keep_rows && (*keep_rows)[r]) continue;
      if (elim.at(r, c) != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) {
      if (keep_rows) {
        for (int r = 0; r < rows; ++r)
          if ((*keep_rows)[r] && elim.at(r, c) != 0)
            throw ValidationError(
                "correction system does not reduce onto its top block");
      }
      ++res.skipped;
      continue;
    }
    res.consumed[pivot] = 1;
    ++res.eliminated;
    const mpq_class pv = elim.at(pivot, c);
    for (int r = 0; r < rows; ++r) {
      if (r == pivot || elim.at(r, c) == 0) continue;
      const mpq_class f = elim.at(r, c) / pv;
      for (int cc = c; cc < elim.cols(); ++cc)
        if (elim.at(pivot, cc) != 0)
          elim.at(r, cc) -= f * elim.at(pivot, cc);
      for (int cc = 0; cc < top.cols(); ++cc)
        if (top.at(pivot, cc) != 0) top.at(r, cc) -= f * top.at(pivot, cc);
    }
  }
  return res;
}

QMat blockdiag(const std::vector<QMat>& blocks) {
  int dim = 0;
  for (const auto& b : blocks) dim += b.rows();
  QMat out(dim, dim);
  int off = 0;
  for (const auto& b : blocks) {
    for (int i = 0; i < b.rows(); ++i)
      for (int j = 0; j < b.cols(); ++j) out.at(off + i, off + j) = b.at(i, j);
    off += b.rows();
  }
  return out;
}

QMat q_inverse(const QMat& a) {
  QSolveResult s = q_solve(a, QMat::identity(a.rows()));
  if (s.rank != a.rows()) throw ValidationError("singular factor product");
  return s.particular;
}

// One equation of the degree-p system, split as [dg | df lower] to
// eliminate and [df top] to keep, with the row operations applied.
struct ReducedEquation {
  DegreeColumns cols;
  QMat top;              // updated top block over all rows
  std::vector<char> consumed;
  int eliminated = 0;
  int skipped = 0;
};

ReducedEquation reduce_equation(const ModelManifold& m, int l, int p,
                                bool plus_sign,
                                const std::vector<char>* keep_rows) {
  ReducedEquation red;
  red.cols = degree_columns(m, m.lambda[l], l, p, true);
  const DegreeColumns& dc = red.cols;
  const QMat& df = plus_sign ? dc.df_plus : dc.df_minus;
  const int rows = int(dc.rows.size());
  const int top_cols = df.cols() - dc.df_lower;
  QMat elim(rows, dc.dg.cols() + dc.df_lower);
  red.top = QMat(rows, top_cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < dc.dg.cols(); ++c) elim.at(r, c) = dc.dg.at(r, c);
    for (int c = 0; c < dc.df_lower; ++c)
      elim.at(r, dc.dg.cols() + c) = df.at(r, c);
    for (int c = 0; c < top_cols; ++c)
      red.top.at(r, c) = df.at(r, dc.df_lower + c);
  }
  ElimResult er = eliminate_columns(elim, red.top, keep_rows);
  red.consumed = std::move(er.consumed);
  red.eliminated = er.eliminated;
  red.skipped = er.skipped;
  return red;
}

QMat aux_factor_block(const ModelManifold& m, int space_deg, int label_deg) {
  const auto basis = exponents_of_degree(m.n, space_deg);
  std::map<MultiIndex, int> pos;
  for (size_t i = 0; i < basis.size(); ++i) pos.emplace(basis[i], int(i));
  const int dim = int(basis.size());
  QMat prod = QMat::identity(dim);
  for (const MultiIndex& k : exponents_of_degree(m.n, label_deg)) {
    QMat f = QMat::identity(dim);
    MultiIndex lead = k;
    lead[0] += 2;
    const int row = pos.at(lead);
    f.at(row, row) = m.lambda[0];
    for (int j = 1; j < m.n; ++j) {
      MultiIndex kj = k;
      kj[j] += 2;
      f.at(row, pos.at(kj)) = m.lambda[j];
    }
    prod = prod * f;
  }
  return prod;
}

std::string q_str(const mpq_class& v) { return v.get_str(); }

}  // namespace

DegreeColumns degree_columns(const ModelManifold& source,
                             const mpq_class& target_weight,
                             int border_component, int p, bool with_border) {
  if (!source.is_diagonal())
    throw ValidationError("correction columns require a diagonal model");
  if (p < 2) throw ValidationError("correction degree must be at least 2");
  if (with_border && (border_component < 0 || border_component >= source.n))
    throw ValidationError("border component out of range");

  DegreeColumns dc;
  dc.n = source.n;
  dc.p = p;
  dc.rows = monomials_of_degree(source.n, p);
  const RowPos pos = index_rows(dc.rows);
  const int rows = int(dc.rows.size());

  for (int s = 0; 2 * s <= p; ++s)
    for (const MultiIndex& nn : exponents_of_degree(source.n, s))
      for (const MultiIndex& alpha : exponents_of_degree(source.n, p - 2 * s))
        dc.dg_labels.emplace_back(nn, alpha);
  dc.dg_top = int(binomial(p + source.n - 1, source.n - 1).get_si());
  dc.dg = QMat(rows, int(dc.dg_labels.size()));
  {
    int col = 0;
    for (const auto& [nn, alpha] : dc.dg_labels) {
      Poly c = pure_monomial(source.n, alpha, false) *
               quadric_power(source, nn);
      scatter_column(c, pos, dc.dg, col++);
    }
  }

  if (!with_border) return dc;

  std::vector<std::pair<MultiIndex, MultiIndex>> lower, top;
  for (int s = 0; 2 * s <= p - 1; ++s)
    for (const MultiIndex& nn : exponents_of_degree(source.n, s))
      for (const MultiIndex& beta :
           exponents_of_degree(source.n, p - 1 - 2 * s))
        (s >= 1 ? lower : top).emplace_back(nn, beta);
  dc.df_lower = int(lower.size());
  dc.df_labels = std::move(lower);
  dc.df_labels.insert(dc.df_labels.end(), top.begin(), top.end());

  const int l = border_component;
  const Scalar w2(2 * target_weight);
  const Poly border1 =
      Poly::zbar(source.n, l) + w2 * Poly::zvar(source.n, l);
  const Poly border2 =
      Poly::zvar(source.n, l) + w2 * Poly::zbar(source.n, l);
  dc.df_plus = QMat(rows, int(dc.df_labels.size()));
  dc.df_minus = QMat(rows, int(dc.df_labels.size()));
  int col = 0;
  for (const auto& [nn, beta] : dc.df_labels) {
    const Poly qn = quadric_power(source, nn);
    const Poly v1 = -(border1 * pure_monomial(source.n, beta, false) * qn);
    const Poly v2 = -(border2 * pure_monomial(source.n, beta, true) * qn);
    scatter_column(v1 + v2, pos, dc.df_plus, col);
    scatter_column(v1 - v2, pos, dc.df_minus, col);
    ++col;
  }
  return dc;
}

QMat aux_product(const ModelManifold& m, int p, AuxFlavor flavor) {
  if (m.lambda.empty() || m.lambda[0] == 0)
    throw ValidationError("factor product needs a nonzero first weight");
  if (flavor == AuxFlavor::plain) {
    if (p < 2) throw ValidationError("plain factor product needs degree >= 2");
    return aux_factor_block(m, p, p - 2);
  }
  if (p < 3) throw ValidationError("tilded factor product needs degree >= 3");
  const QMat block = aux_factor_block(m, p - 1, p - 3);
  return blockdiag(std::vector<QMat>(size_t(m.n), block));
}

AuxSystem assemble_aux_system(const ModelManifold& m, int p,
                              AuxFlavor flavor) {
  if (!m.is_diagonal())
    throw ValidationError("reduced correction system requires a diagonal model");
  AuxSystem sys;
  sys.flavor = flavor;
  sys.n = m.n;
  sys.p = p;
  sys.aux = aux_product(m, p, flavor);

  if (flavor == AuxFlavor::plain) {
    DegreeColumns dc = degree_columns(m, 0, 0, p, false);
    const int rows = int(dc.rows.size());
    const RowPos pos = index_rows(dc.rows);
    // designated rows: the pure-z monomials, paired with the n = 0 columns
    const auto pures = exponents_of_degree(m.n, p);
    sys.dim = int(pures.size());
    std::vector<char> keep(rows, 0);
    std::vector<int> keep_row(pures.size());
    const MultiIndex zero(m.n, 0);
    for (size_t t = 0; t < pures.size(); ++t) {
      keep_row[t] = pos.at(concat_exp(pures[t], zero));
      keep[keep_row[t]] = 1;
    }
    QMat elim(rows, dc.dg.cols() - dc.dg_top);
    QMat top(rows, dc.dg_top);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < dc.dg_top; ++c) top.at(r, c) = dc.dg.at(r, c);
      for (int c = dc.dg_top; c < dc.dg.cols(); ++c)
        elim.at(r, c - dc.dg_top) = dc.dg.at(r, c);
    }
    eliminate_columns(elim, top, &keep);
    QMat g(sys.dim, sys.dim);
    for (int t = 0; t < sys.dim; ++t)
      for (int u = 0; u < sys.dim; ++u) g.at(t, u) = top.at(keep_row[t], u);
    sys.g_plus = g;
    sys.g_minus = g;
    sys.b_mat = QMat(sys.dim, sys.dim);
    sys.a_mat = q_inverse(sys.aux) * (QMat::identity(sys.dim) - g);
    sys.rhs.assign(size_t(sys.dim), mpq_class(0));
    return sys;
  }

  const auto betas = exponents_of_degree(m.n, p - 1);
  const int block_dim = int(betas.size());
  sys.dim = m.n * block_dim;
  std::vector<QMat> plus_blocks, minus_blocks;
  for (int l = 0; l < m.n; ++l) {
    // designated rows: z^beta conj(z_l), paired with the top df columns
    const std::vector<ExpKey> all_rows = monomials_of_degree(m.n, p);
    const RowPos pos = index_rows(all_rows);
    std::vector<char> keep(all_rows.size(), 0);
    std::vector<int> keep_row(betas.size());
    MultiIndex el(m.n, 0);
    el[l] = 1;
    for (size_t t = 0; t < betas.size(); ++t) {
      keep_row[t] = pos.at(concat_exp(betas[t], el));
      keep[keep_row[t]] = 1;
    }
    for (bool plus : {true, false}) {
      ReducedEquation red = reduce_equation(m, l, p, plus, &keep);
      QMat g(block_dim, block_dim);
      for (int t = 0; t < block_dim; ++t)
        for (int u = 0; u < block_dim; ++u)
          g.at(t, u) = red.top.at(keep_row[t], u);
      (plus ? plus_blocks : minus_blocks).push_back(std::move(g));
    }
  }
  sys.g_plus = blockdiag(plus_blocks);
  sys.g_minus = blockdiag(minus_blocks);
  const mpq_class half(1, 2);
  QMat w(sys.dim, sys.dim);
  sys.b_mat = QMat(sys.dim, sys.dim);
  for (int i = 0; i < sys.dim; ++i)
    for (int j = 0; j < sys.dim; ++j) {
      w.at(i, j) = (sys.g_plus.at(i, j) + sys.g_minus.at(i, j)) * half;
      sys.b_mat.at(i, j) = (sys.g_plus.at(i, j) - sys.g_minus.at(i, j)) * half;
    }
  sys.a_mat = q_inverse(sys.aux) * (QMat::identity(sys.dim) - w);
  sys.rhs.assign(size_t(sys.dim), mpq_class(0));
  return sys;
}

std::vector<Scalar> solve_conjugate_coupled(const AuxSystem& sys,
                                            const std::vector<Scalar>& v) {
  if (int(v.size()) != sys.dim)
    throw ValidationError("right-hand side length mismatch");
  QMat vr(sys.dim, 1), vi(sys.dim, 1);
  for (int i = 0; i < sys.dim; ++i) {
    vr.at(i, 0) = v[i].re;
    vi.at(i, 0) = v[i].im;
  }
  auto solve_half = [&](const QMat& g, const QMat& rhs, bool plus_half) {
    QSolveResult s = q_solve(g, rhs);
    if (s.rank < sys.dim || !s.consistent) {
      std::vector<Scalar> witness(size_t(sys.dim));
      if (s.kernel.cols() > 0)
        for (int i = 0; i < sys.dim; ++i)
          witness[i] = plus_half ? Scalar(s.kernel.at(i, 0))
                                 : Scalar(mpq_class(0), s.kernel.at(i, 0));
      throw SingularSystemError(
          plus_half ? "singular real half of the coupled system"
                    : "singular imaginary half of the coupled system",
          std::move(witness));
    }
    return s.particular;
  };
  const QMat x = solve_half(sys.g_plus, vr, true);
  const QMat y = solve_half(sys.g_minus, vi, false);
  std::vector<Scalar> z(size_t(sys.dim));
  for (int i = 0; i < sys.dim; ++i) {
    z[i].re = x.at(i, 0);
    z[i].im = y.at(i, 0);
  }
  return z;
}

InvertibilityReport verify_invertibility(const ModelManifold& m, int p) {
  if (p < 3) throw ValidationError("invertibility audit needs degree >= 3");
  InvertibilityReport rep;
  rep.n = m.n;
  rep.p = p;
  const int per_eq = int(binomial(p - 1 + m.n - 1, m.n - 1).get_si());
  rep.dim = m.n * per_eq;
  rep.det_plus = 1;
  rep.det_minus = 1;

  std::ostringstream os;
  os << "invertibility audit: degree " << p << " correction operators\n";
  os << "model: n = " << m.n << ", lambda = ";
  for (int l = 0; l < m.n; ++l)
    os << (l ? ", " : "") << q_str(m.lambda[l]);
  os << "\n";
  os << "top-block unknowns per conjugation half: " << rep.dim << " ("
     << m.n << " equation(s) x " << per_eq << ")\n";

  for (int l = 0; l < m.n; ++l) {
    mpq_class det[2];
    for (bool plus : {true, false}) {
      ReducedEquation red = reduce_equation(m, l, p, plus, nullptr);
      int survivors = 0;
      for (char c : red.consumed)
        if (!c) ++survivors;
      QMat r(survivors, red.top.cols());
      int rr = 0;
      for (size_t i = 0; i < red.consumed.size(); ++i) {
        if (red.consumed[i]) continue;
        for (int c = 0; c < red.top.cols(); ++c)
          r.at(rr, c) = red.top.at(int(i), c);
        ++rr;
      }
      // The plus half of the label (n, e_l) is 2 q_l q^n, a column the
      // w-side family already contains, so exactly that many dependent
      // columns are expected there. Any skip beyond those is a genuine rank
      // deficiency and zeroes the determinant.
      int overlap = 0;
      if (plus)
        for (int j = 0; j < red.cols.df_lower; ++j) {
          const MultiIndex& beta = red.cols.df_labels[j].second;
          if (degree_of(beta) == 1 && beta[l] == 1) ++overlap;
        }
      const mpq_class d =
          red.skipped != overlap ? mpq_class(0) : q_det(r.transpose() * r);
      det[plus ? 0 : 1] = d;
      rep.surviving_rows.push_back(survivors);
      if (plus)
        os << "equation " << (l + 1) << ": eliminated " << red.eliminated
           << " columns; ";
      os << (plus ? "survivors+ " : "survivors- ") << survivors
         << (plus ? "; " : "\n");
      if (plus && overlap > 0 && red.skipped == overlap)
        os << "equation " << (l + 1) << ": " << overlap
           << " overlap column(s) shared with the w-side family (expected)\n";
      if (red.skipped != overlap)
        os << "equation " << (l + 1) << ": "
           << (red.skipped - overlap)
           << " unexplained dependent column(s) in the "
           << (plus ? "plus" : "minus") << " half\n";
    }
    rep.det_plus *= det[0];
    rep.det_minus *= det[1];
    os << "equation " << (l + 1) << ": det+ = " << q_str(det[0])
       << ", det- = " << q_str(det[1]) << "\n";
  }
  rep.nonzero_plus = rep.det_plus != 0;
  rep.nonzero_minus = rep.det_minus != 0;
  os << "total det+ = " << q_str(rep.det_plus)
     << (rep.nonzero_plus ? " (nonzero)" : " (ZERO)") << "\n";
  os << "total det- = " << q_str(rep.det_minus)
     << (rep.nonzero_minus ? " (nonzero)" : " (ZERO)") << "\n";
  if (rep.nonzero_plus && rep.nonzero_minus)
    os << "verdict: degree-" << p
       << " correction system is uniquely solvable\n";
  else
    os << "verdict: degenerate correction system (vanishing determinant)\n";

  os << "monomial layers at degree " << p << " (k = conjugate degree):\n";
  mpz_class total = 0;
  for (int k = 0; k <= p; ++k) {
    const mpz_class dim = binomial(p - k + m.n - 1, m.n - 1) *
                          binomial(k + m.n - 1, m.n - 1);
    total += dim;
    os << "  k = " << k << ": dim " << dim.get_str() << "\n";
  }
  mpz_class naive;
  mpz_ui_pow_ui(naive.get_mpz_t(), unsigned(m.n), unsigned(p));
  os << "  total " << total.get_str()
     << "; closed form C(p-k+n-1,n-1)*C(k+n-1,n-1) per layer\n";
  os << "  naive uniform count n^p = " << naive.get_str()
     << " per layer does not reproduce these dimensions\n";
  rep.text = os.str();
  return rep;
}

}  // namespace qf
