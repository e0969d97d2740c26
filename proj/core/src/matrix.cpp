#include "qf/matrix.hpp"

namespace qf {

namespace {

// dense integer working copy after clearing row denominators
struct ZWork {
  int rows, cols;  // cols spans A and B side by side
  std::vector<std::vector<mpz_class>> m;
  std::vector<mpz_class> row_scale;

  ZWork(const QMat& a, const QMat& b) {
    rows = a.rows();
    int ca = a.cols(), cb = b.cols();
    cols = ca + cb;
    m.assign(rows, std::vector<mpz_class>(cols));
    row_scale.assign(rows, 1);
    for (int i = 0; i < rows; ++i) {
      mpz_class l = 1;
      for (int j = 0; j < ca; ++j)
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a.at(i, j).get_den_mpz_t());
      for (int j = 0; j < cb; ++j)
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), b.at(i, j).get_den_mpz_t());
      row_scale[i] = l;
      for (int j = 0; j < ca; ++j)
        m[i][j] = mpq_class(a.at(i, j) * l).get_num();
      for (int j = 0; j < cb; ++j)
        m[i][ca + j] = mpq_class(b.at(i, j) * l).get_num();
    }
  }
};

// One-step Bareiss echelon over the A-columns only. Returns pivots as
// (row, col) pairs in elimination order; sign accumulates row swaps.
void bareiss_echelon(ZWork& w, int a_cols,
                     std::vector<std::pair<int, int>>& pivots, int& sign) {
  sign = 1;
  mpz_class prev = 1, t1, t2;
  int r = 0;
  for (int c = 0; c < a_cols && r < w.rows; ++c) {
    int pr = -1;
    for (int i = r; i < w.rows; ++i)
      if (sgn(w.m[i][c]) != 0) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    if (pr != r) {
      std::swap(w.m[pr], w.m[r]);
      sign = -sign;
    }
    for (int i = r + 1; i < w.rows; ++i) {
      for (int j = c + 1; j < w.cols; ++j) {
        t1 = w.m[i][j] * w.m[r][c];
        t2 = w.m[i][c] * w.m[r][j];
        t1 -= t2;
        mpz_divexact(w.m[i][j].get_mpz_t(), t1.get_mpz_t(), prev.get_mpz_t());
      }
      w.m[i][c] = 0;
    }
    prev = w.m[r][c];
    pivots.emplace_back(r, c);
    ++r;
  }
}

}  // namespace

QSolveResult q_solve(const QMat& a, const QMat& b) {
  if (a.rows() != b.rows())
    throw std::invalid_argument("q_solve row count mismatch");
  ZWork w(a, b);
  std::vector<std::pair<int, int>> pivots;
  int sign = 0;
  bareiss_echelon(w, a.cols(), pivots, sign);

  QSolveResult res;
  res.rank = static_cast<int>(pivots.size());
  for (auto& [pr, pc] : pivots) res.pivot_cols.push_back(pc);

  // rows below the last pivot have a zero A-part; any nonzero B entry there
  // makes the system inconsistent
  res.consistent = true;
  for (int i = res.rank; i < w.rows && res.consistent; ++i)
    for (int j = a.cols(); j < w.cols; ++j)
      if (sgn(w.m[i][j]) != 0) {
        res.consistent = false;
        break;
      }

  std::vector<bool> is_pivot(a.cols(), false);
  for (int c : res.pivot_cols) is_pivot[c] = true;

  if (res.consistent) {
    res.particular = QMat(a.cols(), b.cols());
    for (int rc = 0; rc < b.cols(); ++rc) {
      std::vector<mpq_class> x(a.cols(), 0);
      for (int k = res.rank - 1; k >= 0; --k) {
        auto [pr, pc] = pivots[k];
        mpq_class s(w.m[pr][a.cols() + rc]);
        for (int j = pc + 1; j < a.cols(); ++j)
          if (sgn(w.m[pr][j]) != 0) s -= mpq_class(w.m[pr][j]) * x[j];
        s /= mpq_class(w.m[pr][pc]);
        s.canonicalize();
        x[pc] = s;
      }
      for (int j = 0; j < a.cols(); ++j) res.particular.at(j, rc) = x[j];
    }
  }

  int nullity = a.cols() - res.rank;
  res.kernel = QMat(a.cols(), nullity);
  int kc = 0;
  for (int f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<mpq_class> v(a.cols(), 0);
    v[f] = 1;
    for (int k = res.rank - 1; k >= 0; --k) {
      auto [pr, pc] = pivots[k];
      if (pc >= f) continue;
      mpq_class s(0);
      for (int j = pc + 1; j <= f; ++j)
        if (sgn(w.m[pr][j]) != 0) s -= mpq_class(w.m[pr][j]) * v[j];
      s /= mpq_class(w.m[pr][pc]);
      s.canonicalize();
      v[pc] = s;
    }
    for (int j = 0; j < a.cols(); ++j) res.kernel.at(j, kc) = v[j];
    ++kc;
  }
  return res;
}

mpq_class q_det(const QMat& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("q_det needs square");
  if (a.rows() == 0) return 1;
  ZWork w(a, QMat(a.rows(), 0));
  std::vector<std::pair<int, int>> pivots;
  int sign = 0;
  bareiss_echelon(w, a.cols(), pivots, sign);
  if (static_cast<int>(pivots.size()) < a.rows()) return 0;
  // last Bareiss pivot is the determinant of the scaled, row-swapped matrix
  mpq_class d(w.m[pivots.back().first][pivots.back().second]);
  for (int i = 0; i < a.rows(); ++i) d /= mpq_class(w.row_scale[i]);
  d.canonicalize();
  return sign < 0 ? mpq_class(-d) : d;
}

int q_rank(const QMat& a) {
  ZWork w(a, QMat(a.rows(), 0));
  std::vector<std::pair<int, int>> pivots;
  int sign = 0;
  bareiss_echelon(w, a.cols(), pivots, sign);
  return static_cast<int>(pivots.size());
}

QMat realify(const CMat& a) {
  QMat r(2 * a.rows(), 2 * a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      const Scalar& s = a.at(i, j);
      r.at(i, j) = s.re;
      r.at(i, a.cols() + j) = -s.im;
      r.at(a.rows() + i, j) = s.im;
      r.at(a.rows() + i, a.cols() + j) = s.re;
    }
  return r;
}

CSolveResult c_solve(const CMat& a, const CMat& b) {
  QMat ra = realify(a);
  QMat rb(2 * b.rows(), b.cols());
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) {
      rb.at(i, j) = b.at(i, j).re;
      rb.at(b.rows() + i, j) = b.at(i, j).im;
    }
  QSolveResult qs = q_solve(ra, rb);
  CSolveResult res;
  res.consistent = qs.consistent;
  res.rank_real = qs.rank;
  if (qs.consistent) {
    res.particular = CMat(a.cols(), b.cols());
    for (int i = 0; i < a.cols(); ++i)
      for (int j = 0; j < b.cols(); ++j)
        res.particular.at(i, j) =
            Scalar(qs.particular.at(i, j), qs.particular.at(a.cols() + i, j));
  }
  return res;
}

CMat c_inverse(const CMat& a) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("c_inverse needs square");
  CMat id = CMat::identity(a.rows());
  CSolveResult s = c_solve(a, id);
  // realified rank 2n certifies complex invertibility
  if (!s.consistent || s.rank_real != 2 * a.rows())
    throw std::domain_error("singular matrix");
  return s.particular;
}

}  // namespace qf
