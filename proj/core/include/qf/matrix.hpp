#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <vector>

#include "qf/scalar.hpp"

namespace qf {

template <class T>
class Mat {
 public:
  Mat() : r_(0), c_(0) {}
  Mat(int rows, int cols) : r_(rows), c_(cols), a_(size_t(rows) * cols) {}

  static Mat identity(int n) {
    Mat m(n, n);
    for (int k = 0; k < n; ++k) m.at(k, k) = T(1);
    return m;
  }

  int rows() const { return r_; }
  int cols() const { return c_; }
  T& at(int i, int j) { return a_[size_t(i) * c_ + j]; }
  const T& at(int i, int j) const { return a_[size_t(i) * c_ + j]; }

  Mat transpose() const {
    Mat t(c_, r_);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  Mat operator*(const Mat& o) const {
    if (c_ != o.r_) throw std::invalid_argument("matrix product shape mismatch");
    Mat p(r_, o.c_);
    for (int i = 0; i < r_; ++i)
      for (int k = 0; k < c_; ++k) {
        const T& v = at(i, k);
        if (v == T(0)) continue;
        for (int j = 0; j < o.c_; ++j) p.at(i, j) += v * o.at(k, j);
      }
    return p;
  }

  Mat operator+(const Mat& o) const {
    check_same_shape(o);
    Mat s(r_, c_);
    for (size_t k = 0; k < a_.size(); ++k) s.a_[k] = a_[k] + o.a_[k];
    return s;
  }

  Mat operator-(const Mat& o) const {
    check_same_shape(o);
    Mat s(r_, c_);
    for (size_t k = 0; k < a_.size(); ++k) s.a_[k] = a_[k] - o.a_[k];
    return s;
  }

  bool operator==(const Mat& o) const {
    return r_ == o.r_ && c_ == o.c_ && a_ == o.a_;
  }
  bool operator!=(const Mat& o) const { return !(*this == o); }

 private:
  int r_, c_;
  std::vector<T> a_;
  void check_same_shape(const Mat& o) const {
    if (r_ != o.r_ || c_ != o.c_)
      throw std::invalid_argument("matrix shape mismatch");
  }
};

using QMat = Mat<mpq_class>;
using CMat = Mat<Scalar>;

struct QSolveResult {
  bool consistent = false;
  int rank = 0;
  // one solution per right-hand-side column, free variables set to zero
  QMat particular;
  // columns form a basis of the nullspace of A
  QMat kernel;
  std::vector<int> pivot_cols;
};

// Solves A x = b for every column b of B by fraction-free elimination
// (per-row denominator clearing, then one-step Bareiss with row pivoting).
QSolveResult q_solve(const QMat& a, const QMat& b);

mpq_class q_det(const QMat& a);
int q_rank(const QMat& a);

// [[Re, -Im], [Im, Re]] with the documented (Re x, Im x) unknown order
QMat realify(const CMat& a);

struct CSolveResult {
  bool consistent = false;
  int rank_real = 0;  // rank of the realified system
  CMat particular;
};

// Complex exact solve through realification; free variables fixed to zero.
CSolveResult c_solve(const CMat& a, const CMat& b);

// Inverse of a square complex matrix; throws std::domain_error if singular.
CMat c_inverse(const CMat& a);

}  // namespace qf
