#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <utility>

namespace qf {

// Exact element of Q(i): re + im*i with arbitrary-precision rational parts.
struct Scalar {
  mpq_class re;
  mpq_class im;

  Scalar() : re(0), im(0) {}
  Scalar(long r) : re(r), im(0) {}  // NOLINT: implicit on purpose for 0/1/-1
  Scalar(mpq_class r) : re(std::move(r)), im(0) {}
  Scalar(mpq_class r, mpq_class i) : re(std::move(r)), im(std::move(i)) {}

  static Scalar i() { return Scalar(mpq_class(0), mpq_class(1)); }

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool is_real() const { return sgn(im) == 0; }
  Scalar conj() const { return Scalar(re, -im); }
  // |z|^2, exact
  mpq_class norm_sq() const { return re * re + im * im; }

  Scalar& operator+=(const Scalar& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Scalar& operator-=(const Scalar& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Scalar& operator*=(const Scalar& o) {
    mpq_class r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = r;
    return *this;
  }
  Scalar& operator/=(const Scalar& o) {
    if (o.is_zero()) throw std::domain_error("scalar division by zero");
    mpq_class n = o.norm_sq();
    mpq_class r = (re * o.re + im * o.im) / n;
    im = (im * o.re - re * o.im) / n;
    re = r;
    return *this;
  }
};

inline Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
inline Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
inline Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
inline Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
inline Scalar operator-(const Scalar& a) { return Scalar(-a.re, -a.im); }
inline bool operator==(const Scalar& a, const Scalar& b) {
  return a.re == b.re && a.im == b.im;
}
inline bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

// Parses "p" or "p/q" into a canonical rational. Throws std::invalid_argument
// on malformed input or zero denominator.
mpq_class rational_from_string(const std::string& s);

// Canonical rendering: "0", "3/2", "-1/3*i", "1/2-2*i", ...
std::string to_string(const Scalar& s);
std::string to_string(const mpq_class& q);

}  // namespace qf
