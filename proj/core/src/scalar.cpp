#include "qf/scalar.hpp"

namespace qf {

mpq_class rational_from_string(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  mpq_class q;
  // mpq_class(string) accepts whitespace and bases we do not want; go through
  // mpq_set_str and validate the result ourselves.
  if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
    throw std::invalid_argument("malformed rational literal: " + s);
  if (sgn(mpq_class(q.get_den())) == 0)
    throw std::invalid_argument("zero denominator in rational literal: " + s);
  q.canonicalize();
  return q;
}

std::string to_string(const mpq_class& q) { return q.get_str(); }

std::string to_string(const Scalar& s) {
  if (s.is_zero()) return "0";
  if (s.is_real()) return s.re.get_str();
  const mpq_class im_abs = abs(s.im);
  std::string imag = (im_abs == 1) ? "i" : im_abs.get_str() + "*i";
  if (sgn(s.re) == 0) return (sgn(s.im) < 0 ? "-" : "") + imag;
  return s.re.get_str() + (sgn(s.im) < 0 ? "-" : "+") + imag;
}

}  // namespace qf
