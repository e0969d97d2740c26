#include "qf/poly.hpp"

#include <stdexcept>

namespace qf {

Poly Poly::constant(int n_vars, const Scalar& c) {
  Poly p(n_vars);
  p.add_term(ExpKey(2 * n_vars, 0), c);
  return p;
}

Poly Poly::monomial(int n_vars, const ExpKey& e, const Scalar& c) {
  if (static_cast<int>(e.size()) != 2 * n_vars)
    throw std::invalid_argument("monomial exponent length mismatch");
  for (int x : e)
    if (x < 0) throw std::invalid_argument("negative exponent");
  Poly p(n_vars);
  p.add_term(e, c);
  return p;
}

Poly Poly::zvar(int n_vars, int l) {
  ExpKey e(2 * n_vars, 0);
  e.at(l) = 1;
  return monomial(n_vars, e, 1);
}

Poly Poly::zbar(int n_vars, int l) {
  ExpKey e(2 * n_vars, 0);
  e.at(n_vars + l) = 1;
  return monomial(n_vars, e, 1);
}

int Poly::degree() const {
  if (terms_.empty()) return neg_inf_degree;
  int d = neg_inf_degree;
  for (const auto& [e, c] : terms_) {
    int t = 0;
    for (int x : e) t += x;
    if (t > d) d = t;
  }
  return d;
}

Scalar Poly::coeff(const ExpKey& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Scalar() : it->second;
}

void Poly::add_term(const ExpKey& e, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void Poly::check_same_vars(const Poly& o) const {
  if (n_ != o.n_)
    throw std::invalid_argument("polynomial variable count mismatch");
}

Poly Poly::operator-() const {
  Poly r(n_);
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  check_same_vars(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  check_same_vars(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Poly& Poly::operator*=(const Poly& o) {
  check_same_vars(o);
  Poly r(n_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      ExpKey e = ea;
      for (size_t k = 0; k < e.size(); ++k) e[k] += eb[k];
      r.add_term(e, ca * cb);
    }
  }
  terms_ = std::move(r.terms_);
  return *this;
}

Poly& Poly::operator*=(const Scalar& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

Poly Poly::conjugate() const {
  Poly r(n_);
  for (const auto& [e, c] : terms_) {
    ExpKey f(e.size());
    for (int k = 0; k < n_; ++k) {
      f[k] = e[n_ + k];
      f[n_ + k] = e[k];
    }
    r.terms_.emplace(std::move(f), c.conj());
  }
  return r;
}

Poly Poly::diff(int var) const {
  if (var < 0 || var >= 2 * n_)
    throw std::invalid_argument("derivative variable out of range");
  Poly r(n_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    ExpKey f = e;
    f[var] -= 1;
    r.add_term(f, c * Scalar(e[var]));
  }
  return r;
}

Poly Poly::homogeneous_component(int k) const {
  Poly r(n_);
  for (const auto& [e, c] : terms_) {
    int t = 0;
    for (int x : e) t += x;
    if (t == k) r.terms_.emplace(e, c);
  }
  return r;
}

Poly Poly::bidegree_component(int zdeg, int zbardeg) const {
  Poly r(n_);
  for (const auto& [e, c] : terms_) {
    int a = 0, b = 0;
    for (int k = 0; k < n_; ++k) {
      a += e[k];
      b += e[n_ + k];
    }
    if (a == zdeg && b == zbardeg) r.terms_.emplace(e, c);
  }
  return r;
}

Poly Poly::truncate_above(int max_degree) const {
  Poly r(n_);
  for (const auto& [e, c] : terms_) {
    int t = 0;
    for (int x : e) t += x;
    if (t <= max_degree) r.terms_.emplace(e, c);
  }
  return r;
}

bool Poly::is_homogeneous() const {
  int d = neg_inf_degree;
  for (const auto& [e, c] : terms_) {
    int t = 0;
    for (int x : e) t += x;
    if (d == neg_inf_degree)
      d = t;
    else if (t != d)
      return false;
  }
  return true;
}

bool Poly::has_anti_part() const {
  for (const auto& [e, c] : terms_)
    for (int k = n_; k < 2 * n_; ++k)
      if (e[k] != 0) return true;
  return false;
}

Poly Poly::substitute(const std::vector<Poly>& images, int truncate_at) const {
  if (static_cast<int>(images.size()) != 2 * n_)
    throw std::invalid_argument("substitute needs one image per variable");
  int out_vars = images.empty() ? 0 : images[0].n_vars();
  for (const auto& im : images)
    if (im.n_vars() != out_vars)
      throw std::invalid_argument("substitute images disagree on variables");
  // cache of images[v]^k, built incrementally per variable
  std::vector<std::vector<Poly>> powers(images.size());
  auto power = [&](int v, int k) -> const Poly& {
    auto& ladder = powers[v];
    if (ladder.empty()) ladder.push_back(Poly::constant(out_vars, 1));
    while (static_cast<int>(ladder.size()) <= k) {
      Poly next = ladder.back() * images[v];
      if (truncate_at >= 0) next = next.truncate_above(truncate_at);
      ladder.push_back(std::move(next));
    }
    return ladder[k];
  };
  Poly result(out_vars);
  for (const auto& [e, c] : terms_) {
    Poly term = Poly::constant(out_vars, c);
    for (size_t v = 0; v < e.size(); ++v) {
      if (e[v] == 0) continue;
      term *= power(static_cast<int>(v), e[v]);
      if (truncate_at >= 0) term = term.truncate_above(truncate_at);
      if (term.is_zero()) break;
    }
    result += term;
  }
  return result;
}

}  // namespace qf
