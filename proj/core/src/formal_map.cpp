#include "qf/formal_map.hpp"

#include <sstream>

namespace qf {

namespace {

int wdeg_of(const MultiIndex& w_exp, int zdeg) {
  return zdeg + 2 * degree_of(w_exp);
}

// Largest weighted degree carried by any stored term of the series.
int series_weight(const WSeries& s) {
  int w = Poly::neg_inf_degree;
  for (const auto& [n, p] : s) {
    const int t = wdeg_of(n, p.degree());
    if (t > w) w = t;
  }
  return w;
}

std::string side_name(bool f_side, int component) {
  std::ostringstream os;
  os << (f_side ? "F" : "G") << "[" << (component + 1) << "]";
  return os.str();
}

}  // namespace

FormalMap standard_embedding(int n_src, int n_dst, int d_max) {
  if (n_src <= 0 || n_dst < n_src)
    throw ValidationError("standard embedding needs 1 <= n_src <= n_dst");
  if (d_max < 2) throw ValidationError("truncation degree must be at least 2");
  FormalMap fm;
  fm.n_src = n_src;
  fm.n_dst = n_dst;
  fm.d_max = d_max;
  fm.f.assign(size_t(n_dst), WSeries{});
  fm.g.assign(size_t(n_dst), WSeries{});
  const MultiIndex w0(n_src, 0);
  for (int l = 0; l < n_src; ++l) {
    fm.f[l].emplace(w0, Poly::zvar(n_src, l));
    MultiIndex wl(n_src, 0);
    wl[l] = 1;
    fm.g[l].emplace(wl, Poly::constant(n_src, Scalar(1)));
  }
  return fm;
}

void validate_map(const FormalMap& fm) {
  if (fm.n_src <= 0 || fm.n_dst <= 0)
    throw ValidationError("map dimensions must be positive");
  if (fm.d_max < 2) throw ValidationError("truncation degree must be at least 2");
  if (int(fm.f.size()) != fm.n_dst || int(fm.g.size()) != fm.n_dst)
    throw ValidationError("map needs one F and one G series per target coordinate");
  for (bool f_side : {true, false}) {
    const auto& side = f_side ? fm.f : fm.g;
    for (int l = 0; l < fm.n_dst; ++l)
      for (const auto& [n, p] : side[l]) {
        const std::string where = side_name(f_side, l);
        if (int(n.size()) != fm.n_src)
          throw ValidationError(where + ": w-exponent length mismatch");
        for (int e : n)
          if (e < 0) throw ValidationError(where + ": negative w-exponent");
        if (p.is_zero())
          throw ValidationError(where + ": stored zero coefficient");
        if (p.n_vars() != fm.n_src)
          throw ValidationError(where + ": coefficient variable count mismatch");
        if (p.has_anti_part())
          throw ValidationError(where + ": coefficient uses conjugate variables");
        if (wdeg_of(n, p.degree()) > fm.d_max)
          throw ValidationError(where + ": term above the truncation degree");
        if (degree_of(n) == 0 && !p.coeff(ExpKey(2 * fm.n_src, 0)).is_zero())
          throw ValidationError(where + ": map must fix the origin");
      }
  }
}

void add_map_term(FormalMap& fm, bool f_side, int component,
                  const MultiIndex& w_exp, const Poly& zpoly) {
  auto& side = f_side ? fm.f : fm.g;
  if (component < 0 || component >= fm.n_dst)
    throw ValidationError("map component out of range");
  Poly kept(fm.n_src);
  for (const auto& [e, c] : zpoly.terms()) {
    const int zdeg = degree_of(e);
    if (wdeg_of(w_exp, zdeg) <= fm.d_max) kept.add_term(e, c);
  }
  auto it = side[component].find(w_exp);
  if (it == side[component].end()) {
    if (!kept.is_zero()) side[component].emplace(w_exp, kept);
    return;
  }
  it->second += kept;
  if (it->second.is_zero()) side[component].erase(it);
}

Scalar map_coeff(const FormalMap& fm, bool f_side, int component,
                 const MultiIndex& w_exp, const MultiIndex& alpha) {
  const auto& side = f_side ? fm.f : fm.g;
  auto it = side.at(size_t(component)).find(w_exp);
  if (it == side.at(size_t(component)).end()) return Scalar(0);
  return it->second.coeff(concat_exp(alpha, MultiIndex(fm.n_src, 0)));
}

CMat linear_z_matrix(const FormalMap& fm) {
  CMat m(fm.n_dst, fm.n_src);
  const MultiIndex w0(fm.n_src, 0);
  for (int l = 0; l < fm.n_dst; ++l)
    for (int j = 0; j < fm.n_src; ++j) {
      MultiIndex ej(fm.n_src, 0);
      ej[j] = 1;
      m.at(l, j) = map_coeff(fm, true, l, w0, ej);
    }
  return m;
}

CMat linear_w_matrix(const FormalMap& fm) {
  CMat m(fm.n_dst, fm.n_src);
  const MultiIndex a0(fm.n_src, 0);
  for (int l = 0; l < fm.n_dst; ++l)
    for (int j = 0; j < fm.n_src; ++j) {
      MultiIndex ej(fm.n_src, 0);
      ej[j] = 1;
      m.at(l, j) = map_coeff(fm, false, l, ej, a0);
    }
  return m;
}

FormalMap apply_target_linear(const FormalMap& fm, const CMat& gamma,
                              const CMat& delta) {
  if (gamma.rows() != fm.n_dst || gamma.cols() != fm.n_dst ||
      delta.rows() != fm.n_dst || delta.cols() != fm.n_dst)
    throw ValidationError("target change must be square over the target dimension");
  FormalMap out;
  out.n_src = fm.n_src;
  out.n_dst = fm.n_dst;
  out.d_max = fm.d_max;
  out.f.assign(size_t(fm.n_dst), WSeries{});
  out.g.assign(size_t(fm.n_dst), WSeries{});
  for (bool f_side : {true, false}) {
    const auto& src = f_side ? fm.f : fm.g;
    const CMat& lin = f_side ? gamma : delta;
    for (int l = 0; l < fm.n_dst; ++l)
      for (int j = 0; j < fm.n_dst; ++j) {
        if (lin.at(l, j) == Scalar(0)) continue;
        for (const auto& [n, p] : src[j])
          add_map_term(out, f_side, l, n, p * lin.at(l, j));
      }
  }
  return out;
}

Poly eval_on_source(const FormalMap& fm, bool f_side, int component,
                    const PerturbedManifold& src, int degree) {
  if (src.base.n != fm.n_src)
    throw ValidationError("source dimension mismatch");
  if (degree > src.d_max)
    throw ValidationError("evaluation degree exceeds the source truncation");
  const auto& side = f_side ? fm.f : fm.g;
  if (component < 0 || component >= fm.n_dst)
    throw ValidationError("map component out of range");
  std::vector<Poly> w(size_t(fm.n_src));
  for (int j = 0; j < fm.n_src; ++j) w[j] = defining_series(src, j);
  Poly out(fm.n_src);
  for (const auto& [n, p] : side[component]) {
    Poly term = p.truncate_above(degree);
    for (int j = 0; j < fm.n_src; ++j)
      for (int r = 0; r < n[j]; ++r) {
        term *= w[j];
        term = term.truncate_above(degree);
      }
    out += term;
  }
  return out;
}

EmbeddingCheck verify_embedding_equation(const FormalMap& fm,
                                         const PerturbedManifold& src,
                                         const PerturbedManifold& dst,
                                         int degree) {
  validate_map(fm);
  if (dst.base.n != fm.n_dst)
    throw ValidationError("target dimension mismatch");
  if (degree < 2) throw ValidationError("check degree must be at least 2");
  if (degree > fm.d_max || degree > src.d_max || degree > dst.d_max)
    throw ValidationError("check degree exceeds a truncation degree");

  EmbeddingCheck chk;
  chk.degree = degree;

  std::vector<Poly> images(size_t(2 * fm.n_dst), Poly(fm.n_src));
  for (int j = 0; j < fm.n_dst; ++j) {
    images[j] = eval_on_source(fm, true, j, src, degree);
    images[fm.n_dst + j] = images[j].conjugate();
  }

  chk.holds = true;
  for (int l = 0; l < fm.n_dst; ++l) {
    Poly rhs = quadric(dst.base, l).substitute(images, degree);
    for (const auto& pert : dst.perturbations)
      if (pert.l == l) rhs += pert.phi.substitute(images, degree);
    Poly res = eval_on_source(fm, false, l, src, degree) - rhs;
    res = res.truncate_above(degree);
    if (!res.is_zero()) chk.holds = false;
    chk.residuals.push_back(res);
  }

  chk.linear_rank_ok =
      q_rank(realify(linear_z_matrix(fm))) == 2 * fm.n_src;
  return chk;
}

bool operator==(const FormalMap& a, const FormalMap& b) {
  return a.n_src == b.n_src && a.n_dst == b.n_dst && a.d_max == b.d_max &&
         a.f == b.f && a.g == b.g;
}

}  // namespace qf
