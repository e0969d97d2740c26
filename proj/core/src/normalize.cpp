#include "qf/normalize.hpp"

#include <algorithm>
#include <sstream>

#include "qf/aux_system.hpp"
#include "qf/poly_io.hpp"

namespace qf {

namespace {

int min3(int a, int b, int c) { return std::min(a, std::min(b, c)); }

int first_bad_degree(const EmbeddingCheck& chk) {
  for (int p = 1; p <= chk.degree; ++p)
    for (const Poly& r : chk.residuals)
      if (!r.homogeneous_component(p).is_zero()) return p;
  return chk.degree + 1;
}

std::string monomial_label(const MultiIndex& alpha, const MultiIndex& n) {
  std::ostringstream os;
  bool first = true;
  auto put = [&](char base, int idx, int e) {
    if (e == 0) return;
    if (!first) os << "*";
    first = false;
    os << base << (idx + 1);
    if (e > 1) os << "^" << e;
  };
  for (size_t j = 0; j < alpha.size(); ++j) put('z', int(j), alpha[j]);
  for (size_t j = 0; j < n.size(); ++j) put('w', int(j), n[j]);
  if (first) os << "1";
  return os.str();
}

std::string render_stages(const LinearNormalization& lin) {
  std::ostringstream os;
  for (const auto& st : lin.stages) {
    os << "stage " << st.name
       << (st.automorphism ? " (verified automorphism)" : " (not an automorphism)")
       << ":\n";
    std::istringstream det(st.detail);
    std::string line;
    while (std::getline(det, line)) os << "  " << line << "\n";
  }
  return os.str();
}

void render_linear_text(LinearNormalization& lin, const PerturbedManifold& src,
                        const PerturbedManifold& dst) {
  std::ostringstream os;
  os << "linear normalization\n";
  os << "source n = " << src.base.n << ", target n = " << dst.base.n << "\n";
  os << render_stages(lin);
  if (!lin.weight_equalities.empty()) {
    os << "weight equalities:\n";
    for (const auto& w : lin.weight_equalities) os << "  " << w << "\n";
  }
  const RealitySplit rs = reality_split(src.base);
  const RealitySplit rd = reality_split(dst.base);
  os << "real defining quadrics: source " << rs.n0 << " of " << src.base.n
     << ", target " << rd.n0 << " of " << dst.base.n << "\n";
  if (lin.status == NormalizeStatus::ok)
    os << "status: linear normal form reached\n";
  else
    os << "status: obstruction: " << lin.obstruction << "\n";
  lin.text = os.str();
}

}  // namespace

bool maps_equal_to_degree(const FormalMap& a, const FormalMap& b, int degree) {
  if (degree > a.d_max || degree > b.d_max)
    throw ValidationError("comparison degree exceeds a truncation degree");
  if (a.n_src != b.n_src || a.n_dst != b.n_dst) return false;
  auto trunc = [degree](const std::vector<WSeries>& side) {
    std::vector<WSeries> out(side.size());
    for (size_t l = 0; l < side.size(); ++l)
      for (const auto& [n, p] : side[l]) {
        Poly kept = p.truncate_above(degree - 2 * degree_of(n));
        if (!kept.is_zero()) out[l].emplace(n, kept);
      }
    return out;
  };
  return trunc(a.f) == trunc(b.f) && trunc(a.g) == trunc(b.g);
}

LinearNormalization normalize_linear_part(const FormalMap& fm,
                                          const PerturbedManifold& src,
                                          const PerturbedManifold& dst) {
  validate_map(fm);
  if (fm.n_src != src.base.n || fm.n_dst != dst.base.n)
    throw ValidationError("map dimensions do not match the manifolds");
  if (!src.base.is_diagonal() || !dst.base.is_diagonal())
    throw ValidationError("normalization requires diagonal models");

  LinearNormalization out;
  out.map = fm;
  const int ns = fm.n_src;
  const int nd = fm.n_dst;

  auto fail = [&](const std::string& msg) {
    out.status = NormalizeStatus::obstruction;
    out.obstruction = msg;
    render_linear_text(out, src, dst);
    return out;
  };

  CMat gamma = linear_z_matrix(out.map);
  if (q_rank(realify(gamma)) != 2 * ns)
    return fail("z-linear part of F is degenerate (rank below the source dimension)");

  const MultiIndex w0(ns, 0);
  for (int l = 0; l < nd; ++l)
    for (int j = 0; j < ns; ++j) {
      MultiIndex ej(ns, 0);
      ej[j] = 1;
      if (!map_coeff(out.map, false, l, w0, ej).is_zero())
        return fail("G[" + std::to_string(l + 1) +
                    "] carries a first-order z term");
    }
  for (int l = 0; l < nd; ++l) {
    int nz = 0;
    for (int j = 0; j < ns; ++j)
      if (gamma.at(l, j) != Scalar(0)) ++nz;
    if (nz > 1)
      return fail("F[" + std::to_string(l + 1) +
                  "] couples two source variables at first order");
  }

  // column matching: send the first row realizing each source variable to
  // the matching target position
  std::vector<int> r(size_t(ns), -1);
  for (int i = 0; i < ns; ++i)
    for (int l = 0; l < nd; ++l)
      if (gamma.at(l, i) != Scalar(0)) {
        r[i] = l;
        break;
      }
  bool need_perm = false;
  for (int i = 0; i < ns; ++i)
    if (r[i] != i) need_perm = true;
  if (need_perm) {
    std::vector<char> used(size_t(nd), 0);
    std::vector<int> old_for_new(size_t(nd), -1);
    for (int i = 0; i < ns; ++i) {
      old_for_new[i] = r[i];
      used[r[i]] = 1;
    }
    int next = ns;
    for (int l = 0; l < nd; ++l)
      if (!used[l]) old_for_new[next++] = l;
    CMat perm(nd, nd);
    for (int i = 0; i < nd; ++i) perm.at(i, old_for_new[i]) = Scalar(1);
    if (!model_automorphism_check(dst.base, perm, perm)) {
      std::ostringstream os;
      os << "target components cannot be permuted into place: the weights (";
      for (int l = 0; l < nd; ++l)
        os << (l ? ", " : "") << to_string(dst.base.lambda[l]);
      os << ") are not preserved";
      return fail(os.str());
    }
    out.map = apply_target_linear(out.map, perm, perm);
    StageRecord st;
    st.name = "permutation";
    st.automorphism = true;
    std::ostringstream det;
    for (int i = 0; i < nd; ++i)
      if (old_for_new[i] != i)
        det << "component " << (i + 1) << " <- component "
            << (old_for_new[i] + 1) << "\n";
    st.detail = det.str();
    out.stages.push_back(std::move(st));
    gamma = linear_z_matrix(out.map);
  }

  CMat gw = linear_w_matrix(out.map);
  for (int i = 0; i < ns; ++i) {
    const Scalar c = gamma.at(i, i);
    if (src.base.lambda[i] != dst.base.lambda[i]) {
      std::ostringstream os;
      os << "weight mismatch at component " << (i + 1)
         << ": lambda = " << to_string(src.base.lambda[i])
         << " on the source but lambda' = " << to_string(dst.base.lambda[i])
         << " on the target; no linear embedding matches these components";
      return fail(os.str());
    }
    for (int j = 0; j < ns; ++j) {
      const Scalar want = (j == i) ? c * c.conj() : Scalar(0);
      if (gw.at(i, j) != want)
        return fail("second-order identity fails: w-linear part of G[" +
                    std::to_string(i + 1) + "] does not match |c|^2");
    }
    const Scalar lhs = Scalar(src.base.lambda[i]) * (c * c.conj());
    const Scalar rhs = Scalar(dst.base.lambda[i]) * (c.conj() * c.conj());
    if (lhs != rhs)
      return fail("scaling factor of component " + std::to_string(i + 1) +
                  " is incompatible with the weights (it must be real)");
    out.weight_equalities.push_back(
        "lambda_" + std::to_string(i + 1) + " = lambda'_" +
        std::to_string(i + 1) + " = " + to_string(src.base.lambda[i]));
  }

  bool need_scale = false;
  for (int i = 0; i < ns; ++i)
    if (gamma.at(i, i) != Scalar(1)) need_scale = true;
  if (need_scale) {
    CMat gs = CMat::identity(nd), ds = CMat::identity(nd);
    std::ostringstream det;
    for (int i = 0; i < ns; ++i) {
      const Scalar c = gamma.at(i, i);
      if (c == Scalar(1)) continue;
      gs.at(i, i) = Scalar(1) / c;
      ds.at(i, i) = Scalar(1) / (c * c.conj());
      det << "z'_" << (i + 1) << " scale " << to_string(gs.at(i, i)) << ", w'_"
          << (i + 1) << " scale " << to_string(ds.at(i, i)) << "\n";
    }
    if (!model_automorphism_check(dst.base, gs, ds))
      return fail("rescaling the matched components is not an automorphism "
                  "of the target model");
    out.map = apply_target_linear(out.map, gs, ds);
    StageRecord st;
    st.name = "rescaling";
    st.automorphism = true;
    st.detail = det.str();
    out.stages.push_back(std::move(st));
    gamma = linear_z_matrix(out.map);
    gw = linear_w_matrix(out.map);
  }

  const int depth = min3(fm.d_max, src.d_max, dst.d_max);
  for (int l = ns; l < nd; ++l) {
    int dup_col = -1;
    for (int j = 0; j < ns; ++j)
      if (gamma.at(l, j) != Scalar(0)) dup_col = j;
    if (dup_col < 0) continue;
    const int i = dup_col;
    const Scalar g = gamma.at(l, i);
    if (dst.base.lambda[l] != src.base.lambda[i]) {
      std::ostringstream os;
      os << "weight mismatch at duplicated component " << (l + 1)
         << ": lambda' = " << to_string(dst.base.lambda[l])
         << " but the duplicated source column carries lambda = "
         << to_string(src.base.lambda[i]);
      return fail(os.str());
    }
    if (gw.at(l, i) != g * g.conj())
      return fail("second-order identity fails at duplicated component " +
                  std::to_string(l + 1));
    if (Scalar(src.base.lambda[i]) * (g * g.conj()) !=
        Scalar(dst.base.lambda[l]) * (g.conj() * g.conj()))
      return fail("duplication factor of component " + std::to_string(l + 1) +
                  " is incompatible with the weights (it must be real)");
    if (g != Scalar(1)) {
      CMat gs = CMat::identity(nd), ds = CMat::identity(nd);
      gs.at(l, l) = Scalar(1) / g;
      ds.at(l, l) = Scalar(1) / (g * g.conj());
      if (!model_automorphism_check(dst.base, gs, ds))
        return fail("rescaling duplicated component " + std::to_string(l + 1) +
                    " is not an automorphism of the target model");
      out.map = apply_target_linear(out.map, gs, ds);
      StageRecord st;
      st.name = "rescaling (duplicated component)";
      st.automorphism = true;
      std::ostringstream det;
      det << "z'_" << (l + 1) << " scale " << to_string(gs.at(l, l)) << ", w'_"
          << (l + 1) << " scale " << to_string(ds.at(l, l)) << "\n";
      st.detail = det.str();
      out.stages.push_back(std::move(st));
    }
    const EmbeddingCheck pre = verify_embedding_equation(out.map, src, dst, depth);
    CMat gsh = CMat::identity(nd), dsh = CMat::identity(nd);
    gsh.at(l, i) = Scalar(-1);
    dsh.at(l, i) = Scalar(-1);
    out.map = apply_target_linear(out.map, gsh, dsh);
    const EmbeddingCheck post = verify_embedding_equation(out.map, src, dst, depth);
    const int pre_bad = first_bad_degree(pre);
    const int post_bad = first_bad_degree(post);
    if (post_bad < pre_bad)
      return fail("shearing duplicated component " + std::to_string(l + 1) +
                  " against component " + std::to_string(i + 1) +
                  " breaks the mapping equation at degree " +
                  std::to_string(post_bad));
    StageRecord st;
    st.name = "shear";
    st.automorphism = false;
    std::ostringstream det;
    det << "F[" << (l + 1) << "] -= F[" << (i + 1) << "]; G[" << (l + 1)
        << "] -= G[" << (i + 1) << "]\n";
    if (post_bad > depth)
      det << "mapping equation preserved through degree " << depth << "\n";
    else
      det << "residual unchanged from degree " << post_bad
          << " (left to the degree corrections)\n";
    st.detail = det.str();
    out.stages.push_back(std::move(st));
    gamma = linear_z_matrix(out.map);
    gw = linear_w_matrix(out.map);
  }

  const EmbeddingCheck chk2 = verify_embedding_equation(out.map, src, dst, 2);
  if (!chk2.holds) {
    for (int l = 0; l < nd; ++l)
      if (!chk2.residuals[l].is_zero())
        return fail("second-order mapping identities fail in component " +
                    std::to_string(l + 1) + ": residual " +
                    to_string(chk2.residuals[l]));
  }
  gamma = linear_z_matrix(out.map);
  gw = linear_w_matrix(out.map);
  for (int l = 0; l < nd; ++l)
    for (int j = 0; j < ns; ++j) {
      const Scalar want = (l == j) ? Scalar(1) : Scalar(0);
      if (gamma.at(l, j) != want || gw.at(l, j) != want)
        return fail("linear part did not reach the normal form");
    }

  render_linear_text(out, src, dst);
  return out;
}

NormalizeResult normalize_to_degree(const FormalMap& fm,
                                    const PerturbedManifold& src,
                                    const PerturbedManifold& dst, int degree) {
  if (degree < 2)
    throw ValidationError("normalization degree must be at least 2");
  if (degree > fm.d_max || degree > src.d_max || degree > dst.d_max)
    throw ValidationError("normalization degree exceeds a truncation degree");

  NormalizeResult res;
  res.linear = normalize_linear_part(fm, src, dst);
  res.map = res.linear.map;

  std::ostringstream os;
  os << res.linear.text;

  auto finish = [&]() {
    res.text = os.str();
    return res;
  };

  if (res.linear.status != NormalizeStatus::ok) {
    res.status = res.linear.status;
    res.obstruction = res.linear.obstruction;
    return finish();
  }

  const int ns = fm.n_src;
  const int nd = fm.n_dst;
  os << "degree corrections\n";
  for (int p = 3; p <= degree; ++p) {
    InvertibilityReport audit = verify_invertibility(src.base, p);
    res.audits.push_back(audit.text);
    os << "degree " << p << " audit: det+ = " << audit.det_plus.get_str()
       << ", det- = " << audit.det_minus.get_str() << "\n";
    if (!audit.nonzero_plus || !audit.nonzero_minus) {
      res.status = NormalizeStatus::halted;
      res.obstruction = "degree-" + std::to_string(p) +
                        " correction operator is singular";
      os << "halted: " << res.obstruction << "\n" << audit.text;
      return finish();
    }

    const EmbeddingCheck chk = verify_embedding_equation(res.map, src, dst, degree);
    DegreeCorrection corr;
    corr.p = p;
    for (int l = 0; l < nd; ++l) {
      const Poly rho = chk.residuals[l].homogeneous_component(p);
      if (rho.is_zero()) continue;
      const bool bordered = l < ns;
      DegreeColumns dc =
          degree_columns(src.base, bordered ? dst.base.lambda[l] : mpq_class(0),
                         bordered ? l : 0, p, bordered);
      const int rows = int(dc.rows.size());
      QMat rhs_re(rows, 1), rhs_im(rows, 1);
      {
        std::map<ExpKey, int, OdinGreater> pos;
        for (int k = 0; k < rows; ++k) pos.emplace(dc.rows[k], k);
        for (const auto& [e, cv] : rho.terms()) {
          const int k = pos.at(e);
          rhs_re.at(k, 0) = -cv.re;
          rhs_im.at(k, 0) = -cv.im;
        }
      }
      const int df_cols = bordered ? dc.df_plus.cols() : 0;
      QMat a_plus(rows, dc.dg.cols() + df_cols);
      QMat a_minus(rows, dc.dg.cols() + df_cols);
      for (int rr = 0; rr < rows; ++rr) {
        for (int c = 0; c < dc.dg.cols(); ++c) {
          a_plus.at(rr, c) = dc.dg.at(rr, c);
          a_minus.at(rr, c) = dc.dg.at(rr, c);
        }
        for (int c = 0; c < df_cols; ++c) {
          a_plus.at(rr, dc.dg.cols() + c) = dc.df_plus.at(rr, c);
          a_minus.at(rr, dc.dg.cols() + c) = dc.df_minus.at(rr, c);
        }
      }
      const QSolveResult s_plus = q_solve(a_plus, rhs_re);
      const QSolveResult s_minus = q_solve(a_minus, rhs_im);
      if (!s_plus.consistent || !s_minus.consistent) {
        res.status = NormalizeStatus::obstruction;
        res.obstruction = "degree-" + std::to_string(p) +
                          " residual in component " + std::to_string(l + 1) +
                          " cannot be corrected; defect: " + to_string(rho);
        os << "obstruction: " << res.obstruction << "\n";
        return finish();
      }
      for (size_t k = 0; k < dc.dg_labels.size(); ++k) {
        const Scalar cv(s_plus.particular.at(int(k), 0),
                        s_minus.particular.at(int(k), 0));
        if (cv.is_zero()) continue;
        const auto& [nn, alpha] = dc.dg_labels[k];
        add_map_term(res.map, false, l, nn,
                     Poly::monomial(ns, concat_exp(alpha, MultiIndex(ns, 0)), cv));
        corr.terms.push_back("G[" + std::to_string(l + 1) + "] += (" +
                             to_string(cv) + ") * " +
                             monomial_label(alpha, nn));
      }
      if (bordered)
        for (size_t k = 0; k < dc.df_labels.size(); ++k) {
          const int col = dc.dg.cols() + int(k);
          const Scalar cv(s_plus.particular.at(col, 0),
                          s_minus.particular.at(col, 0));
          if (cv.is_zero()) continue;
          const auto& [nn, beta] = dc.df_labels[k];
          add_map_term(res.map, true, l, nn,
                       Poly::monomial(ns, concat_exp(beta, MultiIndex(ns, 0)), cv));
          corr.terms.push_back("F[" + std::to_string(l + 1) + "] += (" +
                               to_string(cv) + ") * " +
                               monomial_label(beta, nn));
        }
    }
    os << "degree " << p << ": ";
    if (corr.terms.empty()) {
      os << "no correction needed\n";
    } else {
      os << corr.terms.size() << " correction term(s)\n";
      for (const auto& t : corr.terms) os << "  " << t << "\n";
    }
    res.corrections.push_back(std::move(corr));
  }

  const EmbeddingCheck final_chk =
      verify_embedding_equation(res.map, src, dst, degree);
  if (!final_chk.holds) {
    res.status = NormalizeStatus::obstruction;
    res.obstruction = "residual persists after the degree corrections";
    os << "obstruction: " << res.obstruction << "\n";
    return finish();
  }
  os << "final verification: mapping equation holds through degree " << degree
     << "\n";
  return finish();
}

TheoremAReport check_theorem_A(const FormalMap& fm,
                               const PerturbedManifold& src,
                               const PerturbedManifold& dst, int degree) {
  TheoremAReport rep;
  std::ostringstream os;
  os << "rigidity check through degree " << degree << "\n";
  const EmbeddingCheck chk = verify_embedding_equation(fm, src, dst, degree);
  rep.precondition_ok = chk.holds && chk.linear_rank_ok;
  if (!rep.precondition_ok) {
    os << "precondition failed: ";
    if (!chk.holds)
      os << "the mapping equation fails at degree " << first_bad_degree(chk)
         << "\n";
    else
      os << "the z-linear part of F is degenerate\n";
    rep.text = os.str();
    return rep;
  }
  os << "precondition: mapping equation holds, linear part has full rank\n";
  rep.normalization = normalize_to_degree(fm, src, dst, degree);
  os << rep.normalization.text;
  if (rep.normalization.status != NormalizeStatus::ok) {
    os << "verdict: normalization did not complete\n";
    rep.text = os.str();
    return rep;
  }
  const FormalMap standard =
      standard_embedding(fm.n_src, fm.n_dst, fm.d_max);
  rep.holds = maps_equal_to_degree(rep.normalization.map, standard, degree);
  os << (rep.holds
             ? "verdict: normal form equals the standard embedding through degree "
             : "verdict: normal form DEVIATES from the standard embedding at degree <= ")
     << degree << "\n";
  rep.text = os.str();
  return rep;
}

TheoremBReport check_theorem_B(const FormalMap& top, const FormalMap& left,
                               const FormalMap& right,
                               const PerturbedManifold& src_tilde,
                               const PerturbedManifold& src_model,
                               const PerturbedManifold& dst_tilde,
                               const PerturbedManifold& dst_model, int degree) {
  TheoremBReport rep;
  std::ostringstream os;
  os << "commuting-square check through degree " << degree << "\n";
  if (left.n_src != left.n_dst || right.n_src != right.n_dst)
    throw ValidationError("vertical edges must preserve the dimension");

  struct Edge {
    const char* name;
    const FormalMap* map;
    const PerturbedManifold* s;
    const PerturbedManifold* d;
  };
  const Edge edges[] = {{"left", &left, &src_tilde, &src_model},
                        {"right", &right, &dst_tilde, &dst_model},
                        {"top", &top, &src_tilde, &dst_tilde}};
  rep.edges_ok = true;
  for (const Edge& e : edges) {
    const EmbeddingCheck chk =
        verify_embedding_equation(*e.map, *e.s, *e.d, degree);
    if (!chk.holds || !chk.linear_rank_ok) {
      rep.edges_ok = false;
      rep.failing_edge = e.name;
      os << "edge " << e.name << ": mapping equation FAILS at degree "
         << first_bad_degree(chk) << "\n";
      rep.text = os.str();
      return rep;
    }
    os << "edge " << e.name << ": mapping equation holds\n";
  }

  bool linear_ok = true;
  for (const Edge& e : edges) {
    const LinearNormalization lin =
        normalize_linear_part(*e.map, *e.s, *e.d);
    if (lin.status != NormalizeStatus::ok) {
      linear_ok = false;
      os << "edge " << e.name << ": linear obstruction: " << lin.obstruction
         << "\n";
    }
  }

  const NormalizeResult norm =
      normalize_to_degree(top, src_tilde, dst_tilde, degree);
  os << norm.text;

  bool chain_ok = true;
  for (int l = 0; l < src_tilde.base.n; ++l) {
    const mpq_class a = src_model.base.lambda[l];
    const mpq_class b = src_tilde.base.lambda[l];
    const mpq_class c = dst_tilde.base.lambda[l];
    const mpq_class d = dst_model.base.lambda[l];
    const bool eq = a == b && b == c && c == d;
    if (!eq) chain_ok = false;
    std::ostringstream line;
    line << "component " << (l + 1) << ": " << a.get_str() << " = "
         << b.get_str() << " = " << c.get_str() << " = " << d.get_str()
         << " (source model, perturbed source, perturbed target, target model)"
         << (eq ? "" : " [UNEQUAL]");
    rep.weight_chain.push_back(line.str());
  }
  os << "weight chain:\n";
  for (const auto& w : rep.weight_chain) os << "  " << w << "\n";

  rep.holds = linear_ok && chain_ok && norm.status == NormalizeStatus::ok;
  os << "verdict: " << (rep.holds ? "square is coherent" : "square FAILS")
     << "\n";
  rep.text = os.str();
  return rep;
}

}  // namespace qf
