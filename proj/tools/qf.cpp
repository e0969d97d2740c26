// Command-line front end. All mathematics lives in the core library; this
// file only parses arguments, loads inputs, renders text and sets exit codes.

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qf/aux_system.hpp"
#include "qf/block_system.hpp"
#include "qf/fischer.hpp"
#include "qf/formal_map.hpp"
#include "qf/model_io.hpp"
#include "qf/normalize.hpp"
#include "qf/poly_io.hpp"
#include "qf/report.hpp"

namespace {

struct Output {
  std::ostringstream text;
  std::string report_path;

  template <class T>
  Output& operator<<(const T& v) {
    text << v;
    return *this;
  }

  // prints to stdout and, when requested, writes the same bytes to the
  // report file (relative paths live under QF_REPORT_DIR when that is set)
  void flush() {
    const std::string s = text.str();
    std::cout << s;
    if (report_path.empty()) return;
    std::string path = report_path;
    if (const char* dir = std::getenv("QF_REPORT_DIR");
        dir && *dir && path.front() != '/')
      path = std::string(dir) + "/" + path;
    qf::atomic_write_file(path, s);
  }
};

std::string file_stamp(const std::string& path) {
  return path + " (hash " + qf::hash_hex(qf::read_file(path)) + ")";
}

qf::MultiIndex parse_z_monomial(const std::string& text, int n) {
  const qf::Poly p = qf::parse_poly(text, n);
  if (p.terms().size() != 1)
    throw qf::ValidationError("expected a single monomial: " + text);
  const auto& [e, c] = *p.terms().begin();
  if (c != qf::Scalar(1))
    throw qf::ValidationError("monomial must have coefficient 1: " + text);
  qf::MultiIndex idx = qf::holo_part(e);
  if (qf::degree_of(qf::anti_part(e)) != 0)
    throw qf::ValidationError("monomial must not use conjugate variables: " +
                              text);
  return idx;
}

qf::FormalMap load_map_arg(const std::string& arg, int n_src, int n_dst,
                           int degree, Output& out) {
  if (arg == "standard") {
    out << "map: standard embedding\n";
    return qf::standard_embedding(n_src, n_dst, degree);
  }
  out << "map: " << file_stamp(arg) << "\n";
  return qf::load_map_file(arg);
}

void print_certificate(Output& out, const qf::SolverCertificate& cert) {
  out << "certificate: dimension " << cert.dimension << ", rank " << cert.rank
      << ", nullity " << cert.nullity << ", input hash " << cert.input_hash
      << "\n";
}

int run_decompose(const std::string& manifold, const std::string& poly_text,
                  int l_opt, Output& out) {
  const qf::PerturbedManifold pm = qf::load_manifold_file(manifold);
  const qf::Poly p = qf::parse_poly(poly_text, pm.base.n);
  out << "qf decompose\nmanifold: " << file_stamp(manifold) << "\n";
  out << "input: " << qf::to_string(p) << "\n";
  try {
    if (l_opt > 0) {
      const auto dec = qf::fischer_decompose_single(p, pm.base, l_opt - 1);
      out << "quadric: q_" << l_opt << "\n";
      out << "A = " << qf::to_string(dec.quotient) << "\n";
      out << "C = " << qf::to_string(dec.remainder) << "\n";
      print_certificate(out, dec.cert);
    } else {
      const auto dec = qf::fischer_decompose_joint(p, pm.base);
      for (size_t k = 0; k < dec.coeffs.size(); ++k)
        out << "A_" << (k + 1) << " = " << qf::to_string(dec.coeffs[k])
            << "\n";
      out << "C = " << qf::to_string(dec.remainder) << "\n";
      print_certificate(out, dec.cert);
    }
  } catch (const qf::DecompositionFailure& e) {
    out << "decomposition failed: " << e.what() << "\n";
    out << "witness: " << qf::to_string(e.witness) << "\n";
    out.flush();
    return 1;
  }
  out.flush();
  return 0;
}

int run_chain(const std::string& manifold, const std::string& poly_text,
              int l, const std::string& flavor,
              const std::vector<std::string>& excluded, Output& out) {
  const qf::PerturbedManifold pm = qf::load_manifold_file(manifold);
  const qf::Poly p = qf::parse_poly(poly_text, pm.base.n);
  const qf::ChainFlavor fl =
      flavor == "f" ? qf::ChainFlavor::f_type : qf::ChainFlavor::g_type;
  out << "qf chain\nmanifold: " << file_stamp(manifold) << "\n";
  out << "input: " << qf::to_string(p) << "\nflavor: " << flavor
      << ", quadric q_" << l << "\n";
  const qf::DecompChain chain = qf::nested_chain(p, pm.base, l - 1, fl);
  for (size_t r = 0; r < chain.ladder.size(); ++r) {
    const auto& rung = chain.ladder[r];
    out << "rung " << (r + 1) << ":\n";
    out << "  remainder = " << qf::to_string(rung.remainder) << "\n";
    out << "  continue  = " << qf::to_string(rung.p_part) << "\n";
    for (size_t b = 0; b < rung.basis.size(); ++b) {
      const auto& el = rung.basis[b];
      out << "  basis[" << (b + 1) << "]"
          << (el.conjugated ? " (conjugate)" : "");
      if (el.border >= 0) out << " border " << (el.border + 1);
      out << " idx";
      for (int v : el.idx) out << " " << v;
      out << ": coeff " << qf::to_string(rung.combo[b]) << "\n";
    }
    out << "  residual  = " << qf::to_string(rung.residual) << "\n";
  }
  print_certificate(out, chain.cert);
  int code = 0;
  if (!excluded.empty()) {
    std::vector<qf::MultiIndex> excl;
    for (const auto& s : excluded)
      excl.push_back(parse_z_monomial(s, pm.base.n));
    const auto mem =
        qf::project_normalization_space(p, pm.base, l - 1, fl, excl);
    out << "membership (excluding " << excl.size()
        << " index(es)): " << (mem.is_member ? "member" : "NOT a member")
        << "\n";
    out << "defect = " << qf::to_string(mem.defect) << "\n";
    code = mem.is_member ? 0 : 1;
  }
  out.flush();
  return code;
}

int run_kernel(const std::string& manifold, int degree, Output& out) {
  const qf::PerturbedManifold pm = qf::load_manifold_file(manifold);
  out << "qf kernel\nmanifold: " << file_stamp(manifold) << "\n";
  out << "degree: " << degree << "\n";
  const auto basis = qf::kernel_basis(pm.base, degree);
  out << "dimension: " << basis.size() << "\n";
  for (size_t k = 0; k < basis.size(); ++k)
    out << "b_" << (k + 1) << " = " << qf::to_string(basis[k]) << "\n";
  out.flush();
  return 0;
}

int run_dump_system(const std::string& manifold, const std::string& target,
                    Output& out) {
  const qf::PerturbedManifold pm = qf::load_manifold_file(manifold);
  const qf::MultiIndex tgt = parse_z_monomial(target, pm.base.n);
  out << "qf dump-system\nmanifold: " << file_stamp(manifold) << "\n";
  const qf::BlockSystem sys = qf::assemble_block_system(pm.base, tgt);
  out << sys.dump();
  out.flush();
  return 0;
}

int run_audit(const std::string& manifold, int degree, Output& out) {
  const qf::PerturbedManifold pm = qf::load_manifold_file(manifold);
  out << "qf audit-invertibility\nmanifold: " << file_stamp(manifold) << "\n";
  const auto rep = qf::verify_invertibility(pm.base, degree);
  out << rep.text;
  out.flush();
  return (rep.nonzero_plus && rep.nonzero_minus) ? 0 : 1;
}

int run_verify(const std::string& manifold, const std::string& target,
               const std::string& map_arg, int degree, Output& out) {
  const qf::PerturbedManifold src = qf::load_manifold_file(manifold);
  const qf::PerturbedManifold dst = qf::load_manifold_file(target);
  out << "qf verify\nsource: " << file_stamp(manifold) << "\n";
  out << "target: " << file_stamp(target) << "\n";
  const qf::FormalMap fm =
      load_map_arg(map_arg, src.base.n, dst.base.n, degree, out);
  const auto chk = qf::verify_embedding_equation(fm, src, dst, degree);
  out << "degree: " << degree << "\n";
  for (size_t l = 0; l < chk.residuals.size(); ++l)
    out << "residual[" << (l + 1)
        << "] = " << qf::to_string(chk.residuals[l]) << "\n";
  out << "linear rank: " << (chk.linear_rank_ok ? "full" : "DEGENERATE")
      << "\n";
  out << "mapping equation: " << (chk.holds ? "holds" : "FAILS") << "\n";
  out.flush();
  return chk.holds && chk.linear_rank_ok ? 0 : 1;
}

int run_normalize(const std::string& manifold, const std::string& target,
                  const std::string& map_arg, int degree, Output& out) {
  const qf::PerturbedManifold src = qf::load_manifold_file(manifold);
  const qf::PerturbedManifold dst = qf::load_manifold_file(target);
  out << "qf normalize\nsource: " << file_stamp(manifold) << "\n";
  out << "target: " << file_stamp(target) << "\n";
  const qf::FormalMap fm =
      load_map_arg(map_arg, src.base.n, dst.base.n, degree, out);
  const auto res = qf::normalize_to_degree(fm, src, dst, degree);
  out << res.text;
  out << "normalized map:\n" << qf::write_map(res.map);
  out.flush();
  return res.status == qf::NormalizeStatus::ok ? 0 : 1;
}

int run_theorem_a(const std::string& manifold, const std::string& target,
                  const std::string& map_arg, int degree, Output& out) {
  const qf::PerturbedManifold src = qf::load_manifold_file(manifold);
  const qf::PerturbedManifold dst = qf::load_manifold_file(target);
  out << "qf theorem-a\nsource: " << file_stamp(manifold) << "\n";
  out << "target: " << file_stamp(target) << "\n";
  const qf::FormalMap fm =
      load_map_arg(map_arg, src.base.n, dst.base.n, degree, out);
  const auto rep = qf::check_theorem_A(fm, src, dst, degree);
  out << rep.text;
  out.flush();
  return rep.holds ? 0 : 1;
}

int run_theorem_b(const std::string& src_tilde, const std::string& src_model,
                  const std::string& dst_tilde, const std::string& dst_model,
                  const std::string& top, const std::string& left,
                  const std::string& right, int degree, Output& out) {
  out << "qf theorem-b\n";
  out << "source (perturbed): " << file_stamp(src_tilde) << "\n";
  out << "source (model):     " << file_stamp(src_model) << "\n";
  out << "target (perturbed): " << file_stamp(dst_tilde) << "\n";
  out << "target (model):     " << file_stamp(dst_model) << "\n";
  out << "top: " << file_stamp(top) << "\nleft: " << file_stamp(left)
      << "\nright: " << file_stamp(right) << "\n";
  const auto st = qf::load_manifold_file(src_tilde);
  const auto sm = qf::load_manifold_file(src_model);
  const auto dt = qf::load_manifold_file(dst_tilde);
  const auto dm = qf::load_manifold_file(dst_model);
  const auto rep = qf::check_theorem_B(
      qf::load_map_file(top), qf::load_map_file(left),
      qf::load_map_file(right), st, sm, dt, dm, degree);
  out << rep.text;
  out.flush();
  return rep.holds ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact Fischer decompositions and embedding normal forms "
               "for quadric models"};
  app.require_subcommand(1);

  std::string manifold, target_manifold, poly_text, map_arg = "standard";
  std::string target_monomial, flavor = "g", report;
  std::string b_src_tilde, b_src_model, b_dst_tilde, b_dst_model;
  std::string b_top, b_left, b_right;
  std::vector<std::string> excluded;
  int degree = 5;
  int l_index = 0;

  auto add_report = [&](CLI::App* cmd) {
    cmd->add_option("--report", report,
                    "also write the output to this file (atomic)");
  };

  CLI::App* dec = app.add_subcommand(
      "decompose", "Fischer decomposition against one or all quadrics");
  dec->add_option("--manifold", manifold, "manifold JSON file")->required();
  dec->add_option("--poly", poly_text, "homogeneous input polynomial")
      ->required();
  dec->add_option("--l", l_index, "1-based quadric index (joint when absent)");
  add_report(dec);

  CLI::App* chn = app.add_subcommand(
      "chain", "iterated decomposition ladder against one quadric");
  chn->add_option("--manifold", manifold, "manifold JSON file")->required();
  chn->add_option("--poly", poly_text, "homogeneous input polynomial")
      ->required();
  chn->add_option("--l", l_index, "1-based quadric index")->required();
  chn->add_option("--flavor", flavor, "g or f")
      ->check(CLI::IsMember({"g", "f"}));
  chn->add_option("--exclude", excluded,
                  "pure-z monomial index excluded from the projection span");
  add_report(chn);

  CLI::App* ker = app.add_subcommand(
      "kernel", "basis of the joint trace kernel in one degree");
  ker->add_option("--manifold", manifold, "manifold JSON file")->required();
  ker->add_option("--degree", degree, "homogeneity degree")->required();
  add_report(ker);

  CLI::App* dmp = app.add_subcommand(
      "dump-system", "layered banded system for one target monomial");
  dmp->add_option("--manifold", manifold, "manifold JSON file")->required();
  dmp->add_option("--target", target_monomial, "pure-z target monomial")
      ->required();
  add_report(dmp);

  CLI::App* aud = app.add_subcommand(
      "audit-invertibility", "determinant audit of the correction operators");
  aud->add_option("--manifold", manifold, "manifold JSON file")->required();
  aud->add_option("--degree", degree, "correction degree (default 5)");
  add_report(aud);

  auto add_map_opts = [&](CLI::App* cmd) {
    cmd->add_option("--manifold", manifold, "source manifold JSON file")
        ->required();
    cmd->add_option("--target", target_manifold, "target manifold JSON file")
        ->required();
    cmd->add_option("--map", map_arg, "map JSON file or 'standard'");
    cmd->add_option("--degree", degree, "working degree (default 5)");
    add_report(cmd);
  };
  CLI::App* ver =
      app.add_subcommand("verify", "check the mapping equation of a map");
  add_map_opts(ver);
  CLI::App* nrm = app.add_subcommand(
      "normalize", "normalize a map degree by degree");
  add_map_opts(nrm);
  CLI::App* tha = app.add_subcommand(
      "theorem-a", "rigidity: normal form must be the standard embedding");
  add_map_opts(tha);

  CLI::App* thb = app.add_subcommand(
      "theorem-b", "commuting square and weight chain check");
  thb->add_option("--src-tilde", b_src_tilde, "perturbed source manifold")
      ->required();
  thb->add_option("--src-model", b_src_model, "source model manifold")
      ->required();
  thb->add_option("--dst-tilde", b_dst_tilde, "perturbed target manifold")
      ->required();
  thb->add_option("--dst-model", b_dst_model, "target model manifold")
      ->required();
  thb->add_option("--top", b_top, "map between the perturbed manifolds")
      ->required();
  thb->add_option("--left", b_left, "map from perturbed source to its model")
      ->required();
  thb->add_option("--right", b_right, "map from perturbed target to its model")
      ->required();
  thb->add_option("--degree", degree, "working degree (default 5)");
  add_report(thb);

  CLI11_PARSE(app, argc, argv);

  Output out;
  out.report_path = report;
  try {
    if (dec->parsed())
      return run_decompose(manifold, poly_text, l_index, out);
    if (chn->parsed())
      return run_chain(manifold, poly_text, l_index, flavor, excluded, out);
    if (ker->parsed()) return run_kernel(manifold, degree, out);
    if (dmp->parsed()) return run_dump_system(manifold, target_monomial, out);
    if (aud->parsed()) return run_audit(manifold, degree, out);
    if (ver->parsed())
      return run_verify(manifold, target_manifold, map_arg, degree, out);
    if (nrm->parsed())
      return run_normalize(manifold, target_manifold, map_arg, degree, out);
    if (tha->parsed())
      return run_theorem_a(manifold, target_manifold, map_arg, degree, out);
    if (thb->parsed())
      return run_theorem_b(b_src_tilde, b_src_model, b_dst_tilde, b_dst_model,
                           b_top, b_left, b_right, degree, out);
  } catch (const qf::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const qf::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
