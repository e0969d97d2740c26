#include "qf/model_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qf/poly_io.hpp"

namespace qf {

namespace {

using ordered_json = nlohmann::ordered_json;

std::pair<int, int> offset_to_line_col(const std::string& text, size_t byte) {
  int line = 1, col = 1;
  for (size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

ordered_json parse_json(const std::string& text) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = offset_to_line_col(text, e.byte ? e.byte - 1 : 0);
    throw ParseError("malformed JSON: " + std::string(e.what()), line, col);
  }
}

int require_int(const ordered_json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer())
    throw ValidationError(std::string("missing integer field '") + key + "'");
  return j[key].get<int>();
}

}  // namespace

PerturbedManifold read_manifold(const std::string& text, bool strict_real) {
  ordered_json j = parse_json(text);
  int n = require_int(j, "n");
  if (!j.contains("lambda") || !j["lambda"].is_array())
    throw ValidationError("missing array field 'lambda'");
  std::vector<mpq_class> lambda;
  for (const auto& v : j["lambda"]) {
    if (!v.is_string()) throw ValidationError("lambda entries must be strings");
    lambda.push_back(rational_from_string(v.get<std::string>()));
  }
  auto read_perm = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_array())
      throw ValidationError(std::string("missing array field '") + key + "'");
    std::vector<int> p;
    for (const auto& v : j[key]) {
      if (!v.is_number_integer())
        throw ValidationError(std::string(key) + " entries must be integers");
      p.push_back(v.get<int>() - 1);  // file is 1-based
    }
    return p;
  };
  ModelManifold base =
      make_model(n, std::move(lambda), read_perm("sigma"), read_perm("tau"));
  int d_max = require_int(j, "d_max");
  std::vector<Perturbation> perts;
  if (j.contains("perturbations")) {
    if (!j["perturbations"].is_array())
      throw ValidationError("'perturbations' must be an array");
    for (const auto& pj : j["perturbations"]) {
      Perturbation p;
      p.l = require_int(pj, "l") - 1;
      p.k = require_int(pj, "k");
      if (!pj.contains("poly") || !pj["poly"].is_string())
        throw ValidationError("perturbation missing string field 'poly'");
      p.phi = parse_poly(pj["poly"].get<std::string>(), n);
      perts.push_back(std::move(p));
    }
  }
  return make_perturbed(std::move(base), d_max, std::move(perts), strict_real);
}

PerturbedManifold load_manifold_file(const std::string& path,
                                     bool strict_real) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open manifold file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return read_manifold(ss.str(), strict_real);
}

std::string write_manifold(const PerturbedManifold& pm) {
  ordered_json j;
  j["n"] = pm.base.n;
  ordered_json lam = ordered_json::array();
  for (const auto& q : pm.base.lambda) lam.push_back(q.get_str());
  j["lambda"] = lam;
  ordered_json sig = ordered_json::array(), tau = ordered_json::array();
  for (int v : pm.base.sigma) sig.push_back(v + 1);
  for (int v : pm.base.tau) tau.push_back(v + 1);
  j["sigma"] = sig;
  j["tau"] = tau;
  j["d_max"] = pm.d_max;
  ordered_json perts = ordered_json::array();
  for (const auto& p : pm.perturbations) {
    ordered_json pj;
    pj["l"] = p.l + 1;
    pj["k"] = p.k;
    pj["poly"] = to_string(p.phi);
    perts.push_back(pj);
  }
  j["perturbations"] = perts;
  return j.dump(2) + "\n";
}

}  // namespace qf
