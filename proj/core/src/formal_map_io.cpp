#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qf/formal_map.hpp"
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

int require_int(const ordered_json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer())
    throw ValidationError(std::string("missing integer field '") + key + "'");
  return j[key].get<int>();
}

void read_side(const ordered_json& j, const char* key, FormalMap& fm,
               bool f_side) {
  if (!j.contains(key) || !j[key].is_array())
    throw ValidationError(std::string("missing array field '") + key + "'");
  for (const auto& cj : j[key]) {
    const int comp = require_int(cj, "component") - 1;
    if (comp < 0 || comp >= fm.n_dst)
      throw ValidationError(std::string(key) + " component out of range");
    if (!cj.contains("terms") || !cj["terms"].is_array())
      throw ValidationError(std::string(key) + " component missing 'terms'");
    for (const auto& tj : cj["terms"]) {
      if (!tj.contains("w") || !tj["w"].is_array())
        throw ValidationError("term missing array field 'w'");
      MultiIndex w_exp;
      for (const auto& v : tj["w"]) {
        if (!v.is_number_integer())
          throw ValidationError("'w' entries must be integers");
        w_exp.push_back(v.get<int>());
      }
      if (int(w_exp.size()) != fm.n_src)
        throw ValidationError("'w' exponent length must equal n_src");
      if (!tj.contains("poly") || !tj["poly"].is_string())
        throw ValidationError("term missing string field 'poly'");
      add_map_term(fm, f_side, comp, w_exp,
                   parse_poly(tj["poly"].get<std::string>(), fm.n_src));
    }
  }
}

void write_side(ordered_json& j, const char* key,
                const std::vector<WSeries>& side) {
  ordered_json arr = ordered_json::array();
  for (size_t l = 0; l < side.size(); ++l) {
    ordered_json cj;
    cj["component"] = int(l) + 1;
    // canonical term order: |n| ascending, then n descending lex
    std::vector<MultiIndex> keys;
    for (const auto& [n, p] : side[l]) keys.push_back(n);
    std::sort(keys.begin(), keys.end(),
              [](const MultiIndex& a, const MultiIndex& b) {
                const int da = degree_of(a), db = degree_of(b);
                if (da != db) return da < db;
                return a > b;
              });
    ordered_json terms = ordered_json::array();
    for (const auto& n : keys) {
      ordered_json tj;
      tj["w"] = n;
      tj["poly"] = to_string(side[l].at(n));
      terms.push_back(tj);
    }
    cj["terms"] = terms;
    arr.push_back(cj);
  }
  j[key] = arr;
}

}  // namespace

FormalMap read_map(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = offset_to_line_col(json_text, e.byte ? e.byte - 1 : 0);
    throw ParseError("malformed JSON: " + std::string(e.what()), line, col);
  }
  FormalMap fm;
  fm.n_src = require_int(j, "n_src");
  fm.n_dst = require_int(j, "n_dst");
  fm.d_max = require_int(j, "d_max");
  if (fm.n_src <= 0 || fm.n_dst <= 0)
    throw ValidationError("map dimensions must be positive");
  fm.f.assign(size_t(fm.n_dst), WSeries{});
  fm.g.assign(size_t(fm.n_dst), WSeries{});
  read_side(j, "F", fm, true);
  read_side(j, "G", fm, false);
  validate_map(fm);
  return fm;
}

FormalMap load_map_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open map file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return read_map(ss.str());
}

std::string write_map(const FormalMap& fm) {
  ordered_json j;
  j["n_src"] = fm.n_src;
  j["n_dst"] = fm.n_dst;
  j["d_max"] = fm.d_max;
  write_side(j, "F", fm.f);
  write_side(j, "G", fm.g);
  return j.dump(2) + "\n";
}

}  // namespace qf
