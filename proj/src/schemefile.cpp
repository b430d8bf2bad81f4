#include "frslab/schemefile.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "frslab/errors.hpp"

namespace frslab {

namespace {

using json = nlohmann::ordered_json;

// Integers too wide for a double-safe JSON number are emitted as strings.
json int_to_json(const Int& v) {
  static const Int kBound = Int(1) << 53;
  if (v > -kBound && v < kBound && v.fits_slong_p())
    return json(static_cast<std::int64_t>(v.get_si()));
  return json(v.get_str());
}

Int int_from_json(const json& j, const std::string& what) {
  if (j.is_number_integer()) return Int(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_string()) {
    try {
      return Int(j.get<std::string>(), 10);
    } catch (const std::invalid_argument&) {
      throw invalid_input_error(what + ": malformed integer string");
    }
  }
  throw invalid_input_error(what + ": expected an integer");
}

const json& require_field(const json& j, const char* key,
                          const std::string& where) {
  auto it = j.find(key);
  if (it == j.end())
    throw invalid_input_error(where + ": missing field \"" + key + "\"");
  return *it;
}

void reject_unknown_keys(const json& j, std::set<std::string> allowed,
                         const std::string& where) {
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key))
      throw invalid_input_error(where + ": unknown field \"" + key + "\"");
}

std::vector<std::string> string_list(const json& j, const std::string& what) {
  if (!j.is_array())
    throw invalid_input_error(what + ": expected an array of strings");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string())
      throw invalid_input_error(what + ": expected an array of strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::vector<std::string> canonical_tags(std::vector<std::string> tags) {
  std::sort(tags.begin(), tags.end());
  tags.erase(std::unique(tags.begin(), tags.end()), tags.end());
  return tags;
}

std::size_t size_field(const json& j, const char* key,
                       const std::string& where) {
  const json& v = require_field(j, key, where);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
    throw invalid_input_error(where + ": field \"" + key +
                              "\" must be a nonnegative integer");
  return static_cast<std::size_t>(v.get<std::int64_t>());
}

}  // namespace

std::vector<std::string> ambient_var_names(std::size_t M) {
  std::vector<std::string> names;
  names.reserve(M);
  for (std::size_t i = 1; i <= M; ++i) names.push_back("u" + std::to_string(i));
  return names;
}

std::string scheme_to_json(const SchemePresentation& X, bool include_name) {
  json j;
  if (include_name) j["name"] = X.name;
  j["vars"] = X.vars;
  j["dim_Q"] = X.dim_Q;
  json gens = json::array();
  for (const auto& f : X.generators) gens.push_back(poly_str(f, X.vars));
  j["generators"] = std::move(gens);
  auto tags = canonical_tags(X.tags);
  if (!tags.empty()) j["tags"] = tags;
  if (X.cia) {
    const CIAWitness& w = *X.cia;
    json cj;
    cj["M"] = w.M;
    cj["N"] = w.N;
    const auto ambient = ambient_var_names(w.M);
    json phi = json::array();
    for (const auto& g : w.phi.components) phi.push_back(poly_str(g, ambient));
    cj["phi"] = std::move(phi);
    json psi = json::array();
    for (const auto& g : w.psi) psi.push_back(poly_str(g, X.vars));
    cj["psi"] = std::move(psi);
    if (w.membership) {
      json rows = json::array();
      for (const auto& row : *w.membership) {
        json r = json::array();
        for (const auto& a : row) r.push_back(poly_str(a, X.vars));
        rows.push_back(std::move(r));
      }
      cj["membership"] = std::move(rows);
    }
    j["cia"] = std::move(cj);
  }
  if (X.cover) {
    const CoverCertificate& cc = *X.cover;
    json vj;
    json opens = json::array();
    for (const auto& o : cc.opens) {
      json oj;
      oj["g"] = poly_str(o.g, X.vars);
      oj["c"] = poly_str(o.c, X.vars);
      opens.push_back(std::move(oj));
    }
    vj["opens"] = std::move(opens);
    vj["D"] = int_to_json(cc.D);
    json syz = json::array();
    for (const auto& h : cc.syzygy) syz.push_back(poly_str(h, X.vars));
    vj["syzygy"] = std::move(syz);
    j["cover"] = std::move(vj);
  }
  return j.dump(2);
}

SchemePresentation parse_scheme_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw invalid_input_error(std::string("scheme file: ") + e.what());
  }
  if (!j.is_object())
    throw invalid_input_error("scheme file: top level must be an object");
  reject_unknown_keys(
      j, {"name", "vars", "dim_Q", "generators", "tags", "cia", "cover"},
      "scheme file");

  SchemePresentation X;
  const json& name = require_field(j, "name", "scheme file");
  if (!name.is_string())
    throw invalid_input_error("scheme file: \"name\" must be a string");
  X.name = name.get<std::string>();
  X.vars = string_list(require_field(j, "vars", "scheme file"), "vars");
  if (X.vars.empty())
    throw invalid_input_error("scheme file: \"vars\" must be nonempty");
  const json& dim = require_field(j, "dim_Q", "scheme file");
  if (!dim.is_number_integer())
    throw invalid_input_error("scheme file: \"dim_Q\" must be an integer");
  X.dim_Q = static_cast<int>(dim.get<std::int64_t>());
  for (const auto& s :
       string_list(require_field(j, "generators", "scheme file"),
                   "generators"))
    X.generators.push_back(parse_int_poly(s, X.vars));
  if (j.contains("tags"))
    X.tags = canonical_tags(string_list(j["tags"], "tags"));

  if (j.contains("cia")) {
    const json& cj = j["cia"];
    if (!cj.is_object())
      throw invalid_input_error("cia: expected an object");
    reject_unknown_keys(cj, {"M", "N", "phi", "psi", "membership"}, "cia");
    CIAWitness w;
    w.M = size_field(cj, "M", "cia");
    w.N = size_field(cj, "N", "cia");
    const auto ambient = ambient_var_names(w.M);
    w.phi.source_vars = w.M;
    for (const auto& s : string_list(require_field(cj, "phi", "cia"), "phi"))
      w.phi.components.push_back(parse_rat_poly(s, ambient));
    for (const auto& s : string_list(require_field(cj, "psi", "cia"), "psi"))
      w.psi.push_back(parse_rat_poly(s, X.vars));
    if (cj.contains("membership")) {
      const json& mj = cj["membership"];
      if (!mj.is_array())
        throw invalid_input_error("cia: \"membership\" must be an array");
      std::vector<std::vector<RatPoly>> rows;
      for (const auto& rj : mj) {
        std::vector<RatPoly> row;
        for (const auto& s : string_list(rj, "membership row"))
          row.push_back(parse_rat_poly(s, X.vars));
        rows.push_back(std::move(row));
      }
      w.membership = std::move(rows);
    }
    X.cia = std::move(w);
  }

  if (j.contains("cover")) {
    const json& vj = j["cover"];
    if (!vj.is_object())
      throw invalid_input_error("cover: expected an object");
    reject_unknown_keys(vj, {"opens", "D", "syzygy"}, "cover");
    CoverCertificate cc;
    const json& opens = require_field(vj, "opens", "cover");
    if (!opens.is_array() || opens.empty())
      throw invalid_input_error("cover: \"opens\" must be a nonempty array");
    for (const auto& oj : opens) {
      if (!oj.is_object())
        throw invalid_input_error("cover: each open must be an object");
      reject_unknown_keys(oj, {"g", "c"}, "cover open");
      const json& g = require_field(oj, "g", "cover open");
      const json& c = require_field(oj, "c", "cover open");
      if (!g.is_string() || !c.is_string())
        throw invalid_input_error("cover open: \"g\" and \"c\" must be "
                                  "polynomial strings");
      cc.opens.push_back({parse_int_poly(g.get<std::string>(), X.vars),
                          parse_int_poly(c.get<std::string>(), X.vars)});
    }
    cc.D = int_from_json(require_field(vj, "D", "cover"), "cover D");
    for (const auto& s :
         string_list(require_field(vj, "syzygy", "cover"), "syzygy"))
      cc.syzygy.push_back(parse_int_poly(s, X.vars));
    X.cover = std::move(cc);
  }
  return X;
}

std::string map_to_json(const PolyMap& F) {
  validate(F);
  json j;
  j["source_vars"] = F.source_vars;
  const auto ambient = ambient_var_names(F.source_vars);
  json comps = json::array();
  for (const auto& g : F.components) comps.push_back(poly_str(g, ambient));
  j["components"] = std::move(comps);
  return j.dump(2);
}

PolyMap parse_map_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw invalid_input_error(std::string("map file: ") + e.what());
  }
  if (!j.is_object())
    throw invalid_input_error("map file: top level must be an object");
  reject_unknown_keys(j, {"source_vars", "components"}, "map file");
  PolyMap F;
  F.source_vars = size_field(j, "source_vars", "map file");
  const auto ambient = ambient_var_names(F.source_vars);
  for (const auto& s :
       string_list(require_field(j, "components", "map file"), "components"))
    F.components.push_back(parse_rat_poly(s, ambient));
  validate(F);
  return F;
}

PolyMap load_map_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw invalid_input_error("cannot open map file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_map_json(buf.str());
}

void write_map_file(const std::string& path, const PolyMap& F) {
  std::ofstream out(path, std::ios::trunc);
  if (!out)
    throw invalid_input_error("cannot write map file: " + path);
  out << map_to_json(F) << '\n';
  if (!out)
    throw invalid_input_error("write failed: " + path);
}

SchemePresentation load_scheme_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw invalid_input_error("cannot open scheme file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scheme_json(buf.str());
}

void write_scheme_file(const std::string& path, const SchemePresentation& X) {
  std::ofstream out(path, std::ios::trunc);
  if (!out)
    throw invalid_input_error("cannot write scheme file: " + path);
  out << scheme_to_json(X) << '\n';
  if (!out)
    throw invalid_input_error("write failed: " + path);
}

}  // namespace frslab
