// frslab command line: exact point counts of affine schemes over finite
// local rings, normalized-count towers, boundedness classification,
// integral-model constructions, and p-adic measure utilities.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "frslab/asymptotics.hpp"
#include "frslab/cache.hpp"
#include "frslab/constructions.hpp"
#include "frslab/count.hpp"
#include "frslab/errors.hpp"
#include "frslab/limits.hpp"
#include "frslab/numeric.hpp"
#include "frslab/padic.hpp"
#include "frslab/poly.hpp"
#include "frslab/ring.hpp"
#include "frslab/scheme.hpp"
#include "frslab/schemefile.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace frslab;

struct GlobalOpts {
  std::string cache_flag;
  bool no_cache = false;
  Limits lim;
};

Engine parse_engine(const std::string& s) {
  if (s == "auto" || s == "automatic") return Engine::automatic;
  if (s == "naive") return Engine::naive;
  if (s == "lifted") return Engine::lifted;
  throw invalid_input_error("unknown engine: " + s);
}

Rat parse_rat(const std::string& s) {
  try {
    Rat q(s, 10);
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator");
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw invalid_input_error("not a rational number: " + s);
  }
}

Int parse_int(const std::string& s) {
  try {
    return Int(s, 10);
  } catch (const std::invalid_argument&) {
    throw invalid_input_error("not an integer: " + s);
  }
}

std::vector<std::uint64_t> parse_primes(const std::string& csv) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(item, &used);
    } catch (const std::exception&) {
      throw invalid_input_error("not a prime list entry: " + item);
    }
    if (used != item.size())
      throw invalid_input_error("not a prime list entry: " + item);
    out.push_back(v);
  }
  if (out.empty()) throw invalid_input_error("empty prime list");
  return out;
}

SchemePresentation load_and_check(const std::string& path) {
  SchemePresentation X = load_scheme_file(path);
  auto findings = validate(X);
  if (!findings.empty()) {
    for (const auto& f : findings) std::cerr << "validation: " << f << "\n";
    throw invalid_input_error("scheme file failed validation: " + path);
  }
  return X;
}

Rat h_of_count(const Int& count, std::uint64_t p, int r, int n, int dim) {
  const Int card = pow_uint(p, static_cast<unsigned long>(r) * n);
  return Rat(count) / Rat(pow_int(card, static_cast<unsigned long>(dim)));
}

const char* kCountHeader = "scheme,p,r,n,count,h_num,h_den,method,seconds\n";

void print_count_row(std::ostream& os, const std::string& name,
                     std::uint64_t p, int r, int n,
                     const std::optional<CountRecord>& rec, int dim) {
  os << name << "," << p << "," << r << "," << n << ",";
  if (rec) {
    const Rat h = h_of_count(rec->count, p, r, n, dim);
    os << rec->count.get_str() << "," << h.get_num().get_str() << ","
       << h.get_den().get_str() << "," << rec->method << ",";
  } else {
    os << ",,,LIMIT,";
  }
  os << "\n";
}

// Counts one cell, consulting the cache first unless disabled. The cached
// engine tag is reported verbatim so cached and fresh runs print the same
// bytes.
CountRecord counted_cell(const GlobalOpts& g, const SchemePresentation& X,
                         const std::string& hash, std::uint64_t p, int r,
                         int n, Engine eng) {
  const std::string key = cache_key(hash, p, r, n);
  std::string dir;
  if (!g.no_cache) {
    dir = resolve_cache_dir(g.cache_flag);
    if (auto hit = cache_read(dir, key)) return *hit;
  }
  LocalRing R(p, n, r);
  CountRecord rec = count_scheme(X, R, eng, g.lim);
  if (!g.no_cache) cache_write(dir, key, rec);
  return rec;
}

int run_count(const GlobalOpts& g, const std::string& path, std::uint64_t p,
              int r, int n, const std::string& engine) {
  const SchemePresentation X = load_and_check(path);
  const Engine eng = parse_engine(engine);
  const auto t0 = std::chrono::steady_clock::now();
  const CountRecord rec = counted_cell(g, X, scheme_hash(X), p, r, n, eng);
  const std::chrono::duration<double> dt =
      std::chrono::steady_clock::now() - t0;
  std::cout << kCountHeader;
  print_count_row(std::cout, X.name, p, r, n, rec, X.dim_Q);
  std::cerr << "# elapsed " << std::fixed << std::setprecision(3) << dt.count()
            << "s\n";
  return 0;
}

int run_hseq(const GlobalOpts& g, const std::string& path, std::uint64_t p,
             int r, int n_max, const std::string& engine) {
  const SchemePresentation X = load_and_check(path);
  const Engine eng = parse_engine(engine);
  if (n_max < 1) throw invalid_input_error("nmax must be at least 1");
  const std::string hash = scheme_hash(X);
  const auto t0 = std::chrono::steady_clock::now();
  std::cout << kCountHeader;
  for (int n = 1; n <= n_max; ++n) {
    std::optional<CountRecord> rec;
    try {
      rec = counted_cell(g, X, hash, p, r, n, eng);
    } catch (const resource_limit_error& e) {
      std::cerr << "# level " << n << " hit a resource cap: " << e.what()
                << "\n";
    }
    print_count_row(std::cout, X.name, p, r, n, rec, X.dim_Q);
  }
  const std::chrono::duration<double> dt =
      std::chrono::steady_clock::now() - t0;
  std::cerr << "# elapsed " << std::fixed << std::setprecision(3) << dt.count()
            << "s\n";
  return 0;
}

std::string join_primes(const std::vector<std::uint64_t>& ps) {
  std::string s;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(ps[i]);
  }
  return s;
}

const ClassificationReport::GrowthRow* find_growth(
    const ClassificationReport& rep, std::uint64_t p, int r) {
  for (const auto& row : rep.growth)
    if (row.p == p && row.r == r) return &row;
  return nullptr;
}

void print_classify_markdown(const ClassificationReport& rep,
                             const SmoothStabilityReport* stab, int n_max) {
  std::ostream& os = std::cout;
  os << "# " << rep.scheme_name << "\n\n";
  os << "- hash: " << rep.scheme_hash << "\n";
  os << "- grid: p in {" << join_primes(rep.grid.primes) << "}; r in {";
  for (std::size_t i = 0; i < rep.grid.r_values.size(); ++i)
    os << (i ? ", " : "") << rep.grid.r_values[i];
  os << "}; n = 1.." << rep.grid.n_max << "\n";
  os << "- tau: " << rat_str(rep.tau) << "\n";
  os << "- overall: " << rep.overall << "\n";
  os << "- " << rep.cond_iii_statement << "\n";

  os << "\n## limit test along primes (n = " << rep.cond_i.n << ")\n\n";
  if (!rep.cond_i_ran) {
    os << "skipped: needs at least three primes with r = 1\n";
  } else {
    os << "| p | h | distance |\n|---|---|----------|\n";
    for (std::size_t i = 0; i < rep.cond_i.primes.size(); ++i)
      os << "| " << rep.cond_i.primes[i] << " | " << rat_str(rep.cond_i.h[i])
         << " | " << rat_str(rep.cond_i.distance[i]) << " |\n";
    os << "\nverdict: " << rep.cond_i.verdict << "\n";
  }

  os << "\n## square-root envelope over the grid\n\n";
  if (!rep.cond_ii_ran) {
    os << "skipped\n";
  } else {
    os << "- c2_fit = " << rat_str(rep.cond_ii.c2_fit) << " at (p, n) = ("
       << rep.cond_ii.witness_p << ", " << rep.cond_ii.witness_n << ")\n";
    os << "- c_fit ~ " << rat_str(rep.cond_ii.c_fit)
       << " (dyadic square root, 20 fractional bits)\n\n";
    os << "| p | s_final | s_tail_min | complete | flag |\n";
    os << "|---|---------|------------|----------|------|\n";
    for (const auto& row : rep.cond_ii.rows)
      os << "| " << row.p << " | " << rat_str(row.s_final) << " | "
         << rat_str(row.s_tail_min) << " | "
         << (row.tail_complete ? "true" : "false") << " | " << row.flag
         << " |\n";
    os << "\nverdict: " << rep.cond_ii.verdict << "\n";
  }

  os << "\n## towers\n\n";
  os << "| p | r | verdict | h(n_max) | sup h | tail min | monotone tail | "
        "alpha | max residual | fit points |\n";
  os << "|---|---|---------|----------|-------|----------|---------------|"
        "-------|--------------|------------|\n";
  for (const auto& b : rep.cond_iv_prime) {
    os << "| " << b.p << " | " << b.r << " | " << b.verdict << " | "
       << rat_str(b.final_h) << " | " << rat_str(b.sup_h) << " | "
       << rat_str(b.tail_min) << " | " << (b.tail_monotone ? "true" : "false")
       << " | ";
    const auto* gr = find_growth(rep, b.p, b.r);
    if (gr != nullptr && gr->ok)
      os << rat_str(gr->fit.alpha) << " | " << rat_str(gr->fit.max_abs_residual)
         << " | " << gr->fit.points << " |\n";
    else
      os << "- | - | - |\n";
  }

  os << "\n## per-prime summary\n\n| p | verdict |\n|---|---------|\n";
  for (const auto& row : rep.cond_v)
    os << "| " << row.p << " | " << row.verdict << " |\n";

  if (stab != nullptr) {
    os << "\n## level stability across primes (n <= " << n_max << ")\n\n";
    if (stab->exceptional.empty()) {
      os << "no exceptional primes on this grid\n";
    } else {
      os << "exceptional primes: ";
      for (std::size_t i = 0; i < stab->exceptional.size(); ++i)
        os << (i ? ", " : "") << stab->exceptional[i];
      os << "\n";
    }
    os << "\n| p | complete | stable | first bad n | h at n=1 | h there |\n";
    os << "|---|----------|--------|-------------|----------|---------|\n";
    for (const auto& row : stab->rows) {
      os << "| " << row.p << " | " << (row.complete ? "true" : "false")
         << " | " << (row.stable ? "true" : "false") << " | ";
      if (row.stable)
        os << "- | " << rat_str(row.h_base) << " | - |\n";
      else
        os << row.first_bad_n << " | " << rat_str(row.h_base) << " | "
           << rat_str(row.h_bad) << " |\n";
    }
  }

  os << "\n## caveats\n\n";
  for (const auto& c : rep.caveats) os << "- " << c << "\n";
}

void print_classify_csv(const ClassificationReport& rep,
                        const SmoothStabilityReport* stab) {
  std::ostream& os = std::cout;
  os << "# scheme," << rep.scheme_name << "\n";
  os << "# hash," << rep.scheme_hash << "\n";
  os << "# overall," << rep.overall << "\n";
  os << "# cond_i," << (rep.cond_i_ran ? rep.cond_i.verdict : "skipped")
     << "\n";
  os << "# cond_ii," << (rep.cond_ii_ran ? rep.cond_ii.verdict : "skipped")
     << "\n";
  os << "# cond_iii," << rep.cond_iii_statement << "\n";
  if (stab != nullptr)
    for (const auto& p : stab->exceptional)
      os << "# exceptional_prime," << p << "\n";
  for (const auto& c : rep.caveats) os << "# caveat," << c << "\n";
  os << "p,r,verdict,final_h,sup_h,tail_min,tail_monotone,tail_complete,"
        "alpha,intercept,max_abs_residual,fit_points\n";
  for (const auto& b : rep.cond_iv_prime) {
    os << b.p << "," << b.r << "," << b.verdict << "," << rat_str(b.final_h)
       << "," << rat_str(b.sup_h) << "," << rat_str(b.tail_min) << ","
       << (b.tail_monotone ? "true" : "false") << ","
       << (b.tail_complete ? "true" : "false") << ",";
    const auto* gr = find_growth(rep, b.p, b.r);
    if (gr != nullptr && gr->ok)
      os << rat_str(gr->fit.alpha) << "," << rat_str(gr->fit.intercept) << ","
         << rat_str(gr->fit.max_abs_residual) << "," << gr->fit.points;
    else
      os << ",,,";
    os << "\n";
  }
}

int run_classify(const GlobalOpts& g, const std::string& path,
                 const std::string& primes_csv, int r_max, int n_max,
                 const std::string& tau_str, int tail_steps,
                 const std::string& format, const std::string& engine) {
  if (format != "markdown" && format != "csv")
    throw invalid_input_error("format must be markdown or csv");
  const SchemePresentation X = load_and_check(path);
  const Engine eng = parse_engine(engine);
  const Rat tau = parse_rat(tau_str);
  if (r_max < 1) throw invalid_input_error("rmax must be at least 1");
  GridSpec grid;
  grid.primes = parse_primes(primes_csv);
  grid.r_values.resize(static_cast<std::size_t>(r_max));
  std::iota(grid.r_values.begin(), grid.r_values.end(), 1);
  grid.n_max = n_max;

  const ClassificationReport rep =
      classify(X, grid, tau, eng, g.lim, tail_steps);
  std::optional<SmoothStabilityReport> stab;
  if (std::count(X.tags.begin(), X.tags.end(), "smooth") > 0)
    stab = test_smooth_stability(X, grid.primes, n_max, eng, g.lim);

  if (format == "csv")
    print_classify_csv(rep, stab ? &*stab : nullptr);
  else
    print_classify_markdown(rep, stab ? &*stab : nullptr, n_max);
  return 0;
}

PolyMap morphism_as_map(const HatScheme& hs) {
  PolyMap pm;
  pm.source_vars = hs.base.vars.size();
  for (const auto& f : hs.morphism) pm.components.push_back(to_rat(f));
  return pm;
}

void write_out_file(const std::string& dir, const std::string& name,
                    const std::string& body) {
  std::filesystem::create_directories(dir);
  const std::string path = dir + "/" + name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw invalid_input_error("cannot write " + path);
  out << body;
  out.close();
  std::cerr << "# wrote " << path << "\n";
}

int run_construct(const GlobalOpts&, const std::string& path,
                  const std::string& action, const std::string& const_str,
                  const std::string& out_dir) {
  const SchemePresentation X = load_scheme_file(path);

  if (action == "scale") {
    if (const_str.empty())
      throw invalid_input_error("scale needs a scaling constant K");
    auto findings = validate(X);
    if (!findings.empty()) {
      for (const auto& f : findings) std::cerr << "validation: " << f << "\n";
      throw invalid_input_error("scheme file failed validation: " + path);
    }
    const ScaledModel sm = scale_model(X, parse_int(const_str));
    if (out_dir.empty())
      std::cout << scheme_to_json(sm.result) << "\n";
    else
      write_out_file(out_dir, sm.result.name + ".json",
                     scheme_to_json(sm.result) + "\n");
    return 0;
  }

  if (action == "hat") {
    if (!const_str.empty())
      throw invalid_input_error("hat takes no constant argument");
    if (!X.cia.has_value())
      throw certificate_error("scheme has no flat-map witness (cia block)");
    const HatScheme hs = cia_hat(X);
    const PolyMap pm = morphism_as_map(hs);
    if (out_dir.empty()) {
      json j;
      j["hat"] = json::parse(scheme_to_json(hs.hat));
      j["morphism"] = json::parse(map_to_json(pm));
      std::cout << j.dump(2) << "\n";
    } else {
      write_out_file(out_dir, hs.hat.name + ".json",
                     scheme_to_json(hs.hat) + "\n");
      write_out_file(out_dir, hs.hat.name + "-morphism.json",
                     map_to_json(pm) + "\n");
    }
    return 0;
  }

  if (action == "patch") {
    if (!X.cover.has_value())
      throw certificate_error("scheme has no cover certificate");
    const Int P = const_str.empty() ? Int(1) : parse_int(const_str);
    const PatchedCover pc = lci_patch(X, P);
    json meta;
    meta["P"] = pc.P.get_str();
    meta["N_bound"] = pc.N_bound.get_str();
    if (out_dir.empty()) {
      json j;
      j["P"] = pc.P.get_str();
      j["N_bound"] = pc.N_bound.get_str();
      j["patches"] = json::array();
      for (const auto& U : pc.patches)
        j["patches"].push_back(json::parse(scheme_to_json(U)));
      std::cout << j.dump(2) << "\n";
    } else {
      meta["patches"] = json::array();
      for (const auto& U : pc.patches) {
        write_out_file(out_dir, U.name + ".json", scheme_to_json(U) + "\n");
        meta["patches"].push_back(U.name);
      }
      write_out_file(out_dir, pc.base.name + "-patch-meta.json",
                     meta.dump(2) + "\n");
    }
    return 0;
  }

  throw invalid_input_error("unknown construction: " + action +
                            " (expected scale, hat, or patch)");
}

BallUnion parse_ball_union_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw invalid_input_error(std::string("bad ball-union JSON: ") + e.what());
  }
  if (!j.is_object() || j.size() != 3 || !j.contains("p") ||
      !j.contains("dim") || !j.contains("balls"))
    throw invalid_input_error(
        "ball-union file needs exactly the keys p, dim, balls");
  if (!j["p"].is_number_unsigned() || !j["dim"].is_number_unsigned() ||
      !j["balls"].is_array())
    throw invalid_input_error("ball-union file has wrong field types");
  const std::uint64_t p = j["p"].get<std::uint64_t>();
  const std::size_t dim = j["dim"].get<std::size_t>();
  if (dim < 1) throw invalid_input_error("dim must be at least 1");
  BallUnion U;
  for (const auto& jb : j["balls"]) {
    if (!jb.is_object() || jb.size() != 2 || !jb.contains("center") ||
        !jb.contains("radius_exp"))
      throw invalid_input_error(
          "each ball needs exactly the keys center, radius_exp");
    if (!jb["center"].is_array() || jb["center"].size() != dim)
      throw invalid_input_error("ball center must list dim coordinates");
    Ball b;
    b.p = p;
    b.dim = dim;
    for (const auto& c : jb["center"]) {
      if (c.is_number_integer())
        b.center.emplace_back(static_cast<long>(c.get<std::int64_t>()));
      else if (c.is_string())
        b.center.push_back(parse_int(c.get<std::string>()));
      else
        throw invalid_input_error("ball centers are integers or strings");
    }
    if (!jb["radius_exp"].is_number_integer())
      throw invalid_input_error("radius_exp must be an integer");
    b.radius_exp = jb["radius_exp"].get<int>();
    U.balls.push_back(std::move(b));
  }
  return U;
}

BallUnion load_ball_union_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw invalid_input_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_ball_union_text(buf.str());
}

BallUnion origin_ball(std::uint64_t p, std::size_t dim, int radius_exp) {
  Ball b;
  b.p = p;
  b.dim = dim;
  b.center.assign(dim, Int(0));
  b.radius_exp = radius_exp;
  return BallUnion{{b}};
}

int run_measure(const GlobalOpts& g, const std::string& mode,
                const std::string& map_path, const std::string& family,
                std::uint64_t p, int n_max, int dim_flag) {
  const bool needs_map = (mode == "pushforward" || mode == "ratio");
  if (mode != "pushforward" && mode != "ratio" && mode != "eccentricity")
    throw invalid_input_error(
        "unknown measure mode: " + mode +
        " (expected pushforward, ratio, or eccentricity)");
  if (needs_map && map_path.empty())
    throw invalid_input_error(mode + " needs --map");
  if (!needs_map && !map_path.empty())
    throw invalid_input_error("--map does not apply to eccentricity");
  if (dim_flag != 0 && family != "balls")
    throw invalid_input_error("--dim applies to the balls family only");
  if (dim_flag < 0) throw invalid_input_error("dim must be positive");
  if (n_max < 1) throw invalid_input_error("nmax must be at least 1");

  PolyMap F;
  if (needs_map) F = load_map_file(map_path);

  const bool family_is_file =
      (family != "balls" && family != "counterexample");
  BallUnion file_union;
  std::size_t dim = 1;
  if (family == "balls")
    dim = dim_flag > 0 ? static_cast<std::size_t>(dim_flag)
                       : (needs_map ? F.components.size() : 1);
  else if (family_is_file) {
    file_union = load_ball_union_file(family);
    if (file_union.balls.empty())
      throw invalid_input_error("ball-union file lists no balls");
    dim = file_union.balls[0].dim;
    p = file_union.balls[0].p;
  }

  const auto member = [&](int n) -> BallUnion {
    if (family == "balls") return origin_ball(p, dim, n);
    if (family == "counterexample") return counterexample_family(p, n);
    return file_union;
  };

  if (mode == "pushforward") {
    std::cout << "n,mass_num,mass_den\n";
    const int lo = family_is_file ? 0 : (family == "balls" ? 0 : 1);
    const int hi = family_is_file ? 0 : n_max;
    for (int n = lo; n <= hi; ++n) {
      const Rat mass = pushforward_mass(F, member(n), g.lim);
      std::cout << n << "," << mass.get_num().get_str() << ","
                << mass.get_den().get_str() << "\n";
    }
    return 0;
  }

  if (mode == "ratio") {
    const int steps = family_is_file ? 1 : n_max;
    const auto entries = boundedness_ratio(F, member, steps, g.lim);
    std::cout << "n,mass_num,mass_den,measure_num,measure_den,ratio_num,"
                 "ratio_den,ok\n";
    for (const auto& e : entries) {
      std::cout << e.n << ",";
      if (e.ok)
        std::cout << e.mass.get_num().get_str() << ","
                  << e.mass.get_den().get_str() << ","
                  << e.measure.get_num().get_str() << ","
                  << e.measure.get_den().get_str() << ","
                  << e.ratio.get_num().get_str() << ","
                  << e.ratio.get_den().get_str() << ",true\n";
      else
        std::cout << ",,,,,,false\n";
    }
    return 0;
  }

  std::vector<BallUnion> members;
  if (family_is_file)
    members.push_back(file_union);
  else
    for (int n = 1; n <= n_max; ++n) members.push_back(member(n));
  const EccentricityReport rep =
      eccentricity(members, std::vector<Int>(dim, Int(0)));
  std::cout << "index,enclosing_exp,contained_exp,ratio_num,ratio_den\n";
  for (const auto& rec : rep.records)
    std::cout << rec.index << "," << rec.min_enclosing_exp << ","
              << rec.max_contained_exp << "," << rec.ratio.get_num().get_str()
              << "," << rec.ratio.get_den().get_str() << "\n";
  std::cout << "# max_ratio," << rat_str(rep.max_ratio) << "\n";
  std::cout << "# verdict," << rep.verdict << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "frslab: exact point counts of affine schemes over finite local "
      "rings, normalized-count towers, and p-adic measure utilities"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--cache", g.cache_flag,
                 "cache directory (default: FRSLAB_CACHE or ./.frslab-cache)");
  app.add_flag("--no-cache", g.no_cache, "never read or write the count cache");
  app.add_option("--naive-cap", g.lim.naive_cap,
                 "enumeration bound |R|^c for the naive engine");
  app.add_option("--node-cap", g.lim.live_node_cap,
                 "live frontier bound for the lifted engine");
  app.add_option("--enum-cap", g.lim.enumeration_cap,
                 "bound on eagerly listed elements");
  app.add_option("--threads", g.lim.threads, "worker threads (0 = default)");

  int rc = 0;

  std::string scheme_path, engine = "auto";
  std::uint64_t p = 2;
  int r = 1, n = 1, n_max = 6;

  CLI::App* c_count = app.add_subcommand(
      "count", "count points over one ring Z_q[x]/m^n and print h");
  c_count->fallthrough();
  c_count->add_option("scheme", scheme_path, "scheme JSON file")->required();
  c_count->add_option("-p,--prime", p, "residue characteristic")->required();
  c_count->add_option("-r,--degree", r, "unramified extension degree");
  c_count->add_option("-n,--level", n, "ring level (nilpotency exponent)");
  c_count->add_option("--engine", engine, "auto | naive | lifted");
  c_count->callback(
      [&] { rc = run_count(g, scheme_path, p, r, n, engine); });

  CLI::App* c_hseq = app.add_subcommand(
      "hseq", "normalized-count tower h(n) for n = 1..nmax at fixed (p, r)");
  c_hseq->fallthrough();
  c_hseq->add_option("scheme", scheme_path, "scheme JSON file")->required();
  c_hseq->add_option("-p,--prime", p, "residue characteristic")->required();
  c_hseq->add_option("-r,--degree", r, "unramified extension degree");
  c_hseq->add_option("-N,--nmax", n_max, "top level of the tower")->required();
  c_hseq->add_option("--engine", engine, "auto | naive | lifted");
  c_hseq->callback(
      [&] { rc = run_hseq(g, scheme_path, p, r, n_max, engine); });

  std::string primes_csv = "2,3,5", tau_str = "3/2", format = "markdown";
  int r_max = 1, tail_steps = 0;
  CLI::App* c_classify = app.add_subcommand(
      "classify", "boundedness detectors over a (p, r, n) grid");
  c_classify->fallthrough();
  c_classify->add_option("scheme", scheme_path, "scheme JSON file")
      ->required();
  c_classify->add_option("--primes", primes_csv, "comma-separated primes");
  c_classify->add_option("--rmax", r_max, "use extension degrees 1..rmax");
  c_classify->add_option("--nmax", n_max, "top level of every tower");
  c_classify->add_option("--tau", tau_str,
                         "growth threshold, a rational like 3/2");
  c_classify->add_option("--tail-steps", tail_steps,
                         "tail length override (0 = max(3, nmax/2))");
  c_classify->add_option("--format", format, "markdown | csv");
  c_classify->add_option("--engine", engine, "auto | naive | lifted");
  c_classify->callback([&] {
    rc = run_classify(g, scheme_path, primes_csv, r_max, n_max, tau_str,
                      tail_steps, format, engine);
  });

  std::string action, const_str, out_dir;
  CLI::App* c_construct = app.add_subcommand(
      "construct",
      "derived integral models: scale K | hat | patch [P], from a scheme's "
      "witness data");
  c_construct->fallthrough();
  c_construct->add_option("scheme", scheme_path, "scheme JSON file")
      ->required();
  c_construct->add_option("action", action, "scale | hat | patch")
      ->required();
  c_construct->add_option("constant", const_str,
                          "K for scale (required), P for patch (optional)");
  c_construct->add_option("--out", out_dir,
                          "write canonical files here instead of stdout");
  c_construct->callback([&] {
    rc = run_construct(g, scheme_path, action, const_str, out_dir);
  });

  std::string mode, map_path, family;
  int dim_flag = 0;
  CLI::App* c_measure = app.add_subcommand(
      "measure",
      "p-adic mass computations: pushforward | ratio | eccentricity over a "
      "ball family");
  c_measure->fallthrough();
  c_measure->add_option("mode", mode, "pushforward | ratio | eccentricity")
      ->required();
  c_measure->add_option("--map", map_path,
                        "polynomial map JSON file (pushforward, ratio)");
  c_measure
      ->add_option("--family", family,
                   "balls | counterexample | path to a ball-union file")
      ->required();
  c_measure->add_option("-p,--prime", p, "residue characteristic");
  c_measure->add_option("-N,--nmax", n_max, "family members 1..nmax");
  c_measure->add_option("--dim", dim_flag,
                        "ambient dimension for the balls family");
  c_measure->callback([&] {
    rc = run_measure(g, mode, map_path, family, p, n_max, dim_flag);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const frslab::invalid_input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const frslab::certificate_error& e) {
    std::cerr << "certificate error: " << e.what() << "\n";
    return 3;
  } catch (const frslab::resource_limit_error& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
