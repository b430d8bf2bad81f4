#include "frslab/constructions.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "frslab/count.hpp"
#include "frslab/errors.hpp"
#include "frslab/ring.hpp"
#include "frslab/schemefile.hpp"

namespace frslab {

namespace {

// g(x/K) for a rational polynomial: divide each degree-d coefficient by K^d.
RatPoly scale_rat(const RatPoly& g, const Int& K) {
  RatPoly out(g.nvars());
  for (const auto& [exps, coef] : g.terms())
    out.add_term(exps, coef / Rat(pow_int(K, total_degree(exps))));
  return out;
}

void collect_denominator_primes(const Int& den, std::set<Int>& primes) {
  Int d = den;
  Int f = 2;
  while (d > 1) {
    if (d % f == 0) {
      primes.insert(f);
      while (d % f == 0) d /= f;
    } else {
      f = (f == 2) ? Int(3) : Int(f + 2);
      if (f * f > d && d > 1) {
        primes.insert(d);
        break;
      }
    }
  }
}

bool clears_denominators(const std::vector<RatPoly>& gs, const Int& mult) {
  for (const auto& g : gs)
    for (const auto& [exps, coef] : g.terms())
      if (Rat(coef * Rat(mult)).get_den() != 1) return false;
  return true;
}

// Minimal e >= 0 with mult^e clearing every denominator in gs. The
// denominators are assumed smooth over mult's prime factors; the guard
// only trips if that assumption is broken upstream.
std::uint32_t clearing_exponent(const std::vector<RatPoly>& gs,
                                const Int& mult) {
  Int pw = 1;
  for (std::uint32_t e = 0; e <= 4096; ++e) {
    if (clears_denominators(gs, pw)) return e;
    pw *= mult;
  }
  throw std::logic_error("denominators are not smooth over the scaling base");
}

std::string fresh_var_name(const std::vector<std::string>& vars) {
  std::string name = "t";
  int suffix = 0;
  while (std::find(vars.begin(), vars.end(), name) != vars.end())
    name = "t" + std::to_string(suffix++);
  return name;
}

void require_valid(const SchemePresentation& X, const std::string& what) {
  auto findings = validate(X);
  if (!findings.empty())
    throw certificate_error(what + " rejected: " + findings.front());
}

Int ring_point_total(const LocalRing& R, std::size_t c, std::uint64_t cap) {
  Int total = 1;
  for (std::size_t j = 0; j < c; ++j) total *= R.cardinality();
  if (total > Int(static_cast<unsigned long>(cap)))
    throw resource_limit_error(
        "fiber enumeration needs " + total.get_str() +
        " points, over the configured cap of " + std::to_string(cap));
  return total;
}

}  // namespace

ScaledModel scale_model(const SchemePresentation& X, const Int& K) {
  if (K < 1)
    throw invalid_input_error("scaling constant must be at least 1");
  ScaledModel out;
  out.base = X;
  out.K = K;
  out.r_K = r_of_K(X.generators, K);
  out.result.name = X.name + "-scaled-" + K.get_str();
  out.result.vars = X.vars;
  out.result.dim_Q = X.dim_Q;
  out.result.tags = X.tags;
  const Int factor = pow_int(K, out.r_K);
  for (const auto& f : X.generators) {
    RatPoly g = scale_rat(to_rat(f), K);
    g *= Rat(factor);
    out.result.generators.push_back(to_int(g));
  }
  return out;
}

HatScheme cia_hat(const SchemePresentation& X) {
  if (!X.cia)
    throw invalid_input_error("hat construction needs a flat-map witness");
  require_valid(X, "hat construction");
  const CIAWitness& w = *X.cia;

  HatScheme out;
  out.base = X;

  std::set<Int> primes;
  for (const auto& g : w.phi.components)
    for (const auto& [exps, coef] : g.terms())
      collect_denominator_primes(Int(coef.get_den()), primes);
  for (const auto& g : w.psi)
    for (const auto& [exps, coef] : g.terms())
      collect_denominator_primes(Int(coef.get_den()), primes);
  out.P_prime = 1;
  for (const auto& q : primes) out.P_prime *= q;

  out.t = std::max<std::uint32_t>(1, clearing_exponent(w.psi, out.P_prime));
  out.P = pow_int(out.P_prime, out.t);

  std::vector<RatPoly> phi_P;
  phi_P.reserve(w.phi.components.size());
  for (const auto& g : w.phi.components) phi_P.push_back(scale_rat(g, out.P));
  out.m = clearing_exponent(phi_P, out.P);
  const Int Pm = pow_int(out.P, out.m);

  out.hat.name = X.name + "-hat";
  out.hat.vars = ambient_var_names(w.M);
  out.hat.dim_Q = static_cast<int>(w.M) - static_cast<int>(w.N);
  for (const auto& g : phi_P) {
    RatPoly h = g;
    h *= Rat(Pm);
    out.hat.generators.push_back(to_int(h));
  }

  // the hat scheme is its own flat-map witness: N equations in M
  // variables, embedded by the identity
  CIAWitness hw;
  hw.M = w.M;
  hw.N = w.N;
  hw.phi.source_vars = w.M;
  for (const auto& g : out.hat.generators) hw.phi.components.push_back(to_rat(g));
  for (std::size_t j = 0; j < w.M; ++j)
    hw.psi.push_back(RatPoly::variable(w.M, j));
  std::vector<std::vector<RatPoly>> membership(
      w.N, std::vector<RatPoly>(w.N, RatPoly(w.M)));
  for (std::size_t j = 0; j < w.N; ++j)
    membership[j][j] = RatPoly::constant(w.M, Rat(1));
  hw.membership = std::move(membership);
  out.hat.cia = std::move(hw);

  for (const auto& g : w.psi) {
    RatPoly h = g;
    h *= Rat(out.P);
    out.morphism.push_back(to_int(h));
  }
  return out;
}

PatchedCover lci_patch(const SchemePresentation& X, const Int& P) {
  if (!X.cover)
    throw invalid_input_error("patch construction needs a cover certificate");
  if (P < 1)
    throw invalid_input_error("patch scaling constant must be at least 1");
  require_valid(X, "patch construction");
  const CoverCertificate& cov = *X.cover;

  PatchedCover out;
  out.base = X;
  out.P = P;
  out.N_bound = cov.D * P + 1;

  const std::size_t c = X.nvars();
  std::vector<std::string> patch_vars = X.vars;
  patch_vars.push_back(fresh_var_name(X.vars));
  const IntPoly tvar = IntPoly::variable(c + 1, c);
  const IntPoly shift = IntPoly::constant(c + 1, cov.D * P);

  int idx = 1;
  for (const auto& open : cov.opens) {
    SchemePresentation U;
    U.name = X.name + "-patch-" + std::to_string(idx++);
    U.vars = patch_vars;
    U.dim_Q = X.dim_Q;
    for (const auto& f : X.generators) U.generators.push_back(pad_vars(f, c + 1));
    IntPoly inv = pad_vars(open.g, c + 1) * tvar;
    inv *= P;
    U.generators.push_back(inv - shift);
    out.patches.push_back(std::move(U));
  }
  return out;
}

FiberBoundReport verify_fiber_bound(const SchemePresentation& X,
                                    const SchemePresentation& Y,
                                    const std::vector<IntPoly>& morphism,
                                    const Int& K,
                                    const std::vector<GridCell>& grid,
                                    const Limits& lim) {
  if (K < 1)
    throw invalid_input_error("coordinate multiplier must be at least 1");
  if (morphism.size() != Y.nvars())
    throw invalid_input_error(
        "morphism needs one component per target variable");
  for (const auto& f : morphism)
    if (f.nvars() != X.nvars())
      throw invalid_input_error(
          "morphism components must use the source variables");

  const std::size_t c = X.nvars();
  FiberBoundReport rep;
  for (const auto& cell : grid) {
    LocalRing R(cell.p, cell.n, cell.r);
    FiberBoundRow row;
    row.p = cell.p;
    row.r = cell.r;
    row.n = cell.n;
    row.N_p = static_cast<int>(valuation_int(K, cell.p));
    if (cell.n <= row.N_p) {
      row.skipped = true;
      rep.rows.push_back(std::move(row));
      continue;
    }

    const Int total = ring_point_total(R, c, lim.naive_cap);
    const std::uint64_t total_u = total.get_ui();
    const std::uint64_t card = R.cardinality().get_ui();

    std::map<std::vector<std::uint64_t>, Int> fibers;
    Int hits = 0;
    std::vector<std::uint64_t> idx(c, 0);
    std::vector<LocalRing::Elem> pt(c, R.zero());
    std::vector<LocalRing::Elem> image(morphism.size(), R.zero());
    for (std::uint64_t i = 0; i < total_u; ++i) {
      bool on_X = true;
      for (const auto& f : X.generators)
        if (!R.is_zero(eval(f, pt, R))) {
          on_X = false;
          break;
        }
      if (on_X) {
        ++hits;
        for (std::size_t j = 0; j < morphism.size(); ++j)
          image[j] = eval(morphism[j], pt, R);
        for (const auto& g : Y.generators)
          if (!R.is_zero(eval(g, image, R)))
            throw invalid_input_error(
                "morphism image leaves the target scheme over p=" +
                std::to_string(cell.p) + " n=" + std::to_string(cell.n));
        std::vector<std::uint64_t> key;
        key.reserve(morphism.size() * static_cast<std::size_t>(R.r()));
        for (const auto& e : image) key.insert(key.end(), e.begin(), e.end());
        fibers[key] += 1;
      }
      std::size_t j = 0;
      while (j < c && ++idx[j] == card) idx[j++] = 0;
      for (std::size_t k = 0; k < std::min(j + 1, c); ++k)
        pt[k] = R.element_at(Int(idx[k]));
    }

    row.count_X = hits;
    row.count_Y = count_scheme(Y, R, Engine::automatic, lim).count;
    row.bound = pow_uint(cell.p, static_cast<unsigned long>(row.N_p) *
                                     static_cast<unsigned long>(cell.r) *
                                     c) *
                row.count_Y;
    row.max_fiber = 0;
    for (const auto& [key, cnt] : fibers)
      if (cnt > row.max_fiber) row.max_fiber = cnt;
    row.ok = row.count_X <= row.bound;
    if (!row.ok) rep.all_ok = false;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

CoverBoundReport verify_cover_bound(const PatchedCover& cover,
                                    const std::vector<GridCell>& grid,
                                    const Limits& lim) {
  CoverBoundReport rep;
  for (const auto& cell : grid) {
    LocalRing R(cell.p, cell.n, cell.r);
    CoverBoundRow row;
    row.p = cell.p;
    row.r = cell.r;
    row.n = cell.n;
    if (Int(cell.n) <= cover.N_bound) {
      row.below_threshold = true;
      rep.rows.push_back(std::move(row));
      continue;
    }
    row.count_X = count_scheme(cover.base, R, Engine::automatic, lim).count;
    row.patch_sum = 0;
    for (const auto& patch : cover.patches)
      row.patch_sum += count_scheme(patch, R, Engine::automatic, lim).count;
    row.margin = row.patch_sum - row.count_X;
    row.ok = row.count_X <= row.patch_sum;
    if (!row.ok) rep.all_ok = false;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace frslab
