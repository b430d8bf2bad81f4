#include "frslab/padic.hpp"

#include <algorithm>
#include <optional>
#include <utility>

#include "frslab/count.hpp"
#include "frslab/errors.hpp"
#include "frslab/ring.hpp"

namespace frslab {

namespace {

struct UnionShape {
  std::uint64_t p;
  std::size_t dim;
};

std::optional<UnionShape> check_union(const BallUnion& U) {
  if (U.balls.empty()) return std::nullopt;
  UnionShape s{U.balls.front().p, U.balls.front().dim};
  for (const auto& b : U.balls) {
    if (b.p != s.p) throw invalid_input_error("ball union mixes primes");
    if (b.dim != s.dim)
      throw invalid_input_error("ball union mixes dimensions");
    if (b.radius_exp < 0)
      throw invalid_input_error("ball radius exponent must be nonnegative");
    if (b.center.size() != b.dim)
      throw invalid_input_error("ball center length must match its dimension");
  }
  return s;
}

Int ppow(std::uint64_t p, int k) {
  return pow_uint(p, static_cast<unsigned long>(k));
}

Int mod_reduce(const Int& v, const Int& pk) {
  Int m;
  mpz_fdiv_r(m.get_mpz_t(), v.get_mpz_t(), pk.get_mpz_t());
  return m;
}

bool congruent(const std::vector<Int>& a, const std::vector<Int>& b,
               const Int& pk) {
  for (std::size_t j = 0; j < a.size(); ++j)
    if (Int((a[j] - b[j]) % pk) != 0) return false;
  return true;
}

// p-adic valuation of v, capped at cap (also the answer for v = 0)
int valuation_capped(const Int& v, std::uint64_t p, int cap) {
  if (v == 0) return cap;
  Int a = abs(v);
  int k = 0;
  while (k < cap && a % p == 0) {
    a /= p;
    ++k;
  }
  return k;
}

// Is B(x, p^-k) a subset of the normalized union? Either the ball fits
// inside one member, or (below the finest resolution K) all of its p^dim
// children do. probes guards against adversarially deep families.
bool ball_contained(const std::vector<Ball>& balls, std::uint64_t p,
                    std::size_t dim, const std::vector<Int>& x, int k, int K,
                    std::uint64_t& probes) {
  if (++probes > 1000000)
    throw resource_limit_error("eccentricity search exceeded its probe cap");
  for (const auto& b : balls)
    if (k >= b.radius_exp && congruent(x, b.center, ppow(p, b.radius_exp)))
      return true;
  if (k >= K) return false;
  const Int pk = ppow(p, k);
  std::vector<std::uint64_t> digit(dim, 0);
  std::vector<Int> child(x);
  while (true) {
    for (std::size_t j = 0; j < dim; ++j) child[j] = x[j] + pk * Int(digit[j]);
    if (!ball_contained(balls, p, dim, child, k + 1, K, probes)) return false;
    std::size_t j = 0;
    while (j < dim && ++digit[j] == p) digit[j++] = 0;
    if (j == dim) break;
  }
  return true;
}

}  // namespace

BallUnion normalize(const BallUnion& U) {
  auto shape = check_union(U);
  if (!shape) return {};
  BallUnion out;
  std::vector<Ball> balls = U.balls;
  for (auto& b : balls) {
    const Int pk = ppow(b.p, b.radius_exp);
    for (auto& c : b.center) c = mod_reduce(c, pk);
  }
  std::sort(balls.begin(), balls.end(), [](const Ball& a, const Ball& b) {
    if (a.radius_exp != b.radius_exp) return a.radius_exp < b.radius_exp;
    return a.center < b.center;
  });
  for (const auto& b : balls) {
    bool nested = false;
    for (const auto& kept : out.balls)
      if (congruent(b.center, kept.center, ppow(b.p, kept.radius_exp))) {
        nested = true;
        break;
      }
    if (!nested) out.balls.push_back(b);
  }
  return out;
}

Rat haar(const BallUnion& U) {
  const BallUnion norm = normalize(U);
  Rat total = 0;
  for (const auto& b : norm.balls)
    total += Rat(Int(1), ppow(b.p, b.radius_exp * static_cast<int>(b.dim)));
  return total;
}

Rat pushforward_mass(const PolyMap& F, const BallUnion& U, const Limits& lim) {
  validate(F);
  for (const auto& g : F.components)
    if (!is_integral(g))
      throw invalid_input_error(
          "pushforward needs a map with integer coefficients");
  const BallUnion norm = normalize(U);
  if (norm.balls.empty()) return 0;
  if (norm.balls.front().dim != F.components.size())
    throw invalid_input_error(
        "pushforward needs one map component per ball dimension");

  const std::uint64_t p = norm.balls.front().p;
  const std::size_t M = F.source_vars;
  std::vector<IntPoly> components;
  components.reserve(F.components.size());
  for (const auto& g : F.components) components.push_back(to_int(g));

  Rat mass = 0;
  for (const auto& b : norm.balls) {
    if (b.radius_exp == 0) {
      mass += 1;  // the ball is all of Z_p^dim
      continue;
    }
    LocalRing R(p, b.radius_exp);
    std::vector<IntPoly> gens;
    gens.reserve(components.size());
    for (std::size_t j = 0; j < components.size(); ++j)
      gens.push_back(components[j] - IntPoly::constant(M, b.center[j]));
    Int count;
    try {
      count = count_lifted(gens, M, 0, R, lim).count;
    } catch (const resource_limit_error&) {
      count = count_naive(gens, M, R, lim);
    }
    Rat term(count, pow_int(ppow(p, b.radius_exp), M));
    term.canonicalize();
    mass += term;
  }
  return mass;
}

BallUnion counterexample_family(std::uint64_t p, int n) {
  if (!is_prime_u64(p)) throw invalid_input_error("p must be prime");
  if (n < 1) throw invalid_input_error("family index must be at least 1");
  BallUnion U;
  U.balls.push_back(Ball{p, 1, {Int(0)}, 2 * n * n});
  U.balls.push_back(Ball{p, 1, {ppow(p, 2 * n + 1)}, 4 * n});
  return U;
}

std::vector<MassRatioEntry> boundedness_ratio(
    const PolyMap& F, const std::function<BallUnion(int)>& family, int n_max,
    const Limits& lim) {
  if (n_max < 1) throw invalid_input_error("n_max must be at least 1");
  std::vector<MassRatioEntry> out;
  for (int n = 1; n <= n_max; ++n) {
    MassRatioEntry e;
    e.n = n;
    const BallUnion S = family(n);
    e.measure = haar(S);
    if (e.measure == 0)
      throw invalid_input_error(
          "ratio undefined: family member has measure zero");
    try {
      e.mass = pushforward_mass(F, S, lim);
      e.ratio = e.mass / e.measure;
      e.ok = true;
    } catch (const resource_limit_error&) {
      e.ok = false;
    }
    out.push_back(std::move(e));
  }
  return out;
}

EccentricityReport eccentricity(const std::vector<BallUnion>& family,
                                const std::vector<Int>& x) {
  EccentricityReport rep;
  rep.max_ratio = 0;
  int index = 1;
  for (const auto& member : family) {
    const BallUnion S = normalize(member);
    if (S.balls.empty())
      throw invalid_input_error("point lies outside an empty family member");
    const std::uint64_t p = S.balls.front().p;
    const std::size_t dim = S.balls.front().dim;
    if (x.size() != dim)
      throw invalid_input_error("point dimension does not match the family");

    bool inside = false;
    for (const auto& b : S.balls)
      if (congruent(x, b.center, ppow(p, b.radius_exp))) {
        inside = true;
        break;
      }
    if (!inside)
      throw invalid_input_error("point lies outside family member " +
                                std::to_string(index));

    // smallest enclosing ball: every member ball must fit inside it
    int enclosing = S.balls.front().radius_exp;
    for (const auto& b : S.balls) {
      int reach = b.radius_exp;
      for (std::size_t j = 0; j < dim; ++j)
        reach = std::min(
            reach, valuation_capped(b.center[j] - x[j], p, b.radius_exp));
      enclosing = std::min(enclosing, reach);
    }

    // largest contained ball: scan radii from coarse to fine
    int K = 0;
    for (const auto& b : S.balls) K = std::max(K, b.radius_exp);
    std::uint64_t probes = 0;
    int contained = K;
    for (int k = enclosing; k <= K; ++k)
      if (ball_contained(S.balls, p, dim, x, k, K, probes)) {
        contained = k;
        break;
      }

    EccentricityRecord rec;
    rec.index = index++;
    rec.min_enclosing_exp = enclosing;
    rec.max_contained_exp = contained;
    rec.ratio = Rat(ppow(p, (contained - enclosing) * static_cast<int>(dim)));
    if (rec.ratio > rep.max_ratio) rep.max_ratio = rec.ratio;
    rep.records.push_back(std::move(rec));
  }

  const std::size_t len = rep.records.size();
  if (len < 2) {
    rep.verdict = "inconclusive";
    return rep;
  }
  const std::size_t tail =
      std::min(len, std::max<std::size_t>(3, len / 2));
  bool all_equal = true;
  bool strictly_up = true;
  for (std::size_t i = len - tail + 1; i < len; ++i) {
    const Rat& prev = rep.records[i - 1].ratio;
    const Rat& cur = rep.records[i].ratio;
    if (cur != prev) all_equal = false;
    if (cur <= prev) strictly_up = false;
  }
  if (all_equal)
    rep.verdict = "bounded-at-scale";
  else if (strictly_up)
    rep.verdict = "unbounded-at-scale";
  else
    rep.verdict = "inconclusive";
  return rep;
}

}  // namespace frslab
