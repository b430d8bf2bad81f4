#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "frslab/limits.hpp"
#include "frslab/numeric.hpp"
#include "frslab/poly.hpp"

namespace frslab {

// The set {y in Z_p^dim : y = center mod p^radius_exp}. Radius p^(-k) in
// the p-adic metric; radius_exp = 0 is all of Z_p^dim.
struct Ball {
  std::uint64_t p = 2;
  std::size_t dim = 1;
  std::vector<Int> center;
  int radius_exp = 0;

  bool operator==(const Ball&) const = default;
};

// A finite union of balls sharing p and dim. Not kept disjoint by
// construction; normalize() produces the canonical disjoint form.
struct BallUnion {
  std::vector<Ball> balls;

  bool operator==(const BallUnion&) const = default;
};

// Canonical disjoint representation of the same set: centers reduced mod
// p^radius_exp, balls sorted by (radius_exp, center), and balls contained
// in an earlier ball dropped (any two p-adic balls are nested or
// disjoint). Throws invalid_input_error on mixed p or dim, negative
// radius exponents, or center length mismatches.
BallUnion normalize(const BallUnion& U);

// Normalized Haar measure of the set: sum of p^(-k_i * dim) over the
// normalized representation. The empty union has measure 0.
Rat haar(const BallUnion& U);

// Mass that the Haar measure of Z_p^M pushes onto U under the polynomial
// map F (M = F.source_vars inputs, one component per U dimension, integer
// coefficients required): mu{ a in Z_p^M : F(a) in U }, computed exactly
// by congruence counting at each ball's own resolution level. Throws
// invalid_input_error on shape mismatches or non-integral coefficients;
// resource_limit_error when a level count exceeds the caps.
Rat pushforward_mass(const PolyMap& F, const BallUnion& U,
                     const Limits& lim = {});

// The two-ball family B(0, p^(-2n^2)) union B(p^(2n+1), p^(-4n)) in one
// dimension. For n = 1 the second ball sits inside the first and the
// union degenerates to a single ball under normalization; callers that
// need two genuine components must start at n = 2.
BallUnion counterexample_family(std::uint64_t p, int n);

// One entry of a pushforward-to-measure ratio sequence. ok = false marks
// an index whose computation hit a resource cap; its values are
// meaningless then.
struct MassRatioEntry {
  int n = 0;
  Rat mass;
  Rat measure;
  Rat ratio;
  bool ok = false;
};

// The sequence pushforward_mass(F, family(n)) / haar(family(n)) for
// n = 1..n_max. Resource exhaustion is recorded per entry, never thrown.
// Throws invalid_input_error if some family member has measure zero.
std::vector<MassRatioEntry> boundedness_ratio(
    const PolyMap& F, const std::function<BallUnion(int)>& family, int n_max,
    const Limits& lim = {});

// How far the set family(i) is from being a ball around x: the smallest
// enclosing ball B(x, p^(-min_enclosing_exp)) versus the largest contained
// ball B(x, p^(-max_contained_exp)), and the measure ratio
// p^((max_contained_exp - min_enclosing_exp) * dim) between them.
struct EccentricityRecord {
  int index = 0;
  int min_enclosing_exp = 0;
  int max_contained_exp = 0;
  Rat ratio;
};

struct EccentricityReport {
  std::vector<EccentricityRecord> records;
  Rat max_ratio;
  // "bounded-at-scale" when the ratio tail has stabilized,
  // "unbounded-at-scale" when it is strictly increasing, else
  // "inconclusive"; a finite-range observation either way.
  std::string verdict;
};

// Eccentricity of each family member around the point x. Throws
// invalid_input_error when x lies outside some member or shapes mismatch.
EccentricityReport eccentricity(const std::vector<BallUnion>& family,
                                const std::vector<Int>& x);

}  // namespace frslab
