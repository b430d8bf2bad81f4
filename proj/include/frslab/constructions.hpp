#pragma once

#include <cstdint>
#include <vector>

#include "frslab/limits.hpp"
#include "frslab/numeric.hpp"
#include "frslab/poly.hpp"
#include "frslab/scheme.hpp"

namespace frslab {

// One (p, r, n) evaluation point for the verification grids below.
struct GridCell {
  std::uint64_t p = 2;
  int r = 1;
  int n = 1;
};

// X with every coordinate scaled by K: generators K^r_K * f_i(x/K), with
// r_K minimal so that all of them stay integral. Over Q the result is
// isomorphic to the base via coordinatewise multiplication by K.
struct ScaledModel {
  SchemePresentation base;
  Int K;
  std::uint32_t r_K = 0;
  SchemePresentation result;
};

// An integral model of the flat-map image of X. P_prime multiplies the
// primes appearing in denominators of the witness maps, P = P_prime^t
// clears psi, and m is minimal with P^m * phi(u/P) integral. The hat
// scheme has the witness's N generators in its M ambient variables, and
// morphism = P * psi maps X-points to hat-points over every finite ring.
struct HatScheme {
  SchemePresentation base;
  Int P_prime;
  std::uint32_t t = 1;
  Int P;
  std::uint32_t m = 0;
  SchemePresentation hat;
  std::vector<IntPoly> morphism;
};

// Affine charts carved out of a certified cover: patch i is cut out by the
// base generators plus P*g_i*t - D*P in one extra variable. Above the
// threshold level N_bound the patch counts dominate the base count.
struct PatchedCover {
  SchemePresentation base;
  Int P;
  std::vector<SchemePresentation> patches;
  Int N_bound;
};

// Per-cell outcome of the fiber-size inequality |X(R)| <= p^(r*N_p*c) * |Y(R)|
// for a polynomial map X -> Y whose coordinates were scaled by K
// (N_p = v_p(K)). Cells with n <= N_p carry skipped = true and no verdict.
struct FiberBoundRow {
  std::uint64_t p = 2;
  int r = 1;
  int n = 1;
  int N_p = 0;
  bool skipped = false;
  Int count_X;
  Int count_Y;
  Int bound;
  Int max_fiber;
  bool ok = false;
};

struct FiberBoundReport {
  std::vector<FiberBoundRow> rows;
  bool all_ok = true;  // over the non-skipped rows
};

// Per-cell outcome of |X(R)| <= sum_i |patch_i(R)|. Cells at or below the
// threshold are reported but carry below_threshold = true and no verdict.
struct CoverBoundRow {
  std::uint64_t p = 2;
  int r = 1;
  int n = 1;
  bool below_threshold = false;
  Int count_X;
  Int patch_sum;
  Int margin;
  bool ok = false;
};

struct CoverBoundReport {
  std::vector<CoverBoundRow> rows;
  bool all_ok = true;  // over the rows above the threshold
};

// Builds the scaled model. K = 1 returns the base unchanged (r_K = 0).
// Witness data does not survive the coordinate change and is dropped from
// the result. Throws invalid_input_error for K < 1.
ScaledModel scale_model(const SchemePresentation& X, const Int& K);

// Builds the hat scheme from X's flat-map witness. Throws
// invalid_input_error when the witness is missing and certificate_error
// when validate(X) rejects it.
HatScheme cia_hat(const SchemePresentation& X);

// Builds the patched cover from X's cover certificate with the given
// scaling constant (P = 1 is always enough for integral certificates; the
// parameter exists for experiments). Throws invalid_input_error when the
// certificate is missing or P < 1, certificate_error when validate(X)
// rejects it.
PatchedCover lci_patch(const SchemePresentation& X, const Int& P = 1);

// Checks the fiber-size inequality for the map given by morphism (one
// polynomial in X's variables per Y variable) on every grid cell, by
// exhaustive enumeration of X(R). Throws invalid_input_error when a point
// of X maps outside Y, when the morphism shape does not match, or when
// K < 1; resource_limit_error when a cell exceeds the enumeration caps.
FiberBoundReport verify_fiber_bound(const SchemePresentation& X,
                                    const SchemePresentation& Y,
                                    const std::vector<IntPoly>& morphism,
                                    const Int& K,
                                    const std::vector<GridCell>& grid,
                                    const Limits& lim = {});

// Checks the patch-count inequality on every grid cell strictly above the
// cover's threshold level.
CoverBoundReport verify_cover_bound(const PatchedCover& cover,
                                    const std::vector<GridCell>& grid,
                                    const Limits& lim = {});

}  // namespace frslab
