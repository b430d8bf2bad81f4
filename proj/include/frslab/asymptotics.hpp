#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "frslab/count.hpp"
#include "frslab/limits.hpp"
#include "frslab/numeric.hpp"
#include "frslab/scheme.hpp"

namespace frslab {

// Finite grid the detectors run on: a list of primes, a list of extension
// degrees, and a top level n_max shared by every tower.
struct GridSpec {
  std::vector<std::uint64_t> primes;
  std::vector<int> r_values;
  int n_max = 0;
};

// The uniform grid used by the test corpus and the command line when no
// grid is given: p in {2,3,5}, r = 1, towers up to n = 6.
GridSpec default_grid();

// Least-squares slope of log_p(count) against n, computed with exact
// rational normal equations over dyadic logarithms (20 fractional bits,
// exact when every count is a power of p). Entries that failed (ok=false)
// or have count 0 are excluded; at least three usable entries required.
struct GrowthFit {
  Rat alpha;
  Rat intercept;
  Rat max_abs_residual;
  int points = 0;
};
GrowthFit growth_fit(const HSequence& seq);

// Does h(Z/p^n) settle toward 1 as p grows, at a fixed level n? Verdicts
// over the distances d_p = |h - 1| along the prime list as given:
//   consistent   - the d_p are nonincreasing on their final stretch (at
//                  least the last step) and the last one is below 1/2
//   violated     - the last d_p is at least 1/2 and the final stretch is
//                  nondecreasing (the data moves away from 1, or sits flat
//                  far from it)
//   inconclusive - anything else
// A finite check on the listed primes only; at least three required.
struct ConditionIReport {
  int n = 0;
  std::vector<std::uint64_t> primes;
  std::vector<Rat> h;
  std::vector<Rat> distance;
  std::string verdict;
};
ConditionIReport test_condition_i(const SchemePresentation& X, int n,
                                  const std::vector<std::uint64_t>& primes,
                                  Engine engine = Engine::automatic,
                                  const Limits& lim = {});

// Fits the envelope |h - 1| <= C * p^(-1/2) over the grid (r = 1). All
// comparisons stay exact by working with squares: s = (h-1)^2 * p, and
// c2_fit = max s. c_fit is a dyadic square-root approximation of C for
// display; verdicts never consult it. Per prime, s is fed to the same
// tail heuristic as test_boundedness (with tau squared); a prime whose s
// grows past the threshold marks the envelope violated at that prime.
struct ConditionIIRow {
  std::uint64_t p = 0;
  Rat s_final;
  Rat s_tail_min;
  bool tail_complete = false;
  std::string flag;  // steady | growing | inconclusive
};
struct ConditionIIReport {
  Rat c2_fit;
  Rat c_fit;  // dyadic approximation, 20 fractional bits
  std::uint64_t witness_p = 0;
  int witness_n = 0;
  std::vector<ConditionIIRow> rows;
  std::string verdict;  // consistent | violated | inconclusive
};
ConditionIIReport test_condition_ii(const SchemePresentation& X,
                                    const std::vector<std::uint64_t>& primes,
                                    int n_max, const Rat& tau = Rat(3, 2),
                                    Engine engine = Engine::automatic,
                                    const Limits& lim = {},
                                    int tail_steps = 0);

// Boundedness of n -> h over one tower, decided at finite scale. The tail
// is the last max(3, n_max/2) steps of the sequence (so one more value
// than steps); tail_steps > 0 overrides that default. With m = min(tail):
//   growth-detected  - tail monotone nondecreasing, h(n_max) > m, and
//                      h(n_max) >= tau * m
//   bounded-at-scale - h(n_max) < tau * m, or h(n_max) == m (a flat tail,
//                      including the all-zero tail of an emptied scheme)
//   inconclusive     - anything else, or a tail entry hit a resource cap
// Thresholds are reported alongside the verdict; tau defaults to 3/2.
struct BoundednessReport {
  std::uint64_t p = 0;
  int r = 1;
  int n_max = 0;
  Rat tau;
  int tail_start = 0;  // first level inside the tail
  Rat tail_min;
  Rat final_h;
  Rat sup_h;  // max of h over the levels that completed
  bool tail_monotone = false;
  bool tail_complete = false;
  std::string verdict;
  HSequence seq;
};
BoundednessReport test_boundedness(const SchemePresentation& X,
                                   std::uint64_t p, int r, int n_max,
                                   const Rat& tau = Rat(3, 2),
                                   Engine engine = Engine::automatic,
                                   const Limits& lim = {}, int tail_steps = 0);

// For a scheme tagged "smooth": checks h(Z/p^n) == h(Z/p) exactly for all
// n <= n_max and reports the primes where equality fails. Rows that hit a
// resource cap are marked incomplete and never counted as exceptional.
struct StabilityRow {
  std::uint64_t p = 0;
  bool complete = false;
  bool stable = false;
  int first_bad_n = 0;  // 0 when stable
  Rat h_base;
  Rat h_bad;  // h at first_bad_n, meaningful only when !stable
};
struct SmoothStabilityReport {
  std::vector<StabilityRow> rows;
  std::vector<std::uint64_t> exceptional;
  bool all_complete = false;
};
SmoothStabilityReport test_smooth_stability(
    const SchemePresentation& X, const std::vector<std::uint64_t>& primes,
    int n_max, Engine engine = Engine::automatic, const Limits& lim = {});

// Everything above, run over one grid and aggregated. Per-tower verdicts
// are kept verbatim; the per-prime and overall verdicts are growth-detected
// when any tower detects growth, bounded-at-scale when every tower is
// bounded, and inconclusive otherwise. Rational singularities themselves
// are never tested; cond_iii_statement only rephrases the observed
// verdicts, and the caveats list states the standing assumptions.
struct ClassificationReport {
  std::string scheme_hash;
  std::string scheme_name;
  GridSpec grid;
  Rat tau;

  ConditionIReport cond_i;
  bool cond_i_ran = false;
  ConditionIIReport cond_ii;
  bool cond_ii_ran = false;

  std::vector<BoundednessReport> cond_iv_prime;  // one row per (p, r)

  struct PerPrime {
    std::uint64_t p = 0;
    std::string verdict;
  };
  std::vector<PerPrime> cond_v;

  struct GrowthRow {
    std::uint64_t p = 0;
    int r = 1;
    bool ok = false;
    GrowthFit fit;
    bool tail_monotone = false;
  };
  std::vector<GrowthRow> growth;

  std::string overall;  // growth-detected | bounded-at-scale | inconclusive
  std::string cond_iii_statement;
  std::vector<std::string> caveats;
};
ClassificationReport classify(const SchemePresentation& X,
                              const GridSpec& grid,
                              const Rat& tau = Rat(3, 2),
                              Engine engine = Engine::automatic,
                              const Limits& lim = {}, int tail_steps = 0);

}  // namespace frslab
