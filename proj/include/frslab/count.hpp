#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "frslab/limits.hpp"
#include "frslab/numeric.hpp"
#include "frslab/poly.hpp"
#include "frslab/ring.hpp"
#include "frslab/scheme.hpp"

namespace frslab {

// One exact count of solutions, tagged with the engine that produced it.
struct CountRecord {
  Int count;
  std::string method;
};

// Number of points a in R^c with f(a) = 0 for every f in gens. Plain
// enumeration with per-point polynomial evaluation; the reference
// implementation everything else is measured against.
// Throws resource_limit_error when |R|^c exceeds lim.naive_cap.
Int count_naive_serial(const std::vector<IntPoly>& gens, std::size_t c,
                       const LocalRing& R, const Limits& lim = {});

// Same contract as count_naive_serial, with compiled term evaluation and an
// OpenMP-parallel point sweep.
Int count_naive(const std::vector<IntPoly>& gens, std::size_t c,
                const LocalRing& R, const Limits& lim = {});

// Hensel-lifting solution-tree count of the same quantity. Level-1 roots
// over the residue field are scanned exhaustively; each root whose full
// Jacobian has full row rank there closes with the exact closed form
// q^((c-m)(n-1)), and the rest are lifted level by level, branching
// q^(c-rank) ways per consistent node. Subtrees run in parallel. dim_Q is
// accepted for signature compatibility with the scheme-level wrappers and
// does not influence the result.
// Throws resource_limit_error when a live frontier would exceed
// lim.live_node_cap (per subtree) or the level-1 scan would exceed
// lim.enumeration_cap.
CountRecord count_lifted(const std::vector<IntPoly>& gens, std::size_t c,
                         int dim_Q, const LocalRing& R, const Limits& lim = {});

enum class Engine { automatic, naive, lifted };

// Scheme-level counting: Engine::automatic tries the lifted engine first
// and falls back to naive enumeration if a resource cap is hit.
CountRecord count_scheme(const SchemePresentation& X, const LocalRing& R,
                         Engine engine = Engine::automatic,
                         const Limits& lim = {});

// |X(R)| / |R|^dim_Q as an exact rational in lowest terms.
Rat h_value(const SchemePresentation& X, const LocalRing& R,
            Engine engine = Engine::automatic, const Limits& lim = {});

// One row of a normalized-count table. ok=false marks an entry that hit a
// resource cap; its count and h are meaningless then.
struct HEntry {
  int n = 0;
  Int count;
  Rat h;
  bool ok = false;
  std::string method;
};

struct HSequence {
  std::string scheme_hash;
  std::uint64_t p = 0;
  int r = 1;
  std::vector<HEntry> entries;
};

// h_X over the tower n = 1..n_max at fixed (p, r). Resource exhaustion is
// reported per entry (ok=false), never thrown, so partial tables survive.
HSequence h_sequence(const SchemePresentation& X, std::uint64_t p, int r,
                     int n_max, Engine engine = Engine::automatic,
                     const Limits& lim = {});

}  // namespace frslab
