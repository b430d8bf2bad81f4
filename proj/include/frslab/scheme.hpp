#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frslab/limits.hpp"
#include "frslab/poly.hpp"
#include "frslab/ring.hpp"

namespace frslab {

// Witness that X embeds into A^M as the fiber over 0 of a flat map
// phi: A^M -> A^N cutting out N equations, with psi the coordinate
// functions of the embedding. Flatness itself is user-asserted.
struct CIAWitness {
  std::size_t M = 0;
  std::size_t N = 0;
  // N components in M variables (named u1..uM in files); rationals allowed.
  PolyMap phi;
  // M coordinate functions of the embedding, in the scheme's variables.
  std::vector<RatPoly> psi;
  // Optional ideal-membership certificate: phi_j composed with psi equals
  // sum_k membership[j][k] * generator_k. When absent, compatibility is
  // only smoke-tested pointwise over small prime fields.
  std::optional<std::vector<std::vector<RatPoly>>> membership;

  bool operator==(const CIAWitness&) const = default;
};

// Witness that the basic opens D(g_i) cover the generic fiber: an exact
// identity sum_i c_i*g_i - D = sum_j syzygy_j * f_j with D a nonzero
// integer.
struct CoverCertificate {
  struct Open {
    IntPoly g;
    IntPoly c;

    bool operator==(const Open&) const = default;
  };
  std::vector<Open> opens;
  Int D = 0;
  std::vector<IntPoly> syzygy;

  bool operator==(const CoverCertificate&) const = default;
};

// Affine scheme over the integers presented by generators of its ideal,
// with a declared generic-fiber dimension. Generator order is significant:
// no normal form is computed, and the hash covers the presentation as
// written.
struct SchemePresentation {
  std::string name;
  std::vector<std::string> vars;
  int dim_Q = 0;
  std::vector<IntPoly> generators;
  std::vector<std::string> tags;
  std::optional<CIAWitness> cia;
  std::optional<CoverCertificate> cover;

  std::size_t nvars() const { return vars.size(); }

  bool operator==(const SchemePresentation&) const = default;
};

// Checks every structural invariant (arity, dimension bounds, witness
// shapes, the cover identity, CIA compatibility) and returns one finding
// per violation; empty means valid. Nothing is thrown.
std::vector<std::string> validate(const SchemePresentation& X);

// Hex SHA-256 of the canonical serialization with the name field omitted:
// renaming preserves the hash, reordering generators does not.
std::string scheme_hash(const SchemePresentation& X);

// Advisory Lang-Weil style cross-check of dim_Q: round(log_p |X(F_p)|)
// per prime, compared against the declaration.
struct DimSanityEntry {
  std::uint64_t p = 0;
  Int count;
  int round_log = 0;
  bool agrees = false;
};
std::vector<DimSanityEntry> dim_sanity(const SchemePresentation& X,
                                       const std::vector<std::uint64_t>& primes,
                                       const Limits& lim = {});

// |D(g)(R)|: points of X over the local ring R where g evaluates to a
// unit. Computed as the point count of the auxiliary scheme obtained by
// adjoining g*t - 1 in one fresh variable.
Int basic_open_count(const SchemePresentation& X, const IntPoly& g,
                     const LocalRing& R, const Limits& lim = {});

// For a certified two-set cover {g1, g2}: returns (|X(R)|,
// |D(g1)(R)| + |D(g2)(R)| - |D(g1*g2)(R)|). The two agree when the
// certificate is honest. Throws invalid_input_error when X carries no
// cover certificate over exactly {g1, g2}.
std::pair<Int, Int> cover_inclusion_exclusion(const SchemePresentation& X,
                                              const IntPoly& g1,
                                              const IntPoly& g2,
                                              const LocalRing& R,
                                              const Limits& lim = {});

}  // namespace frslab
