#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace frslab {

using Int = mpz_class;
using Rat = mpq_class;

// base^exp, throwing resource_limit_error when the result would reach `limit`.
std::uint64_t pow_u64_checked(std::uint64_t base, unsigned exp,
                              std::uint64_t limit);

inline Int pow_int(const Int& base, unsigned long exp) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

inline Int pow_uint(std::uint64_t base, unsigned long exp) {
  Int r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), exp);
  return r;
}

// multiplicity of the prime p in v; requires v != 0
unsigned valuation_int(const Int& v, std::uint64_t p);

// deterministic Miller-Rabin, exact for all 64-bit inputs
bool is_prime_u64(std::uint64_t m);

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b,
                                std::uint64_t m) {
  return static_cast<std::uint64_t>(
      static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m);

// "num/den" with den omitted when 1; no scientific notation anywhere
std::string rat_str(const Rat& q);

// log_p(x) for x >= 1 as a dyadic rational with `bits` fractional bits;
// exact (integer) when x is a power of p.
Rat log_p_approx(const Int& x, std::uint64_t p, int bits = 20);

}  // namespace frslab
