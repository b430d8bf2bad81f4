#include "frslab/numeric.hpp"

#include "frslab/errors.hpp"

namespace frslab {

std::uint64_t pow_u64_checked(std::uint64_t base, unsigned exp,
                              std::uint64_t limit) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (base != 0 && r > limit / base)
      throw resource_limit_error("power exceeds configured machine range");
    r *= base;
    if (r >= limit)
      throw resource_limit_error("power exceeds configured machine range");
  }
  return r;
}

unsigned valuation_int(const Int& v, std::uint64_t p) {
  Int rest;
  Int pz(static_cast<unsigned long>(p));
  return static_cast<unsigned>(
      mpz_remove(rest.get_mpz_t(), v.get_mpz_t(), pz.get_mpz_t()));
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

bool is_prime_u64(std::uint64_t m) {
  if (m < 2) return false;
  for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    if (m % q == 0) return m == q;
  }
  std::uint64_t d = m - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // these witnesses decide primality for every m < 3.3e24
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod_u64(a, d, m);
    if (x == 1 || x == m - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod_u64(x, x, m);
      if (x == m - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::string rat_str(const Rat& q) {
  Rat c(q);
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rat log_p_approx(const Int& x, std::uint64_t p, int bits) {
  if (x <= 0) throw invalid_input_error("log of a non-positive value");
  if (p < 2) throw invalid_input_error("log base must be at least 2");
  Int pz(static_cast<unsigned long>(p));
  // integer part, and an early exit when x is an exact power of p
  unsigned long ipart = 0;
  Int y(x);
  while (y >= pz) {
    y /= pz;  // floor; fractional part recovered below from the original x
    ++ipart;
  }
  Int pe = pow_uint(p, ipart);
  if (pe == x) return Rat(static_cast<unsigned long>(ipart));

  // binary digits of log_p(x/p^ipart): square, compare with p, renormalize.
  // The mantissa is truncated to 64 fractional bits each step so numerators
  // stay bounded; the result is a deterministic dyadic approximation.
  const int guard = 64;
  Int num = (x << guard) / pe;  // x/p^ipart in fixed point, in [1, p)
  Rat frac(0);
  Rat scale(1, 2);
  for (int i = 0; i < bits; ++i) {
    num = (num * num) >> guard;  // square, keep 64 fractional bits
    if (num >= (pz << guard)) {
      num /= pz;
      frac += scale;
    }
    scale /= 2;
  }
  Rat r = Rat(static_cast<unsigned long>(ipart)) + frac;
  r.canonicalize();
  return r;
}

}  // namespace frslab
