#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "frslab/errors.hpp"
#include "frslab/numeric.hpp"

namespace frslab {

// Unramified finite local ring R = Z_q / m_q^n with q = p^r, realized as
// Z[w]/(p^n, F(w)) for a monic degree-r polynomial F that is irreducible
// mod p. Elements are coefficient vectors (c_0 .. c_{r-1}) with each c_i in
// [0, p^n); r == 1 gives Z/p^n. The maximal ideal is (p), so the valuation
// of an element is the minimum p-adic valuation of its coefficients.
//
// F is chosen deterministically: scan monic degree-r polynomials in
// lexicographic order of their coefficient vectors (c_0 .. c_{r-1}) over
// [0, p)^r and take the first one irreducible mod p, lifted verbatim.
class LocalRing {
 public:
  using Word = std::uint64_t;
  using Elem = std::vector<Word>;

  LocalRing(std::uint64_t p, int n, int r = 1);

  std::uint64_t p() const { return p_; }
  int n() const { return n_; }
  int r() const { return r_; }
  Word level_mod() const { return pn_; }  // p^n as a machine word
  Int cardinality() const { return pow_uint(p_, static_cast<unsigned long>(n_) * r_); }
  Int unit_count() const;
  const std::vector<Word>& modulus() const { return modulus_; }

  // same p, r and modulus lift, truncated to level k <= n
  LocalRing at_level(int k) const;
  LocalRing residue_field() const { return at_level(1); }

  Elem zero() const { return Elem(static_cast<size_t>(r_), 0); }
  Elem one() const;
  Elem from_int(const Int& v) const;
  Elem make(const std::vector<Int>& coords) const;

  Elem add(const Elem& a, const Elem& b) const;
  Elem sub(const Elem& a, const Elem& b) const;
  Elem neg(const Elem& a) const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem pow(const Elem& a, std::uint64_t e) const;
  bool is_zero(const Elem& a) const;

  int valuation(const Elem& a) const;  // n for zero
  bool is_unit(const Elem& a) const { return valuation(a) == 0; }

  // multiplicative inverse; requires n == 1 (residue field)
  Elem inv(const Elem& a) const;

  // index <-> element, lexicographic on coefficient vectors (c_0 major)
  Elem element_at(Int index) const;
  std::vector<Elem> enumerate(std::uint64_t cap) const;

  std::string str(const Elem& a) const;

  // flat-span kernels used by the counting engine; spans hold r words
  void add_w(const Word* a, const Word* b, Word* out) const;
  void sub_w(const Word* a, const Word* b, Word* out) const;
  void mul_w(const Word* a, const Word* b, Word* out) const;
  void scalar_mul_w(Word s, const Word* a, Word* out) const;
  bool is_zero_w(const Word* a) const;

  static constexpr int kMaxDegree = 8;  // extension degrees past this are refused

 private:
  LocalRing() = default;

  std::uint64_t p_ = 0;
  int n_ = 0;
  int r_ = 1;
  Word pn_ = 0;
  std::vector<Word> modulus_;  // c_0..c_{r-1}; empty when r == 1

  void select_modulus();
};

}  // namespace frslab
