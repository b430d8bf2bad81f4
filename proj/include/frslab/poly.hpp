#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "frslab/errors.hpp"
#include "frslab/numeric.hpp"
#include "frslab/ring.hpp"

namespace frslab {

// Exponent vector of a monomial; entry j is the power of variable j.
// Dense representation: length always equals the ambient variable count.
using Exponents = std::vector<std::uint32_t>;

inline std::uint64_t total_degree(const Exponents& e) {
  std::uint64_t s = 0;
  for (std::uint32_t x : e) s += x;
  return s;
}

// Orders monomials by total degree descending, then lexicographically
// descending on the exponent vector, so that map iteration visits terms
// in canonical printing order (leading term first).
struct GrlexDesc {
  bool operator()(const Exponents& a, const Exponents& b) const {
    std::uint64_t da = total_degree(a);
    std::uint64_t db = total_degree(b);
    if (da != db) return da > db;
    return a > b;
  }
};

// Multivariate polynomial with exact coefficients (Int or Rat). Immutable
// in spirit: operations return new values. Invariants: no zero coefficients
// stored; every exponent vector has length nvars().
template <class C>
class Poly {
 public:
  using Terms = std::map<Exponents, C, GrlexDesc>;

  explicit Poly(std::size_t nvars) : nvars_(nvars) {}

  static Poly constant(std::size_t nvars, const C& c) {
    Poly f(nvars);
    f.add_term(Exponents(nvars, 0), c);
    return f;
  }

  static Poly variable(std::size_t nvars, std::size_t j) {
    if (j >= nvars) throw invalid_input_error("variable index out of range");
    Poly f(nvars);
    Exponents e(nvars, 0);
    e[j] = 1;
    f.add_term(e, C(1));
    return f;
  }

  std::size_t nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  // Total degree of the leading term (0 for the zero polynomial).
  std::uint64_t degree() const {
    return terms_.empty() ? 0 : total_degree(terms_.begin()->first);
  }

  // Accumulates c onto the coefficient of e, dropping the term if the sum
  // vanishes. The only mutation path, so the no-zero invariant holds.
  void add_term(const Exponents& e, const C& c) {
    if (e.size() != nvars_)
      throw invalid_input_error("exponent vector length mismatch");
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  const C* coeff(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? nullptr : &it->second;
  }

  bool operator==(const Poly&) const = default;

  Poly operator-() const {
    Poly r(nvars_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, C(-c));
    return r;
  }

  Poly& operator+=(const Poly& o) {
    require_same_vars(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }

  Poly& operator-=(const Poly& o) {
    require_same_vars(o);
    for (const auto& [e, c] : o.terms_) add_term(e, C(-c));
    return *this;
  }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }

  friend Poly operator*(const Poly& a, const Poly& b) {
    a.require_same_vars(b);
    Poly r(a.nvars_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e = ea;
        for (std::size_t j = 0; j < e.size(); ++j) e[j] += eb[j];
        r.add_term(e, C(ca * cb));
      }
    return r;
  }

  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  Poly& operator*=(const C& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend Poly operator*(Poly a, const C& s) { return a *= s; }
  friend Poly operator*(const C& s, Poly a) { return a *= s; }

 private:
  void require_same_vars(const Poly& o) const {
    if (nvars_ != o.nvars_)
      throw invalid_input_error("polynomial variable count mismatch");
  }

  std::size_t nvars_;
  Terms terms_;
};

using IntPoly = Poly<Int>;
using RatPoly = Poly<Rat>;

// Polynomial map A^M -> A^N given by N component polynomials in M variables.
struct PolyMap {
  std::size_t source_vars = 0;
  std::vector<RatPoly> components;

  bool operator==(const PolyMap&) const = default;
};

// Throws invalid_input_error unless the map has >= 1 components, all in
// exactly source_vars variables.
void validate(const PolyMap& F);

RatPoly to_rat(const IntPoly& f);
bool is_integral(const RatPoly& f);
// Throws invalid_input_error if any coefficient has denominator > 1.
IntPoly to_int(const RatPoly& f);

// Canonical textual form: graded-lex descending term list, terms joined by
// " + " / " - ", each term "coef*x^e*y*..." with unit coefficients and unit
// exponents omitted; rational coefficients as "num/den".
std::string poly_str(const IntPoly& f, const std::vector<std::string>& vars);
std::string poly_str(const RatPoly& f, const std::vector<std::string>& vars);

// Parses the textual form (signs, integer or num/den coefficients, '*'
// between factors, '^' for exponents). Unknown identifiers, malformed
// numbers, and zero denominators raise invalid_input_error.
RatPoly parse_rat_poly(std::string_view text,
                       const std::vector<std::string>& vars);
// As parse_rat_poly, then requires all coefficients integral.
IntPoly parse_int_poly(std::string_view text,
                       const std::vector<std::string>& vars);

// Value of f at a point with coordinates in R; coefficients reduce into R.
LocalRing::Elem eval(const IntPoly& f, const std::vector<LocalRing::Elem>& pt,
                     const LocalRing& R);
Int eval_int(const IntPoly& f, const std::vector<Int>& pt);
Rat eval_rat(const RatPoly& f, const std::vector<Rat>& pt);

// Formal partial derivative with respect to variable var.
IntPoly derivative(const IntPoly& f, std::size_t var);

// Jacobian matrix: entry (i, j) = d F_i / d x_j. All components must share
// a variable count.
std::vector<std::vector<IntPoly>> jacobian(const std::vector<IntPoly>& F);
// PolyMap overload; requires integral components.
std::vector<std::vector<IntPoly>> jacobian(const PolyMap& F);

// Substitutes images[j] for variable j of f. All images must share a
// variable count, which becomes the result's.
template <class C>
Poly<C> substitute(const Poly<C>& f, const std::vector<Poly<C>>& images) {
  if (images.size() != f.nvars())
    throw invalid_input_error("substitute: need one image per variable");
  if (images.empty())
    throw invalid_input_error("substitute: empty image list");
  const std::size_t m = images[0].nvars();
  for (const auto& g : images)
    if (g.nvars() != m)
      throw invalid_input_error("substitute: image variable counts differ");

  // Lazily extended power tables pw[j] = {1, images[j], images[j]^2, ...}.
  std::vector<std::vector<Poly<C>>> pw(images.size());
  auto image_pow = [&](std::size_t j, std::uint32_t k) -> const Poly<C>& {
    auto& tbl = pw[j];
    if (tbl.empty()) tbl.push_back(Poly<C>::constant(m, C(1)));
    while (tbl.size() <= k) tbl.push_back(tbl.back() * images[j]);
    return tbl[k];
  };

  Poly<C> acc(m);
  for (const auto& [e, c] : f.terms()) {
    Poly<C> t = Poly<C>::constant(m, c);
    for (std::size_t j = 0; j < e.size(); ++j)
      if (e[j] > 0) t *= image_pow(j, e[j]);
    acc += t;
  }
  return acc;
}

// Reinterprets f in a larger variable set; the new trailing variables do
// not occur in any term.
template <class C>
Poly<C> pad_vars(const Poly<C>& f, std::size_t new_nvars) {
  if (new_nvars < f.nvars())
    throw invalid_input_error("pad_vars: cannot drop variables");
  Poly<C> r(new_nvars);
  for (const auto& [e, c] : f.terms()) {
    Exponents d = e;
    d.resize(new_nvars, 0);
    r.add_term(d, c);
  }
  return r;
}

// g(x/K) expanded exactly: each coefficient is divided by K^(term degree).
// Requires K >= 1.
RatPoly scale_poly(const IntPoly& g, const Int& K);

// Minimal r >= 0 such that K^r * f(x/K) has integer coefficients for every
// f in fs. Requires K >= 1; bounded above by the maximum total degree.
std::uint32_t r_of_K(const std::vector<IntPoly>& fs, const Int& K);

// Least positive integer t with t*g integral, together with t*g itself.
// Throws invalid_input_error on the zero polynomial.
std::pair<IntPoly, Int> clear_denominators(const RatPoly& g);

}  // namespace frslab
