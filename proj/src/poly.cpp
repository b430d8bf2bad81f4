#include "frslab/poly.hpp"

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>

namespace frslab {

namespace {

template <class C>
std::string coef_str(const C& c) {
  if constexpr (std::is_same_v<C, Int>) {
    return c.get_str();
  } else {
    return rat_str(c);
  }
}

template <class C>
std::string poly_str_impl(const Poly<C>& f,
                          const std::vector<std::string>& vars) {
  if (vars.size() != f.nvars())
    throw invalid_input_error("variable list length mismatch");
  if (f.is_zero()) return "0";

  std::string out;
  bool first = true;
  for (const auto& [e, c] : f.terms()) {
    const bool neg = c < 0;
    if (first) {
      if (neg) out += '-';
      first = false;
    } else {
      out += neg ? " - " : " + ";
    }
    C mag = neg ? C(-c) : c;

    std::string mono;
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (e[j] == 0) continue;
      if (!mono.empty()) mono += '*';
      mono += vars[j];
      if (e[j] > 1) {
        mono += '^';
        mono += std::to_string(e[j]);
      }
    }
    if (mono.empty()) {
      out += coef_str(mag);
    } else {
      if (mag != 1) {
        out += coef_str(mag);
        out += '*';
      }
      out += mono;
    }
  }
  return out;
}

struct Lexer {
  std::string_view s;
  std::size_t i = 0;

  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])))
      ++i;
  }
  bool eof() {
    skip_ws();
    return i >= s.size();
  }
  char peek() {
    skip_ws();
    return s[i];
  }
  bool is_digit() {
    return !eof() && std::isdigit(static_cast<unsigned char>(s[i]));
  }
  bool is_ident_start() {
    if (eof()) return false;
    unsigned char c = static_cast<unsigned char>(s[i]);
    return std::isalpha(c) || c == '_';
  }

  Int read_integer() {
    skip_ws();
    std::string digits;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
      digits += s[i++];
    if (digits.empty())
      throw invalid_input_error("polynomial parse: expected an integer at \"" +
                                std::string(s.substr(i)) + "\"");
    return Int(digits, 10);
  }

  std::string read_ident() {
    skip_ws();
    std::string name;
    while (i < s.size()) {
      unsigned char c = static_cast<unsigned char>(s[i]);
      if (std::isalnum(c) || c == '_')
        name += s[i++];
      else
        break;
    }
    return name;
  }
};

constexpr std::uint32_t kMaxExponent = 1u << 20;

}  // namespace

void validate(const PolyMap& F) {
  if (F.components.empty())
    throw invalid_input_error("polynomial map needs at least one component");
  for (const auto& g : F.components)
    if (g.nvars() != F.source_vars)
      throw invalid_input_error(
          "polynomial map component variable count differs from source_vars");
}

RatPoly to_rat(const IntPoly& f) {
  RatPoly r(f.nvars());
  for (const auto& [e, c] : f.terms()) r.add_term(e, Rat(c));
  return r;
}

bool is_integral(const RatPoly& f) {
  for (const auto& [e, c] : f.terms())
    if (c.get_den() != 1) return false;
  return true;
}

IntPoly to_int(const RatPoly& f) {
  IntPoly r(f.nvars());
  for (const auto& [e, c] : f.terms()) {
    if (c.get_den() != 1)
      throw invalid_input_error("polynomial has non-integer coefficients");
    r.add_term(e, c.get_num());
  }
  return r;
}

std::string poly_str(const IntPoly& f, const std::vector<std::string>& vars) {
  return poly_str_impl(f, vars);
}

std::string poly_str(const RatPoly& f, const std::vector<std::string>& vars) {
  return poly_str_impl(f, vars);
}

RatPoly parse_rat_poly(std::string_view text,
                       const std::vector<std::string>& vars) {
  std::map<std::string, std::size_t, std::less<>> index;
  for (std::size_t j = 0; j < vars.size(); ++j) {
    if (vars[j].empty())
      throw invalid_input_error("empty variable name");
    if (!index.emplace(vars[j], j).second)
      throw invalid_input_error("duplicate variable name: " + vars[j]);
  }

  Lexer lx{text};
  RatPoly result(vars.size());
  if (lx.eof()) throw invalid_input_error("polynomial parse: empty input");

  bool first = true;
  while (!lx.eof()) {
    int sign = 1;
    if (first) {
      if (lx.peek() == '+' || lx.peek() == '-') {
        if (lx.peek() == '-') sign = -1;
        ++lx.i;
      }
      first = false;
    } else {
      char c = lx.peek();
      if (c != '+' && c != '-')
        throw invalid_input_error(
            "polynomial parse: expected '+' or '-' before \"" +
            std::string(lx.s.substr(lx.i)) + "\"");
      sign = c == '-' ? -1 : 1;
      ++lx.i;
    }

    Rat coef(sign);
    Exponents exps(vars.size(), 0);
    bool any_factor = false;
    while (true) {
      if (lx.is_digit()) {
        Int num = lx.read_integer();
        if (!lx.eof() && lx.peek() == '/') {
          ++lx.i;
          Int den = lx.read_integer();
          if (den == 0)
            throw invalid_input_error("polynomial parse: zero denominator");
          coef *= Rat(num) / Rat(den);
        } else {
          coef *= Rat(num);
        }
      } else if (lx.is_ident_start()) {
        std::string name = lx.read_ident();
        auto it = index.find(name);
        if (it == index.end())
          throw invalid_input_error("polynomial parse: unknown variable \"" +
                                    name + "\"");
        std::uint64_t exp = 1;
        if (!lx.eof() && lx.peek() == '^') {
          ++lx.i;
          Int e = lx.read_integer();
          if (e > kMaxExponent)
            throw invalid_input_error("polynomial parse: exponent too large");
          exp = e.get_ui();
        }
        std::uint64_t total = exps[it->second] + exp;
        if (total > kMaxExponent)
          throw invalid_input_error("polynomial parse: exponent too large");
        exps[it->second] = static_cast<std::uint32_t>(total);
      } else {
        throw invalid_input_error(
            "polynomial parse: unexpected character at \"" +
            std::string(lx.s.substr(lx.i)) + "\"");
      }
      any_factor = true;
      if (!lx.eof() && lx.peek() == '*') {
        ++lx.i;
        if (lx.eof())
          throw invalid_input_error(
              "polynomial parse: dangling '*' at end of input");
        continue;
      }
      break;
    }
    if (!any_factor)
      throw invalid_input_error("polynomial parse: empty term");
    result.add_term(exps, coef);
  }
  return result;
}

IntPoly parse_int_poly(std::string_view text,
                       const std::vector<std::string>& vars) {
  return to_int(parse_rat_poly(text, vars));
}

LocalRing::Elem eval(const IntPoly& f, const std::vector<LocalRing::Elem>& pt,
                     const LocalRing& R) {
  if (pt.size() != f.nvars())
    throw invalid_input_error("eval: point arity mismatch");
  LocalRing::Elem acc = R.zero();
  for (const auto& [e, c] : f.terms()) {
    LocalRing::Elem t = R.from_int(c);
    for (std::size_t j = 0; j < e.size(); ++j)
      if (e[j] > 0) t = R.mul(t, R.pow(pt[j], e[j]));
    acc = R.add(acc, t);
  }
  return acc;
}

Int eval_int(const IntPoly& f, const std::vector<Int>& pt) {
  if (pt.size() != f.nvars())
    throw invalid_input_error("eval: point arity mismatch");
  Int acc = 0;
  for (const auto& [e, c] : f.terms()) {
    Int t = c;
    for (std::size_t j = 0; j < e.size(); ++j)
      for (std::uint32_t k = 0; k < e[j]; ++k) t *= pt[j];
    acc += t;
  }
  return acc;
}

Rat eval_rat(const RatPoly& f, const std::vector<Rat>& pt) {
  if (pt.size() != f.nvars())
    throw invalid_input_error("eval: point arity mismatch");
  Rat acc = 0;
  for (const auto& [e, c] : f.terms()) {
    Rat t = c;
    for (std::size_t j = 0; j < e.size(); ++j)
      for (std::uint32_t k = 0; k < e[j]; ++k) t *= pt[j];
    acc += t;
  }
  return acc;
}

IntPoly derivative(const IntPoly& f, std::size_t var) {
  if (var >= f.nvars())
    throw invalid_input_error("derivative: variable index out of range");
  IntPoly r(f.nvars());
  for (const auto& [e, c] : f.terms()) {
    if (e[var] == 0) continue;
    Exponents d = e;
    d[var] -= 1;
    r.add_term(d, Int(c * e[var]));
  }
  return r;
}

std::vector<std::vector<IntPoly>> jacobian(const std::vector<IntPoly>& F) {
  if (F.empty())
    throw invalid_input_error("jacobian: empty polynomial list");
  const std::size_t m = F[0].nvars();
  for (const auto& f : F)
    if (f.nvars() != m)
      throw invalid_input_error("jacobian: variable counts differ");
  std::vector<std::vector<IntPoly>> J;
  J.reserve(F.size());
  for (const auto& f : F) {
    std::vector<IntPoly> row;
    row.reserve(m);
    for (std::size_t j = 0; j < m; ++j) row.push_back(derivative(f, j));
    J.push_back(std::move(row));
  }
  return J;
}

std::vector<std::vector<IntPoly>> jacobian(const PolyMap& F) {
  validate(F);
  std::vector<IntPoly> comps;
  comps.reserve(F.components.size());
  for (const auto& g : F.components) comps.push_back(to_int(g));
  return jacobian(comps);
}

RatPoly scale_poly(const IntPoly& g, const Int& K) {
  if (K < 1) throw invalid_input_error("scale factor must be >= 1");
  RatPoly r(g.nvars());
  for (const auto& [e, c] : g.terms()) {
    Rat q(c);
    q /= Rat(pow_int(K, static_cast<unsigned long>(total_degree(e))));
    r.add_term(e, q);
  }
  return r;
}

std::uint32_t r_of_K(const std::vector<IntPoly>& fs, const Int& K) {
  if (K < 1) throw invalid_input_error("scale factor must be >= 1");
  if (K == 1) return 0;
  std::uint64_t max_deg = 0;
  for (const auto& f : fs) max_deg = std::max(max_deg, f.degree());
  for (std::uint32_t r = 0;; ++r) {
    bool ok = true;
    for (const auto& f : fs) {
      for (const auto& [e, c] : f.terms()) {
        std::uint64_t d = total_degree(e);
        if (d <= r) continue;
        Int div = pow_int(K, static_cast<unsigned long>(d - r));
        if (!mpz_divisible_p(c.get_mpz_t(), div.get_mpz_t())) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
    }
    if (ok) return r;
    if (r >= max_deg)
      throw invalid_input_error("scaling exponent search failed");
  }
}

std::pair<IntPoly, Int> clear_denominators(const RatPoly& g) {
  if (g.is_zero())
    throw invalid_input_error("clear_denominators: zero polynomial");
  Int content = 1;
  for (const auto& [e, c] : g.terms())
    mpz_lcm(content.get_mpz_t(), content.get_mpz_t(), c.get_den().get_mpz_t());
  IntPoly r(g.nvars());
  for (const auto& [e, c] : g.terms())
    r.add_term(e, Int(c.get_num() * (content / c.get_den())));
  return {std::move(r), content};
}

}  // namespace frslab
