#include "frslab/scheme.hpp"

#include <cctype>
#include <set>

#include <openssl/evp.h>

#include "frslab/count.hpp"
#include "frslab/errors.hpp"
#include "frslab/schemefile.hpp"

namespace frslab {

namespace {

bool valid_identifier(const std::string& s) {
  if (s.empty()) return false;
  unsigned char first = static_cast<unsigned char>(s[0]);
  if (!std::isalpha(first) && first != '_') return false;
  for (char ch : s) {
    unsigned char c = static_cast<unsigned char>(ch);
    if (!std::isalnum(c) && c != '_') return false;
  }
  return true;
}

// Rational-coefficient evaluation over a prime field; every denominator
// must be a unit there (the caller screens the primes).
LocalRing::Elem eval_rat_mod(const RatPoly& f,
                             const std::vector<LocalRing::Elem>& pt,
                             const LocalRing& F) {
  LocalRing::Elem acc = F.zero();
  for (const auto& [e, c] : f.terms()) {
    LocalRing::Elem t =
        F.mul(F.from_int(c.get_num()), F.inv(F.from_int(c.get_den())));
    for (std::size_t j = 0; j < e.size(); ++j)
      if (e[j] > 0) t = F.mul(t, F.pow(pt[j], e[j]));
    acc = F.add(acc, t);
  }
  return acc;
}

bool denominator_divisible(const CIAWitness& w, std::uint64_t p) {
  auto check = [&](const RatPoly& f) {
    for (const auto& [e, c] : f.terms())
      if (mpz_divisible_ui_p(c.get_den().get_mpz_t(),
                             static_cast<unsigned long>(p)))
        return true;
    return false;
  };
  for (const auto& g : w.phi.components)
    if (check(g)) return true;
  for (const auto& g : w.psi)
    if (check(g)) return true;
  return false;
}

void check_cia(const SchemePresentation& X, std::vector<std::string>& out) {
  const CIAWitness& w = *X.cia;
  const std::size_t c = X.nvars();
  bool shape_ok = true;

  if (w.phi.source_vars != w.M || w.phi.components.size() != w.N ||
      w.N == 0) {
    out.push_back("cia map shape mismatch: phi must have N >= 1 components "
                  "in M variables");
    shape_ok = false;
  }
  for (const auto& g : w.phi.components)
    if (g.nvars() != w.M) {
      out.push_back("cia map component not in M variables");
      shape_ok = false;
      break;
    }
  if (w.psi.size() != w.M) {
    out.push_back("cia embedding must have M coordinate functions");
    shape_ok = false;
  }
  for (const auto& g : w.psi)
    if (g.nvars() != c) {
      out.push_back("cia embedding coordinate not in the scheme's variables");
      shape_ok = false;
      break;
    }
  if (w.M < w.N || w.M - w.N != static_cast<std::size_t>(X.dim_Q))
    out.push_back("cia dimension mismatch: M - N must equal dim_Q");
  if (!shape_ok) return;

  if (w.membership) {
    const auto& a = *w.membership;
    if (a.size() != w.N) {
      out.push_back("cia membership certificate shape mismatch");
      return;
    }
    for (const auto& row : a)
      if (row.size() != X.generators.size()) {
        out.push_back("cia membership certificate shape mismatch");
        return;
      }
    for (std::size_t jrow = 0; jrow < w.N; ++jrow) {
      RatPoly lhs = substitute(w.phi.components[jrow], w.psi);
      RatPoly rhs(c);
      for (std::size_t k = 0; k < X.generators.size(); ++k)
        rhs += a[jrow][k] * to_rat(X.generators[k]);
      if (!(lhs == rhs)) {
        out.push_back("cia membership certificate fails for component " +
                      std::to_string(jrow + 1));
        return;
      }
    }
    return;
  }

  // No certificate: smoke-test compatibility on every F_p point of X for
  // the small primes where all denominators stay invertible.
  for (std::uint64_t p : {2ull, 3ull}) {
    if (denominator_divisible(w, p)) continue;
    LocalRing F(p, 1, 1);
    const std::uint64_t card = p;
    std::vector<std::uint64_t> idx(c, 0);
    while (true) {
      std::vector<LocalRing::Elem> pt;
      pt.reserve(c);
      for (std::size_t j = 0; j < c; ++j) pt.push_back(F.element_at(Int(idx[j])));
      bool on_scheme = true;
      for (const auto& f : X.generators)
        if (!F.is_zero(eval(f, pt, F))) {
          on_scheme = false;
          break;
        }
      if (on_scheme) {
        std::vector<LocalRing::Elem> img;
        img.reserve(w.M);
        for (const auto& g : w.psi) img.push_back(eval_rat_mod(g, pt, F));
        for (const auto& g : w.phi.components)
          if (!F.is_zero(eval_rat_mod(g, img, F))) {
            std::string coords;
            for (std::size_t j = 0; j < c; ++j)
              coords += (j ? "," : "") + F.str(pt[j]);
            out.push_back("cia compatibility fails over F_" +
                          std::to_string(p) + " at (" + coords + ")");
            return;
          }
      }
      std::size_t j = 0;
      while (j < c && ++idx[j] == card) idx[j++] = 0;
      if (j == c) break;
    }
  }
}

void check_cover(const SchemePresentation& X, std::vector<std::string>& out) {
  const CoverCertificate& cc = *X.cover;
  const std::size_t c = X.nvars();
  bool shape_ok = true;
  if (cc.opens.empty()) {
    out.push_back("cover has no opens");
    shape_ok = false;
  }
  for (const auto& o : cc.opens)
    if (o.g.nvars() != c || o.c.nvars() != c) {
      out.push_back("cover polynomial not in the scheme's variables");
      shape_ok = false;
      break;
    }
  for (const auto& h : cc.syzygy)
    if (h.nvars() != c) {
      out.push_back("cover syzygy polynomial not in the scheme's variables");
      shape_ok = false;
      break;
    }
  if (cc.syzygy.size() != X.generators.size()) {
    out.push_back("cover syzygy must have one polynomial per generator");
    shape_ok = false;
  }
  if (cc.D == 0) {
    out.push_back("cover constant D is zero");
    shape_ok = false;
  }
  if (!shape_ok) return;

  IntPoly lhs(c);
  for (const auto& o : cc.opens) lhs += o.c * o.g;
  lhs -= IntPoly::constant(c, cc.D);
  IntPoly rhs(c);
  for (std::size_t j = 0; j < X.generators.size(); ++j)
    rhs += cc.syzygy[j] * X.generators[j];
  if (!(lhs == rhs)) out.push_back("cover syzygy identity fails");
}

}  // namespace

std::vector<std::string> validate(const SchemePresentation& X) {
  std::vector<std::string> out;
  const std::size_t c = X.nvars();
  if (c == 0) out.push_back("scheme has no variables");
  std::set<std::string> seen;
  for (const auto& v : X.vars) {
    if (!valid_identifier(v)) out.push_back("invalid variable name: " + v);
    if (!seen.insert(v).second)
      out.push_back("duplicate variable name: " + v);
  }
  for (const auto& f : X.generators)
    if (f.nvars() != c) {
      out.push_back("generator not in the scheme's variables");
      break;
    }
  if (X.dim_Q < 0 || static_cast<std::size_t>(X.dim_Q) > c)
    out.push_back("declared dimension out of range");

  if (!out.empty()) return out;
  if (X.cia) check_cia(X, out);
  if (X.cover) check_cover(X, out);
  return out;
}

std::string scheme_hash(const SchemePresentation& X) {
  const std::string bytes = scheme_to_json(X, /*include_name=*/false);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(),
                 nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xf];
  }
  return out;
}

std::vector<DimSanityEntry> dim_sanity(const SchemePresentation& X,
                                       const std::vector<std::uint64_t>& primes,
                                       const Limits& lim) {
  std::vector<DimSanityEntry> out;
  for (std::uint64_t p : primes) {
    LocalRing F(p, 1, 1);
    DimSanityEntry e;
    e.p = p;
    e.count = count_naive(X.generators, X.nvars(), F, lim);
    if (e.count == 0) {
      e.round_log = 0;
      e.agrees = X.dim_Q == 0;
    } else {
      // round(log_p count) = smallest e with count^2 <= p^(2e+1)
      int est = 0;
      Int sq = e.count * e.count;
      while (sq > pow_uint(p, static_cast<unsigned long>(2 * est + 1))) ++est;
      e.round_log = est;
      e.agrees = est == X.dim_Q;
    }
    out.push_back(std::move(e));
  }
  return out;
}

Int basic_open_count(const SchemePresentation& X, const IntPoly& g,
                     const LocalRing& R, const Limits& lim) {
  const std::size_t c = X.nvars();
  if (g.nvars() != c)
    throw invalid_input_error("basic open: polynomial not in the scheme's "
                              "variables");
  std::vector<IntPoly> aux;
  aux.reserve(X.generators.size() + 1);
  for (const auto& f : X.generators) aux.push_back(pad_vars(f, c + 1));
  IntPoly inv_witness =
      pad_vars(g, c + 1) * IntPoly::variable(c + 1, c) -
      IntPoly::constant(c + 1, Int(1));
  aux.push_back(std::move(inv_witness));
  return count_naive(aux, c + 1, R, lim);
}

std::pair<Int, Int> cover_inclusion_exclusion(const SchemePresentation& X,
                                              const IntPoly& g1,
                                              const IntPoly& g2,
                                              const LocalRing& R,
                                              const Limits& lim) {
  if (!X.cover)
    throw invalid_input_error("inclusion-exclusion requires a cover "
                              "certificate");
  const auto& opens = X.cover->opens;
  bool matches = opens.size() == 2 &&
                 ((opens[0].g == g1 && opens[1].g == g2) ||
                  (opens[0].g == g2 && opens[1].g == g1));
  if (!matches)
    throw invalid_input_error("cover certificate does not cover exactly "
                              "{g1, g2}");
  Int lhs = count_naive(X.generators, X.nvars(), R, lim);
  Int rhs = basic_open_count(X, g1, R, lim) +
            basic_open_count(X, g2, R, lim) -
            basic_open_count(X, g1 * g2, R, lim);
  return {std::move(lhs), std::move(rhs)};
}

}  // namespace frslab
