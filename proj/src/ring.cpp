#include "frslab/ring.hpp"

#include <algorithm>
#include <sstream>

namespace frslab {

namespace {

// --- dense polynomial helpers over F_p, used only for modulus selection ---

using FpPoly = std::vector<std::uint64_t>;  // coefficients, low to high

FpPoly fp_mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& f,
                 std::uint64_t p) {
  FpPoly c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j)
      c[i + j] = (c[i + j] + a[i] * b[j]) % p;
  }
  // reduce by the monic f of degree r
  size_t r = f.size() - 1;
  for (size_t i = c.size(); i-- > r;) {
    std::uint64_t t = c[i];
    if (t == 0) continue;
    c[i] = 0;
    for (size_t j = 0; j < r; ++j)
      c[i - r + j] = (c[i - r + j] + (p - f[j] % p) * t) % p;
  }
  c.resize(r);
  return c;
}

bool fp_is_zero(const FpPoly& a) {
  return std::all_of(a.begin(), a.end(), [](std::uint64_t c) { return c == 0; });
}

FpPoly fp_gcd(FpPoly a, FpPoly b, std::uint64_t p) {
  auto deg = [](const FpPoly& v) -> int {
    for (size_t i = v.size(); i-- > 0;)
      if (v[i] != 0) return static_cast<int>(i);
    return -1;
  };
  while (!fp_is_zero(b)) {
    int db = deg(b);
    std::uint64_t lead_inv = powmod_u64(b[static_cast<size_t>(db)], p - 2, p);
    // a mod b
    for (int da = deg(a); da >= db && da >= 0; da = deg(a)) {
      std::uint64_t c = mulmod_u64(a[static_cast<size_t>(da)], lead_inv, p);
      for (int j = 0; j <= db; ++j) {
        auto& t = a[static_cast<size_t>(da - db + j)];
        t = (t + (p - mulmod_u64(c, b[static_cast<size_t>(j)], p))) % p;
      }
    }
    std::swap(a, b);
  }
  return a;
}

// monic degree-r poly given by low coefficients c (c_r = 1 implied)
bool fp_irreducible(const std::vector<std::uint64_t>& low, std::uint64_t p) {
  size_t r = low.size();
  FpPoly f(low);
  f.push_back(1);
  if (r == 1) return true;  // monic linear
  // x^(p^r) == x mod f, and gcd(x^(p^(r/l)) - x, f) == 1 for prime l | r
  auto frob_iter = [&](unsigned k) {  // x^(p^k) mod f
    FpPoly acc(r, 0);
    acc[1] = 1;
    for (unsigned i = 0; i < k; ++i) {
      // raise to p-th power via exponentiation of the element
      FpPoly res(r, 0);
      res[0] = 1;
      std::uint64_t e = p;
      FpPoly base = acc;
      while (e) {
        if (e & 1) res = fp_mulmod(res, base, f, p);
        base = fp_mulmod(base, base, f, p);
        e >>= 1;
      }
      acc = res;
    }
    return acc;
  };
  FpPoly xq = frob_iter(static_cast<unsigned>(r));
  FpPoly x(r, 0);
  x[1] = 1;
  if (xq != x) return false;
  for (unsigned l = 2; l <= r; ++l) {
    if (r % l != 0) continue;
    bool l_prime = true;
    for (unsigned d = 2; d * d <= l; ++d)
      if (l % d == 0) l_prime = false;
    if (!l_prime) continue;
    FpPoly g = frob_iter(static_cast<unsigned>(r / l));
    g[1] = (g[1] + p - 1) % p;  // subtract x
    FpPoly h = fp_gcd(f, g, p);
    int dh = -1;
    for (size_t i = h.size(); i-- > 0;)
      if (h[i] != 0) {
        dh = static_cast<int>(i);
        break;
      }
    if (dh != 0) return false;
  }
  return true;
}

}  // namespace

LocalRing::LocalRing(std::uint64_t p, int n, int r) : p_(p), n_(n), r_(r) {
  if (!is_prime_u64(p)) throw invalid_input_error("p must be prime");
  if (n < 1) throw invalid_input_error("level n must be at least 1");
  if (r < 1) throw invalid_input_error("extension degree r must be at least 1");
  if (r > kMaxDegree)
    throw resource_limit_error("extension degree beyond supported range");
  pn_ = pow_u64_checked(p, static_cast<unsigned>(n), std::uint64_t(1) << 62);
  if (r > 1) select_modulus();
}

void LocalRing::select_modulus() {
  // candidate scan is p^r polynomials; refuse absurd sizes
  pow_u64_checked(p_, static_cast<unsigned>(r_), 10'000'000);
  std::vector<std::uint64_t> low(static_cast<size_t>(r_), 0);
  while (true) {
    if (fp_irreducible(low, p_)) {
      modulus_.assign(low.begin(), low.end());
      return;
    }
    // lex successor: (c_0 .. c_{r-1}) with c_{r-1} moving fastest
    int i = r_ - 1;
    while (i >= 0 && low[static_cast<size_t>(i)] == p_ - 1) {
      low[static_cast<size_t>(i)] = 0;
      --i;
    }
    if (i < 0)
      throw invalid_input_error("no irreducible modulus found");  // unreachable
    ++low[static_cast<size_t>(i)];
  }
}

LocalRing LocalRing::at_level(int k) const {
  if (k < 1 || k > n_) throw invalid_input_error("level out of range");
  LocalRing s;
  s.p_ = p_;
  s.n_ = k;
  s.r_ = r_;
  s.pn_ = 1;
  for (int i = 0; i < k; ++i) s.pn_ *= p_;
  s.modulus_ = modulus_;
  for (auto& c : s.modulus_) c %= s.pn_;
  return s;
}

Int LocalRing::unit_count() const {
  // non-units are the multiples of p
  return cardinality() - pow_uint(p_, static_cast<unsigned long>(n_ - 1) * r_);
}

LocalRing::Elem LocalRing::one() const {
  Elem e = zero();
  e[0] = 1 % pn_;
  return e;
}

LocalRing::Elem LocalRing::from_int(const Int& v) const {
  Elem e = zero();
  Int m = v % Int(static_cast<unsigned long>(pn_));
  if (m < 0) m += static_cast<unsigned long>(pn_);
  e[0] = m.get_ui();
  return e;
}

LocalRing::Elem LocalRing::make(const std::vector<Int>& coords) const {
  if (coords.size() != static_cast<size_t>(r_))
    throw invalid_input_error("coefficient vector has wrong length");
  Elem e = zero();
  for (size_t i = 0; i < coords.size(); ++i) {
    Int m = coords[i] % Int(static_cast<unsigned long>(pn_));
    if (m < 0) m += static_cast<unsigned long>(pn_);
    e[i] = m.get_ui();
  }
  return e;
}

void LocalRing::add_w(const Word* a, const Word* b, Word* out) const {
  for (int i = 0; i < r_; ++i) {
    Word s = a[i] + b[i];
    out[i] = s >= pn_ ? s - pn_ : s;
  }
}

void LocalRing::sub_w(const Word* a, const Word* b, Word* out) const {
  for (int i = 0; i < r_; ++i) {
    out[i] = a[i] >= b[i] ? a[i] - b[i] : a[i] + (pn_ - b[i]);
  }
}

void LocalRing::scalar_mul_w(Word s, const Word* a, Word* out) const {
  for (int i = 0; i < r_; ++i) out[i] = mulmod_u64(s, a[i], pn_);
}

bool LocalRing::is_zero_w(const Word* a) const {
  for (int i = 0; i < r_; ++i)
    if (a[i] != 0) return false;
  return true;
}

void LocalRing::mul_w(const Word* a, const Word* b, Word* out) const {
  if (r_ == 1) {
    out[0] = mulmod_u64(a[0], b[0], pn_);
    return;
  }
  Word conv[2 * kMaxDegree - 1] = {0};
  for (int i = 0; i < r_; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < r_; ++j) {
      conv[i + j] =
          (conv[i + j] + static_cast<unsigned __int128>(a[i]) * b[j]) % pn_;
    }
  }
  // fold degrees >= r down via the monic modulus
  for (int i = 2 * r_ - 2; i >= r_; --i) {
    Word t = conv[i];
    if (t == 0) continue;
    conv[i] = 0;
    for (int j = 0; j < r_; ++j) {
      Word red = mulmod_u64(t, modulus_[static_cast<size_t>(j)] % pn_, pn_);
      Word& c = conv[i - r_ + j];
      c = c >= red ? c - red : c + (pn_ - red);
    }
  }
  for (int i = 0; i < r_; ++i) out[i] = conv[i];
}

LocalRing::Elem LocalRing::add(const Elem& a, const Elem& b) const {
  Elem out = zero();
  add_w(a.data(), b.data(), out.data());
  return out;
}

LocalRing::Elem LocalRing::sub(const Elem& a, const Elem& b) const {
  Elem out = zero();
  sub_w(a.data(), b.data(), out.data());
  return out;
}

LocalRing::Elem LocalRing::neg(const Elem& a) const {
  Elem out = zero();
  sub_w(out.data(), a.data(), out.data());
  return out;
}

LocalRing::Elem LocalRing::mul(const Elem& a, const Elem& b) const {
  Elem out = zero();
  mul_w(a.data(), b.data(), out.data());
  return out;
}

LocalRing::Elem LocalRing::pow(const Elem& a, std::uint64_t e) const {
  Elem acc = one();
  Elem base = a;
  while (e) {
    if (e & 1) acc = mul(acc, base);
    base = mul(base, base);
    e >>= 1;
  }
  return acc;
}

bool LocalRing::is_zero(const Elem& a) const { return is_zero_w(a.data()); }

int LocalRing::valuation(const Elem& a) const {
  int best = n_;
  for (int i = 0; i < r_; ++i) {
    Word c = a[static_cast<size_t>(i)];
    if (c == 0) continue;
    int v = 0;
    while (c % p_ == 0) {
      c /= p_;
      ++v;
    }
    best = std::min(best, v);
  }
  return best;
}

LocalRing::Elem LocalRing::inv(const Elem& a) const {
  if (n_ != 1) throw invalid_input_error("inverse requires the residue field");
  if (is_zero(a)) throw invalid_input_error("zero has no inverse");
  std::uint64_t q = 1;
  for (int i = 0; i < r_; ++i) q *= p_;
  return pow(a, q - 2);
}

LocalRing::Elem LocalRing::element_at(Int index) const {
  Elem e = zero();
  Int base(static_cast<unsigned long>(pn_));
  for (int i = r_ - 1; i >= 0; --i) {
    Int digit = index % base;
    e[static_cast<size_t>(i)] = digit.get_ui();
    index /= base;
  }
  return e;
}

std::vector<LocalRing::Elem> LocalRing::enumerate(std::uint64_t cap) const {
  Int total = cardinality();
  if (total > Int(static_cast<unsigned long>(cap)))
    throw resource_limit_error("ring too large to enumerate under the cap");
  std::vector<Elem> out;
  std::uint64_t count = total.get_ui();
  out.reserve(count);
  Elem cur = zero();
  for (std::uint64_t i = 0; i < count; ++i) {
    out.push_back(cur);
    // odometer with the last coefficient fastest = lex order, c_0 major
    for (int j = r_ - 1; j >= 0; --j) {
      auto& c = cur[static_cast<size_t>(j)];
      if (++c < pn_) break;
      c = 0;
    }
  }
  return out;
}

std::string LocalRing::str(const Elem& a) const {
  if (r_ == 1) return std::to_string(a[0]);
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < r_; ++i) {
    if (i) os << ',';
    os << a[static_cast<size_t>(i)];
  }
  os << ')';
  return os.str();
}

}  // namespace frslab
