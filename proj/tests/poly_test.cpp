#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <doctest.h>

#include "frslab/errors.hpp"
#include "frslab/poly.hpp"
#include "frslab/ring.hpp"

using frslab::Exponents;
using frslab::Int;
using frslab::IntPoly;
using frslab::LocalRing;
using frslab::PolyMap;
using frslab::Rat;
using frslab::RatPoly;

namespace {

const std::vector<std::string> kX{"x"};
const std::vector<std::string> kXY{"x", "y"};
const std::vector<std::string> kXYZ{"x", "y", "z"};

IntPoly P(const std::string& text, const std::vector<std::string>& vars) {
  return frslab::parse_int_poly(text, vars);
}

RatPoly PR(const std::string& text, const std::vector<std::string>& vars) {
  return frslab::parse_rat_poly(text, vars);
}

std::string canon(const std::string& text,
                  const std::vector<std::string>& vars) {
  return frslab::poly_str(PR(text, vars), vars);
}

LocalRing::Elem reduce_elem(const LocalRing::Elem& a, const LocalRing& Rk) {
  std::vector<Int> coords;
  coords.reserve(a.size());
  for (auto w : a) coords.emplace_back(static_cast<unsigned long>(w));
  return Rk.make(coords);
}

}  // namespace

TEST_CASE("parser accepts the textual grammar and canonicalizes") {
  CHECK(canon("y^2 + x^3", kXY) == "x^3 + y^2");
  CHECK(canon("-x^3 + y^2", kXY) == "-x^3 + y^2");
  CHECK(canon("x*x - 2", kX) == "x^2 - 2");
  CHECK(canon("2*x^2*y - x*y + y", kXY) == "2*x^2*y - x*y + y");
  CHECK(canon("1/2*y + x^2", kXY) == "x^2 + 1/2*y");
  CHECK(canon("y^2 + x*y + x^2", kXY) == "x^2 + x*y + y^2");
  CHECK(canon("0*x + 5", kX) == "5");
  CHECK(canon("x - x", kX) == "0");
  CHECK(canon("x + 2*x", kX) == "3*x");
  CHECK(canon("x^0", kX) == "1");
  CHECK(canon("- 3", kX) == "-3");
  CHECK(canon("2*3*x", kX) == "6*x");
  CHECK(canon("x^3 - y^2 + x + 1", kXY) == "x^3 - y^2 + x + 1");

  SUBCASE("printing is idempotent under reparse") {
    for (const std::string& s :
         {"x^2 - 2", "x*y", "x^2 + y^2 + z^2", "x^3 - y^2",
          "x^3 - y^2 + x + 1", "2*x^2 - y", "1/4*x^2 - 1/4*y", "0"}) {
      std::string once = canon(s, kXYZ);
      CHECK(canon(once, kXYZ) == once);
    }
  }

  SUBCASE("round-trip preserves the polynomial value") {
    RatPoly f = PR("2*x^2*y - 1/3*y + 7", kXY);
    CHECK(PR(frslab::poly_str(f, kXY), kXY) == f);
  }
}

TEST_CASE("parser rejects malformed input") {
  CHECK_THROWS_AS(PR("", kX), frslab::invalid_input_error);
  CHECK_THROWS_AS(PR("   ", kX), frslab::invalid_input_error);
  CHECK_THROWS_AS(PR("z", kXY), frslab::invalid_input_error);
  CHECK_THROWS_AS(PR("x^", kX), frslab::invalid_input_error);
  CHECK_THROWS_AS(PR("x +", kX), frslab::invalid_input_error);
  CHECK_THROWS_AS(PR("x y", kXY), frslab::invalid_input_error);
  CHECK_THROWS_AS(PR("2/0", kX), frslab::invalid_input_error);
  CHECK_THROWS_AS(PR("x*", kX), frslab::invalid_input_error);
  CHECK_THROWS_AS(PR("x**y", kXY), frslab::invalid_input_error);
  CHECK_THROWS_AS(PR("(x)", kX), frslab::invalid_input_error);
  CHECK_THROWS_AS(PR("x^999999999", kX), frslab::invalid_input_error);
  CHECK_THROWS_AS(frslab::parse_rat_poly("x", {"x", "x"}),
                  frslab::invalid_input_error);
  // integral parse refuses genuinely rational coefficients
  CHECK_THROWS_AS(P("1/2*x", kX), frslab::invalid_input_error);
  CHECK(P("2/2*x", kX) == P("x", kX));
}

TEST_CASE("evaluation over local rings") {
  LocalRing z9(3, 2);
  IntPoly f = P("x^2 - 2", kX);
  CHECK(frslab::eval(f, {z9.from_int(5)}, z9) == z9.from_int(5));

  IntPoly g = P("x*y", kXY);
  CHECK(z9.is_zero(frslab::eval(g, {z9.from_int(3), z9.from_int(3)}, z9)));

  LocalRing z3(3, 1);
  IntPoly s = P("x^2 + y^2 + z^2", kXYZ);
  CHECK(z3.is_zero(frslab::eval(
      s, {z3.from_int(1), z3.from_int(1), z3.from_int(1)}, z3)));

  CHECK_THROWS_AS(frslab::eval(g, {z9.from_int(1)}, z9),
                  frslab::invalid_input_error);

  SUBCASE("integer and rational evaluation agree with substitution") {
    CHECK(frslab::eval_int(f, {Int(5)}) == 23);
    CHECK(frslab::eval_rat(PR("1/2*x + 1/3*y", kXY), {Rat(2), Rat(3)}) == 2);
  }
}

TEST_CASE("evaluation commutes with level reduction") {
  struct Case {
    std::string text;
    std::vector<std::string> vars;
  };
  const std::vector<Case> corpus = {
      {"x^2", kX},          {"x^2 - 2", kX},
      {"x*y", kXY},         {"2*x^2 - y", kXY},
      {"x^3 - y^2", kXY},   {"x^3 - y^2 + x + 1", kXY},
      {"x^2 + y^2 + z^2", kXYZ},
  };
  std::mt19937_64 rng(20260814);
  for (const auto& cs : corpus) {
    IntPoly f = P(cs.text, cs.vars);
    const std::size_t c = cs.vars.size();
    for (std::uint64_t p : {2, 3, 5}) {
      for (int r : {1, 2}) {
        for (int n : {2, 3}) {
          LocalRing R(p, n, r);
          std::uint64_t card = R.cardinality().get_ui();
          for (int k = 1; k < n; ++k) {
            LocalRing Rk = R.at_level(k);
            // exhaustive when the point count is small, sampled otherwise
            double total = 1;
            for (std::size_t j = 0; j < c; ++j) total *= double(card);
            if (total <= 4096) {
              std::vector<std::uint64_t> idx(c, 0);
              while (true) {
                std::vector<LocalRing::Elem> pt, ptk;
                for (std::size_t j = 0; j < c; ++j) {
                  pt.push_back(R.element_at(Int(idx[j])));
                  ptk.push_back(reduce_elem(pt.back(), Rk));
                }
                CHECK(reduce_elem(frslab::eval(f, pt, R), Rk) ==
                      frslab::eval(f, ptk, Rk));
                std::size_t j = 0;
                while (j < c && ++idx[j] == card) idx[j++] = 0;
                if (j == c) break;
              }
            } else {
              for (int trial = 0; trial < 120; ++trial) {
                std::vector<LocalRing::Elem> pt, ptk;
                for (std::size_t j = 0; j < c; ++j) {
                  pt.push_back(R.element_at(Int(rng() % card)));
                  ptk.push_back(reduce_elem(pt.back(), Rk));
                }
                CHECK(reduce_elem(frslab::eval(f, pt, R), Rk) ==
                      frslab::eval(f, ptk, Rk));
              }
            }
          }
        }
      }
    }
  }
}

TEST_CASE("formal derivatives and Jacobians") {
  CHECK(frslab::derivative(P("x^2 - y", kXY), 0) == P("2*x", kXY));
  CHECK(frslab::derivative(P("x^2 - y", kXY), 1) == P("-1", kXY));

  auto J1 = frslab::jacobian({P("x*y", kXY)});
  REQUIRE(J1.size() == 1);
  CHECK(J1[0][0] == P("y", kXY));
  CHECK(J1[0][1] == P("x", kXY));

  auto J2 = frslab::jacobian({P("x^2 + y^2 + z^2", kXYZ)});
  CHECK(J2[0][0] == P("2*x", kXYZ));
  CHECK(J2[0][1] == P("2*y", kXYZ));
  CHECK(J2[0][2] == P("2*z", kXYZ));

  auto J3 = frslab::jacobian({P("x^2 - y", kXY), P("x*y", kXY)});
  REQUIRE(J3.size() == 2);
  CHECK(J3[1][0] == P("y", kXY));

  CHECK_THROWS_AS(frslab::jacobian(std::vector<IntPoly>{}),
                  frslab::invalid_input_error);
  CHECK_THROWS_AS(frslab::jacobian({P("x", kX), P("x*y", kXY)}),
                  frslab::invalid_input_error);

  SUBCASE("derivative is linear on random polynomials") {
    std::mt19937_64 rng(7);
    auto random_poly = [&]() {
      IntPoly f(3);
      for (int t = 0; t < 5; ++t) {
        Exponents e{std::uint32_t(rng() % 4), std::uint32_t(rng() % 4),
                    std::uint32_t(rng() % 4)};
        f.add_term(e, Int(static_cast<long>(rng() % 11) - 5));
      }
      return f;
    };
    for (int trial = 0; trial < 25; ++trial) {
      IntPoly f = random_poly();
      IntPoly g = random_poly();
      for (std::size_t j = 0; j < 3; ++j)
        CHECK(frslab::derivative(f + g, j) ==
              frslab::derivative(f, j) + frslab::derivative(g, j));
    }
  }
}

TEST_CASE("polynomial map validation") {
  PolyMap F;
  F.source_vars = 2;
  CHECK_THROWS_AS(frslab::validate(F), frslab::invalid_input_error);
  F.components.push_back(PR("x^2", kXY));
  CHECK_NOTHROW(frslab::validate(F));
  F.components.push_back(PR("x", kX));
  CHECK_THROWS_AS(frslab::validate(F), frslab::invalid_input_error);
  F.components.pop_back();
  F.components.push_back(PR("1/2*x", kXY));
  CHECK_THROWS_AS(frslab::jacobian(F), frslab::invalid_input_error);
}

TEST_CASE("variable scaling") {
  CHECK(frslab::scale_poly(P("x^2 - 2", kX), 2) == PR("1/4*x^2 - 2", kX));
  CHECK(frslab::scale_poly(P("x*y", kXY), 3) == PR("1/9*x*y", kXY));
  CHECK(frslab::scale_poly(P("x^3 - y^2", kXY), 1) ==
        frslab::to_rat(P("x^3 - y^2", kXY)));
  CHECK_THROWS_AS(frslab::scale_poly(P("x", kX), 0),
                  frslab::invalid_input_error);

  SUBCASE("substituting K*x undoes the scaling") {
    for (const std::string& s :
         {"x^2 - 2", "x*y", "2*x^2 - y", "x^3 - y^2 + x + 1"}) {
      IntPoly g = P(s, kXY);
      for (long K : {2, 3, 6}) {
        std::vector<RatPoly> images{PR(std::to_string(K) + "*x", kXY),
                                    PR(std::to_string(K) + "*y", kXY)};
        CHECK(frslab::substitute(frslab::scale_poly(g, Int(K)), images) ==
              frslab::to_rat(g));
      }
    }
  }
}

TEST_CASE("minimal clearing exponent") {
  CHECK(frslab::r_of_K({P("x^2 - 2", kX)}, 2) == 2);
  CHECK(frslab::r_of_K({P("x", kX)}, 5) == 1);
  CHECK(frslab::r_of_K({P("x^3 - y^2", kXY), P("x*y", kXY)}, 1) == 0);
  CHECK(frslab::r_of_K({P("2*x^2 - y", kXY)}, 2) == 1);

  SUBCASE("minimality: one step lower is non-integral") {
    const std::vector<std::vector<IntPoly>> families = {
        {P("x^2 - 2", kX)},
        {P("x^2 + y^2 + z^2", kXYZ)},
        {P("x^3 - y^2", kXY), P("x*y", kXY)},
    };
    for (const auto& fs : families) {
      for (long K : {2, 3, 6}) {
        std::uint32_t r = frslab::r_of_K(fs, K);
        Int Kr = frslab::pow_int(Int(K), r);
        for (const auto& f : fs)
          CHECK(frslab::is_integral(frslab::scale_poly(f, K) * Rat(Kr)));
        if (r > 0) {
          Int Km = frslab::pow_int(Int(K), r - 1);
          bool some_fractional = false;
          for (const auto& f : fs)
            if (!frslab::is_integral(frslab::scale_poly(f, K) * Rat(Km)))
              some_fractional = true;
          CHECK(some_fractional);
        }
      }
    }
  }

  SUBCASE("clearing exponent turns x^2 - 2 into x^2 - 8") {
    IntPoly g = P("x^2 - 2", kX);
    std::uint32_t r = frslab::r_of_K({g}, 2);
    RatPoly scaled = frslab::scale_poly(g, 2) * Rat(frslab::pow_int(2, r));
    CHECK(frslab::to_int(scaled) == P("x^2 - 8", kX));
  }
}

TEST_CASE("denominator clearing") {
  auto [f1, c1] = frslab::clear_denominators(PR("1/4*x^2 - 1/4*y", kXY));
  CHECK(f1 == P("x^2 - y", kXY));
  CHECK(c1 == 4);

  auto [f2, c2] = frslab::clear_denominators(PR("x - 1", kX));
  CHECK(f2 == P("x - 1", kX));
  CHECK(c2 == 1);

  auto [f3, c3] = frslab::clear_denominators(PR("1/2*x + 1/3*y", kXY));
  CHECK(f3 == P("3*x + 2*y", kXY));
  CHECK(c3 == 6);

  CHECK_THROWS_AS(frslab::clear_denominators(RatPoly(2)),
                  frslab::invalid_input_error);

  SUBCASE("content is minimal") {
    RatPoly g = PR("1/6*x^2 + 1/10*x + 1/15", kX);
    auto [fi, c] = frslab::clear_denominators(g);
    CHECK(c == 30);
    CHECK(frslab::is_integral(g * Rat(c)));
    // no proper divisor of the content clears every denominator
    for (long d : {2, 3, 5, 6, 10, 15})
      CHECK_FALSE(frslab::is_integral(g * Rat(d)));
  }
}

TEST_CASE("substitution composes polynomials") {
  RatPoly f = PR("x^2 - y", kXY);
  std::vector<RatPoly> images{PR("2*x", kXY), PR("2*y", kXY)};
  CHECK(frslab::substitute(f, images) == PR("4*x^2 - 2*y", kXY));

  // collapsing two variables onto one
  std::vector<RatPoly> diag{PR("x", kX), PR("x^2", kX)};
  CHECK(frslab::substitute(f, diag) == RatPoly(1));

  CHECK_THROWS_AS(frslab::substitute(f, {PR("x", kX)}),
                  frslab::invalid_input_error);
}
