#include <cstdint>
#include <string>
#include <vector>

#include <doctest.h>

#include "frslab/asymptotics.hpp"
#include "frslab/count.hpp"
#include "frslab/errors.hpp"
#include "frslab/limits.hpp"
#include "frslab/poly.hpp"
#include "frslab/scheme.hpp"

using frslab::BoundednessReport;
using frslab::ClassificationReport;
using frslab::GridSpec;
using frslab::GrowthFit;
using frslab::Int;
using frslab::Limits;
using frslab::Rat;
using frslab::SchemePresentation;

namespace {

const std::vector<std::string> kX{"x"};
const std::vector<std::string> kXY{"x", "y"};
const std::vector<std::string> kXYZ{"x", "y", "z"};

SchemePresentation make_scheme(const std::string& name,
                               const std::vector<std::string>& vars,
                               int dim_Q, const std::vector<std::string>& gens,
                               const std::vector<std::string>& tags = {}) {
  SchemePresentation X;
  X.name = name;
  X.vars = vars;
  X.dim_Q = dim_Q;
  for (const auto& g : gens)
    X.generators.push_back(frslab::parse_int_poly(g, vars));
  X.tags = tags;
  return X;
}

SchemePresentation affine_line() {
  return make_scheme("affine-line", kX, 1, {}, {"smooth"});
}
SchemePresentation affine_plane() {
  return make_scheme("affine-plane", kXY, 2, {}, {"smooth"});
}
SchemePresentation double_point() {
  return make_scheme("double-point", kX, 0, {"x^2"});
}
SchemePresentation node() { return make_scheme("node", kXY, 1, {"x*y"}); }
SchemePresentation sqrt_two() {
  return make_scheme("sqrt-two", kX, 0, {"x^2 - 2"}, {"smooth"});
}
SchemePresentation quadric_cone() {
  return make_scheme("quadric-cone", kXYZ, 2, {"x^2 + y^2 + z^2"});
}
SchemePresentation cusp() {
  return make_scheme("cusp", kXY, 1, {"x^3 - y^2"});
}
SchemePresentation elliptic() {
  return make_scheme("elliptic", kXY, 1, {"x^3 - y^2 + x + 1"}, {"smooth"});
}

bool has_caveat(const ClassificationReport& rep, const std::string& needle) {
  for (const auto& c : rep.caveats)
    if (c.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("growth fit recovers exact slopes on power towers") {
  // count = p^n gives slope exactly 1 with zero residual
  auto line = frslab::h_sequence(affine_line(), 2, 1, 6);
  GrowthFit f1 = frslab::growth_fit(line);
  CHECK(f1.alpha == Rat(1));
  CHECK(f1.max_abs_residual == Rat(0));
  CHECK(f1.points == 6);

  // count = p^(d*n) gives slope exactly d
  auto space3 =
      frslab::h_sequence(make_scheme("affine-space-3", kXYZ, 3, {}), 3, 1, 5);
  CHECK(frslab::growth_fit(space3).alpha == Rat(3));
  auto plane7 = frslab::h_sequence(affine_plane(), 7, 1, 4);
  CHECK(frslab::growth_fit(plane7).alpha == Rat(2));

  // count = p^floor(n/2): the dyadic logs are exact integers, so the
  // normal equations are an exact computation with slope 19/35
  auto dbl = frslab::h_sequence(double_point(), 3, 1, 6);
  GrowthFit f2 = frslab::growth_fit(dbl);
  CHECK(f2.alpha == Rat(19, 35));
  CHECK(f2.max_abs_residual == Rat(11, 35));

  // the same tower shape at p = 2 gives the same slope
  auto dbl2 = frslab::h_sequence(double_point(), 2, 1, 6);
  CHECK(frslab::growth_fit(dbl2).alpha == Rat(19, 35));

  SUBCASE("polynomial-in-n factors push the slope above 1") {
    auto seq = frslab::h_sequence(node(), 3, 1, 6);
    GrowthFit f = frslab::growth_fit(seq);
    CHECK(f.alpha > Rat(1));
    CHECK(f.alpha < Rat(5, 4));
    CHECK(f.max_abs_residual > Rat(0));
  }

  SUBCASE("zero counts are excluded and can starve the fit") {
    // x^2 = 2 dies over Z/4, leaving a single usable level
    auto seq = frslab::h_sequence(sqrt_two(), 2, 1, 6);
    CHECK_THROWS_AS(frslab::growth_fit(seq), frslab::invalid_input_error);
  }

  SUBCASE("fewer than three levels is rejected") {
    auto seq = frslab::h_sequence(affine_line(), 2, 1, 2);
    CHECK_THROWS_AS(frslab::growth_fit(seq), frslab::invalid_input_error);
  }
}

TEST_CASE("limit test along primes at a fixed level") {
  SUBCASE("constant h = 1 is consistent") {
    auto rep = frslab::test_condition_i(affine_line(), 2, {2, 3, 5, 7});
    CHECK(rep.verdict == "consistent");
    for (const Rat& h : rep.h) CHECK(h == Rat(1));
    for (const Rat& d : rep.distance) CHECK(d == Rat(0));
  }

  SUBCASE("the node moves away from 1") {
    auto rep = frslab::test_condition_i(node(), 2, {3, 5, 7});
    REQUIRE(rep.h.size() == 3);
    CHECK(rep.h[0] == Rat(7, 3));
    CHECK(rep.h[1] == Rat(13, 5));
    CHECK(rep.h[2] == Rat(19, 7));
    CHECK(rep.verdict == "violated");
  }

  SUBCASE("the double point diverges like p") {
    auto rep = frslab::test_condition_i(double_point(), 2, {3, 5, 7});
    CHECK(rep.h[0] == Rat(3));
    CHECK(rep.h[2] == Rat(7));
    CHECK(rep.verdict == "violated");
  }

  SUBCASE("a smooth curve settles toward 1") {
    auto rep = frslab::test_condition_i(elliptic(), 2, {3, 5, 7});
    CHECK(rep.h[0] == Rat(1));
    CHECK(rep.h[1] == Rat(8, 5));
    CHECK(rep.h[2] == Rat(4, 7));
    CHECK(rep.verdict == "consistent");
  }

  SUBCASE("input validation") {
    CHECK_THROWS_AS(frslab::test_condition_i(affine_line(), 2, {3, 5}),
                    frslab::invalid_input_error);
    CHECK_THROWS_AS(frslab::test_condition_i(affine_line(), 2, {3, 4, 5}),
                    frslab::invalid_input_error);
    CHECK_THROWS_AS(frslab::test_condition_i(affine_line(), 0, {3, 5, 7}),
                    frslab::invalid_input_error);
  }
}

TEST_CASE("square-root envelope fit stays in exact rationals") {
  SUBCASE("flat h = 1 fits the zero envelope") {
    auto rep = frslab::test_condition_ii(affine_plane(), {2, 3, 5}, 4);
    CHECK(rep.c2_fit == Rat(0));
    CHECK(rep.c_fit == Rat(0));
    CHECK(rep.verdict == "consistent");
  }

  SUBCASE("smooth curve: envelope bounded by the square-root law") {
    auto rep = frslab::test_condition_ii(elliptic(), {3, 5, 7}, 4);
    // per-prime h is constant along n, so the worst cell is the n = 1
    // Hasse deviation at p = 5: (3/5)^2 * 5 = 9/5
    CHECK(rep.c2_fit == Rat(9, 5));
    CHECK(rep.witness_p == 5);
    CHECK(rep.c2_fit <= Rat(4));  // C <= 2
    CHECK(rep.verdict == "consistent");
    // the dyadic square root brackets the exact value from below
    CHECK(rep.c_fit * rep.c_fit <= rep.c2_fit);
    Rat up = rep.c_fit + Rat(1, 1 << 16);
    CHECK(up * up >= rep.c2_fit);
    for (const auto& row : rep.rows) CHECK(row.flag == "steady");
  }

  SUBCASE("quadric cone at its good primes is consistent") {
    auto rep = frslab::test_condition_ii(quadric_cone(), {3, 5}, 6);
    CHECK(rep.verdict == "consistent");
  }

  SUBCASE("p = 2 is a bad prime for the quadric cone and gets flagged") {
    auto rep = frslab::test_condition_ii(quadric_cone(), {2, 3, 5}, 6);
    REQUIRE(rep.rows.size() == 3);
    CHECK(rep.rows[0].p == 2);
    CHECK(rep.rows[0].flag == "growing");
    CHECK(rep.rows[1].flag == "steady");
    CHECK(rep.rows[2].flag == "steady");
    CHECK(rep.verdict == "violated");
  }

  SUBCASE("the double point blows through any envelope") {
    auto rep = frslab::test_condition_ii(double_point(), {2, 3}, 6);
    CHECK(rep.verdict == "violated");
  }

  SUBCASE("input validation") {
    CHECK_THROWS_AS(frslab::test_condition_ii(affine_line(), {}, 4),
                    frslab::invalid_input_error);
    CHECK_THROWS_AS(frslab::test_condition_ii(affine_line(), {3}, 0),
                    frslab::invalid_input_error);
    CHECK_THROWS_AS(
        frslab::test_condition_ii(affine_line(), {3}, 4, Rat(1)),
        frslab::invalid_input_error);
  }
}

TEST_CASE("boundedness verdicts on frozen towers") {
  SUBCASE("double point grows like p^(n/2)") {
    auto rep = frslab::test_boundedness(double_point(), 2, 1, 6);
    CHECK(rep.verdict == "growth-detected");
    CHECK(rep.tail_start == 3);
    CHECK(rep.tail_min == Rat(2));
    CHECK(rep.final_h == Rat(8));
    CHECK(rep.sup_h == Rat(8));
    CHECK(rep.tail_monotone);
    CHECK(rep.tail_complete);
  }

  SUBCASE("quadric cone stays under the threshold at p = 3") {
    auto rep = frslab::test_boundedness(quadric_cone(), 3, 1, 6);
    CHECK(rep.verdict == "bounded-at-scale");
    CHECK(rep.tail_min == Rat(11, 9));
    CHECK(rep.final_h == Rat(107, 81));
    CHECK(rep.sup_h == Rat(107, 81));
    // monotone tail, but no tau-factor jump: h(6) < (3/2) * (11/9)
    CHECK(rep.tail_monotone);
  }

  SUBCASE("quadric cone at p = 5") {
    auto rep = frslab::test_boundedness(quadric_cone(), 5, 1, 6);
    CHECK(rep.verdict == "bounded-at-scale");
    CHECK(rep.final_h == Rat(749, 625));
  }

  SUBCASE("quadric cone at p = 2 shrinks toward zero") {
    auto rep = frslab::test_boundedness(quadric_cone(), 2, 1, 6);
    CHECK(rep.verdict == "bounded-at-scale");
    CHECK(rep.final_h == Rat(1, 8));
    CHECK(rep.final_h == rep.tail_min);
  }

  SUBCASE("cusp jumps at the top level for p = 5") {
    auto rep = frslab::test_boundedness(cusp(), 5, 1, 6);
    CHECK(rep.verdict == "growth-detected");
    CHECK(rep.tail_min == Rat(9, 5));
    CHECK(rep.final_h == Rat(29, 5));
  }

  SUBCASE("cusp detects growth at p = 2 and p = 3 as well") {
    auto rep2 = frslab::test_boundedness(cusp(), 2, 1, 6);
    CHECK(rep2.verdict == "growth-detected");
    CHECK(rep2.final_h == Rat(5, 2));
    auto rep3 = frslab::test_boundedness(cusp(), 3, 1, 6);
    CHECK(rep3.verdict == "growth-detected");
    CHECK(rep3.final_h == Rat(11, 3));
  }

  SUBCASE("node grows at every small prime") {
    for (std::uint64_t p : {2ull, 3ull, 5ull}) {
      auto rep = frslab::test_boundedness(node(), p, 1, 6);
      CHECK(rep.verdict == "growth-detected");
    }
    // the wider tail matters at p = 3: h(6)/h(3) = 5/3 crosses tau while
    // h(6)/min of the last three levels does not
    auto rep = frslab::test_boundedness(node(), 3, 1, 6);
    CHECK(rep.tail_min == Rat(3));
    CHECK(rep.final_h == Rat(5));
  }

  SUBCASE("an emptied scheme has a flat zero tail and counts as bounded") {
    auto rep = frslab::test_boundedness(sqrt_two(), 2, 1, 6);
    CHECK(rep.verdict == "bounded-at-scale");
    CHECK(rep.final_h == Rat(0));
    CHECK(rep.sup_h == Rat(1));
    auto rep3 = frslab::test_boundedness(sqrt_two(), 3, 1, 6);
    CHECK(rep3.verdict == "bounded-at-scale");
  }

  SUBCASE("smooth towers are flat") {
    auto rep = frslab::test_boundedness(affine_line(), 2, 1, 6);
    CHECK(rep.verdict == "bounded-at-scale");
    CHECK(rep.final_h == Rat(1));
    auto repg = frslab::test_boundedness(affine_line(), 3, 2, 4);
    CHECK(repg.verdict == "bounded-at-scale");
    auto repe = frslab::test_boundedness(elliptic(), 2, 1, 6);
    CHECK(repe.verdict == "bounded-at-scale");
    CHECK(repe.final_h == Rat(1, 2));
  }

  SUBCASE("resource caps inside the tail yield inconclusive") {
    Limits lim;
    lim.naive_cap = 30'000;
    auto rep = frslab::test_boundedness(quadric_cone(), 3, 1, 6, Rat(3, 2),
                                        frslab::Engine::naive, lim);
    CHECK(rep.verdict == "inconclusive");
    CHECK_FALSE(rep.tail_complete);
  }

  SUBCASE("input validation") {
    CHECK_THROWS_AS(frslab::test_boundedness(affine_line(), 2, 1, 3),
                    frslab::invalid_input_error);
    CHECK_THROWS_AS(
        frslab::test_boundedness(affine_line(), 2, 1, 6, Rat(1)),
        frslab::invalid_input_error);
  }
}

TEST_CASE("smooth stability across primes") {
  SUBCASE("elliptic curve is stable away from its bad primes") {
    auto rep = frslab::test_smooth_stability(elliptic(), {3, 5, 7}, 5);
    CHECK(rep.exceptional.empty());
    CHECK(rep.all_complete);
    for (const auto& row : rep.rows) CHECK(row.stable);
  }

  SUBCASE("p = 31 divides the discriminant and fails at n = 2") {
    auto rep = frslab::test_smooth_stability(elliptic(), {3, 5, 31}, 3);
    REQUIRE(rep.exceptional.size() == 1);
    CHECK(rep.exceptional[0] == 31);
    const auto& row = rep.rows[2];
    CHECK_FALSE(row.stable);
    CHECK(row.first_bad_n == 2);
    CHECK(row.h_base == Rat(32, 31));
    CHECK(row.h_bad == Rat(1));
  }

  SUBCASE("x^2 = 2 is stable except at p = 2") {
    auto rep = frslab::test_smooth_stability(sqrt_two(), {2, 3, 7}, 4);
    REQUIRE(rep.exceptional.size() == 1);
    CHECK(rep.exceptional[0] == 2);
    CHECK(rep.rows[0].first_bad_n == 2);
    CHECK(rep.rows[1].stable);  // no mod-3 roots at any level
    CHECK(rep.rows[2].stable);  // two mod-7 roots at every level
  }

  SUBCASE("affine space is trivially stable") {
    auto rep = frslab::test_smooth_stability(affine_plane(), {2, 3, 5}, 6);
    CHECK(rep.exceptional.empty());
  }

  SUBCASE("requires the smooth tag") {
    CHECK_THROWS_AS(frslab::test_smooth_stability(cusp(), {2, 3, 5}, 4),
                    frslab::invalid_input_error);
  }
}

TEST_CASE("classification aggregates towers into one report") {
  const GridSpec grid = frslab::default_grid();
  REQUIRE(grid.primes == std::vector<std::uint64_t>{2, 3, 5});
  REQUIRE(grid.r_values == std::vector<int>{1});
  REQUIRE(grid.n_max == 6);

  SUBCASE("double point: growth everywhere") {
    auto rep = frslab::classify(double_point(), grid);
    CHECK(rep.overall == "growth-detected");
    CHECK(rep.cond_i_ran);
    CHECK(rep.cond_i.verdict == "violated");
    CHECK(rep.cond_ii.verdict == "violated");
    REQUIRE(rep.cond_iv_prime.size() == 3);
    for (const auto& b : rep.cond_iv_prime)
      CHECK(b.verdict == "growth-detected");
    for (const auto& v : rep.cond_v) CHECK(v.verdict == "growth-detected");
    // every tower counts p^floor(n/2), so every slope is exactly 19/35
    REQUIRE(rep.growth.size() == 3);
    for (const auto& g : rep.growth) {
      REQUIRE(g.ok);
      CHECK(g.fit.alpha == Rat(19, 35));
    }
    CHECK(rep.cond_iii_statement.find("inconsistent with") !=
          std::string::npos);
    CHECK(rep.scheme_hash == frslab::scheme_hash(double_point()));
  }

  SUBCASE("node: growth with a violated prime limit") {
    auto rep = frslab::classify(node(), grid);
    CHECK(rep.overall == "growth-detected");
    CHECK(rep.cond_i.verdict == "violated");
  }

  SUBCASE("quadric cone: bounded, with p = 2 flagged in the envelope") {
    auto rep = frslab::classify(quadric_cone(), grid);
    CHECK(rep.overall == "bounded-at-scale");
    for (const auto& v : rep.cond_v) CHECK(v.verdict == "bounded-at-scale");
    CHECK(rep.cond_ii.verdict == "violated");  // the p = 2 tower grows
    CHECK(rep.cond_iii_statement.find("consistent with") == 0);
    CHECK(has_caveat(rep, "irreducibility assumed"));
    CHECK(has_caveat(rep, "finite-grid"));
  }

  SUBCASE("smooth schemes: bounded with clean condition verdicts") {
    auto rep = frslab::classify(affine_plane(), grid);
    CHECK(rep.overall == "bounded-at-scale");
    CHECK(rep.cond_i.verdict == "consistent");
    CHECK(rep.cond_ii.verdict == "consistent");
    for (const auto& g : rep.growth) {
      REQUIRE(g.ok);
      CHECK(g.fit.alpha == Rat(2));
      CHECK(g.fit.max_abs_residual == Rat(0));
    }
  }

  SUBCASE("grid with Galois levels and too few primes for the limit test") {
    GridSpec g{{2, 3}, {1, 2}, 4};
    auto rep = frslab::classify(affine_line(), g);
    CHECK_FALSE(rep.cond_i_ran);
    CHECK(rep.cond_i.verdict == "inconclusive");
    REQUIRE(rep.cond_iv_prime.size() == 4);
    CHECK(rep.overall == "bounded-at-scale");
    REQUIRE(rep.cond_v.size() == 2);
    for (const auto& v : rep.cond_v) CHECK(v.verdict == "bounded-at-scale");
  }

  SUBCASE("grid validation") {
    CHECK_THROWS_AS(frslab::classify(affine_line(), GridSpec{{}, {1}, 6}),
                    frslab::invalid_input_error);
    CHECK_THROWS_AS(frslab::classify(affine_line(), GridSpec{{4}, {1}, 6}),
                    frslab::invalid_input_error);
    CHECK_THROWS_AS(frslab::classify(affine_line(), GridSpec{{2}, {}, 6}),
                    frslab::invalid_input_error);
    CHECK_THROWS_AS(frslab::classify(affine_line(), GridSpec{{2}, {0}, 6}),
                    frslab::invalid_input_error);
    CHECK_THROWS_AS(frslab::classify(affine_line(), GridSpec{{2}, {1}, 3}),
                    frslab::invalid_input_error);
  }
}

TEST_CASE("tagged corpus verdicts match on the default grid") {
  const GridSpec grid = frslab::default_grid();

  const std::vector<SchemePresentation> bounded = {
      affine_line(),
      affine_plane(),
      make_scheme("affine-space-3", kXYZ, 3, {}, {"smooth"}),
      sqrt_two(),
      quadric_cone(),
      elliptic(),
  };
  for (const auto& X : bounded) {
    for (std::uint64_t p : grid.primes) {
      auto rep = frslab::test_boundedness(X, p, 1, grid.n_max);
      CAPTURE(X.name);
      CAPTURE(p);
      CHECK(rep.verdict == "bounded-at-scale");
    }
  }

  const std::vector<SchemePresentation> growing = {double_point(), node(),
                                                   cusp()};
  for (const auto& X : growing) {
    for (std::uint64_t p : grid.primes) {
      auto rep = frslab::test_boundedness(X, p, 1, grid.n_max);
      CAPTURE(X.name);
      CAPTURE(p);
      CHECK(rep.verdict == "growth-detected");
    }
  }
}
