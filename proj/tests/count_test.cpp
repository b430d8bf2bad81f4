#include <cstdint>
#include <string>
#include <vector>

#include <doctest.h>

#include "frslab/count.hpp"
#include "frslab/errors.hpp"
#include "frslab/limits.hpp"
#include "frslab/poly.hpp"
#include "frslab/ring.hpp"

using frslab::Int;
using frslab::IntPoly;
using frslab::Limits;
using frslab::LocalRing;

namespace {

const std::vector<std::string> kX{"x"};
const std::vector<std::string> kXY{"x", "y"};

std::vector<IntPoly> G(const std::vector<std::string>& texts,
                       const std::vector<std::string>& vars) {
  std::vector<IntPoly> out;
  for (const auto& t : texts) out.push_back(frslab::parse_int_poly(t, vars));
  return out;
}

}  // namespace

TEST_CASE("naive counting matches hand counts") {
  // x^2 = 0 mod p^n has p^floor(n/2) solutions
  CHECK(frslab::count_naive(G({"x^2"}, kX), 1, LocalRing(3, 4)) == 9);
  CHECK(frslab::count_naive(G({"x^2"}, kX), 1, LocalRing(2, 5)) == 4);
  CHECK(frslab::count_naive(G({"x^2"}, kX), 1, LocalRing(5, 3)) == 5);

  // xy = 0 mod 9: valuations must sum to at least 2
  CHECK(frslab::count_naive(G({"x*y"}, kXY), 2, LocalRing(3, 2)) == 21);

  // empty generator list: all of R^c
  CHECK(frslab::count_naive({}, 2, LocalRing(5, 2)) == 625);
  CHECK(frslab::count_naive({}, 3, LocalRing(2, 3)) == 512);

  // x^2 = 2 has no mod-5 solutions, two mod-7 solutions
  CHECK(frslab::count_naive(G({"x^2 - 2"}, kX), 1, LocalRing(5, 1)) == 0);
  CHECK(frslab::count_naive(G({"x^2 - 2"}, kX), 1, LocalRing(7, 1)) == 2);

  SUBCASE("Galois ring cells") {
    CHECK(frslab::count_naive(G({"x^2"}, kX), 1, LocalRing(3, 2, 2)) == 9);
    CHECK(frslab::count_naive(G({"x*y"}, kXY), 2, LocalRing(2, 2, 2)) == 40);
  }
}

TEST_CASE("serial and parallel naive engines agree") {
  struct Cell {
    std::vector<std::string> gens;
    std::vector<std::string> vars;
    std::uint64_t p;
    int n, r;
  };
  const std::vector<Cell> cells = {
      {{"x^2"}, kX, 2, 4, 1},
      {{"x*y"}, kXY, 3, 2, 1},
      {{"x^3 - y^2"}, kXY, 5, 2, 1},
      {{"x^3 - y^2 + x + 1"}, kXY, 3, 2, 2},
      {{"x^2 - 2"}, kX, 2, 6, 1},
      {{}, kXY, 7, 2, 1},
  };
  for (const auto& cell : cells) {
    LocalRing R(cell.p, cell.n, cell.r);
    auto gens = G(cell.gens, cell.vars);
    CHECK(frslab::count_naive_serial(gens, cell.vars.size(), R) ==
          frslab::count_naive(gens, cell.vars.size(), R));
  }
}

TEST_CASE("naive cap stops oversized enumerations") {
  Limits lim;
  lim.naive_cap = 1000;
  CHECK_THROWS_AS(
      frslab::count_naive(G({"x^2"}, kX), 1, LocalRing(5, 5), lim),
      frslab::resource_limit_error);
  CHECK_THROWS_AS(
      frslab::count_naive_serial(G({"x^2"}, kX), 1, LocalRing(5, 5), lim),
      frslab::resource_limit_error);
  // exactly at the cap is allowed
  lim.naive_cap = 625;
  CHECK(frslab::count_naive(G({"x^2"}, kX), 1, LocalRing(5, 4), lim) == 25);
}

TEST_CASE("generator arity is checked") {
  CHECK_THROWS_AS(frslab::count_naive(G({"x*y"}, kXY), 1, LocalRing(3, 1)),
                  frslab::invalid_input_error);
  CHECK_THROWS_AS(
      frslab::count_lifted(G({"x*y"}, kXY), 1, 0, LocalRing(3, 1)),
      frslab::invalid_input_error);
}

namespace {

Int LC(const std::vector<IntPoly>& gens, std::size_t c, const LocalRing& R,
       const Limits& lim = {}) {
  auto rec = frslab::count_lifted(gens, c, 0, R, lim);
  CHECK(rec.method == "lifted");
  return rec.count;
}

frslab::SchemePresentation make_scheme(const std::string& name,
                                       const std::vector<std::string>& vars,
                                       int dim_Q,
                                       const std::vector<std::string>& gens) {
  frslab::SchemePresentation X;
  X.name = name;
  X.vars = vars;
  X.dim_Q = dim_Q;
  X.generators = G(gens, vars);
  return X;
}

}  // namespace

TEST_CASE("lifted counting matches hand counts") {
  const std::vector<std::string> kXYZ{"x", "y", "z"};

  // x^2 = 0 mod p^n has p^floor(n/2) solutions
  for (int n = 1; n <= 6; ++n) {
    CHECK(LC(G({"x^2"}, kX), 1, LocalRing(3, n)) ==
          frslab::pow_uint(3, static_cast<unsigned long>(n / 2)));
    CHECK(LC(G({"x^2"}, kX), 1, LocalRing(2, n)) ==
          frslab::pow_uint(2, static_cast<unsigned long>(n / 2)));
  }

  CHECK(LC(G({"x*y"}, kXY), 2, LocalRing(3, 2)) == 21);
  CHECK(LC(G({"x^2 - 2"}, kX), 1, LocalRing(5, 1)) == 0);
  CHECK(LC(G({"x^2 - 2"}, kX), 1, LocalRing(7, 1)) == 2);
  CHECK(LC(G({"x^2 - 2"}, kX), 1, LocalRing(7, 4)) == 2);

  // 2 is a unit that is no square mod 4, so the tower dies at n = 2
  CHECK(LC(G({"x^2 - 2"}, kX), 1, LocalRing(2, 1)) == 1);
  for (int n = 2; n <= 6; ++n)
    CHECK(LC(G({"x^2 - 2"}, kX), 1, LocalRing(2, n)) == 0);

  // empty generator list and unused variables factor out as |R| each
  CHECK(LC({}, 2, LocalRing(5, 2)) == 625);
  CHECK(LC({}, 0, LocalRing(5, 2)) == 1);
  CHECK(LC(G({"x^2"}, kXY), 2, LocalRing(3, 2)) == 27);

  SUBCASE("Galois ring cells") {
    CHECK(LC(G({"x^2"}, kX), 1, LocalRing(3, 2, 2)) == 9);
    CHECK(LC(G({"x*y"}, kXY), 2, LocalRing(2, 2, 2)) == 40);
  }

  SUBCASE("quadric cone tower at p = 3") {
    const std::vector<Int> counts{9, 99, 891, 8505, 76545, 702027};
    for (int n = 1; n <= 6; ++n)
      CHECK(LC(G({"x^2 + y^2 + z^2"}, kXYZ), 3, LocalRing(3, n)) ==
            counts[static_cast<std::size_t>(n - 1)]);
  }
  SUBCASE("quadric cone tower at p = 5") {
    const std::vector<Int> counts{25, 725, 18125, 465625};
    for (int n = 1; n <= 4; ++n)
      CHECK(LC(G({"x^2 + y^2 + z^2"}, kXYZ), 3, LocalRing(5, n)) ==
            counts[static_cast<std::size_t>(n - 1)]);
  }
  SUBCASE("quadric cone tower at p = 2") {
    const std::vector<Int> counts{4, 8, 32, 64, 256, 512};
    for (int n = 1; n <= 6; ++n)
      CHECK(LC(G({"x^2 + y^2 + z^2"}, kXYZ), 3, LocalRing(2, n)) ==
            counts[static_cast<std::size_t>(n - 1)]);
  }
  SUBCASE("cuspidal cubic tower at p = 5") {
    const std::vector<Int> counts{5, 45, 225, 1125, 5625, 90625};
    for (int n = 1; n <= 6; ++n)
      CHECK(LC(G({"x^3 - y^2"}, kXY), 2, LocalRing(5, n)) ==
            counts[static_cast<std::size_t>(n - 1)]);
  }
}

TEST_CASE("lifted and naive engines agree across a grid") {
  struct Task {
    std::vector<std::string> gens;
    std::vector<std::string> vars;
  };
  const std::vector<std::string> kXYZ{"x", "y", "z"};
  const std::vector<Task> corpus = {
      {{}, kX},
      {{}, kXY},
      {{"x^2"}, kX},
      {{"x*y"}, kXY},
      {{"x^2 - 2"}, kX},
      {{"x^2 + y^2 + z^2"}, kXYZ},
      {{"x^3 - y^2"}, kXY},
      {{"x^3 - y^2 + x + 1"}, kXY},
      {{"2*x^2 - y"}, kXY},
      {{"x", "x + 32"}, kX},
      {{"3*x"}, kX},
  };
  int cells = 0;
  for (const auto& task : corpus) {
    auto gens = G(task.gens, task.vars);
    const std::size_t c = task.vars.size();
    for (std::uint64_t p : {2, 3, 5}) {
      for (int r : {1, 2}) {
        for (int n : {1, 2, 3}) {
          LocalRing R(p, n, r);
          Int points = 1;
          for (std::size_t j = 0; j < c; ++j) points *= R.cardinality();
          if (points > 1000000) continue;
          CAPTURE(task.gens);
          CAPTURE(p);
          CAPTURE(r);
          CAPTURE(n);
          CHECK(frslab::count_naive(gens, c, R) == LC(gens, c, R));
          ++cells;
        }
      }
    }
  }
  CHECK(cells >= 120);
}

TEST_CASE("smooth points lift multiplicatively") {
  // y^2 = x^3 + x + 1 is smooth over F_p away from p = 2 and p = 31, so
  // each count is the residue count times p^(r n - r)
  auto gens = G({"x^3 - y^2 + x + 1"}, kXY);
  const std::vector<Int> residue_counts{3, 8, 4};
  const std::vector<std::uint64_t> primes{3, 5, 7};
  for (std::size_t i = 0; i < primes.size(); ++i) {
    for (int n = 1; n <= 5; ++n) {
      Int expect = residue_counts[i] *
                   frslab::pow_uint(primes[i],
                                    static_cast<unsigned long>(n - 1));
      CHECK(LC(gens, 2, LocalRing(primes[i], n)) == expect);
    }
  }
  // same over a quadratic Galois extension: factor is q = p^2 per level
  Int q1 = LC(gens, 2, LocalRing(3, 1, 2));
  for (int n = 2; n <= 3; ++n)
    CHECK(LC(gens, 2, LocalRing(3, n, 2)) ==
          q1 * frslab::pow_uint(9, static_cast<unsigned long>(n - 1)));

  // p = 31 has the singular point (14, 0); multiplicativity fails there
  Int s1 = LC(gens, 2, LocalRing(31, 1));
  Int s2 = LC(gens, 2, LocalRing(31, 2));
  CHECK(s2 != s1 * 31);
}

TEST_CASE("counts are consistent along reduction maps") {
  // reduction R_(n+1) -> R_n has fibers of size p^r per coordinate, so
  // counts can grow by at most |fiber|^c per level
  struct Task {
    std::vector<std::string> gens;
    std::vector<std::string> vars;
  };
  const std::vector<Task> corpus = {
      {{"x^2"}, kX},
      {{"x*y"}, kXY},
      {{"x^3 - y^2"}, kXY},
      {{"x^2 - 2"}, kX},
  };
  for (const auto& task : corpus) {
    auto gens = G(task.gens, task.vars);
    const std::size_t c = task.vars.size();
    for (std::uint64_t p : {2, 3, 5}) {
      Int prev = LC(gens, c, LocalRing(p, 1));
      for (int n = 2; n <= 5; ++n) {
        Int cur = LC(gens, c, LocalRing(p, n));
        Int fiber = frslab::pow_uint(p, static_cast<unsigned long>(c));
        CHECK(cur <= prev * fiber);
        prev = cur;
      }
    }
  }
}

TEST_CASE("lifted engine respects resource caps") {
  Limits lim;
  lim.enumeration_cap = 10;
  CHECK_THROWS_AS(
      frslab::count_lifted(G({"x*y"}, kXY), 2, 0, LocalRing(5, 2), lim),
      frslab::resource_limit_error);

  // 625x vanishes identically on Z/625 but still mentions x, so every
  // branch stays alive and the frontier grows |F|-fold per level
  Limits tight;
  tight.live_node_cap = 10;
  CHECK_THROWS_AS(
      frslab::count_lifted(G({"625*x"}, kX), 1, 0, LocalRing(5, 4), tight),
      frslab::resource_limit_error);
  // same computation under the default cap completes
  CHECK(LC(G({"625*x"}, kX), 1, LocalRing(5, 4)) == 625);

  // the zero polynomial mentions no variable at all, so factorization
  // answers it without any tree walk even under the tight cap
  CHECK(frslab::count_lifted(G({"0"}, kXY), 2, 0, LocalRing(5, 4), tight)
            .count == 390625);
}

TEST_CASE("scheme-level counting picks engines and falls back") {
  auto X = make_scheme("flat", {"x", "y"}, 2, {"16*x"});
  LocalRing R(2, 4);

  auto lifted = frslab::count_scheme(X, R, frslab::Engine::lifted);
  CHECK(lifted.count == 256);
  CHECK(lifted.method == "lifted");

  auto naive = frslab::count_scheme(X, R, frslab::Engine::naive);
  CHECK(naive.count == 256);
  CHECK(naive.method == "naive");

  Limits tight;
  tight.live_node_cap = 2;
  auto fallback = frslab::count_scheme(X, R, frslab::Engine::automatic, tight);
  CHECK(fallback.count == 256);
  CHECK(fallback.method == "naive");

  // with both engines capped the failure propagates
  tight.naive_cap = 4;
  CHECK_THROWS_AS(frslab::count_scheme(X, R, frslab::Engine::automatic, tight),
                  frslab::resource_limit_error);
}

TEST_CASE("normalized counts hit exact rationals") {
  using frslab::Rat;
  auto plane = make_scheme("plane", {"x", "y"}, 2, {});
  CHECK(frslab::h_value(plane, LocalRing(3, 2)) == Rat(1));
  CHECK(frslab::h_value(plane, LocalRing(5, 3, 2)) == Rat(1));

  auto node = make_scheme("node", {"x", "y"}, 1, {"x*y"});
  CHECK(frslab::h_value(node, LocalRing(3, 2)) == Rat(7, 3));

  auto quadric =
      make_scheme("quadric", {"x", "y", "z"}, 2, {"x^2 + y^2 + z^2"});
  CHECK(frslab::h_value(quadric, LocalRing(3, 1)) == Rat(1));

  auto bad = make_scheme("bad", {"x"}, -1, {});
  CHECK_THROWS_AS(frslab::h_value(bad, LocalRing(3, 1)),
                  frslab::invalid_input_error);

  SUBCASE("denominators divide the normalization") {
    auto cusp = make_scheme("cusp", {"x", "y"}, 1, {"x^3 - y^2"});
    for (std::uint64_t p : {2, 3, 5}) {
      for (int n = 1; n <= 4; ++n) {
        LocalRing R(p, n);
        Rat h = frslab::h_value(cusp, R);
        Int norm = frslab::pow_int(R.cardinality(), 1);
        CHECK(frslab::Int(norm % h.get_den()) == 0);
      }
    }
  }
}

TEST_CASE("normalized sequences carry per-entry status") {
  auto node = make_scheme("node", {"x", "y"}, 1, {"x*y"});
  auto seq = frslab::h_sequence(node, 3, 1, 4);
  CHECK(seq.scheme_hash == frslab::scheme_hash(node));
  CHECK(seq.p == 3);
  CHECK(seq.r == 1);
  REQUIRE(seq.entries.size() == 4);
  const std::vector<frslab::Rat> expect{
      {5, 3}, {7, 3}, {3, 1}, {11, 3}};
  for (int i = 0; i < 4; ++i) {
    CHECK(seq.entries[static_cast<std::size_t>(i)].n == i + 1);
    CHECK(seq.entries[static_cast<std::size_t>(i)].ok);
    CHECK(seq.entries[static_cast<std::size_t>(i)].method == "lifted");
    CHECK(seq.entries[static_cast<std::size_t>(i)].h ==
          expect[static_cast<std::size_t>(i)]);
  }

  auto dbl = make_scheme("double-point", {"x"}, 0, {"x^2"});
  auto dseq = frslab::h_sequence(dbl, 2, 1, 6);
  const std::vector<frslab::Rat> dexp{1, 2, 2, 4, 4, 8};
  for (std::size_t i = 0; i < 6; ++i) CHECK(dseq.entries[i].h == dexp[i]);

  auto line = make_scheme("line", {"x"}, 1, {});
  auto lseq = frslab::h_sequence(line, 7, 1, 5);
  for (const auto& e : lseq.entries) CHECK(e.h == frslab::Rat(1));

  SUBCASE("entries that exceed the caps are marked, not thrown") {
    auto quadric =
        make_scheme("quadric", {"x", "y", "z"}, 2, {"x^2 + y^2 + z^2"});
    Limits lim;
    lim.enumeration_cap = 10;  // the lifted engine never gets off the ground
    lim.naive_cap = 30000;     // plain enumeration covers n <= 3 only
    auto seq = frslab::h_sequence(quadric, 3, 1, 5, frslab::Engine::automatic,
                                  lim);
    REQUIRE(seq.entries.size() == 5);
    for (int i = 0; i < 3; ++i) {
      CHECK(seq.entries[static_cast<std::size_t>(i)].ok);
      CHECK(seq.entries[static_cast<std::size_t>(i)].method == "naive");
    }
    for (int i = 3; i < 5; ++i) {
      CHECK_FALSE(seq.entries[static_cast<std::size_t>(i)].ok);
      CHECK(seq.entries[static_cast<std::size_t>(i)].method == "limit");
    }
    CHECK(seq.entries[0].h == frslab::Rat(1));
    CHECK(seq.entries[1].h == frslab::Rat(11, 9));
  }
}
