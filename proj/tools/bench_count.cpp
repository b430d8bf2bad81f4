// Benchmark of the three counting engines on fixed workloads: the serial
// reference sweep, the OpenMP point sweep, and the lifting engine. Engines
// must agree exactly on every workload; disagreement exits nonzero.

#include <chrono>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>

#include "frslab/count.hpp"
#include "frslab/limits.hpp"
#include "frslab/numeric.hpp"
#include "frslab/poly.hpp"
#include "frslab/ring.hpp"

using namespace frslab;

namespace {

struct Workload {
  std::string name;
  std::vector<IntPoly> gens;
  std::size_t c = 0;
  int dim = 0;
  std::uint64_t p = 2;
  int n = 1;
  int r = 1;
  bool sweep_feasible = true;  // serial and OpenMP sweeps run only when set
};

double best_of(int reps, const std::function<void()>& fn) {
  double best = 0;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (i == 0 || dt < best) best = dt;
  }
  return best;
}

std::string cell(double seconds) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << seconds << "s";
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"counting-engine benchmark: serial sweep vs OpenMP sweep vs "
               "lifting engine"};
  int reps = 3;
  app.add_option("--reps", reps, "repetitions per measurement (best-of)");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::string> xyz{"x", "y", "z"}, xy{"x", "y"};
  std::vector<Workload> suite;
  suite.push_back({"quadric cone, Z/5^3",
                   {parse_int_poly("x^2 + y^2 + z^2", xyz)},
                   3,
                   2,
                   5,
                   3,
                   1,
                   true});
  suite.push_back({"cusp, Z/5^4",
                   {parse_int_poly("x^3 - y^2", xy)},
                   2,
                   1,
                   5,
                   4,
                   1,
                   true});
  suite.push_back({"elliptic curve, GR(3^2, r=2) level 3",
                   {parse_int_poly("x^3 - y^2 + x + 1", xy)},
                   2,
                   1,
                   3,
                   3,
                   2,
                   true});
  suite.push_back({"quadric cone, Z/5^6 (sweep infeasible)",
                   {parse_int_poly("x^2 + y^2 + z^2", xyz)},
                   3,
                   2,
                   5,
                   6,
                   1,
                   false});

#ifdef _OPENMP
  std::cout << "# OpenMP threads: " << omp_get_max_threads() << "\n";
#else
  std::cout << "# built without OpenMP\n";
#endif
  std::cout << "# best of " << reps << " runs per measurement\n\n";
  std::cout << std::left << std::setw(42) << "workload" << std::setw(12)
            << "serial" << std::setw(12) << "openmp" << std::setw(12)
            << "lifted" << std::setw(10) << "sweep-x" << "count\n";

  Limits lim;
  lim.naive_cap = 100'000'000;  // the suite is sized by hand
  bool consistent = true;

  for (const auto& w : suite) {
    LocalRing R(w.p, w.n, w.r);
    Int serial_count, omp_count;
    CountRecord lifted;
    std::optional<double> t_serial, t_omp;
    if (w.sweep_feasible) {
      t_serial = best_of(
          reps, [&] { serial_count = count_naive_serial(w.gens, w.c, R, lim); });
      t_omp =
          best_of(reps, [&] { omp_count = count_naive(w.gens, w.c, R, lim); });
    }
    const double t_lifted = best_of(
        reps, [&] { lifted = count_lifted(w.gens, w.c, w.dim, R, lim); });

    if (w.sweep_feasible &&
        (serial_count != omp_count || serial_count != lifted.count)) {
      std::cerr << "ENGINE DISAGREEMENT on " << w.name << ": serial "
                << serial_count.get_str() << ", openmp " << omp_count.get_str()
                << ", lifted " << lifted.count.get_str() << "\n";
      consistent = false;
    }

    std::ostringstream speedup;
    if (t_serial && t_omp && *t_omp > 0)
      speedup << std::fixed << std::setprecision(2) << *t_serial / *t_omp
              << "x";
    else
      speedup << "-";
    std::cout << std::left << std::setw(42) << w.name << std::setw(12)
              << (t_serial ? cell(*t_serial) : std::string("-"))
              << std::setw(12) << (t_omp ? cell(*t_omp) : std::string("-"))
              << std::setw(12) << cell(t_lifted) << std::setw(10)
              << speedup.str() << lifted.count.get_str() << "\n";
  }

  if (!consistent) return 1;
  return 0;
}
