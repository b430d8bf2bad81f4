#include "frslab/asymptotics.hpp"

#include <algorithm>
#include <cstddef>

#include "frslab/errors.hpp"

namespace frslab {

namespace {

Rat abs_rat(Rat v) {
  if (v < 0) v = -v;
  return v;
}

// Length of the longest suffix on which the sequence is nonincreasing
// (cmp = ge) or nondecreasing (cmp = le); 1 for a single element.
template <typename Cmp>
std::size_t suffix_len(const std::vector<Rat>& d, Cmp cmp) {
  if (d.empty()) return 0;
  std::size_t len = 1;
  for (std::size_t i = d.size() - 1; i > 0; --i) {
    if (!cmp(d[i - 1], d[i])) break;
    ++len;
  }
  return len;
}

// First tower level inside the tail: the last max(3, n_max/2) steps by
// default, or an explicit override.
int tail_start_level(int n_max, int tail_steps) {
  int steps = tail_steps > 0 ? tail_steps : std::max(3, n_max / 2);
  return std::max(1, n_max - steps);
}

// Shared verdict rule for a tail of nonnegative values ending at the top
// level. Pre: values nonempty.
struct TailVerdict {
  Rat tail_min;
  Rat final_value;
  bool monotone = false;
  std::string verdict;  // growth-detected | bounded-at-scale | inconclusive
};
TailVerdict judge_tail(const std::vector<Rat>& tail, const Rat& tau) {
  TailVerdict out;
  out.tail_min = *std::min_element(tail.begin(), tail.end());
  out.final_value = tail.back();
  out.monotone = true;
  for (std::size_t i = 0; i + 1 < tail.size(); ++i) {
    if (tail[i] > tail[i + 1]) {
      out.monotone = false;
      break;
    }
  }
  const Rat threshold = tau * out.tail_min;
  if (out.monotone && out.final_value > out.tail_min &&
      out.final_value >= threshold) {
    out.verdict = "growth-detected";
  } else if (out.final_value < threshold || out.final_value == out.tail_min) {
    out.verdict = "bounded-at-scale";
  } else {
    out.verdict = "inconclusive";
  }
  return out;
}

// floor-ish dyadic sqrt of a nonnegative rational, `bits` fractional bits.
Rat sqrt_dyadic(const Rat& v, int bits) {
  if (v == 0) return Rat(0);
  Int num = v.get_num() * v.get_den();
  Int scale = pow_int(Int(2), static_cast<unsigned long>(2 * bits));
  Int root;
  num *= scale;
  mpz_sqrt(root.get_mpz_t(), num.get_mpz_t());
  Rat out(root, v.get_den() * pow_int(Int(2), static_cast<unsigned long>(bits)));
  out.canonicalize();
  return out;
}

void require_primes(const std::vector<std::uint64_t>& primes,
                    std::size_t at_least, const char* what) {
  if (primes.size() < at_least)
    throw invalid_input_error(std::string(what) + " needs at least " +
                              std::to_string(at_least) + " primes");
  for (std::uint64_t p : primes)
    if (!is_prime_u64(p))
      throw invalid_input_error(std::string(what) + ": " + std::to_string(p) +
                                " is not prime");
}

}  // namespace

GridSpec default_grid() { return GridSpec{{2, 3, 5}, {1}, 6}; }

GrowthFit growth_fit(const HSequence& seq) {
  std::vector<std::pair<int, Rat>> pts;
  for (const HEntry& e : seq.entries)
    if (e.ok && e.count > 0)
      pts.emplace_back(e.n, log_p_approx(e.count, seq.p));
  if (pts.size() < 3)
    throw invalid_input_error(
        "growth fit needs at least three usable levels with nonzero counts");
  Rat sx(0), sy(0), sxy(0), sxx(0);
  for (const auto& [n, y] : pts) {
    Rat x(n);
    sx += x;
    sy += y;
    sxy += x * y;
    sxx += x * x;
  }
  const Rat L(static_cast<long>(pts.size()));
  GrowthFit fit;
  fit.points = static_cast<int>(pts.size());
  fit.alpha = (L * sxy - sx * sy) / (L * sxx - sx * sx);
  fit.intercept = (sy - fit.alpha * sx) / L;
  fit.max_abs_residual = Rat(0);
  for (const auto& [n, y] : pts) {
    Rat res = abs_rat(y - (fit.intercept + fit.alpha * Rat(n)));
    if (res > fit.max_abs_residual) fit.max_abs_residual = res;
  }
  return fit;
}

ConditionIReport test_condition_i(const SchemePresentation& X, int n,
                                  const std::vector<std::uint64_t>& primes,
                                  Engine engine, const Limits& lim) {
  require_primes(primes, 3, "limit test along primes");
  if (n < 1)
    throw invalid_input_error("limit test along primes needs a level n >= 1");
  ConditionIReport rep;
  rep.n = n;
  rep.primes = primes;
  for (std::uint64_t p : primes) {
    LocalRing R(p, static_cast<std::uint32_t>(n), 1);
    Rat h = h_value(X, R, engine, lim);
    rep.h.push_back(h);
    rep.distance.push_back(abs_rat(h - 1));
  }
  const Rat final_d = rep.distance.back();
  const bool shrinking =
      suffix_len(rep.distance, [](const Rat& a, const Rat& b) { return a >= b; }) >= 2;
  const bool receding =
      suffix_len(rep.distance, [](const Rat& a, const Rat& b) { return a <= b; }) >= 2;
  if (shrinking && final_d < Rat(1, 2))
    rep.verdict = "consistent";
  else if (receding && final_d >= Rat(1, 2))
    rep.verdict = "violated";
  else
    rep.verdict = "inconclusive";
  return rep;
}

ConditionIIReport test_condition_ii(const SchemePresentation& X,
                                    const std::vector<std::uint64_t>& primes,
                                    int n_max, const Rat& tau, Engine engine,
                                    const Limits& lim, int tail_steps) {
  require_primes(primes, 1, "envelope fit");
  if (n_max < 1) throw invalid_input_error("envelope fit needs n_max >= 1");
  if (tau <= 1) throw invalid_input_error("growth threshold tau must exceed 1");
  ConditionIIReport rep;
  rep.c2_fit = Rat(0);
  const Rat tau2 = tau * tau;
  bool any_growing = false;
  bool any_incomplete = false;
  for (std::uint64_t p : primes) {
    HSequence seq = h_sequence(X, p, 1, n_max, engine, lim);
    ConditionIIRow row;
    row.p = p;
    std::vector<Rat> tail;
    row.tail_complete = true;
    const int start = tail_start_level(n_max, tail_steps);
    for (const HEntry& e : seq.entries) {
      if (!e.ok) {
        if (e.n >= start) row.tail_complete = false;
        continue;
      }
      Rat d = e.h - 1;
      Rat s = d * d * Rat(static_cast<unsigned long>(p));
      if (s > rep.c2_fit) {
        rep.c2_fit = s;
        rep.witness_p = p;
        rep.witness_n = e.n;
      }
      if (e.n >= start) tail.push_back(s);
    }
    if (!row.tail_complete || tail.empty()) {
      row.flag = "inconclusive";
      row.tail_complete = false;
      any_incomplete = true;
    } else {
      TailVerdict tv = judge_tail(tail, tau2);
      row.s_final = tv.final_value;
      row.s_tail_min = tv.tail_min;
      row.flag = tv.verdict == "growth-detected" ? "growing" : "steady";
      if (tv.verdict == "growth-detected") any_growing = true;
    }
    rep.rows.push_back(std::move(row));
  }
  rep.c_fit = sqrt_dyadic(rep.c2_fit, 20);
  if (any_growing)
    rep.verdict = "violated";
  else if (any_incomplete)
    rep.verdict = "inconclusive";
  else
    rep.verdict = "consistent";
  return rep;
}

BoundednessReport test_boundedness(const SchemePresentation& X,
                                   std::uint64_t p, int r, int n_max,
                                   const Rat& tau, Engine engine,
                                   const Limits& lim, int tail_steps) {
  if (n_max < 4)
    throw invalid_input_error("boundedness verdicts need n_max >= 4");
  if (tau <= 1) throw invalid_input_error("growth threshold tau must exceed 1");
  BoundednessReport rep;
  rep.p = p;
  rep.r = r;
  rep.n_max = n_max;
  rep.tau = tau;
  rep.tail_start = tail_start_level(n_max, tail_steps);
  rep.seq = h_sequence(X, p, r, n_max, engine, lim);

  std::vector<Rat> tail;
  rep.tail_complete = true;
  bool have_sup = false;
  for (const HEntry& e : rep.seq.entries) {
    if (!e.ok) {
      if (e.n >= rep.tail_start) rep.tail_complete = false;
      continue;
    }
    if (!have_sup || e.h > rep.sup_h) {
      rep.sup_h = e.h;
      have_sup = true;
    }
    if (e.n >= rep.tail_start) tail.push_back(e.h);
  }
  if (!rep.tail_complete || tail.empty()) {
    rep.tail_complete = false;
    rep.verdict = "inconclusive";
    return rep;
  }
  TailVerdict tv = judge_tail(tail, tau);
  rep.tail_min = tv.tail_min;
  rep.final_h = tv.final_value;
  rep.tail_monotone = tv.monotone;
  rep.verdict = tv.verdict;
  return rep;
}

SmoothStabilityReport test_smooth_stability(
    const SchemePresentation& X, const std::vector<std::uint64_t>& primes,
    int n_max, Engine engine, const Limits& lim) {
  if (std::find(X.tags.begin(), X.tags.end(), "smooth") == X.tags.end())
    throw invalid_input_error(
        "stability test applies to schemes tagged smooth");
  require_primes(primes, 1, "stability test");
  if (n_max < 1) throw invalid_input_error("stability test needs n_max >= 1");
  SmoothStabilityReport rep;
  rep.all_complete = true;
  for (std::uint64_t p : primes) {
    HSequence seq = h_sequence(X, p, 1, n_max, engine, lim);
    StabilityRow row;
    row.p = p;
    row.complete = true;
    row.stable = true;
    for (const HEntry& e : seq.entries) {
      if (!e.ok) {
        row.complete = false;
        break;
      }
      if (e.n == 1) {
        row.h_base = e.h;
      } else if (row.stable && e.h != row.h_base) {
        row.stable = false;
        row.first_bad_n = e.n;
        row.h_bad = e.h;
      }
    }
    if (!row.complete) {
      rep.all_complete = false;
    } else if (!row.stable) {
      rep.exceptional.push_back(p);
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

ClassificationReport classify(const SchemePresentation& X,
                              const GridSpec& grid, const Rat& tau,
                              Engine engine, const Limits& lim,
                              int tail_steps) {
  require_primes(grid.primes, 1, "classification grid");
  if (grid.r_values.empty())
    throw invalid_input_error("classification grid needs extension degrees");
  for (int r : grid.r_values)
    if (r < 1)
      throw invalid_input_error("extension degrees must be positive");
  if (grid.n_max < 4)
    throw invalid_input_error("classification needs n_max >= 4");

  ClassificationReport rep;
  rep.scheme_hash = scheme_hash(X);
  rep.scheme_name = X.name;
  rep.grid = grid;
  rep.tau = tau;

  if (grid.primes.size() >= 3) {
    try {
      rep.cond_i = test_condition_i(X, 2, grid.primes, engine, lim);
      rep.cond_i_ran = true;
    } catch (const resource_limit_error&) {
      rep.cond_i.verdict = "inconclusive";
    }
  } else {
    rep.cond_i.verdict = "inconclusive";
  }

  rep.cond_ii = test_condition_ii(X, grid.primes, grid.n_max, tau, engine,
                                  lim, tail_steps);
  rep.cond_ii_ran = true;

  for (std::uint64_t p : grid.primes) {
    for (int r : grid.r_values) {
      rep.cond_iv_prime.push_back(test_boundedness(X, p, r, grid.n_max, tau,
                                                    engine, lim, tail_steps));
      const BoundednessReport& b = rep.cond_iv_prime.back();
      ClassificationReport::GrowthRow gr;
      gr.p = p;
      gr.r = r;
      gr.tail_monotone = b.tail_monotone;
      try {
        gr.fit = growth_fit(b.seq);
        gr.ok = true;
      } catch (const invalid_input_error&) {
        gr.ok = false;
      }
      rep.growth.push_back(std::move(gr));
    }
  }

  for (std::uint64_t p : grid.primes) {
    std::size_t growing = 0, bounded = 0, total = 0;
    for (const BoundednessReport& b : rep.cond_iv_prime) {
      if (b.p != p) continue;
      ++total;
      if (b.verdict == "growth-detected") ++growing;
      if (b.verdict == "bounded-at-scale") ++bounded;
    }
    ClassificationReport::PerPrime row;
    row.p = p;
    row.verdict = growing > 0          ? "growth-detected"
                  : bounded == total   ? "bounded-at-scale"
                                       : "inconclusive";
    rep.cond_v.push_back(row);
  }

  std::size_t growing = 0, bounded = 0;
  for (const BoundednessReport& b : rep.cond_iv_prime) {
    if (b.verdict == "growth-detected") ++growing;
    if (b.verdict == "bounded-at-scale") ++bounded;
  }
  rep.overall = growing > 0 ? "growth-detected"
                : bounded == rep.cond_iv_prime.size() ? "bounded-at-scale"
                                                      : "inconclusive";
  if (rep.overall == "growth-detected")
    rep.cond_iii_statement =
        "inconsistent with rational singularities at the tested scale "
        "(singularity class not computed directly)";
  else if (rep.overall == "bounded-at-scale")
    rep.cond_iii_statement =
        "consistent with rational singularities at the tested scale "
        "(singularity class not computed directly)";
  else
    rep.cond_iii_statement =
        "inconclusive about rational singularities at the tested scale "
        "(singularity class not computed directly)";

  rep.caveats = {
      "irreducibility assumed, not verified",
      "finite-grid verdicts: bounded-at-scale and growth-detected describe "
      "the tested grid only",
      "the singularity class itself is never computed; its line above only "
      "rephrases the boundedness verdicts",
  };
  return rep;
}

}  // namespace frslab
