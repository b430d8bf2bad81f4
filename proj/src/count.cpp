#include "frslab/count.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "frslab/errors.hpp"

namespace frslab {

namespace {

using Word = LocalRing::Word;

// Polynomial compiled against a fixed ring: coefficients reduced to word
// vectors, terms with vanishing reduced coefficient dropped.
struct CompiledPoly {
  struct Term {
    std::vector<Word> coef;
    Exponents exps;
  };
  std::vector<Term> terms;
};

CompiledPoly compile(const IntPoly& f, const LocalRing& R) {
  CompiledPoly out;
  for (const auto& [e, c] : f.terms()) {
    LocalRing::Elem w = R.from_int(c);
    if (R.is_zero(w)) continue;
    out.terms.push_back({std::move(w), e});
  }
  return out;
}

std::vector<CompiledPoly> compile_all(const std::vector<IntPoly>& gens,
                                      std::size_t c, const LocalRing& R) {
  std::vector<CompiledPoly> out;
  out.reserve(gens.size());
  for (const auto& f : gens) {
    if (f.nvars() != c)
      throw invalid_input_error("generator variable count mismatch");
    out.push_back(compile(f, R));
  }
  return out;
}

// Scratch for one evaluating thread: no allocation inside the point loop.
struct EvalScratch {
  std::vector<Word> acc, t1, t2;
  explicit EvalScratch(int r)
      : acc(static_cast<std::size_t>(r)),
        t1(static_cast<std::size_t>(r)),
        t2(static_cast<std::size_t>(r)) {}
};

// Evaluates one compiled polynomial at the flat point (c blocks of r words)
// into s.acc.
void eval_at(const CompiledPoly& f, const Word* pt, const LocalRing& R,
             EvalScratch& s) {
  const int r = R.r();
  std::fill(s.acc.begin(), s.acc.end(), 0);
  for (const auto& term : f.terms) {
    std::copy(term.coef.begin(), term.coef.end(), s.t1.begin());
    Word* cur = s.t1.data();
    Word* nxt = s.t2.data();
    for (std::size_t j = 0; j < term.exps.size(); ++j) {
      const Word* xj = pt + j * static_cast<std::size_t>(r);
      for (std::uint32_t k = 0; k < term.exps[j]; ++k) {
        R.mul_w(cur, xj, nxt);
        std::swap(cur, nxt);
      }
    }
    R.add_w(s.acc.data(), cur, s.acc.data());
  }
}

bool vanishes_at(const CompiledPoly& f, const Word* pt, const LocalRing& R,
                 EvalScratch& s) {
  eval_at(f, pt, R, s);
  return R.is_zero_w(s.acc.data());
}

bool all_vanish(const std::vector<CompiledPoly>& gens, const Word* pt,
                const LocalRing& R, EvalScratch& s) {
  for (const auto& f : gens)
    if (!vanishes_at(f, pt, R, s)) return false;
  return true;
}

// Decodes a point index into c*r coordinate words, each a base-p^n digit;
// word 0 is the fastest-moving digit.
void decode_point(std::uint64_t idx, Word pn, std::size_t words, Word* pt) {
  for (std::size_t i = 0; i < words; ++i) {
    pt[i] = idx % pn;
    idx /= pn;
  }
}

std::uint64_t checked_point_total(std::size_t c, const LocalRing& R,
                                  std::uint64_t cap) {
  Int total = 1;
  for (std::size_t j = 0; j < c; ++j) total *= R.cardinality();
  if (total > Int(static_cast<unsigned long>(cap)))
    throw resource_limit_error(
        "naive enumeration needs " + total.get_str() +
        " points, over the configured cap of " + std::to_string(cap));
  return total.get_ui();
}

// ---- Hensel-lifting engine ------------------------------------------------

using Elem = LocalRing::Elem;

// Reduced row echelon form of the Jacobian at one level-1 root, together
// with the row transform T (rref = T * J). The Jacobian mod p depends only
// on the point mod p, so one solver serves the root's entire subtree.
struct RootSolver {
  std::size_t m = 0;
  std::size_t c = 0;
  std::size_t rank = 0;
  std::vector<std::vector<Elem>> rref;  // m x c
  std::vector<std::vector<Elem>> T;     // m x m
  std::vector<std::size_t> pivots;      // size rank
  std::vector<std::size_t> free_cols;   // size c - rank
};

RootSolver build_solver(std::vector<std::vector<Elem>> J, const LocalRing& F,
                        std::size_t c) {
  RootSolver s;
  s.m = J.size();
  s.c = c;
  s.T.assign(s.m, std::vector<Elem>(s.m, F.zero()));
  for (std::size_t i = 0; i < s.m; ++i) s.T[i][i] = F.one();

  for (std::size_t col = 0; col < c && s.rank < s.m; ++col) {
    std::size_t piv = s.rank;
    while (piv < s.m && F.is_zero(J[piv][col])) ++piv;
    if (piv == s.m) continue;
    std::swap(J[piv], J[s.rank]);
    std::swap(s.T[piv], s.T[s.rank]);
    Elem inv = F.inv(J[s.rank][col]);
    for (std::size_t j = 0; j < c; ++j) J[s.rank][j] = F.mul(J[s.rank][j], inv);
    for (std::size_t j = 0; j < s.m; ++j) s.T[s.rank][j] = F.mul(s.T[s.rank][j], inv);
    for (std::size_t i = 0; i < s.m; ++i) {
      if (i == s.rank || F.is_zero(J[i][col])) continue;
      Elem f = J[i][col];
      for (std::size_t j = 0; j < c; ++j)
        J[i][j] = F.sub(J[i][j], F.mul(f, J[s.rank][j]));
      for (std::size_t j = 0; j < s.m; ++j)
        s.T[i][j] = F.sub(s.T[i][j], F.mul(f, s.T[s.rank][j]));
    }
    s.pivots.push_back(col);
    ++s.rank;
  }
  s.rref = std::move(J);
  std::size_t next_pivot = 0;
  for (std::size_t col = 0; col < c; ++col) {
    if (next_pivot < s.pivots.size() && s.pivots[next_pivot] == col)
      ++next_pivot;
    else
      s.free_cols.push_back(col);
  }
  return s;
}

// Everything a subtree walk needs, shared read-only across threads.
struct LiftContext {
  const LocalRing& R;
  const LocalRing& F;
  std::vector<CompiledPoly> gens_R;
  std::vector<CompiledPoly> gens_F;
  std::vector<std::vector<CompiledPoly>> jac_F;
  std::vector<Elem> field_elems;
  std::size_t c = 0;
  std::size_t words = 0;  // c * r
};

// Divided residual of generator values at a level-k node: each coordinate
// of f(a) is divisible by p^k, and w = (f(a)/p^k) mod p lives in the
// residue field.
void divided_residual(const LiftContext& ctx, const Word* pt, Word pk,
                      EvalScratch& s, std::vector<Elem>& w) {
  const std::size_t r = static_cast<std::size_t>(ctx.R.r());
  const Word p = ctx.R.p();
  for (std::size_t j = 0; j < ctx.gens_R.size(); ++j) {
    eval_at(ctx.gens_R[j], pt, ctx.R, s);
    for (std::size_t i = 0; i < r; ++i) {
      if (s.acc[i] % pk != 0)
        throw std::logic_error("lift invariant broken: residual not "
                               "divisible by p^k");
      w[j][i] = (s.acc[i] / pk) % p;
    }
  }
}

// Walks the subtree of one non-certified level-1 root and returns the
// number of level-n solutions above it. Children of distinct nodes are
// distinct mod p^(k+1), so the frontier never holds duplicates and no
// merge pass is needed.
Int walk_subtree(const LiftContext& ctx, const RootSolver& sol,
                 const Word* root, const Limits& lim) {
  const int n = ctx.R.n();
  const std::size_t r = static_cast<std::size_t>(ctx.R.r());
  const std::size_t m = ctx.gens_R.size();
  const std::size_t nfree = sol.free_cols.size();
  const Int q_free =
      pow_uint(ctx.R.p(), static_cast<unsigned long>(nfree * r));

  std::vector<Word> frontier(root, root + ctx.words);
  std::vector<Word> next;
  EvalScratch scratch(ctx.R.r());
  std::vector<Elem> w(m, ctx.F.zero());
  std::vector<Elem> u(m, ctx.F.zero());
  std::vector<std::size_t> assign(nfree, 0);
  std::vector<Word> v(ctx.words, 0);
  Int total = 0;
  Word pk = ctx.R.p();  // p^k for the current level k, starting at k = 1

  for (int k = 1; k < n; ++k) {
    const bool last = k == n - 1;
    const std::size_t node_count = frontier.size() / ctx.words;
    std::uint64_t consistent = 0;
    next.clear();
    for (std::size_t node = 0; node < node_count; ++node) {
      const Word* pt = frontier.data() + node * ctx.words;
      divided_residual(ctx, pt, pk, scratch, w);
      // u = T * (-w); rows beyond the rank must vanish for consistency
      bool ok = true;
      for (std::size_t i = 0; i < m; ++i) {
        Elem acc = ctx.F.zero();
        for (std::size_t j = 0; j < m; ++j)
          acc = ctx.F.add(acc, ctx.F.mul(sol.T[i][j], w[j]));
        u[i] = ctx.F.neg(acc);
        if (i >= sol.rank && !ctx.F.is_zero(u[i])) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      ++consistent;
      if (last) continue;

      // materialize the q^free children a + p^k * v
      std::uint64_t children = pow_u64_checked(
          ctx.field_elems.size(), static_cast<unsigned>(nfree),
          lim.live_node_cap + 1);
      if (next.size() / ctx.words + children > lim.live_node_cap)
        throw resource_limit_error(
            "lift frontier exceeds the live-node cap at level " +
            std::to_string(k + 1));
      std::fill(assign.begin(), assign.end(), 0);
      while (true) {
        for (std::size_t f = 0; f < nfree; ++f) {
          const Elem& val = ctx.field_elems[assign[f]];
          std::copy(val.begin(), val.end(),
                    v.begin() + sol.free_cols[f] * r);
        }
        for (std::size_t i = 0; i < sol.rank; ++i) {
          Elem acc = u[i];
          for (std::size_t f = 0; f < nfree; ++f) {
            const Elem& coef = sol.rref[i][sol.free_cols[f]];
            if (ctx.F.is_zero(coef)) continue;
            acc = ctx.F.sub(acc,
                            ctx.F.mul(coef, ctx.field_elems[assign[f]]));
          }
          std::copy(acc.begin(), acc.end(), v.begin() + sol.pivots[i] * r);
        }
        const std::size_t base = next.size();
        next.resize(base + ctx.words);
        for (std::size_t i = 0; i < ctx.words; ++i)
          next[base + i] = pt[i] + pk * v[i];
        std::size_t f = 0;
        while (f < nfree && ++assign[f] == ctx.field_elems.size())
          assign[f++] = 0;
        if (f == nfree) break;
      }
    }
    if (last) {
      total += Int(static_cast<unsigned long>(consistent)) * q_free;
      break;
    }
    frontier.swap(next);
    if (frontier.empty()) break;
    pk *= ctx.R.p();
  }
  return total;
}

Int lifted_core(const std::vector<IntPoly>& gens, std::size_t c,
                const LocalRing& R, const Limits& lim) {
  const LocalRing F = R.residue_field();
  const std::size_t r = static_cast<std::size_t>(R.r());
  const std::size_t m = gens.size();

  // constant generators: the unique empty point counts iff they all reduce
  // to zero in R
  if (c == 0) {
    auto cs = compile_all(gens, 0, R);
    EvalScratch scratch(R.r());
    Word dummy = 0;
    return all_vanish(cs, &dummy, R, scratch) ? 1 : 0;
  }

  Int scan = 1;
  for (std::size_t j = 0; j < c; ++j) scan *= F.cardinality();
  if (scan > Int(static_cast<unsigned long>(lim.enumeration_cap)))
    throw resource_limit_error(
        "residue-field scan needs " + scan.get_str() +
        " points, over the configured cap of " +
        std::to_string(lim.enumeration_cap));
  const std::uint64_t scan_total = scan.get_ui();
  const Word q_word = F.cardinality().get_ui();

  LiftContext ctx{R, F, compile_all(gens, c, R), compile_all(gens, c, F),
                  {},     {},                    c,
                  c * r};
  for (const auto& row : jacobian(gens)) {
    std::vector<CompiledPoly> crow;
    crow.reserve(row.size());
    for (const auto& d : row) crow.push_back(compile(d, F));
    ctx.jac_F.push_back(std::move(crow));
  }

  // level-1 roots over the residue field
  std::vector<Word> roots;
  {
    EvalScratch scratch(F.r());
    std::vector<Word> pt(std::max<std::size_t>(ctx.words, 1), 0);
    for (std::uint64_t i = 0; i < scan_total; ++i) {
      decode_point(i, F.level_mod(), ctx.words, pt.data());
      if (all_vanish(ctx.gens_F, pt.data(), F, scratch))
        roots.insert(roots.end(), pt.begin(), pt.begin() + ctx.words);
    }
  }
  const std::size_t root_count = roots.size() / ctx.words;
  if (R.n() == 1) return Int(static_cast<unsigned long>(root_count));
  if (roots.empty()) return 0;

  ctx.field_elems = F.enumerate(lim.enumeration_cap);

  Int total = 0;
  bool aborted = false;
  std::string abort_reason;
#ifdef _OPENMP
  const int nt = lim.threads > 0 ? lim.threads : omp_get_max_threads();
#pragma omp parallel num_threads(nt)
#endif
  {
    Int subtotal = 0;
    EvalScratch scratch(F.r());
#ifdef _OPENMP
#pragma omp for schedule(dynamic)
#endif
    for (std::int64_t ri = 0; ri < static_cast<std::int64_t>(root_count);
         ++ri) {
      bool skip;
#ifdef _OPENMP
#pragma omp atomic read
      skip = aborted;
#else
      skip = aborted;
#endif
      if (skip) continue;
      try {
        const Word* root =
            roots.data() + static_cast<std::size_t>(ri) * ctx.words;
        std::vector<std::vector<Elem>> J(m, std::vector<Elem>(c, F.zero()));
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < c; ++j) {
            eval_at(ctx.jac_F[i][j], root, F, scratch);
            J[i][j].assign(scratch.acc.begin(), scratch.acc.end());
          }
        RootSolver sol = build_solver(std::move(J), F, c);
        if (sol.rank == m) {
          // full row rank: Hensel gives exactly q^(c-m) lifts per level
          subtotal += pow_uint(
              q_word, static_cast<unsigned long>((c - m) * (R.n() - 1)));
        } else {
          subtotal += walk_subtree(ctx, sol, root, lim);
        }
      } catch (const std::exception& e) {
#ifdef _OPENMP
#pragma omp critical(frslab_lift_abort)
#endif
        {
          if (!aborted) {
            aborted = true;
            abort_reason = e.what();
          }
        }
      }
    }
#ifdef _OPENMP
#pragma omp critical(frslab_lift_total)
#endif
    total += subtotal;
  }
  if (aborted) throw resource_limit_error(abort_reason);
  return total;
}

}  // namespace

Int count_naive_serial(const std::vector<IntPoly>& gens, std::size_t c,
                       const LocalRing& R, const Limits& lim) {
  for (const auto& f : gens)
    if (f.nvars() != c)
      throw invalid_input_error("generator variable count mismatch");
  const std::uint64_t total = checked_point_total(c, R, lim.naive_cap);
  const std::uint64_t card = R.cardinality().get_ui();

  std::uint64_t hits = 0;
  std::vector<std::uint64_t> idx(c, 0);
  std::vector<LocalRing::Elem> pt(c, R.zero());
  for (std::size_t j = 0; j < c; ++j) pt[j] = R.element_at(0);
  for (std::uint64_t i = 0; i < total; ++i) {
    bool ok = true;
    for (const auto& f : gens)
      if (!R.is_zero(eval(f, pt, R))) {
        ok = false;
        break;
      }
    if (ok) ++hits;
    std::size_t j = 0;
    while (j < c && ++idx[j] == card) idx[j++] = 0;
    for (std::size_t k = 0; k < std::min(j + 1, c); ++k)
      pt[k] = R.element_at(Int(idx[k]));
  }
  return Int(static_cast<unsigned long>(hits));
}

Int count_naive(const std::vector<IntPoly>& gens, std::size_t c,
                const LocalRing& R, const Limits& lim) {
  const std::uint64_t total = checked_point_total(c, R, lim.naive_cap);
  const auto compiled = compile_all(gens, c, R);
  const Word pn = R.level_mod();
  const std::size_t words = c * static_cast<std::size_t>(R.r());

  std::uint64_t hits = 0;
#ifdef _OPENMP
  const int nt = lim.threads > 0 ? lim.threads : omp_get_max_threads();
#pragma omp parallel num_threads(nt) reduction(+ : hits)
  {
    EvalScratch scratch(R.r());
    std::vector<Word> pt(std::max<std::size_t>(words, 1));
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(total); ++i) {
      decode_point(static_cast<std::uint64_t>(i), pn, words, pt.data());
      if (all_vanish(compiled, pt.data(), R, scratch)) ++hits;
    }
  }
#else
  EvalScratch scratch(R.r());
  std::vector<Word> pt(std::max<std::size_t>(words, 1));
  for (std::uint64_t i = 0; i < total; ++i) {
    decode_point(i, pn, words, pt.data());
    if (all_vanish(compiled, pt.data(), R, scratch)) ++hits;
  }
#endif
  return Int(static_cast<unsigned long>(hits));
}

CountRecord count_lifted(const std::vector<IntPoly>& gens, std::size_t c,
                         int dim_Q, const LocalRing& R, const Limits& lim) {
  (void)dim_Q;
  for (const auto& f : gens)
    if (f.nvars() != c)
      throw invalid_input_error("generator variable count mismatch");
  if (gens.empty()) return {pow_int(R.cardinality(), c), "lifted"};

  // variables no generator mentions contribute a free factor of |R| each
  std::vector<bool> used(c, false);
  for (const auto& f : gens)
    for (const auto& [exps, coef] : f.terms())
      for (std::size_t j = 0; j < c; ++j)
        if (exps[j] > 0) used[j] = true;
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < c; ++j)
    if (used[j]) keep.push_back(j);

  Int count;
  if (keep.size() == c) {
    count = lifted_core(gens, c, R, lim);
  } else {
    std::vector<IntPoly> reduced;
    reduced.reserve(gens.size());
    for (const auto& f : gens) {
      IntPoly g(keep.size());
      for (const auto& [exps, coef] : f.terms()) {
        Exponents e(keep.size(), 0);
        for (std::size_t j = 0; j < keep.size(); ++j) e[j] = exps[keep[j]];
        g.add_term(e, coef);
      }
      reduced.push_back(std::move(g));
    }
    count = lifted_core(reduced, keep.size(), R, lim) *
            pow_int(R.cardinality(), c - keep.size());
  }
  return {count, "lifted"};
}

CountRecord count_scheme(const SchemePresentation& X, const LocalRing& R,
                         Engine engine, const Limits& lim) {
  switch (engine) {
    case Engine::naive:
      return {count_naive(X.generators, X.nvars(), R, lim), "naive"};
    case Engine::lifted:
      return count_lifted(X.generators, X.nvars(), X.dim_Q, R, lim);
    case Engine::automatic:
      try {
        return count_lifted(X.generators, X.nvars(), X.dim_Q, R, lim);
      } catch (const resource_limit_error&) {
        return {count_naive(X.generators, X.nvars(), R, lim), "naive"};
      }
  }
  throw invalid_input_error("unknown counting engine");
}

Rat h_value(const SchemePresentation& X, const LocalRing& R, Engine engine,
            const Limits& lim) {
  if (X.dim_Q < 0)
    throw invalid_input_error("normalization needs a nonnegative dimension");
  const CountRecord rec = count_scheme(X, R, engine, lim);
  return Rat(rec.count) /
         Rat(pow_int(R.cardinality(), static_cast<unsigned long>(X.dim_Q)));
}

HSequence h_sequence(const SchemePresentation& X, std::uint64_t p, int r,
                     int n_max, Engine engine, const Limits& lim) {
  if (X.dim_Q < 0)
    throw invalid_input_error("normalization needs a nonnegative dimension");
  if (n_max < 1) throw invalid_input_error("n_max must be at least 1");
  HSequence seq;
  seq.scheme_hash = scheme_hash(X);
  seq.p = p;
  seq.r = r;
  for (int n = 1; n <= n_max; ++n) {
    HEntry e;
    e.n = n;
    try {
      LocalRing R(p, n, r);
      const CountRecord rec = count_scheme(X, R, engine, lim);
      e.count = rec.count;
      e.h = Rat(rec.count) /
            Rat(pow_int(R.cardinality(), static_cast<unsigned long>(X.dim_Q)));
      e.ok = true;
      e.method = rec.method;
    } catch (const resource_limit_error&) {
      e.ok = false;
      e.method = "limit";
    }
    seq.entries.push_back(std::move(e));
  }
  return seq;
}

}  // namespace frslab
