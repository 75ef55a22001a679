#include "majkit/canon.hpp"

#include <algorithm>

#include "majkit/analysis.hpp"
#include "majkit/error.hpp"

namespace majkit {

namespace {

// Column state during a run: q = depth of the unique below-diagonal entry
// (0 once dead), gamma2 its squared value.
struct ColState {
  std::size_t q = 0;
  Rat gamma2;
};

// Largest m >= 1 with rho_m >= x (rho monotone nonincreasing, rho -> 0).
std::size_t find_pivot(const RhoState& rho, const MonotoneSeq& eta, const Rat& x) {
  // Exponential probe for an index with rho < x, then binary search.
  std::size_t lo = 1;  // rho_lo >= x maintained
  std::size_t hi = 2;
  while (rho.value(eta, hi) >= x) {
    lo = hi;
    hi *= 2;
    if (hi > (std::size_t{1} << 40)) raise(Errc::horizon_exhausted, "pivot probe diverged");
  }
  while (hi - lo > 1) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (rho.value(eta, mid) >= x)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace

CanonRun canon_run(const MonotoneSeq& xi, const MonotoneSeq& eta, std::size_t k_steps,
                   std::vector<std::size_t> tracked_cols) {
  if (k_steps == 0) raise(Errc::bad_params, "need at least one step");
  if (tracked_cols.empty())
    for (std::size_t j = 1; j <= k_steps; ++j) tracked_cols.push_back(j);

  // Finite pairs with exactly equal totals switch to (1,1) steps when the
  // residual goes flat, which keeps the stream identical to the finite Horn
  // algorithm on the same data (and the matrix sizes embeddable).
  std::size_t guard_n = 0;
  {
    SupportInfo sx = xi.support(), se = eta.support();
    if (sx.is_finite() && se.is_finite()) {
      std::size_t n = std::max(sx.end, se.end);
      if (n > 0 && xi.partial_sum(n) == eta.partial_sum(n)) guard_n = n;
    }
  }

  CanonRun run;
  run.tracked = tracked_cols;
  run.rho = RhoState{};

  std::vector<ColState> cols;  // cols[j-1], materialized to J
  auto ensure_cols = [&cols](std::size_t upto, std::size_t n) {
    // New columns were never inside a pivot window; at state n-1 they hold
    // q = j - (n-1), gamma = 1.
    while (cols.size() < upto)
      cols.push_back(ColState{cols.size() + 1 - (n - 1), Rat(1)});
  };

  SignedSqrtMat w(k_steps, 1);
  RhoState& rho = run.rho;

  for (std::size_t n = 1; n <= k_steps; ++n) {
    Rat xk = xi.term(n);
    if (xk.sign() <= 0) raise(Errc::zero_term, "construction needs positive targets", n);
    if (rho.value(eta, 1) < xk) raise(Errc::not_majorized, "no admissible pivot", n);

    std::size_t m = find_pivot(rho, eta, xk);
    Rat t, delta;
    if (guard_n && n < guard_n && m > guard_n - n) {
      if (rho.value(eta, 1) != xk)
        raise(Errc::not_majorized, "flat-residual step without equality", n);
      m = 1;
      t = Rat(1);
      delta = rho.value(eta, 2);
    } else {
      Rat rm = rho.value(eta, m);
      Rat rm1 = rho.value(eta, m + 1);
      t = rm == rm1 ? Rat(1) : (xk - rm1) / (rm - rm1);
      delta = rm + rm1 - xk;
    }

    ensure_cols(n + m + 1, n);
    w.grow(k_steps, cols.size());

    // Row n of W is determined by the columns whose below-entry sits at
    // depth m or m+1.
    Rat omt = Rat(1) - t;
    for (std::size_t j = 1; j <= cols.size(); ++j) {
      ColState& c = cols[j - 1];
      if (c.q == m && !c.gamma2.is_zero()) w.set(n, j, +1, t * c.gamma2);
      if (c.q == m + 1 && !c.gamma2.is_zero()) w.set(n, j, -1, omt * c.gamma2);
    }

    // Advance column states to step n.
    for (ColState& c : cols) {
      if (c.q == 0) continue;
      if (c.q < m) continue;
      if (c.q == m) {
        if (t.is_one()) {
          c.q = 0;
          c.gamma2 = Rat(0);
        } else {
          c.gamma2 *= omt;
        }
        continue;
      }
      if (c.q == m + 1) {
        c.gamma2 *= t;
        c.q = m;
        continue;
      }
      c.q -= 1;
    }

    // Gamma traces for tracked columns and the g-sequence.
    for (std::size_t j : run.tracked) {
      ColTrace tr;
      if (j <= cols.size()) {
        tr.q = cols[j - 1].q;
        tr.gamma2 = cols[j - 1].gamma2;
      } else {
        tr.q = j - n;
        tr.gamma2 = Rat(1);
      }
      run.gamma_table[j].push_back(std::move(tr));
    }
    run.g_seq.push_back(cols[0].q == 0 ? Rat(0) : cols[0].gamma2);

    // Advance the residual sequence: rho(n)_j = rho(n-1)_j for j < m, delta
    // at j = m, rho(n-1)_{j+1} beyond.
    while (rho.head.size() < m + 1)
      rho.head.push_back(eta.term(rho.head.size() + 1 + rho.tail_offset));
    rho.head[m - 1] = delta;
    rho.head.erase(rho.head.begin() + static_cast<long>(m));
    rho.k = n;
    rho.tail_offset = n;

    run.steps.push_back(CanonStep{n, m, t, delta});
  }

  run.w_rows = std::move(w);
  run.q_rows = schur_square(run.w_rows);
  run.q_rows.set_rows_finalized(k_steps);
  return run;
}

std::pair<SignedSqrtMat, RationalMatTrunc> closed_form_m1(const std::vector<Rat>& t,
                                                          std::size_t k_rows) {
  if (t.size() < k_rows) raise(Errc::bad_params, "need one t per row");
  for (const Rat& v : t)
    if (v.sign() <= 0 || v > Rat(1)) raise(Errc::bad_params, "need 0 < t <= 1");
  SignedSqrtMat w(k_rows, k_rows + 1);
  for (std::size_t k = 1; k <= k_rows; ++k) {
    const Rat& tk = t[k - 1];
    // Right-to-left running product of (1-t_i) over i = j..k-1.
    Rat prod(1);
    for (std::size_t j = k; j >= 2; --j) {
      // column j entry: t_k * t_{j-1} * prod_{i=j}^{k-1}(1-t_i)
      w.set(k, j, +1, tk * t[j - 2] * prod);
      prod *= Rat(1) - t[j - 2];
    }
    w.set(k, 1, +1, tk * prod);
    w.set(k, k + 1, -1, Rat(1) - tk);
  }
  RationalMatTrunc q = schur_square(w);
  q.set_rows_finalized(k_rows);
  return {std::move(w), std::move(q)};
}

GDiagnostics g_diagnostics(const CanonRun& run) {
  GDiagnostics out;
  out.g_seq = run.g_seq;
  Rat mass(0);
  for (std::size_t n = 1; n <= run.q_rows.rows_finalized(); ++n) mass += run.q_rows.at(n, 1);
  out.col1_mass = mass;
  return out;
}

Verdict3 gamma_check(const CanonRun& run, std::size_t j) {
  auto it = run.gamma_table.find(j);
  if (it == run.gamma_table.end())
    raise(Errc::column_not_tracked, "column has no recorded trace", j);
  const std::vector<ColTrace>& trace = it->second;

  std::size_t k_steps = run.steps.size();
  std::size_t max_m = 0;
  for (const CanonStep& s : run.steps) max_m = std::max(max_m, s.m);
  std::size_t b = k_steps + max_m + 1;
  b = std::max(b, j + 1);

  SignedSqrtMat expl = SignedSqrtMat::identity(b);
  std::size_t prev_q = j;
  for (std::size_t n = 1; n <= k_steps; ++n) {
    const CanonStep& s = run.steps[n - 1];
    // Multiply by I_{n-1} (+) V(m, t) (+) I on the left: rows n..n+m change.
    std::vector<SignedSqrtMat::Row> old;
    old.reserve(s.m + 1);
    for (std::size_t i = n; i <= n + s.m; ++i) old.push_back(expl.row(i));
    Rat omt = Rat(1) - s.t;
    expl.set_row(n, SignedSqrtMat::combine(old[s.m - 1], +1, s.t, old[s.m], -1, omt));
    for (std::size_t i = 1; i + 1 <= s.m; ++i) expl.set_row(n + i, old[i - 1]);
    expl.set_row(n + s.m, SignedSqrtMat::combine(old[s.m - 1], +1, omt, old[s.m], +1, s.t));

    // Column j below row n: at most one entry, matching the recurrence.
    std::size_t found_row = 0;
    Rat found_rad;
    int found_sign = 0;
    for (std::size_t i = n + 1; i <= b; ++i) {
      const SqrtEntry* e = expl.find(i, j);
      if (!e) continue;
      if (found_row != 0)
        return Verdict3::fails({n, Rat(0), FailReason::prefix_violation});
      found_row = i;
      found_rad = e->radicand;
      found_sign = e->sign;
    }
    const ColTrace& tr = trace[n - 1];
    bool ok;
    if (tr.q == 0) {
      ok = found_row == 0;
    } else {
      ok = found_row == n + tr.q && found_rad == tr.gamma2 && found_sign == +1;
    }
    if (!ok) return Verdict3::fails({n, Rat(0), FailReason::prefix_violation});
    if (tr.q > prev_q) return Verdict3::fails({n, Rat(0), FailReason::prefix_violation});
    prev_q = tr.q;
  }
  return Verdict3::holds({MajorCert::Kind::finite_support_exact, k_steps, {}, "trace matches product"});
}

RunReport classify_run(const CanonRun& run, const MonotoneSeq& xi, const MonotoneSeq& eta) {
  RunReport out;
  out.t_mass_m1 = Rat(0);
  for (const CanonStep& s : run.steps) {
    if (s.m != 1) continue;
    out.t_mass_m1 += s.t;
    if (s.t.is_one()) {
      if (xi.partial_sum(s.k) != eta.partial_sum(s.k))
        raise(Errc::not_applicable, "block step without exact prefix equality", s.k);
      out.block_boundaries.push_back(s.k);
    }
  }

  SupportInfo se = eta.support();
  if (se.is_finite()) {
    Verdict3 strong = relation(RelKind::strong, xi, eta, std::max<std::size_t>(run.steps.size(), 64));
    if (strong.is_holds()) {
      // In the finite-target regime the trailing steps must shave exact tail
      // ratios; verify where the tails are exactly known.
      IntervalRat txi = xi.tail_sum(1);
      if (txi.is_point()) {
        for (const CanonStep& s : run.steps) {
          if (s.k <= se.end || s.m != 1) continue;
          IntervalRat tk = xi.tail_sum(s.k);
          IntervalRat tk1 = xi.tail_sum(s.k + 1);
          if (tk.is_point() && tk1.is_point() && !tk.value().is_zero()) {
            if (Rat(1) - s.t != tk1.value() / tk.value())
              raise(Errc::not_applicable, "tail-ratio identity violated", s.k);
          }
        }
      }
      out.verdict = RunReport::Verdict::conclusive_ortho;
      out.note = "finite-support target with strong majorization";
      return out;
    }
  }
  if (!out.block_boundaries.empty()) {
    out.verdict = RunReport::Verdict::block_evidence;
    out.note = "block boundaries found to horizon";
  } else if (out.t_mass_m1.sign() > 0) {
    out.verdict = RunReport::Verdict::strong_evidence;
    out.note = "partial mass of t over m=1 steps";
  } else {
    out.verdict = RunReport::Verdict::inconclusive;
  }
  return out;
}

void check_run_invariants(const CanonRun& run, const MonotoneSeq& xi, const MonotoneSeq& eta) {
  std::size_t k_steps = run.steps.size();
  std::size_t max_m = 0;
  for (const CanonStep& s : run.steps) max_m = std::max(max_m, s.m);
  // Cumulative sums once; every later check is O(1) per lookup.
  std::size_t reach = k_steps + max_m + 8;
  std::vector<Rat> xp(reach + 1), ep(reach + 1);
  {
    PrefixScanner sx(xi), se(eta);
    for (std::size_t n = 1; n <= reach; ++n) {
      xp[n] = xp[n - 1] + sx.next();
      ep[n] = ep[n - 1] + se.next();
    }
  }
  auto xterm = [&](std::size_t n) { return xp[n] - xp[n - 1]; };

  RhoState rho;
  std::size_t prev_m = 0;
  for (const CanonStep& s : run.steps) {
    std::size_t n = s.k;
    if (prev_m >= 1 && s.m + 1 < prev_m)
      raise(Errc::not_applicable, "pivot drifted left by more than one", n);
    prev_m = s.m;

    if (s.m == 1) {
      Rat expect = eta.term(n + 1) + (ep[n] - xp[n]);
      if (s.delta != expect)
        raise(Errc::not_applicable, "displaced mass mismatch at m=1 step", n);
    }

    // Replay the residual update.
    while (rho.head.size() < s.m + 1)
      rho.head.push_back(eta.term(rho.head.size() + 1 + rho.tail_offset));
    Rat rm = rho.head[s.m - 1];
    Rat rm1 = rho.head[s.m];
    Rat recon = s.t * rm + (Rat(1) - s.t) * rm1;
    if (recon != xterm(n))
      raise(Errc::not_applicable, "step does not reproduce the target term", n);
    rho.head[s.m - 1] = s.delta;
    rho.head.erase(rho.head.begin() + static_cast<long>(s.m));
    rho.tail_offset = n;
    rho.k = n;

    // Monotone residual across the materialized head and seam.
    for (std::size_t j = 1; j + 1 <= rho.head.size(); ++j)
      if (rho.head[j - 1] < rho.head[j])
        raise(Errc::not_applicable, "residual lost monotonicity", n);
    if (!rho.head.empty() && rho.head.back() < eta.term(rho.head.size() + 1 + rho.tail_offset))
      raise(Errc::not_applicable, "residual seam lost monotonicity", n);

    // Residual majorization: prefixes of shift(xi, n) against rho(n), with
    // the sum bookkeeping identity checked at sampled offsets >= m.
    Rat acc(0);
    std::size_t probe = rho.head.size() + 3;
    for (std::size_t jj = 1; jj <= probe && n + jj <= reach; ++jj) {
      acc += rho.value(eta, jj) - xterm(n + jj);
      if (acc.sign() < 0)
        raise(Errc::not_applicable, "residual majorization violated", n);
      if ((jj == s.m || jj == s.m + 3) && acc != ep[n + jj] - xp[n + jj])
        raise(Errc::not_applicable, "sum bookkeeping violated", n);
    }
  }
}

}  // namespace majkit
