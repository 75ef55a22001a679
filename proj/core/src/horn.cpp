#include "majkit/horn.hpp"

#include <algorithm>
#include <cmath>

#include "majkit/analysis.hpp"
#include "majkit/canon.hpp"
#include "majkit/error.hpp"
#include "majkit/majorize.hpp"

namespace majkit {

namespace {

// Left-multiplies u by I_{k-1} (+) V(m, t) (+) I: rows k..k+m are rewritten.
void apply_pivot_rows(SignedSqrtMat& u, std::size_t k, std::size_t m, const Rat& t) {
  std::vector<SignedSqrtMat::Row> old;
  old.reserve(m + 1);
  for (std::size_t i = k; i <= k + m; ++i) old.push_back(u.row(i));
  Rat omt = Rat(1) - t;
  u.set_row(k, SignedSqrtMat::combine(old[m - 1], +1, t, old[m], -1, omt));
  for (std::size_t i = 1; i + 1 <= m; ++i) u.set_row(k + i, old[i - 1]);
  u.set_row(k + m, SignedSqrtMat::combine(old[m - 1], +1, omt, old[m], +1, t));
}

void validate_monotone(const std::vector<Rat>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].sign() < 0) raise(Errc::not_monotone, "negative entry", i + 1);
    if (i > 0 && v[i] > v[i - 1]) raise(Errc::not_monotone, "entries increase", i + 1);
  }
}

}  // namespace

HornWitness horn_witness(const std::vector<Rat>& xi, const std::vector<Rat>& eta) {
  std::size_t n = xi.size();
  if (n == 0 || eta.size() != n) raise(Errc::bad_params, "need equal nonzero lengths");
  validate_monotone(xi);
  validate_monotone(eta);
  {
    Rat dx(0), de(0);
    for (std::size_t k = 1; k <= n; ++k) {
      dx += xi[k - 1];
      de += eta[k - 1];
      if (dx > de) raise(Errc::not_majorized, "prefix sum exceeded", k);
    }
    if (dx != de) raise(Errc::not_majorized, "totals differ", n);
  }

  std::size_t support = n;
  while (support > 0 && xi[support - 1].is_zero()) --support;

  SignedSqrtMat u = SignedSqrtMat::identity(n);
  std::vector<std::pair<std::size_t, Rat>> steps;
  std::vector<Rat> w = eta;  // residual, logically shrinking
  auto wval = [&](std::size_t j) { return j <= n ? w[j - 1] : Rat(0); };

  for (std::size_t k = 1; k <= support; ++k) {
    const Rat& xk = xi[k - 1];
    if (xk > w[0]) raise(Errc::not_majorized, "no admissible pivot", k);
    std::size_t m = 1;
    while (m + 1 <= n && wval(m + 1) >= xk) ++m;

    Rat t, delta;
    if (k == n || m > n - k) {
      // Flat residual (all remaining values tie); the step degenerates.
      if (w[0] != xk) raise(Errc::not_majorized, "flat residual without equality", k);
      m = 1;
      t = Rat(1);
      delta = wval(2);
    } else {
      Rat rm = wval(m), rm1 = wval(m + 1);
      t = (xk - rm1) / (rm - rm1);
      delta = rm + rm1 - xk;
    }
    if (k < n) apply_pivot_rows(u, k, m, t);
    steps.emplace_back(m, t);

    w[m - 1] = delta;
    for (std::size_t idx = m; idx < n; ++idx) w[idx] = idx + 1 < n ? w[idx + 1] : Rat(0);
  }

  HornWitness out{std::move(u), RationalMatTrunc(0, 0), std::move(steps)};
  out.q = schur_square(out.u);
  out.q.set_rows_finalized(n);
  return out;
}

FiniteTargetWitness finite_support_witness(const MonotoneSeq& xi, const MonotoneSeq& eta,
                                           std::size_t k_rows) {
  SupportInfo se = eta.support();
  if (!se.is_finite()) raise(Errc::bad_support, "target must have finite support");
  std::size_t n = se.end;
  if (k_rows == 0) raise(Errc::bad_params, "need at least one row");

  IntervalRat txi = xi.tail_sum(1);
  if (!txi.is_point()) raise(Errc::not_strongly_majorized, "source total not exactly known");
  Rat total_eta = eta.partial_sum(std::max<std::size_t>(n, 1));
  if (txi.value() != total_eta) raise(Errc::not_strongly_majorized, "totals differ");
  for (std::size_t j = 1; j < n; ++j)
    if (xi.partial_sum(j) > eta.partial_sum(j))
      raise(Errc::not_strongly_majorized, "prefix sum exceeded", j);

  FiniteTargetWitness out;
  out.q = RationalMatTrunc(k_rows, std::max<std::size_t>(n, 1), k_rows);
  out.exact_cols = std::max<std::size_t>(n, 1);
  std::vector<std::vector<double>> ud(k_rows, std::vector<double>(k_rows, 0.0));

  if (n == 0) {
    for (std::size_t i = 0; i < k_rows; ++i) ud[i][i] = 1.0;
    out.u_approx = std::move(ud);
    return out;
  }

  if (n == 1) {
    Rat e1 = eta.term(1);
    for (std::size_t i = 1; i <= k_rows; ++i) {
      Rat qv = xi.term(i) / e1;
      out.q.set(i, 1, qv);
      ud[i - 1][0] = std::sqrt(qv.to_double());
    }
  } else {
    // Split point: smallest m with sum_1^m xi > sum_1^{n-1} eta.
    Rat target = eta.partial_sum(n - 1);
    std::size_t m = 0;
    Rat acc(0);
    for (std::size_t j = 1; j <= (std::size_t{1} << 22); ++j) {
      acc += xi.term(j);
      if (acc > target) {
        m = j;
        break;
      }
    }
    if (m == 0) raise(Errc::horizon_exhausted, "no split point found");
    Rat alpha = acc - target;

    std::vector<Rat> xv, ev;
    for (std::size_t j = 1; j <= m; ++j) xv.push_back(xi.term(j));
    for (std::size_t j = 1; j < n; ++j) ev.push_back(eta.term(j));
    ev.push_back(alpha);
    ev.resize(m, Rat(0));
    HornWitness base = horn_witness(xv, ev);

    Rat en = eta.term(n);
    Rat ratio = alpha / en;
    for (std::size_t i = 1; i <= std::min(k_rows, m); ++i) {
      for (std::size_t j = 1; j < n; ++j) out.q.set(i, j, base.q.at(i, j));
      out.q.set(i, n, ratio * base.q.at(i, n));
      for (std::size_t j = 1; j <= std::min(n, k_rows); ++j) {
        if (const SqrtEntry* e = base.u.find(i, j)) {
          double v = e->to_double();
          ud[i - 1][j - 1] = j == n ? std::sqrt(ratio.to_double()) * v : v;
        }
      }
    }
    for (std::size_t i = m + 1; i <= k_rows; ++i) {
      Rat qv = xi.term(i) / en;
      out.q.set(i, n, qv);
      if (n <= k_rows) ud[i - 1][n - 1] = std::sqrt(qv.to_double());
    }
  }

  // Complete the remaining columns numerically (modified Gram-Schmidt over
  // standard basis candidates). The truncated exact columns are normalized
  // copies here: they only pin down the subspace the completion must avoid.
  std::size_t have = std::min<std::size_t>(n, k_rows);
  std::vector<std::vector<double>> colsd(have, std::vector<double>(k_rows));
  for (std::size_t c = 0; c < have; ++c) {
    double norm2 = 0;
    for (std::size_t r = 0; r < k_rows; ++r) {
      colsd[c][r] = ud[r][c];
      norm2 += colsd[c][r] * colsd[c][r];
    }
    if (norm2 > 0) {
      double inv = 1.0 / std::sqrt(norm2);
      for (double& x : colsd[c]) x *= inv;
    }
  }
  std::size_t next_col = have;
  for (std::size_t cand = 0; cand < k_rows && next_col < k_rows; ++cand) {
    std::vector<double> v(k_rows, 0.0);
    v[cand] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& c : colsd) {
        double dot = 0;
        for (std::size_t r = 0; r < k_rows; ++r) dot += c[r] * v[r];
        for (std::size_t r = 0; r < k_rows; ++r) v[r] -= dot * c[r];
      }
    }
    double norm2 = 0;
    for (double x : v) norm2 += x * x;
    if (norm2 < 1e-16) continue;
    double inv = 1.0 / std::sqrt(norm2);
    for (double& x : v) x *= inv;
    for (std::size_t r = 0; r < k_rows; ++r) ud[r][next_col] = v[r];
    colsd.push_back(std::move(v));
    ++next_col;
  }
  // Residual over everything the completion is responsible for: completed
  // columns against each other and against the (normalized) exact span.
  double worst = 0;
  for (std::size_t a = 0; a < colsd.size(); ++a) {
    for (std::size_t b = std::max(a, have); b < colsd.size(); ++b) {
      double dot = 0;
      for (std::size_t r = 0; r < k_rows; ++r) dot += colsd[a][r] * colsd[b][r];
      worst = std::max(worst, std::abs(dot - (a == b ? 1.0 : 0.0)));
    }
  }
  out.completion_residual = worst;
  out.u_approx = std::move(ud);
  return out;
}

// --- shifted construction ----------------------------------------------------

namespace {

// Sparse row of an infinite matrix whose unstated rows are identity.
using SparseRow = std::map<std::size_t, Rat>;
using SparseMat = std::map<std::size_t, SparseRow>;

SparseRow get_row(const SparseMat& m, std::size_t i) {
  auto it = m.find(i);
  if (it != m.end()) return it->second;
  return SparseRow{{i, Rat(1)}};
}

// acc <- factor * acc, where factor rewrites only the rows it lists.
void apply_factor(SparseMat& acc, const SparseMat& factor) {
  SparseMat rewritten;
  for (const auto& [i, frow] : factor) {
    SparseRow out;
    for (const auto& [k, coef] : frow) {
      if (coef.is_zero()) continue;
      for (const auto& [j, v] : get_row(acc, k)) {
        Rat add = coef * v;
        auto it = out.find(j);
        if (it == out.end()) {
          if (!add.is_zero()) out[j] = add;
        } else {
          it->second += add;
          if (it->second.is_zero()) out.erase(it);
        }
      }
    }
    rewritten[i] = std::move(out);
  }
  for (auto& [i, row] : rewritten) acc[i] = std::move(row);
}

}  // namespace

RationalMatTrunc shifted_witness(const MonotoneSeq& xi, const MonotoneSeq& eta, std::size_t p,
                                 std::size_t k_rows, std::size_t horizon) {
  if (k_rows == 0) raise(Errc::bad_params, "need at least one row");
  if (p == 0) {
    CanonRun run = canon_run(xi, eta, k_rows);
    return run.q_rows;
  }
  Verdict3 shift_ok = relation(RelKind::p_shift, xi, eta, horizon, p);
  if (!shift_ok.is_holds())
    raise(Errc::shift_not_certified, "shifted majorization not certified");
  if (xi.is_summable_certified()) {
    Verdict3 strong = relation(RelKind::strong, xi, eta, horizon);
    if (!strong.is_holds())
      raise(Errc::shift_not_certified, "summable source needs strong majorization");
  }
  std::size_t cert_n = std::max<std::size_t>(shift_ok.certificate().n0, 1);

  SupportInfo se = eta.support();
  if (se.is_finite()) {
    std::size_t s = se.end;
    if (structurally_equal(xi, eta)) {
      // Pure relabeling: a cyclic-style permutation over support + p indices.
      RationalMatTrunc q(k_rows, std::max(k_rows + p, s + p), k_rows);
      for (std::size_t i = 1; i <= k_rows; ++i) {
        if (i <= s)
          q.set(i, p + i, Rat(1));
        else if (i <= s + p)
          q.set(i, i - s, Rat(1));
        else
          q.set(i, i, Rat(1));
      }
      return q;
    }
    FiniteTargetWitness w = finite_support_witness(xi, eta, k_rows);
    RationalMatTrunc q(k_rows, s + p, k_rows);
    for (std::size_t i = 1; i <= k_rows; ++i)
      for (const auto& [j, v] : w.q.row(i))
        if (j <= s) q.set(i, p + j, v);
    return q;
  }

  // General case: the target is rearranged as <eta_1..eta_N, 0^p, eta^(N)>;
  // each step consumes one source term and shrinks either the explicit head
  // or the zero padding. Once the padding is gone the residual pair goes to
  // the canonical construction.
  std::vector<Rat> head;
  for (std::size_t j = 1; j <= cert_n; ++j) head.push_back(eta.term(j));
  std::size_t pad = p;
  std::size_t tail_from = cert_n;

  SparseMat acc;
  std::size_t done = 0;

  while (pad > 0 && done < k_rows) {
    std::size_t big_n = head.size();
    if (big_n == 0) raise(Errc::not_applicable, "head exhausted before padding", done + 1);
    Rat x1 = xi.term(done + 1);
    if (x1.sign() <= 0) raise(Errc::zero_term, "construction needs positive targets", done + 1);
    std::size_t base = done;
    SparseMat factor;

    if (x1 > head[big_n - 1]) {
      // Pivot strictly inside the head; the head shrinks by one.
      if (head[0] < x1) raise(Errc::not_majorized, "no admissible pivot", done + 1);
      std::size_t m = 1;
      while (m + 1 <= big_n && head[m] >= x1) ++m;
      Rat rm = head[m - 1];
      Rat rm1 = head[m];  // m < big_n since head[big_n-1] < x1 <= head[m-1]
      Rat t = (x1 - rm1) / (rm - rm1);
      Rat omt = Rat(1) - t;
      Rat delta = rm + rm1 - x1;
      factor[base + 1] = SparseRow{{base + m, t}, {base + m + 1, omt}};
      for (std::size_t i = 2; i <= m; ++i) factor[base + i] = SparseRow{{base + i - 1, Rat(1)}};
      factor[base + m + 1] = SparseRow{{base + m, omt}, {base + m + 1, t}};
      apply_factor(acc, factor);

      std::vector<Rat> nh;
      for (std::size_t j = 1; j < m; ++j) nh.push_back(head[j - 1]);
      nh.push_back(delta);
      for (std::size_t j = m + 2; j <= big_n; ++j) nh.push_back(head[j - 1]);
      head = std::move(nh);
    } else {
      // x1 fits under the head minimum: pivot against the first padding zero.
      Rat en = head[big_n - 1];
      Rat t = x1 / en;
      Rat omt = Rat(1) - t;
      Rat v = en - x1;
      factor[base + 1] = SparseRow{{base + big_n, t}, {base + big_n + 1, omt}};
      for (std::size_t i = 2; i <= big_n; ++i)
        factor[base + i] = SparseRow{{base + i - 1, Rat(1)}};
      factor[base + big_n + 1] = SparseRow{{base + big_n, omt}, {base + big_n + 1, t}};
      apply_factor(acc, factor);

      std::vector<Rat> nh(head.begin(), head.end() - 1);
      if (v.is_zero()) {
        // Displaced mass vanished; it rejoins the padding block.
        head = std::move(nh);
      } else {
        // Insert v at its sorted position among the tail values.
        std::size_t r = 0;
        while (eta.term(tail_from + r + 1) > v) {
          ++r;
          if (r > horizon + k_rows + cert_n + p)
            raise(Errc::horizon_exhausted, "insertion scan exhausted");
        }
        if (r > 0) {
          SparseMat perm;
          // Window [base+big_n+1, base+big_n+pad+r]: v and the zeros move
          // right past the r tail values.
          for (std::size_t i = 1; i <= r; ++i)
            perm[base + big_n + i] = SparseRow{{base + big_n + pad + i, Rat(1)}};
          perm[base + big_n + r + 1] = SparseRow{{base + big_n + 1, Rat(1)}};
          for (std::size_t z = 1; z < pad; ++z)
            perm[base + big_n + r + 1 + z] = SparseRow{{base + big_n + 1 + z, Rat(1)}};
          apply_factor(acc, perm);
          for (std::size_t i = 1; i <= r; ++i) nh.push_back(eta.term(tail_from + i));
          tail_from += r;
        }
        nh.push_back(v);
        head = std::move(nh);
        pad -= 1;
      }
    }
    ++done;
  }

  // Residual pair handled canonically.
  if (done < k_rows) {
    MonotoneSeq rho = MonotoneSeq::spliced(head, tail_from, eta);
    CanonRun run = canon_run(shift(xi, done), rho, k_rows - done);
    SparseMat lift;
    for (std::size_t i = 1; i <= k_rows - done; ++i) {
      SparseRow row;
      for (const auto& [j, v] : run.q_rows.row(i)) row[done + j] = v;
      lift[done + i] = std::move(row);
    }
    apply_factor(acc, lift);
  }

  // Undo the initial arrangement: column j of the result reads coordinate
  // dest(j) of the arranged frame, where <0^p, eta> maps onto it.
  auto dest = [&](std::size_t j) -> std::size_t {
    if (j <= p) return cert_n + j;
    if (j <= p + cert_n) return j - p;
    return j;
  };
  std::size_t max_col = 0;
  for (std::size_t i = 1; i <= k_rows; ++i)
    for (const auto& [j, v] : get_row(acc, i)) max_col = std::max(max_col, j);
  max_col = std::max(max_col, cert_n + p);
  RationalMatTrunc out(k_rows, max_col, k_rows);
  for (std::size_t i = 1; i <= k_rows; ++i) {
    SparseRow row = get_row(acc, i);
    for (std::size_t j = 1; j <= max_col; ++j) {
      auto it = row.find(dest(j));
      if (it != row.end() && !it->second.is_zero()) out.set(i, j, it->second);
    }
  }
  return out;
}

}  // namespace majkit
