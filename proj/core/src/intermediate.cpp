#include "majkit/intermediate.hpp"

#include <algorithm>
#include <optional>

#include "majkit/analysis.hpp"
#include "majkit/error.hpp"

namespace majkit {

namespace {

void validate_finite_inputs(const std::vector<Rat>& xi, const std::vector<Rat>& eta) {
  if (xi.empty() || xi.size() != eta.size()) raise(Errc::bad_params, "need equal nonzero lengths");
  for (std::size_t i = 0; i < xi.size(); ++i) {
    if (xi[i].sign() < 0 || eta[i].sign() < 0) raise(Errc::not_monotone, "negative entry", i + 1);
    if (i > 0 && (xi[i] > xi[i - 1] || eta[i] > eta[i - 1]))
      raise(Errc::not_monotone, "entries increase", i + 1);
  }
}

void require_weak_finite(const std::vector<Rat>& xi, const std::vector<Rat>& eta) {
  Rat dx(0), de(0);
  for (std::size_t i = 0; i < xi.size(); ++i) {
    dx += xi[i];
    de += eta[i];
    if (dx > de) raise(Errc::not_majorized, "prefix sum exceeded", i + 1);
  }
}

void require_tail_finite(const std::vector<Rat>& xi, const std::vector<Rat>& eta) {
  Rat tx(0), te(0);
  for (std::size_t i = xi.size(); i-- > 0;) {
    tx += xi[i];
    te += eta[i];
    if (tx > te) raise(Errc::not_majorized, "tail sum exceeded", i + 1);
  }
}

// Mirsky-style clip by count: the earliest eta prefix carrying xi's total.
std::vector<Rat> zeta_upper_finite(const std::vector<Rat>& xi, const std::vector<Rat>& eta) {
  require_weak_finite(xi, eta);
  std::size_t n = xi.size();
  Rat total(0);
  for (const Rat& x : xi) total += x;
  std::vector<Rat> zeta(n, Rat(0));
  Rat acc(0);
  for (std::size_t j = 0; j < n; ++j) {
    if (acc + eta[j] >= total) {
      zeta[j] = total - acc;
      break;
    }
    zeta[j] = eta[j];
    acc += eta[j];
  }
  return zeta;
}

// Greedy raise toward eta, left to right, never exceeding any remaining
// prefix budget; exactness is enforced by the mandatory post-check.
std::vector<Rat> rho_upper_finite(const std::vector<Rat>& xi, const std::vector<Rat>& eta) {
  require_weak_finite(xi, eta);
  std::size_t n = xi.size();
  std::vector<Rat> suffix_xi(n + 1, Rat(0));
  for (std::size_t j = n; j-- > 0;) suffix_xi[j] = suffix_xi[j + 1] + xi[j];
  std::vector<Rat> eta_pref(n + 1, Rat(0));
  for (std::size_t j = 0; j < n; ++j) eta_pref[j + 1] = eta_pref[j] + eta[j];

  std::vector<Rat> rho(n);
  Rat placed(0);
  for (std::size_t j = 0; j < n; ++j) {
    // slack_j = min over m >= j of sum_1^m eta - (placed + xi_j..xi_m)
    Rat slack;
    bool first = true;
    Rat mid(0);
    for (std::size_t m = j; m < n; ++m) {
      mid += xi[m];
      Rat cand = eta_pref[m + 1] - placed - mid;
      if (first || cand < slack) {
        slack = cand;
        first = false;
      }
    }
    Rat v = xi[j] + slack;
    if (j > 0) v = min(v, rho[j - 1]);
    rho[j] = v;
    placed += v;
  }
  return rho;
}

// Induction of the tail-majorization zeta: reduce the last entry by the
// minimal tail gap, split at the earliest exact tail equality, recurse left.
std::vector<Rat> zeta_tail_finite(std::vector<Rat> xi, std::vector<Rat> eta) {
  require_tail_finite(xi, eta);
  std::size_t n = xi.size();
  Rat total_gap(0);
  for (std::size_t j = 0; j < n; ++j) total_gap += eta[j] - xi[j];
  if (total_gap.is_zero()) return eta;
  if (n == 1) return xi;

  // alpha = min over m of sum_{j=m}^N (eta - xi)
  Rat alpha;
  {
    Rat acc(0);
    bool first = true;
    for (std::size_t j = n; j-- > 0;) {
      acc += eta[j] - xi[j];
      if (first || acc < alpha) {
        alpha = acc;
        first = false;
      }
    }
  }
  if (alpha.sign() > 0) {
    eta[n - 1] -= alpha;
    Rat again = total_gap - alpha;
    if (again.is_zero()) return eta;
  }
  // earliest m >= 2 with exact tail equality (1-based); m > 1 since the
  // whole sum still differs.
  std::size_t m = 0;
  {
    Rat acc(0);
    for (std::size_t j = n; j-- > 0;) {
      acc += eta[j] - xi[j];
      if (acc.is_zero()) m = j + 1;
    }
  }
  if (m <= 1) raise(Errc::not_applicable, "tail split point missing");
  std::vector<Rat> lx(xi.begin(), xi.begin() + static_cast<long>(m) - 1);
  std::vector<Rat> le(eta.begin(), eta.begin() + static_cast<long>(m) - 1);
  std::vector<Rat> left = zeta_tail_finite(std::move(lx), std::move(le));
  std::vector<Rat> out = std::move(left);
  for (std::size_t j = m - 1; j < n; ++j) out.push_back(eta[j]);
  return out;
}

std::vector<Rat> rho_tail_finite(const std::vector<Rat>& xi, const std::vector<Rat>& eta) {
  require_tail_finite(xi, eta);
  Rat gap(0);
  for (std::size_t j = 0; j < xi.size(); ++j) gap += eta[j] - xi[j];
  std::vector<Rat> rho = xi;
  rho[0] += gap;
  return rho;
}

void post_verify(FiniteKind kind, const std::vector<Rat>& xi, const std::vector<Rat>& eta,
                 const std::vector<Rat>& out) {
  std::size_t n = xi.size();
  if (out.size() != n) raise(Errc::not_applicable, "length changed");
  for (std::size_t j = 0; j < n; ++j) {
    if (out[j].sign() < 0) raise(Errc::not_applicable, "negative output", j + 1);
    if (j > 0 && out[j] > out[j - 1]) raise(Errc::not_applicable, "output not monotone", j + 1);
  }
  auto leq_all = [n](const std::vector<Rat>& a, const std::vector<Rat>& b) {
    for (std::size_t j = 0; j < n; ++j)
      if (a[j] > b[j]) raise(Errc::not_applicable, "termwise bound violated", j + 1);
  };
  auto strong = [n](const std::vector<Rat>& a, const std::vector<Rat>& b) {
    Rat da(0), db(0);
    for (std::size_t j = 0; j < n; ++j) {
      da += a[j];
      db += b[j];
      if (da > db) raise(Errc::not_applicable, "sandwich prefix violated", j + 1);
    }
    if (da != db) raise(Errc::not_applicable, "sandwich totals differ");
  };
  switch (kind) {
    case FiniteKind::zeta_upper:
      strong(xi, out);
      leq_all(out, eta);
      break;
    case FiniteKind::rho_upper:
      leq_all(xi, out);
      strong(out, eta);
      break;
    case FiniteKind::zeta_tail:
      strong(out, xi);  // xi tail-majorized by zeta == zeta strongly below xi
      leq_all(out, eta);
      break;
    case FiniteKind::rho_tail:
      leq_all(xi, out);
      strong(eta, out);
      break;
  }
}

}  // namespace

std::vector<Rat> finite_intermediate(FiniteKind kind, const std::vector<Rat>& xi,
                                     const std::vector<Rat>& eta) {
  validate_finite_inputs(xi, eta);
  std::vector<Rat> out;
  switch (kind) {
    case FiniteKind::zeta_upper: out = zeta_upper_finite(xi, eta); break;
    case FiniteKind::rho_upper: out = rho_upper_finite(xi, eta); break;
    case FiniteKind::zeta_tail: out = zeta_tail_finite(xi, eta); break;
    case FiniteKind::rho_tail: out = rho_tail_finite(xi, eta); break;
  }
  post_verify(kind, xi, eta, out);
  return out;
}

// --- clipping ----------------------------------------------------------------

MonotoneSeq clip(const MonotoneSeq& eta, const Rat& t) {
  if (t.sign() <= 0) raise(Errc::bad_params, "clip level must be positive");
  if (eta.term(1) <= t) return eta;
  // n1: last index with eta_n >= t (exists: eta -> 0 < t)
  std::size_t lo = 1, hi = 2;
  while (eta.term(hi) >= t) {
    lo = hi;
    hi *= 2;
    if (hi > (std::size_t{1} << 40)) raise(Errc::horizon_exhausted, "clip probe diverged");
  }
  while (hi - lo > 1) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (eta.term(mid) >= t)
      lo = mid;
    else
      hi = mid;
  }
  std::vector<Rat> head(lo, t);
  return MonotoneSeq::spliced(std::move(head), lo, eta);
}

ClipThreshold clip_threshold(const MonotoneSeq& xi, const MonotoneSeq& eta, std::size_t horizon) {
  // t1 = max over r >= 1 of (H_r(eta) - inf_{n >= r} D_n) / r, where
  // D_n is the prefix-sum gap; the Cesaro mean of eta caps all later r.
  ClipThreshold out;
  out.conclusive = true;

  analysis::DiffLimit dl = analysis::diff_limit(xi, eta, horizon);
  bool tail_known = dl.direction != 0;
  if (!tail_known) out.conclusive = false;
  // Window infima read off one D scan: past monotone_from the gap is
  // monotone, so inf_{n>=r} is either a scanned suffix minimum (plus the
  // limit for a falling gap) or D(r) itself once r passes the turn.
  std::size_t scan_to = std::max(horizon, dl.monotone_from + 1);
  if (auto acc = xi.accessible_to()) scan_to = std::min(scan_to, *acc);
  if (auto acc = eta.accessible_to()) scan_to = std::min(scan_to, *acc);
  std::vector<Rat> d(scan_to + 1, Rat(0));
  {
    PrefixScanner a(xi), b(eta);
    for (std::size_t n = 1; n <= scan_to; ++n) d[n] = d[n - 1] + b.next() - a.next();
  }
  std::vector<Rat> suffmin(scan_to + 2, Rat(0));
  if (scan_to >= 1) {
    suffmin[scan_to] = d[scan_to];
    for (std::size_t n = scan_to - 1; n >= 1; --n) {
      suffmin[n] = min(d[n], suffmin[n + 1]);
      if (n == 1) break;
    }
  }
  bool falling_exact = dl.direction == -1 && dl.kind == analysis::DiffLimit::Kind::exact;

  Rat h_eta(0);
  Rat best(0);
  bool have = false;
  std::size_t r = 1;
  for (; r <= scan_to; ++r) {
    h_eta += eta.term(r);
    Rat inf_d = suffmin[r];
    if (falling_exact) inf_d = min(inf_d, dl.value);
    Rat cand = (h_eta - inf_d) / Rat(static_cast<long long>(r));
    if (!have || cand > best) {
      best = cand;
      have = true;
    }
    // Later r are bounded by the (nonincreasing) Cesaro mean of eta.
    if (h_eta / Rat(static_cast<long long>(r)) <= best) break;
  }
  if (r > scan_to) out.conclusive = false;
  out.t1 = best;
  if (best.sign() > 0 && eta.term(1) >= best) {
    std::size_t lo = 1, hi = 2;
    while (eta.term(hi) >= best) {
      lo = hi;
      hi *= 2;
      if (hi > (std::size_t{1} << 40)) raise(Errc::horizon_exhausted, "clip probe diverged");
    }
    while (hi - lo > 1) {
      std::size_t mid = lo + (hi - lo) / 2;
      if (eta.term(mid) >= best)
        lo = mid;
      else
        hi = mid;
    }
    out.n1 = lo;
  }
  return out;
}

// --- infinite intermediates ----------------------------------------------------

namespace {

// First n <= cap with exact prefix-sum equality; 0 when none found.
std::size_t first_equality(const MonotoneSeq& xi, const MonotoneSeq& eta, std::size_t cap) {
  PrefixScanner sx(xi), se(eta);
  Rat d(0);
  for (std::size_t n = 1; n <= cap; ++n) {
    d += se.next();
    d -= sx.next();
    if (d.sign() < 0) raise(Errc::not_majorized, "prefix sum exceeded", n);
    if (d.is_zero()) return n;
  }
  return 0;
}

}  // namespace

IntermediateResult infinite_zeta(const MonotoneSeq& xi, const MonotoneSeq& eta,
                                 std::size_t horizon) {
  Verdict3 weak = relation(RelKind::weak, xi, eta, horizon);
  if (weak.is_fails()) raise(Errc::not_majorized, "weak majorization fails", weak.witness().index);

  Verdict3 strong = relation(RelKind::strong, xi, eta, horizon);
  if (strong.is_holds())
    return {eta, IntermediateBranch::collapse, true, horizon, "strong majorization already holds"};

  IntervalRat txi = xi.tail_sum(1);
  if (txi.is_point()) {
    // Summable source: one exact clip of eta carries the whole total.
    Rat total = txi.value();
    Rat acc(0);
    std::size_t cut = 0;
    for (std::size_t j = 1; j <= (std::size_t{1} << 22); ++j) {
      Rat e = eta.term(j);
      if (acc + e >= total) {
        cut = j;
        break;
      }
      acc += e;
    }
    if (cut == 0) raise(Errc::horizon_exhausted, "no clip point found");
    std::vector<Rat> vals;
    for (std::size_t j = 1; j < cut; ++j) vals.push_back(eta.term(j));
    vals.push_back(total - acc);
    return {MonotoneSeq::finite(std::move(vals)), IntermediateBranch::summable_clip,
            weak.is_holds(), horizon, "summable early exit"};
  }

  analysis::DiffLimit dl = analysis::diff_limit(xi, eta, horizon);
  bool block_route =
      dl.direction == +1 || dl.kind == analysis::DiffLimit::Kind::diverges;

  // Iterated clip-and-cut engine (covers both the block route, where every
  // residual gap minimum is attained, and the finite-alpha clip iteration).
  std::vector<Rat> head;
  MonotoneSeq cur_xi = xi;
  MonotoneSeq cur_eta = eta;
  bool conclusive = weak.is_holds();
  std::string note;
  constexpr std::size_t kStageCap = 64;
  for (std::size_t stage = 0; stage < kStageCap; ++stage) {
    Verdict3 s = relation(RelKind::strong, cur_xi, cur_eta, horizon);
    if (s.is_holds()) {
      note = "residual strongly majorized";
      return {MonotoneSeq::spliced(head, 0, cur_eta),
              block_route ? IntermediateBranch::block_splice : IntermediateBranch::clip_iteration,
              conclusive, horizon, note};
    }
    ClipThreshold ct = clip_threshold(cur_xi, cur_eta, horizon);
    if (!ct.conclusive) conclusive = false;
    MonotoneSeq clipped = clip(cur_eta, ct.t1);
    analysis::DiffLimit dcl = analysis::diff_limit(cur_xi, clipped, horizon);
    if (dcl.kind == analysis::DiffLimit::Kind::exact && dcl.value.is_zero()) {
      return {MonotoneSeq::spliced(head, 0, clipped),
              block_route ? IntermediateBranch::block_splice : IntermediateBranch::clip_iteration,
              conclusive, horizon, "final clip reaches gap limit 0"};
    }
    std::size_t cut = first_equality(cur_xi, clipped, horizon);
    if (cut == 0) {
      // Out of equality points inside the window: freeze the current clip.
      return {MonotoneSeq::spliced(head, 0, clipped),
              block_route ? IntermediateBranch::block_splice : IntermediateBranch::clip_iteration,
              false, horizon, "stage budget exhausted"};
    }
    for (std::size_t j = 1; j <= cut; ++j) head.push_back(clipped.term(j));
    cur_xi = shift(cur_xi, cut);
    cur_eta = shift(clipped, cut);
  }
  return {MonotoneSeq::spliced(head, 0, cur_eta),
          block_route ? IntermediateBranch::block_splice : IntermediateBranch::clip_iteration,
          false, horizon, "stage budget exhausted"};
}

IntermediateResult infinite_rho(const MonotoneSeq& xi, const MonotoneSeq& eta,
                                std::size_t horizon) {
  Verdict3 weak = relation(RelKind::weak, xi, eta, horizon);
  if (weak.is_fails()) raise(Errc::not_majorized, "weak majorization fails", weak.witness().index);

  analysis::DiffLimit dl = analysis::diff_limit(xi, eta, horizon);
  if (dl.kind == analysis::DiffLimit::Kind::exact && dl.value.is_zero())
    return {xi, IntermediateBranch::collapse, weak.is_holds(), horizon, "gap limit already 0"};

  // A nondecreasing gap attains every window minimum whether or not its
  // limit is a known rational.
  bool attained_everywhere = dl.direction == +1 || dl.kind == analysis::DiffLimit::Kind::diverges;
  if (attained_everywhere) {
    // Block route: cut at successive gap minimizers, solve each block with
    // the finite raise, splice.
    std::vector<Rat> head;
    std::size_t from = 0;
    constexpr std::size_t kStageCap = 64;
    bool conclusive = weak.is_holds();
    for (std::size_t stage = 0; stage < kStageCap; ++stage) {
      MinAttainment ma = min_attainment(xi, eta, from + 1, horizon);
      if (!ma.attained.is_holds()) {
        conclusive = false;
        break;
      }
      std::size_t to = ma.argmin;
      std::vector<Rat> bx, be;
      for (std::size_t j = from + 1; j <= to; ++j) {
        bx.push_back(xi.term(j));
        be.push_back(eta.term(j));
      }
      std::vector<Rat> blk = finite_intermediate(FiniteKind::rho_upper, bx, be);
      for (Rat& v : blk) head.push_back(std::move(v));
      from = to;
      if (from >= horizon) break;
    }
    if (from == 0) raise(Errc::alpha_unknown, "no attained minimizer");
    return {MonotoneSeq::spliced(head, from, xi),
            IntermediateBranch::block_splice, conclusive, from,
            "blocks cut at gap minimizers; source tail beyond"};
  }

  if (dl.kind != analysis::DiffLimit::Kind::exact)
    raise(Errc::alpha_unknown, "gap limit not exactly known");
  const Rat& alpha = dl.value;

  // Smallest m whose window {n > m} has an unattained infimum: jump along
  // successive argmins until attainment first fails.
  std::size_t big_n = 0;
  {
    bool found = false;
    std::size_t m = 0;
    for (std::size_t guard = 0; guard < 1024 && !found; ++guard) {
      MinAttainment ma = min_attainment(xi, eta, m + 1, horizon);
      if (ma.attained.is_fails()) {
        big_n = m;
        found = true;
        break;
      }
      if (!ma.attained.is_holds()) raise(Errc::alpha_unknown, "attainment undecidable", m + 1);
      m = ma.argmin;
    }
    if (!found) raise(Errc::alpha_unknown, "unattained window not located", m);
  }

  std::vector<Rat> head;
  Rat d_n = eta.partial_sum(big_n) - xi.partial_sum(big_n);
  if (big_n > 0) {
    std::vector<Rat> bx, be;
    for (std::size_t j = 1; j <= big_n; ++j) {
      bx.push_back(xi.term(j));
      be.push_back(eta.term(j));
    }
    head = finite_intermediate(FiniteKind::rho_upper, bx, be);
  }
  head.push_back(xi.term(big_n + 1) + alpha - d_n);
  return {MonotoneSeq::spliced(head, big_n + 1, xi), IntermediateBranch::gap_bump,
          weak.is_holds(), horizon, "finite raise plus one adjusted entry"};
}

namespace {

// Level route for the tail-rho problem: raise flat levels segment by segment
// (each level the exact maximum of the per-window averages) until the
// remaining pair exchanges roles with exact tail equality.
std::optional<IntermediateResult> tail_level_rho(const MonotoneSeq& xi, const MonotoneSeq& eta,
                                                 std::size_t horizon) {
  std::vector<Rat> head;
  std::size_t base = 0;
  constexpr std::size_t kStageCap = 64;
  for (std::size_t stage = 0; stage < kStageCap; ++stage) {
    MonotoneSeq cx = shift(xi, base);
    MonotoneSeq ce = shift(eta, base);
    // Termination: reversed weak relation with exact tail equality.
    {
      Verdict3 rev = relation(RelKind::weak, ce, cx, horizon);
      IntervalRat tx = cx.tail_sum(1);
      IntervalRat te = ce.tail_sum(1);
      if (rev.is_holds() && tx.is_point() && te.is_point() && tx.value() == te.value()) {
        if (base == 0) return std::nullopt;  // nothing raised; caller's formula is simpler
        return IntermediateResult{MonotoneSeq::spliced(head, base, xi),
                                  IntermediateBranch::tail_level, true, horizon,
                                  "flat levels with block equality at the cuts"};
      }
    }
    IntervalRat te = ce.tail_sum(1);
    if (!te.is_point()) return std::nullopt;
    Rat total_e = te.value();
    // p1 = min p with eta' not majorized by <xi'_1..xi'_{p-1}, xi'_p, xi'_p, ...>.
    std::size_t p1 = 0;
    for (std::size_t p = 1; p <= 512 && p1 == 0; ++p) {
      Rat level = cx.term(p);
      Rat pref(0);
      for (std::size_t j = 1; j < p; ++j) pref += cx.term(j);
      Rat se(0), sr = pref;
      for (std::size_t n = 1; n <= horizon + p; ++n) {
        se += ce.term(n);
        sr = n < p ? cx.partial_sum(n) : pref + level * Rat(static_cast<long long>(n - p + 1));
        if (se > sr) {
          p1 = p;
          break;
        }
        if (level.sign() > 0 && sr >= total_e) break;  // flat sums already dominate
        if (level.is_zero() && n > p) break;
      }
    }
    if (p1 == 0) return std::nullopt;

    Rat t1;
    std::size_t n1 = 0;
    if (p1 == 1) {
      t1 = ce.term(1);
      n1 = 1;
    } else {
      Rat pref(0);
      for (std::size_t j = 1; j < p1; ++j) pref += cx.term(j);
      Rat se = ce.partial_sum(p1 - 1);
      bool have = false;
      for (std::size_t n = p1; n <= horizon + p1; ++n) {
        se += ce.term(n);
        Rat cand = (se - pref) / Rat(static_cast<long long>(n - p1 + 1));
        if (!have || cand > t1) {
          t1 = cand;
          n1 = n;
          have = true;
        }
        Rat bound = (total_e - pref) / Rat(static_cast<long long>(n - p1 + 1));
        if (have && bound <= t1) break;
      }
      if (!have) return std::nullopt;
    }
    for (std::size_t j = 1; j < p1; ++j) head.push_back(cx.term(j));
    for (std::size_t j = p1; j <= n1; ++j) head.push_back(t1);
    base += n1;
  }
  return std::nullopt;
}

}  // namespace

IntermediateResult inf_intermediate(InfKind kind, const MonotoneSeq& xi, const MonotoneSeq& eta,
                                    std::size_t horizon) {
  Verdict3 at_inf = relation(RelKind::at_inf, xi, eta, horizon);
  if (at_inf.is_fails())
    raise(Errc::not_tail_majorized, "tail majorization fails", at_inf.witness().index);
  if (!at_inf.is_holds())
    raise(Errc::not_tail_majorized, "tail majorization not certified");
  IntervalRat txi = xi.tail_sum(1);
  IntervalRat teta = eta.tail_sum(1);
  if (!txi.is_point() || !teta.is_point())
    raise(Errc::not_summable, "needs exactly summable sequences");

  if (kind == InfKind::rho) {
    // When the target is not majorized by the source prefixes, the level
    // route certifies a block structure; otherwise bump the first entry.
    Verdict3 fwd = relation(RelKind::weak, eta, xi, horizon);
    if (!fwd.is_holds()) {
      if (auto lvl = tail_level_rho(xi, eta, horizon)) return std::move(*lvl);
    }
    Rat gap = teta.value() - txi.value();
    std::vector<Rat> head;
    head.push_back(xi.term(1) + gap);
    MonotoneSeq rho = MonotoneSeq::spliced(head, 1, xi);
    return {std::move(rho), IntermediateBranch::tail_formula, true, horizon,
            "first entry absorbs the total gap"};
  }

  // zeta: look for the earliest N with the reversed weak relation holding
  // conclusively; then a finite tail solve on the prefix glues to eta's tail.
  std::size_t probe_cap = std::min<std::size_t>(horizon, 512);
  for (std::size_t n = 0; n <= probe_cap; ++n) {
    Verdict3 rev = relation(RelKind::weak, shift(eta, n), shift(xi, n), horizon);
    if (!rev.is_holds()) continue;
    IntervalRat tx = xi.tail_sum(n + 1);
    IntervalRat te = eta.tail_sum(n + 1);
    if (!tx.is_point() || !te.is_point() || tx.value() != te.value()) continue;
    if (n == 0)
      return {eta, IntermediateBranch::collapse, true, horizon, "tails already exchange roles"};
    std::vector<Rat> bx, be;
    for (std::size_t j = 1; j <= n; ++j) {
      bx.push_back(xi.term(j));
      be.push_back(eta.term(j));
    }
    std::vector<Rat> prefix = finite_intermediate(FiniteKind::zeta_tail, bx, be);
    return {MonotoneSeq::spliced(prefix, n, eta), IntermediateBranch::tail_formula, true, horizon,
            "prefix solve glued to the target tail"};
  }

  // Block route: cut where the gap first turns positive, solve each block.
  std::vector<Rat> head;
  std::size_t from = 0;
  while (head.size() < horizon) {
    // n_next = smallest n > from with sum_{from+1}^n (eta - xi) > 0.
    Rat acc(0);
    std::size_t cut = 0;
    for (std::size_t n = from + 1; n <= from + horizon + 1; ++n) {
      acc += eta.term(n) - xi.term(n);
      if (acc.sign() > 0) {
        cut = n;
        break;
      }
    }
    if (cut == 0) break;
    std::vector<Rat> bx, be;
    for (std::size_t j = from + 1; j <= cut; ++j) {
      bx.push_back(xi.term(j));
      be.push_back(eta.term(j));
    }
    std::vector<Rat> blk = finite_intermediate(FiniteKind::zeta_tail, bx, be);
    for (Rat& v : blk) head.push_back(std::move(v));
    from = cut;
  }
  if (head.empty()) raise(Errc::branch_undetermined, "no usable cut found");
  return {MonotoneSeq::prefix(std::move(head)), IntermediateBranch::block_splice, false, from,
          "block solves to horizon only"};
}

}  // namespace majkit
