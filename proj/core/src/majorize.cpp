#include "majkit/majorize.hpp"

#include <algorithm>

#include "majkit/analysis.hpp"
#include "majkit/error.hpp"

namespace majkit {

namespace {

using analysis::DiffLimit;

constexpr std::size_t kHardScanCap = 1u << 22;

std::size_t accessible_cap(const MonotoneSeq& a, const MonotoneSeq& b, std::size_t want) {
  std::size_t cap = std::min(want, kHardScanCap);
  if (auto ax = a.accessible_to()) cap = std::min(cap, *ax);
  if (auto bx = b.accessible_to()) cap = std::min(cap, *bx);
  return cap;
}

struct ScanResult {
  std::optional<FailWitness> violation;  // first n with S_xi(n) > S_eta(n)
  std::vector<std::size_t> equalities;   // n with exact prefix-sum equality
  std::size_t scanned = 0;
};

ScanResult scan_diffs(const MonotoneSeq& xi, const MonotoneSeq& eta, std::size_t upto,
                      bool collect_eq) {
  ScanResult out;
  PrefixScanner sx(xi), se(eta);
  Rat d(0);
  for (std::size_t n = 1; n <= upto; ++n) {
    d += se.next();
    d -= sx.next();
    out.scanned = n;
    if (d.sign() < 0) {
      out.violation = FailWitness{n, -d, FailReason::prefix_violation};
      return out;
    }
    if (collect_eq && d.is_zero()) out.equalities.push_back(n);
  }
  return out;
}

Verdict3 weak_relation(const MonotoneSeq& xi, const MonotoneSeq& eta, std::size_t horizon) {
  SupportInfo sx = xi.support();
  SupportInfo se = eta.support();
  auto n0_term = analysis::dominated_from(xi, eta);

  std::size_t need = horizon;
  if (sx.is_finite() && se.is_finite())
    need = std::max(need, std::max(sx.end, se.end));
  if (n0_term) need = std::max(need, *n0_term);
  std::size_t upto = accessible_cap(xi, eta, need);

  ScanResult scan = scan_diffs(xi, eta, upto, false);
  if (scan.violation) return Verdict3::fails(*scan.violation);

  if (sx.is_finite() && se.is_finite() && std::max(sx.end, se.end) <= scan.scanned) {
    MajorCert c{MajorCert::Kind::finite_support_exact, std::max(sx.end, se.end), {}, ""};
    return Verdict3::holds(std::move(c));
  }
  if (n0_term && *n0_term <= scan.scanned) {
    MajorCert c{MajorCert::Kind::horizon_plus_termwise_tail, *n0_term, {}, ""};
    return Verdict3::holds(std::move(c));
  }
  // Summable route: with exact totals T_xi <= T_eta and eta termwise below xi
  // past n0, prefixes beyond n0 compare through the tails.
  IntervalRat txi = xi.tail_sum(1);
  IntervalRat teta = eta.tail_sum(1);
  if (txi.is_point() && teta.is_point() && txi.value() <= teta.value()) {
    if (auto rev = analysis::dominated_from(eta, xi); rev && *rev <= scan.scanned) {
      MajorCert c{MajorCert::Kind::tail_sum_comparison, *rev, {}, "totals and reversed tails"};
      return Verdict3::holds(std::move(c));
    }
  }
  return Verdict3::inconclusive(scan.scanned);
}

Verdict3 strong_relation(const MonotoneSeq& xi, const MonotoneSeq& eta, std::size_t horizon) {
  Verdict3 weak = weak_relation(xi, eta, horizon);
  if (weak.is_fails()) return weak;

  DiffLimit dl = analysis::diff_limit(xi, eta, accessible_cap(xi, eta, horizon));
  switch (dl.kind) {
    case DiffLimit::Kind::exact:
      if (dl.value.is_zero()) {
        if (!weak.is_holds()) return Verdict3::inconclusive(horizon);
        IntervalRat txi = xi.tail_sum(1);
        IntervalRat teta = eta.tail_sum(1);
        MajorCert c{MajorCert::Kind::sum_equality, dl.monotone_from, {}, "prefix-sum gap has exact limit 0"};
        if (txi.is_point() && teta.is_point() && txi.value() == teta.value())
          c.detail = "equal totals";
        return Verdict3::holds(std::move(c));
      }
      if (dl.value.sign() > 0)
        return Verdict3::fails({0, dl.value, FailReason::liminf_positive});
      // Exact negative limit: the weak relation must eventually fail; locate it.
      {
        std::size_t cap = accessible_cap(xi, eta, kHardScanCap);
        ScanResult scan = scan_diffs(xi, eta, cap, false);
        if (scan.violation) return Verdict3::fails(*scan.violation);
        return Verdict3::inconclusive(scan.scanned);
      }
    case DiffLimit::Kind::diverges:
      return Verdict3::fails({0, max(dl.scanned_min, Rat(1)), FailReason::liminf_infinite});
    case DiffLimit::Kind::interval:
      if (dl.lo.sign() > 0)
        return Verdict3::fails({0, dl.lo, FailReason::liminf_positive});
      return Verdict3::inconclusive(horizon);
    case DiffLimit::Kind::unknown:
      return Verdict3::inconclusive(horizon);
  }
  return Verdict3::inconclusive(horizon);
}

Verdict3 block_relation(const MonotoneSeq& xi, const MonotoneSeq& eta, std::size_t horizon) {
  SupportInfo sx = xi.support();
  SupportInfo se = eta.support();
  std::size_t need = horizon;
  if (sx.is_finite() && se.is_finite()) need = std::max(need, std::max(sx.end, se.end) + 1);
  std::size_t upto = accessible_cap(xi, eta, need);
  ScanResult scan = scan_diffs(xi, eta, upto, true);
  if (scan.violation) return Verdict3::fails(*scan.violation);

  if (structurally_equal(xi, eta)) {
    MajorCert c{MajorCert::Kind::block_equality, 0, scan.equalities, "identical sequences"};
    return Verdict3::holds(std::move(c));
  }
  if (sx.is_finite() && se.is_finite()) {
    std::size_t end = std::max(sx.end, se.end);
    if (end <= scan.scanned && xi.partial_sum(end) == eta.partial_sum(end)) {
      MajorCert c{MajorCert::Kind::block_equality, end, scan.equalities,
                  "finite supports with equal totals"};
      return Verdict3::holds(std::move(c));
    }
    return Verdict3::fails({0, eta.partial_sum(end) - xi.partial_sum(end),
                            FailReason::total_mismatch});
  }
  std::optional<MajorCert> evidence;
  if (!scan.equalities.empty())
    evidence = MajorCert{MajorCert::Kind::block_equality, 0, scan.equalities,
                         "equality points found to horizon only"};
  return Verdict3::inconclusive(scan.scanned, std::move(evidence));
}

Verdict3 at_inf_relation(const MonotoneSeq& xi, const MonotoneSeq& eta, std::size_t horizon,
                         bool require_equal_totals) {
  IntervalRat txi = xi.tail_sum(1);
  IntervalRat teta = eta.tail_sum(1);
  if (txi.is_diverges() || teta.is_diverges())
    raise(Errc::not_summable, "majorization at infinity needs summable sequences");
  if (txi.is_unknown() || teta.is_unknown()) return Verdict3::inconclusive(0);

  if (require_equal_totals) {
    if (txi.is_point() && teta.is_point()) {
      if (txi.value() != teta.value()) {
        Rat d = (teta.value() - txi.value()).abs();
        return Verdict3::fails({0, d, FailReason::total_mismatch});
      }
    } else if (txi.lo() > teta.hi() || teta.lo() > txi.hi()) {
      Rat d = max(txi.lo() - teta.hi(), teta.lo() - txi.hi());
      return Verdict3::fails({0, d, FailReason::total_mismatch});
    } else {
      return Verdict3::inconclusive(horizon);
    }
  }

  auto n0 = analysis::dominated_from(xi, eta);
  std::size_t check_to = n0 ? std::max(*n0, std::size_t{1}) : horizon;
  check_to = accessible_cap(xi, eta, std::max(check_to, std::size_t{1}));
  for (std::size_t n = 1; n <= check_to; ++n) {
    IntervalRat a = xi.tail_sum_refined(n, 32);
    IntervalRat b = eta.tail_sum_refined(n, 32);
    if (!a.is_finite() || !b.is_finite()) return Verdict3::inconclusive(n);
    if (a.lo() > b.hi())
      return Verdict3::fails({n, a.lo() - b.hi(), FailReason::tail_violation});
    if (!(a.hi() <= b.lo())) {
      // Enclosures overlap: cannot certify this n.
      if (!n0 || n <= *n0) return Verdict3::inconclusive(n);
    }
  }
  if (n0 && *n0 <= check_to) {
    MajorCert c{require_equal_totals ? MajorCert::Kind::sum_equality
                                     : MajorCert::Kind::tail_sum_comparison,
                *n0, {}, require_equal_totals ? "equal totals, tails separated" : ""};
    return Verdict3::holds(std::move(c));
  }
  return Verdict3::inconclusive(check_to);
}

Verdict3 p_shift_relation(const MonotoneSeq& xi, const MonotoneSeq& eta, std::size_t horizon,
                          std::size_t p) {
  if (p == 0) return weak_relation(xi, eta, horizon);
  Verdict3 weak = weak_relation(xi, eta, horizon);
  if (weak.is_fails()) return weak;

  MonotoneSeq xs = shift(xi, p);
  // Two tail arguments make the shifted inequality conclusive past a point:
  // (a) xi_{n+p} <= eta_n termwise, so the gap S is eventually nondecreasing;
  // (b) summable pair with T_xi <= T_eta and eta_j <= xi_{j+p} termwise, so
  //     S(n) = (T_eta - T_xi) + tail_xi(n+p+1) - tail_eta(n+1) >= 0 directly.
  auto n1 = analysis::dominated_from(xs, eta);
  std::optional<std::size_t> n2;
  {
    IntervalRat txi = xi.tail_sum(1);
    IntervalRat teta = eta.tail_sum(1);
    if (txi.is_point() && teta.is_point() && txi.value() <= teta.value())
      n2 = analysis::dominated_from(eta, xs);
  }
  std::size_t need = std::max({horizon, n1.value_or(0) + 1, n2.value_or(0) + 1});
  std::size_t upto = accessible_cap(xi, eta, need);
  if (auto axs = xs.accessible_to()) upto = std::min(upto, *axs);

  // S(n) = S_eta(n) - S_xi(n+p); the relation needs S(n) >= 0 from some N on.
  std::size_t last_violation = 0;
  {
    Rat s_eta(0);
    Rat s_xi = xi.partial_sum(p);
    PrefixScanner se(eta);
    PrefixScanner sxs(xs);
    for (std::size_t n = 1; n <= upto; ++n) {
      s_eta += se.next();
      s_xi += sxs.next();
      if (s_eta < s_xi) last_violation = n;
    }
  }
  bool route_a = n1 && *n1 <= upto && last_violation < upto;
  bool route_b = n2 && *n2 <= upto && last_violation <= *n2;
  if (!weak.is_holds() || (!route_a && !route_b))
    return Verdict3::inconclusive(upto);
  MajorCert c{MajorCert::Kind::horizon_plus_termwise_tail, last_violation + 1, {},
              "minimal admissible shift start"};
  return Verdict3::holds(std::move(c));
}

}  // namespace

Verdict3 relation(RelKind kind, const MonotoneSeq& xi, const MonotoneSeq& eta,
                  std::size_t horizon, std::size_t p) {
  switch (kind) {
    case RelKind::weak: return weak_relation(xi, eta, horizon);
    case RelKind::strong: return strong_relation(xi, eta, horizon);
    case RelKind::block: return block_relation(xi, eta, horizon);
    case RelKind::at_inf: return at_inf_relation(xi, eta, horizon, false);
    case RelKind::strong_at_inf: return at_inf_relation(xi, eta, horizon, true);
    case RelKind::p_shift: return p_shift_relation(xi, eta, horizon, p);
  }
  raise(Errc::bad_params, "bad relation kind");
}

MinAttainment min_attainment(const MonotoneSeq& xi, const MonotoneSeq& eta, std::size_t m,
                             std::size_t horizon) {
  if (m == 0) m = 1;
  DiffLimit dl = analysis::diff_limit(xi, eta, accessible_cap(xi, eta, horizon));

  std::size_t scan_to = accessible_cap(xi, eta, std::max({horizon, m, dl.monotone_from}));
  if (scan_to < m) raise(Errc::horizon_exceeded, "scan range below m", m);

  // Exact minimum of D over [m, scan_to], smallest argmin.
  Rat best;
  std::size_t best_n = 0;
  {
    PrefixScanner sx(xi), se(eta);
    Rat d(0);
    for (std::size_t n = 1; n <= scan_to; ++n) {
      d += se.next();
      d -= sx.next();
      if (n >= m && (best_n == 0 || d < best)) {
        best = d;
        best_n = n;
      }
    }
  }

  MinAttainment out;
  out.argmin = best_n;
  out.value = best;

  if (dl.direction == +1 && dl.monotone_from <= scan_to) {
    // D is nondecreasing past monotone_from, so the scanned minimum is global.
    out.attained = Verdict3::holds(
        {MajorCert::Kind::horizon_plus_termwise_tail, dl.monotone_from, {}, "gap nondecreasing"});
    return out;
  }
  if (dl.direction == -1 && dl.kind == DiffLimit::Kind::exact && dl.monotone_from <= scan_to) {
    if (best <= dl.value) {
      out.attained = Verdict3::holds(
          {MajorCert::Kind::horizon_plus_termwise_tail, dl.monotone_from, {}, "gap nonincreasing"});
      return out;
    }
    if (dl.strict) {
      // Infimum equals the limit and is never attained.
      out.attained = Verdict3::fails({0, best - dl.value, FailReason::liminf_positive});
      out.value = dl.value;
      return out;
    }
  }
  out.attained = Verdict3::inconclusive(scan_to);
  return out;
}

}  // namespace majkit
