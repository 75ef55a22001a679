#include "majkit/analysis.hpp"

#include <algorithm>
#include <vector>

#include "majkit/error.hpp"

namespace majkit::analysis {

namespace {

constexpr std::size_t kScanCap = 1u << 16;

using Kind = MonotoneSeq::Kind;

std::optional<AnalyticTail> classify_impl(const MonotoneSeq& s) {
  switch (s.kind()) {
    case Kind::finite_support: {
      AnalyticTail t;
      t.kind = AnalyticTail::Kind::zero;
      t.valid_from = s.values().size();
      return t;
    }
    case Kind::geometric: {
      AnalyticTail t;
      t.kind = AnalyticTail::Kind::geo;
      t.c = s.coeff();
      t.r = s.ratio();
      t.d = -1;
      return t;
    }
    case Kind::power_law: {
      AnalyticTail t;
      t.kind = AnalyticTail::Kind::pow;
      t.c = s.coeff();
      t.s = s.exponent();
      t.d = 0;
      return t;
    }
    case Kind::spliced: {
      auto inner = classify_impl(s.tail_seq());
      if (!inner) return std::nullopt;
      long long h = static_cast<long long>(s.head().size());
      long long off = static_cast<long long>(s.offset());
      AnalyticTail t = *inner;
      // term(n) = tail.term(off + n - h): substitute j_inner = n + off - h.
      t.d += off - h;
      long long v = static_cast<long long>(inner->valid_from) + h - off;
      t.valid_from = static_cast<std::size_t>(std::max({v, h, 0LL}));
      return t;
    }
    case Kind::prefix:
    case Kind::ampliated:
      return std::nullopt;
  }
  return std::nullopt;
}

// Smallest admissible start so that (j + d) >= 1 for all j > n0.
std::size_t domain_start(const AnalyticTail& t) {
  long long lo = t.kind == AnalyticTail::Kind::zero ? 0 : -t.d;
  return static_cast<std::size_t>(std::max({lo, static_cast<long long>(t.valid_from), 0LL}));
}

// Coefficients of c * (x + d)^s as a dense polynomial (degree s).
std::vector<Rat> shifted_power(const Rat& c, long long d, long s) {
  std::vector<Rat> coef(static_cast<std::size_t>(s) + 1, Rat(0));
  Rat dr(static_cast<long long>(d));
  mpz_class binom;
  for (long k = 0; k <= s; ++k) {
    mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(s), static_cast<unsigned long>(k));
    coef[static_cast<std::size_t>(k)] = c * Rat(binom) * dr.pow(s - k);
  }
  return coef;
}

// All real roots of P lie strictly below the returned bound (Cauchy bound);
// requires a positive leading coefficient.
std::size_t positive_beyond(const std::vector<Rat>& p) {
  std::size_t n = p.size() - 1;
  Rat lead = p[n];
  Rat m(0);
  for (std::size_t k = 0; k < n; ++k) m = max(m, p[k].abs());
  Rat bound = Rat(1) + m / lead;
  mpz_class f = floor_int(bound);
  return static_cast<std::size_t>(mpz_get_ui(f.get_mpz_t())) + 1;
}

// Proof of c1/(j+d1)^s1 <= c2/(j+d2)^s2 for all j > n0 (strict: <).
std::optional<std::size_t> pow_le_pow(const AnalyticTail& a, const AnalyticTail& b, bool strict) {
  std::size_t base = std::max(domain_start(a), domain_start(b));
  if (a.s > b.s || (a.s == b.s && a.c < b.c)) {
    // Leading term of P(x) = c2 (x+d1)^s1 - c1 (x+d2)^s2 is positive.
    auto p1 = shifted_power(b.c, a.d, a.s);
    auto p2 = shifted_power(a.c, b.d, b.s);
    std::vector<Rat> p(std::max(p1.size(), p2.size()), Rat(0));
    for (std::size_t i = 0; i < p1.size(); ++i) p[i] += p1[i];
    for (std::size_t i = 0; i < p2.size(); ++i) p[i] -= p2[i];
    while (p.size() > 1 && p.back().is_zero()) p.pop_back();
    if (p.back().sign() <= 0) return std::nullopt;
    return std::max(base, positive_beyond(p));
  }
  if (a.s == b.s && a.c == b.c) {
    if (strict ? (a.d > b.d) : (a.d >= b.d)) return base;
    return std::nullopt;
  }
  return std::nullopt;
}

std::optional<std::size_t> geo_le_geo(const AnalyticTail& a, const AnalyticTail& b, bool strict) {
  std::size_t base = std::max(domain_start(a), domain_start(b));
  if (a.r == b.r) {
    // c1 r^(j+d1) vs c2 r^(j+d2): compare c1 r^(d1-m) vs c2 r^(d2-m), m = min
    long long m = std::min(a.d, b.d);
    Rat lhs = a.c * a.r.pow(static_cast<long>(a.d - m));
    Rat rhs = b.c * b.r.pow(static_cast<long>(b.d - m));
    bool ok = strict ? lhs < rhs : lhs <= rhs;
    return ok ? std::optional<std::size_t>(base) : std::nullopt;
  }
  if (a.r < b.r) {
    // ratio (a.r/b.r)^j decays; scan for the crossover.
    Rat q = a.r / b.r;
    Rat lhs = a.c * a.r.pow(a.d);   // careful: d may be negative; pow handles it
    Rat rhs = b.c * b.r.pow(b.d);
    Rat f = lhs / rhs;  // f * q^j <= 1 wanted
    std::size_t j = base + 1;
    Rat cur = f * q.pow(static_cast<long>(j));
    std::size_t steps = 0;
    while ((strict ? cur >= Rat(1) : cur > Rat(1)) && steps < kScanCap) {
      cur *= q;
      ++j;
      ++steps;
    }
    if (steps >= kScanCap) return std::nullopt;
    return j - 1;
  }
  return std::nullopt;
}

std::optional<std::size_t> geo_le_pow(const AnalyticTail& a, const AnalyticTail& b, bool strict) {
  // c1 r^(j+d1) <= c2/(j+d2)^s: eventually true; find a certified start.
  std::size_t base = std::max(domain_start(a), domain_start(b));
  // Past j0 with r (j+1+d2)^s <= (j+d2)^s, the ratio LHS/RHS is nonincreasing.
  std::size_t j0 = base + 1;
  for (std::size_t steps = 0; steps < kScanCap; ++steps, ++j0) {
    Rat l = a.r * Rat(static_cast<long long>(j0) + 1 + b.d).pow(b.s);
    Rat r = Rat(static_cast<long long>(j0) + b.d).pow(b.s);
    if (l <= r) break;
  }
  std::size_t j = j0;
  Rat lhs = a.c * a.r.pow(static_cast<long>(j) + static_cast<long>(a.d));
  for (std::size_t steps = 0; steps < kScanCap; ++steps, ++j, lhs *= a.r) {
    Rat rhs = b.c / Rat(static_cast<long long>(j) + b.d).pow(b.s);
    if (strict ? lhs < rhs : lhs <= rhs) return j - 1;
  }
  return std::nullopt;
}

}  // namespace

std::optional<AnalyticTail> classify_tail(const MonotoneSeq& s) { return classify_impl(s); }

std::optional<std::size_t> dominated_from(const MonotoneSeq& a, const MonotoneSeq& b, bool strict) {
  if (!strict && structurally_equal(a, b)) return 0;
  SupportInfo sa = a.support();
  SupportInfo sb = b.support();
  if (sa.is_finite()) {
    if (sb.is_infinite()) {
      // a vanishes, b stays positive: strict domination past a's support.
      return sa.end;
    }
    if (sb.is_finite() && !strict) return std::max(sa.end, sb.end);
    if (sb.is_finite() && strict) return std::nullopt;  // both zero eventually
  }
  auto ta = classify_tail(a);
  auto tb = classify_tail(b);
  if (!ta || !tb) return std::nullopt;
  using K = AnalyticTail::Kind;
  if (ta->kind == K::zero) {
    if (strict && tb->kind == K::zero) return std::nullopt;
    return std::max(domain_start(*ta), domain_start(*tb));
  }
  if (tb->kind == K::zero) return std::nullopt;  // positive <= 0 impossible
  if (ta->kind == K::pow && tb->kind == K::pow) return pow_le_pow(*ta, *tb, strict);
  if (ta->kind == K::geo && tb->kind == K::geo) return geo_le_geo(*ta, *tb, strict);
  if (ta->kind == K::geo && tb->kind == K::pow) return geo_le_pow(*ta, *tb, strict);
  return std::nullopt;  // pow <= geo never holds eventually
}

std::optional<std::size_t> detect_shift_of(const MonotoneSeq& xi, const MonotoneSeq& eta) {
  if (structurally_equal(xi, eta)) return 0;
  if (xi.kind() == Kind::spliced && xi.head().empty() && structurally_equal(xi.tail_seq(), eta))
    return xi.offset();
  if (xi.kind() == Kind::geometric && eta.kind() == Kind::geometric && xi.ratio() == eta.ratio()) {
    Rat q = xi.coeff() / eta.coeff();
    std::size_t p = 0;
    while (q < Rat(1) && p < 4096) {
      q /= xi.ratio();
      ++p;
    }
    if (q.is_one()) return p;
  }
  return std::nullopt;
}

TailDiff tail_difference(const MonotoneSeq& a, const MonotoneSeq& b, std::size_t n0) {
  TailDiff out;
  IntervalRat ta = a.tail_sum_refined(n0 + 1, 32);
  IntervalRat tb = b.tail_sum_refined(n0 + 1, 32);
  if (ta.is_point() && tb.is_point()) {
    out.kind = TailDiff::Kind::exact;
    out.value = ta.value() - tb.value();
    return out;
  }
  if (ta.is_diverges() && tb.is_finite()) {
    out.kind = TailDiff::Kind::diverges;
    return out;
  }
  // Same power-law family: the difference of tails telescopes to a finite
  // exact sum even when each tail is only enclosed (or diverges, s = 1).
  auto ca = classify_tail(a);
  auto cb = classify_tail(b);
  if (ca && cb && ca->kind == AnalyticTail::Kind::pow && cb->kind == AnalyticTail::Kind::pow &&
      ca->s == cb->s && ca->c == cb->c &&
      n0 >= std::max(domain_start(*ca), domain_start(*cb))) {
    // sum_{j>n0} c[1/(j+da)^s - 1/(j+db)^s] = c * sum_{m=n0+da+1}^{n0+db} 1/m^s
    long long da = ca->d, db = cb->d;
    Rat acc(0);
    if (da <= db) {
      for (long long m = static_cast<long long>(n0) + da + 1; m <= static_cast<long long>(n0) + db; ++m)
        acc += ca->c / Rat(m).pow(ca->s);
    } else {
      for (long long m = static_cast<long long>(n0) + db + 1; m <= static_cast<long long>(n0) + da; ++m)
        acc -= ca->c / Rat(m).pow(ca->s);
    }
    out.kind = TailDiff::Kind::exact;
    out.value = acc;
    return out;
  }
  if (ca && cb && ca->kind == AnalyticTail::Kind::pow && cb->kind == AnalyticTail::Kind::pow &&
      ca->s == 1 && cb->s == 1 && ca->c > cb->c) {
    out.kind = TailDiff::Kind::diverges;
    return out;
  }
  if (ta.is_finite() && tb.is_finite()) {
    out.kind = TailDiff::Kind::interval;
    out.lo = ta.lo() - tb.hi();
    out.hi = ta.hi() - tb.lo();
    return out;
  }
  return out;
}

DiffLimit diff_limit(const MonotoneSeq& xi, const MonotoneSeq& eta, std::size_t horizon) {
  DiffLimit out;
  // Horizon scan of D_n = sum (eta - xi), always available as evidence.
  {
    PrefixScanner sx(xi), se(eta);
    Rat d(0);
    bool first = true;
    std::size_t upto = horizon;
    if (auto acc = xi.accessible_to()) upto = std::min(upto, *acc);
    if (auto acc = eta.accessible_to()) upto = std::min(upto, *acc);
    for (std::size_t n = 1; n <= upto; ++n) {
      const Rat& x = sx.next();
      const Rat& e = se.next();
      d += e;
      d -= x;
      if (first || d < out.scanned_min) {
        out.scanned_min = d;
        out.scanned_argmin = n;
        first = false;
      }
    }
  }
  if (structurally_equal(xi, eta)) {
    out.kind = DiffLimit::Kind::exact;
    out.value = Rat(0);
    out.direction = +1;
    out.monotone_from = 0;
    return out;
  }
  if (auto fwd = dominated_from(xi, eta)) {
    out.direction = +1;
    out.monotone_from = *fwd;
    out.strict = dominated_from(xi, eta, /*strict=*/true).has_value();
    Rat d0 = eta.partial_sum(*fwd) - xi.partial_sum(*fwd);
    TailDiff td = tail_difference(eta, xi, *fwd);
    switch (td.kind) {
      case TailDiff::Kind::exact:
        out.kind = DiffLimit::Kind::exact;
        out.value = d0 + td.value;
        return out;
      case TailDiff::Kind::diverges:
        out.kind = DiffLimit::Kind::diverges;
        return out;
      case TailDiff::Kind::interval:
        out.kind = DiffLimit::Kind::interval;
        out.lo = d0 + td.lo;
        out.hi = d0 + td.hi;
        return out;
      case TailDiff::Kind::unknown:
        break;
    }
    out.kind = DiffLimit::Kind::unknown;
    return out;
  }
  if (auto rev = dominated_from(eta, xi)) {
    out.direction = -1;
    out.monotone_from = *rev;
    out.strict = dominated_from(eta, xi, /*strict=*/true).has_value();
    Rat d0 = eta.partial_sum(*rev) - xi.partial_sum(*rev);
    TailDiff td = tail_difference(xi, eta, *rev);
    switch (td.kind) {
      case TailDiff::Kind::exact:
        out.kind = DiffLimit::Kind::exact;
        out.value = d0 - td.value;
        return out;
      case TailDiff::Kind::interval:
        out.kind = DiffLimit::Kind::interval;
        out.lo = d0 - td.hi;
        out.hi = d0 - td.lo;
        return out;
      default:
        break;  // divergence downward means the weak relation fails; callers guard
    }
    out.kind = DiffLimit::Kind::unknown;
    return out;
  }
  return out;
}

}  // namespace majkit::analysis
