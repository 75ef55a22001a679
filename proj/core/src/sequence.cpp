#include "majkit/sequence.hpp"

#include <algorithm>

#include "majkit/error.hpp"

namespace majkit {

IntervalRat IntervalRat::range(Rat lo, Rat hi) {
  if (hi < lo) raise(Errc::bad_params, "interval with hi < lo");
  return IntervalRat(std::move(lo), std::move(hi));
}

const Rat& IntervalRat::lo() const {
  if (!is_finite()) raise(Errc::bad_params, "lo() on non-finite interval");
  return lo_;
}
const Rat& IntervalRat::hi() const {
  if (!is_finite()) raise(Errc::bad_params, "hi() on non-finite interval");
  return hi_;
}
const Rat& IntervalRat::value() const {
  if (!is_point()) raise(Errc::bad_params, "value() on non-point interval");
  return lo_;
}

IntervalRat& IntervalRat::operator+=(const IntervalRat& o) {
  // Sums of nonnegative series: divergence of either part wins, otherwise an
  // unknown part makes the whole unknown.
  if (kind_ == Kind::diverges || o.kind_ == Kind::diverges) {
    *this = diverges();
    return *this;
  }
  if (kind_ == Kind::unknown || o.kind_ == Kind::unknown) {
    *this = unknown();
    return *this;
  }
  lo_ += o.lo_;
  hi_ += o.hi_;
  return *this;
}

IntervalRat IntervalRat::scaled(const Rat& c) const {
  if (c.sign() < 0) raise(Errc::bad_params, "negative interval scale");
  if (c.is_zero()) return point(Rat(0));
  if (!is_finite()) return *this;
  return range(lo_ * c, hi_ * c);
}

struct MonotoneSeq::Node {
  Kind kind;
  std::vector<Rat> values;  // finite_support / prefix / spliced head
  Rat c;                    // geometric / power_law coefficient
  Rat r;                    // geometric ratio
  long s = 0;               // power_law exponent
  std::size_t offset = 0;   // spliced
  std::size_t m = 0;        // ampliated
  std::shared_ptr<const Node> child;  // spliced tail / ampliated base
  std::vector<Rat> psums;   // cached prefix sums for stored values
};

namespace {

using Node = MonotoneSeq::Node;

void check_nonincreasing(const std::vector<Rat>& v, bool strictly_positive) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].sign() < 0) raise(Errc::not_monotone, "negative term", i + 1);
    if (strictly_positive && v[i].sign() == 0)
      raise(Errc::not_monotone, "finite-support values must be positive", i + 1);
    if (i > 0 && v[i] > v[i - 1]) raise(Errc::not_monotone, "values increase", i + 1);
  }
}

std::vector<Rat> cumulative(const std::vector<Rat>& v) {
  std::vector<Rat> out;
  out.reserve(v.size());
  Rat acc(0);
  for (const Rat& x : v) {
    acc += x;
    out.push_back(acc);
  }
  return out;
}

}  // namespace

MonotoneSeq MonotoneSeq::zero() { return finite({}); }

MonotoneSeq MonotoneSeq::finite(std::vector<Rat> values) {
  // Trailing zeros are tolerated on input and normalized away.
  while (!values.empty() && values.back().is_zero()) values.pop_back();
  check_nonincreasing(values, /*strictly_positive=*/true);
  auto n = std::make_shared<Node>();
  n->kind = Kind::finite_support;
  n->psums = cumulative(values);
  n->values = std::move(values);
  return MonotoneSeq(std::move(n));
}

MonotoneSeq MonotoneSeq::geometric(Rat c, Rat r) {
  if (c.sign() <= 0) raise(Errc::bad_params, "geometric needs c > 0");
  if (r.sign() <= 0 || r >= Rat(1)) raise(Errc::bad_params, "geometric needs 0 < r < 1");
  auto n = std::make_shared<Node>();
  n->kind = Kind::geometric;
  n->c = std::move(c);
  n->r = std::move(r);
  return MonotoneSeq(std::move(n));
}

MonotoneSeq MonotoneSeq::power_law(Rat c, long s) {
  if (c.sign() <= 0) raise(Errc::bad_params, "power_law needs c > 0");
  if (s < 1) raise(Errc::bad_params, "power_law needs integer s >= 1");
  auto n = std::make_shared<Node>();
  n->kind = Kind::power_law;
  n->c = std::move(c);
  n->s = s;
  return MonotoneSeq(std::move(n));
}

MonotoneSeq MonotoneSeq::spliced(std::vector<Rat> head, std::size_t offset, MonotoneSeq tail) {
  check_nonincreasing(head, /*strictly_positive=*/false);
  if (head.empty() && offset == 0) return tail;
  // Seam check is eager: a violation is a constructor error, not latent state.
  if (!head.empty()) {
    Rat first_tail = tail.term(offset + 1);
    if (first_tail > head.back())
      raise(Errc::not_monotone, "splice seam increases", head.size() + 1);
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::spliced;
  n->psums = cumulative(head);
  n->values = std::move(head);
  n->offset = offset;
  n->child = tail.node_;
  return MonotoneSeq(std::move(n));
}

MonotoneSeq MonotoneSeq::prefix(std::vector<Rat> values) {
  check_nonincreasing(values, /*strictly_positive=*/false);
  if (values.empty()) raise(Errc::bad_params, "empty prefix");
  auto n = std::make_shared<Node>();
  n->kind = Kind::prefix;
  n->psums = cumulative(values);
  n->values = std::move(values);
  return MonotoneSeq(std::move(n));
}

MonotoneSeq MonotoneSeq::ampliated(std::size_t m, MonotoneSeq base) {
  if (m == 0) raise(Errc::bad_params, "ampliation factor must be >= 1");
  if (m == 1) return base;
  if (base.kind() == Kind::finite_support) {
    std::vector<Rat> out;
    out.reserve(base.values().size() * m);
    for (const Rat& v : base.values())
      for (std::size_t i = 0; i < m; ++i) out.push_back(v);
    return finite(std::move(out));
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::ampliated;
  n->m = m;
  n->child = base.node_;
  return MonotoneSeq(std::move(n));
}

MonotoneSeq::Kind MonotoneSeq::kind() const { return node_->kind; }

const std::vector<Rat>& MonotoneSeq::values() const {
  if (kind() != Kind::finite_support && kind() != Kind::prefix)
    raise(Errc::bad_params, "values() on wrong variant");
  return node_->values;
}
const Rat& MonotoneSeq::coeff() const {
  if (kind() != Kind::geometric && kind() != Kind::power_law)
    raise(Errc::bad_params, "coeff() on wrong variant");
  return node_->c;
}
const Rat& MonotoneSeq::ratio() const {
  if (kind() != Kind::geometric) raise(Errc::bad_params, "ratio() on wrong variant");
  return node_->r;
}
long MonotoneSeq::exponent() const {
  if (kind() != Kind::power_law) raise(Errc::bad_params, "exponent() on wrong variant");
  return node_->s;
}
const std::vector<Rat>& MonotoneSeq::head() const {
  if (kind() != Kind::spliced) raise(Errc::bad_params, "head() on wrong variant");
  return node_->values;
}
std::size_t MonotoneSeq::offset() const {
  if (kind() != Kind::spliced) raise(Errc::bad_params, "offset() on wrong variant");
  return node_->offset;
}
MonotoneSeq MonotoneSeq::tail_seq() const {
  if (kind() != Kind::spliced) raise(Errc::bad_params, "tail_seq() on wrong variant");
  return MonotoneSeq(node_->child);
}
std::size_t MonotoneSeq::ampl_factor() const {
  if (kind() != Kind::ampliated) raise(Errc::bad_params, "ampl_factor() on wrong variant");
  return node_->m;
}
MonotoneSeq MonotoneSeq::base_seq() const {
  if (kind() != Kind::ampliated) raise(Errc::bad_params, "base_seq() on wrong variant");
  return MonotoneSeq(node_->child);
}

namespace {

Rat node_term(const Node& nd, std::size_t n) {
  if (n == 0) raise(Errc::bad_params, "term index is 1-based");
  switch (nd.kind) {
    case MonotoneSeq::Kind::finite_support:
      return n <= nd.values.size() ? nd.values[n - 1] : Rat(0);
    case MonotoneSeq::Kind::geometric:
      return nd.c * nd.r.pow(static_cast<long>(n) - 1);
    case MonotoneSeq::Kind::power_law:
      return nd.c / Rat(static_cast<long long>(n)).pow(nd.s);
    case MonotoneSeq::Kind::spliced:
      if (n <= nd.values.size()) return nd.values[n - 1];
      return node_term(*nd.child, nd.offset + n - nd.values.size());
    case MonotoneSeq::Kind::prefix:
      if (n > nd.values.size())
        raise(Errc::horizon_exceeded, "prefix sequence queried past its horizon", n);
      return nd.values[n - 1];
    case MonotoneSeq::Kind::ampliated:
      return node_term(*nd.child, (n + nd.m - 1) / nd.m);
  }
  raise(Errc::bad_params, "corrupt variant");
}

}  // namespace

Rat MonotoneSeq::term(std::size_t n) const { return node_term(*node_, n); }

namespace {

// Sum of terms over the index range (lo, hi], descending through nested
// structures exactly once per level (two-sided recursion would go
// exponential on deep splice chains).
Rat range_sum(const Node& nd, std::size_t lo, std::size_t hi) {
  if (hi <= lo) return Rat(0);
  switch (nd.kind) {
    case MonotoneSeq::Kind::finite_support: {
      std::size_t a = std::min(lo, nd.values.size());
      std::size_t b = std::min(hi, nd.values.size());
      Rat out = b ? nd.psums[b - 1] : Rat(0);
      if (a) out -= nd.psums[a - 1];
      return out;
    }
    case MonotoneSeq::Kind::geometric:
      // c (r^lo - r^hi) / (1 - r)
      return nd.c * (nd.r.pow(static_cast<long>(lo)) - nd.r.pow(static_cast<long>(hi))) /
             (Rat(1) - nd.r);
    case MonotoneSeq::Kind::power_law: {
      Rat acc(0);
      for (std::size_t j = lo + 1; j <= hi; ++j)
        acc += nd.c / Rat(static_cast<long long>(j)).pow(nd.s);
      return acc;
    }
    case MonotoneSeq::Kind::spliced: {
      std::size_t h = nd.values.size();
      std::size_t a = std::min(lo, h);
      std::size_t b = std::min(hi, h);
      Rat out = b ? nd.psums[b - 1] : Rat(0);
      if (a) out -= nd.psums[a - 1];
      if (hi > h)
        out += range_sum(*nd.child, nd.offset + std::max(lo, h) - h, nd.offset + hi - h);
      return out;
    }
    case MonotoneSeq::Kind::prefix:
      if (hi > nd.values.size())
        raise(Errc::horizon_exceeded, "prefix sequence summed past its horizon", hi);
      return nd.psums[hi - 1] - (lo ? nd.psums[lo - 1] : Rat(0));
    case MonotoneSeq::Kind::ampliated: {
      // difference of the two block-prefix formulas, one base descent
      std::size_t qlo = lo / nd.m, rlo = lo % nd.m;
      std::size_t qhi = hi / nd.m, rhi = hi % nd.m;
      Rat out = range_sum(*nd.child, qlo, qhi) * Rat(static_cast<long long>(nd.m));
      if (rhi) out += node_term(*nd.child, qhi + 1) * Rat(static_cast<long long>(rhi));
      if (rlo) out -= node_term(*nd.child, qlo + 1) * Rat(static_cast<long long>(rlo));
      return out;
    }
  }
  raise(Errc::bad_params, "corrupt variant");
}

}  // namespace

Rat MonotoneSeq::partial_sum(std::size_t n) const { return range_sum(*node_, 0, n); }

IntervalRat MonotoneSeq::tail_sum(std::size_t n) const {
  if (n == 0) raise(Errc::bad_params, "tail index is 1-based");
  const Node& nd = *node_;
  switch (nd.kind) {
    case Kind::finite_support: {
      std::size_t sz = nd.values.size();
      if (n > sz) return IntervalRat::point(Rat(0));
      return IntervalRat::point(nd.psums[sz - 1] - (n >= 2 ? nd.psums[n - 2] : Rat(0)));
    }
    case Kind::geometric:
      // c r^(n-1) / (1-r), exact
      return IntervalRat::point(nd.c * nd.r.pow(static_cast<long>(n) - 1) / (Rat(1) - nd.r));
    case Kind::power_law: {
      if (nd.s == 1) return IntervalRat::diverges();
      // integral bounds: int_n^inf c/x^s dx <= tail <= term(n) + int_n^inf
      Rat integral = nd.c / (Rat(nd.s - 1) * Rat(static_cast<long long>(n)).pow(nd.s - 1));
      return IntervalRat::range(integral, term(n) + integral);
    }
    case Kind::spliced: {
      std::size_t h = nd.values.size();
      MonotoneSeq tail(nd.child);
      if (n > h) return tail.tail_sum(nd.offset + n - h);
      Rat headpart = nd.psums[h - 1] - (n >= 2 ? nd.psums[n - 2] : Rat(0));
      return IntervalRat::point(headpart) + tail.tail_sum(nd.offset + 1);
    }
    case Kind::prefix:
      return IntervalRat::unknown();
    case Kind::ampliated: {
      MonotoneSeq base(nd.child);
      std::size_t q0 = (n + nd.m - 1) / nd.m;
      Rat copies(static_cast<long long>(q0 * nd.m - n + 1));
      IntervalRat rest = base.tail_sum(q0 + 1).scaled(Rat(static_cast<long long>(nd.m)));
      return IntervalRat::point(base.term(q0) * copies) + rest;
    }
  }
  raise(Errc::bad_params, "corrupt variant");
}

IntervalRat MonotoneSeq::tail_sum_refined(std::size_t n, std::size_t extra) const {
  Rat headpart(0);
  for (std::size_t j = n; j < n + extra; ++j) headpart += term(j);
  return IntervalRat::point(headpart) + tail_sum(n + extra);
}

std::optional<std::size_t> MonotoneSeq::accessible_to() const {
  const Node& nd = *node_;
  switch (nd.kind) {
    case Kind::finite_support:
    case Kind::geometric:
    case Kind::power_law:
      return std::nullopt;
    case Kind::prefix:
      return nd.values.size();
    case Kind::spliced: {
      auto t = MonotoneSeq(nd.child).accessible_to();
      if (!t) return std::nullopt;
      if (*t < nd.offset) return nd.values.size();
      return nd.values.size() + (*t - nd.offset);
    }
    case Kind::ampliated: {
      auto b = MonotoneSeq(nd.child).accessible_to();
      if (!b) return std::nullopt;
      return *b * nd.m;
    }
  }
  return std::nullopt;
}

SupportInfo MonotoneSeq::support() const {
  const Node& nd = *node_;
  switch (nd.kind) {
    case Kind::finite_support:
      return SupportInfo::finite(nd.values.size());
    case Kind::geometric:
    case Kind::power_law:
      return SupportInfo::infinite();
    case Kind::prefix: {
      for (std::size_t i = 0; i < nd.values.size(); ++i)
        if (nd.values[i].is_zero()) return SupportInfo::finite(i);
      return SupportInfo::unknown();
    }
    case Kind::spliced: {
      std::size_t h = nd.values.size();
      std::size_t head_support = h;
      while (head_support > 0 && nd.values[head_support - 1].is_zero()) --head_support;
      SupportInfo t = MonotoneSeq(nd.child).support();
      if (t.kind == SupportInfo::Kind::infinite) return SupportInfo::infinite();
      if (t.kind == SupportInfo::Kind::unknown) return SupportInfo::unknown();
      if (t.end <= nd.offset) return SupportInfo::finite(head_support);
      return SupportInfo::finite(h + (t.end - nd.offset));
    }
    case Kind::ampliated: {
      SupportInfo b = MonotoneSeq(nd.child).support();
      if (b.kind == SupportInfo::Kind::finite) return SupportInfo::finite(b.end * nd.m);
      return b;
    }
  }
  return SupportInfo::unknown();
}

bool structurally_equal(const MonotoneSeq& a, const MonotoneSeq& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  const auto& na = *a.node_;
  const auto& nb = *b.node_;
  switch (a.kind()) {
    case MonotoneSeq::Kind::finite_support:
    case MonotoneSeq::Kind::prefix:
      return na.values == nb.values;
    case MonotoneSeq::Kind::geometric:
      return na.c == nb.c && na.r == nb.r;
    case MonotoneSeq::Kind::power_law:
      return na.c == nb.c && na.s == nb.s;
    case MonotoneSeq::Kind::spliced:
      return na.values == nb.values && na.offset == nb.offset &&
             structurally_equal(MonotoneSeq(na.child), MonotoneSeq(nb.child));
    case MonotoneSeq::Kind::ampliated:
      return na.m == nb.m && structurally_equal(MonotoneSeq(na.child), MonotoneSeq(nb.child));
  }
  return false;
}

// --- transforms ------------------------------------------------------------

MonotoneSeq shift(const MonotoneSeq& s, std::size_t n) {
  if (n == 0) return s;
  switch (s.kind()) {
    case MonotoneSeq::Kind::finite_support: {
      const auto& v = s.values();
      if (n >= v.size()) return MonotoneSeq::zero();
      return MonotoneSeq::finite(std::vector<Rat>(v.begin() + static_cast<long>(n), v.end()));
    }
    case MonotoneSeq::Kind::geometric:
      return MonotoneSeq::geometric(s.coeff() * s.ratio().pow(static_cast<long>(n)), s.ratio());
    case MonotoneSeq::Kind::prefix: {
      const auto& v = s.values();
      if (n >= v.size())
        raise(Errc::horizon_exceeded, "shift past prefix horizon", n);
      return MonotoneSeq::prefix(std::vector<Rat>(v.begin() + static_cast<long>(n), v.end()));
    }
    case MonotoneSeq::Kind::spliced: {
      const auto& h = s.head();
      if (n < h.size())
        return MonotoneSeq::spliced(std::vector<Rat>(h.begin() + static_cast<long>(n), h.end()),
                                    s.offset(), s.tail_seq());
      return shift(s.tail_seq(), s.offset() + n - h.size());
    }
    default:
      return MonotoneSeq::spliced({}, n, s);
  }
}

MonotoneSeq chi_prefix(const MonotoneSeq& s, std::size_t n) {
  std::vector<Rat> v;
  v.reserve(n);
  for (std::size_t j = 1; j <= n; ++j) {
    Rat t = s.term(j);
    if (t.is_zero()) break;
    v.push_back(std::move(t));
  }
  return MonotoneSeq::finite(std::move(v));
}

std::vector<Rat> star(std::vector<Rat> values) {
  for (const Rat& v : values)
    if (v.sign() < 0) raise(Errc::negative_entry, "star of a negative value");
  std::sort(values.begin(), values.end(), [](const Rat& a, const Rat& b) { return b < a; });
  return values;
}

MonotoneSeq star(const MonotoneSeq& s) {
  if (s.kind() != MonotoneSeq::Kind::finite_support && s.kind() != MonotoneSeq::Kind::prefix)
    raise(Errc::bad_params, "star needs finite data (finite_support or prefix)");
  return s;  // already monotone by construction
}

MonotoneSeq ampliate(const MonotoneSeq& s, std::size_t m) { return MonotoneSeq::ampliated(m, s); }

MonotoneSeq scale(const MonotoneSeq& s, const Rat& c) {
  if (c.sign() < 0) raise(Errc::bad_params, "negative scale");
  if (c.is_zero()) return MonotoneSeq::zero();
  if (c.is_one()) return s;
  switch (s.kind()) {
    case MonotoneSeq::Kind::finite_support:
    case MonotoneSeq::Kind::prefix: {
      std::vector<Rat> v = s.values();
      for (Rat& x : v) x *= c;
      return s.kind() == MonotoneSeq::Kind::finite_support ? MonotoneSeq::finite(std::move(v))
                                                           : MonotoneSeq::prefix(std::move(v));
    }
    case MonotoneSeq::Kind::geometric:
      return MonotoneSeq::geometric(s.coeff() * c, s.ratio());
    case MonotoneSeq::Kind::power_law:
      return MonotoneSeq::power_law(s.coeff() * c, s.exponent());
    case MonotoneSeq::Kind::spliced: {
      std::vector<Rat> h = s.head();
      for (Rat& x : h) x *= c;
      return MonotoneSeq::spliced(std::move(h), s.offset(), scale(s.tail_seq(), c));
    }
    case MonotoneSeq::Kind::ampliated:
      return MonotoneSeq::ampliated(s.ampl_factor(), scale(s.base_seq(), c));
  }
  raise(Errc::bad_params, "corrupt variant");
}

Rat am(const MonotoneSeq& s, std::size_t n) {
  if (n == 0) raise(Errc::bad_params, "am index is 1-based");
  return s.partial_sum(n) / Rat(static_cast<long long>(n));
}

IntervalRat am_inf(const MonotoneSeq& s, std::size_t n) {
  if (n == 0) raise(Errc::bad_params, "am_inf index is 1-based");
  IntervalRat whole = s.tail_sum(1);
  if (whole.is_diverges())
    raise(Errc::not_summable, "am_inf needs a summable sequence");
  IntervalRat t = s.tail_sum(n + 1);
  if (!t.is_finite()) return t;
  Rat inv_n = Rat(1) / Rat(static_cast<long long>(n));
  return t.scaled(inv_n);
}

const Rat& PrefixScanner::next() {
  ++n_;
  term_ = s_->term(n_);
  sum_ += term_;
  return term_;
}

}  // namespace majkit
