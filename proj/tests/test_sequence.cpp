#include <doctest.h>

#include "majkit/error.hpp"
#include "majkit/sequence.hpp"

using namespace majkit;

namespace {
MonotoneSeq fin(std::initializer_list<const char*> vals) {
  std::vector<Rat> v;
  for (const char* s : vals) v.push_back(Rat::parse(s));
  return MonotoneSeq::finite(std::move(v));
}
}  // namespace

TEST_CASE("term access per variant") {
  MonotoneSeq omega = MonotoneSeq::harmonic();
  CHECK(omega.term(3) == Rat(1, 3));
  CHECK(MonotoneSeq::geometric(Rat(1), Rat(1, 2)).term(2) == Rat(1, 2));
  CHECK(fin({"3", "2", "1"}).term(5) == Rat(0));
  CHECK(MonotoneSeq::power_law(Rat(2), 2).term(3) == Rat(2, 9));
  MonotoneSeq sp = MonotoneSeq::spliced({Rat(2)}, 1, omega);
  CHECK(sp.term(1) == Rat(2));
  CHECK(sp.term(2) == Rat(1, 2));  // tail read from offset 1
}

TEST_CASE("construction rejects bad data") {
  CHECK_THROWS_AS(MonotoneSeq::finite({Rat(1), Rat(2)}), Error);
  CHECK_THROWS_AS(MonotoneSeq::geometric(Rat(1), Rat(1)), Error);
  CHECK_THROWS_AS(MonotoneSeq::geometric(Rat(0), Rat(1, 2)), Error);
  CHECK_THROWS_AS(MonotoneSeq::power_law(Rat(1), 0), Error);
  // seam violation: head ends below the tail start
  CHECK_THROWS_AS(MonotoneSeq::spliced({Rat(1, 4)}, 0, MonotoneSeq::harmonic()), Error);
}

TEST_CASE("partial sums") {
  MonotoneSeq omega = MonotoneSeq::harmonic();
  CHECK(omega.partial_sum(3) == Rat(11, 6));
  CHECK(omega.partial_sum(0) == Rat(0));
  CHECK(MonotoneSeq::geometric(Rat(1), Rat(1, 2)).partial_sum(3) == Rat(7, 4));
  CHECK(fin({"3", "2", "1"}).partial_sum(10) == Rat(6));
}

TEST_CASE("tail sums") {
  MonotoneSeq geo = MonotoneSeq::geometric(Rat(1), Rat(1, 2));
  IntervalRat t = geo.tail_sum(3);
  CHECK(t.is_point());
  CHECK(t.value() == Rat(1, 2));
  CHECK(MonotoneSeq::harmonic().tail_sum(1).is_diverges());
  IntervalRat p2 = MonotoneSeq::power_law(Rat(1), 2).tail_sum(2);
  CHECK(p2.lo() == Rat(1, 2));
  CHECK(p2.hi() == Rat(3, 4));
  CHECK(MonotoneSeq::prefix({Rat(1), Rat(1, 2)}).tail_sum(1).is_unknown());
  // refined enclosures tighten
  IntervalRat r = MonotoneSeq::power_law(Rat(1), 2).tail_sum_refined(2, 8);
  CHECK(r.hi() - r.lo() < p2.hi() - p2.lo());
  CHECK(r.lo() >= p2.lo());
  CHECK(r.hi() <= p2.hi());
}

TEST_CASE("prefix horizon is honest") {
  MonotoneSeq p = MonotoneSeq::prefix({Rat(1), Rat(1, 2), Rat(1, 3)});
  CHECK(p.term(3) == Rat(1, 3));
  CHECK_THROWS_AS(p.term(4), Error);
  CHECK_THROWS_AS(p.partial_sum(4), Error);
  CHECK(p.accessible_to() == std::size_t{3});
  CHECK(!MonotoneSeq::harmonic().accessible_to().has_value());
}

TEST_CASE("reshape: shift") {
  MonotoneSeq omega = MonotoneSeq::harmonic();
  MonotoneSeq s = shift(omega, 1);
  for (std::size_t n = 1; n <= 5; ++n) CHECK(s.term(n) == Rat(1, static_cast<long long>(n + 1)));
  MonotoneSeq g = shift(MonotoneSeq::geometric(Rat(1), Rat(1, 2)), 2);
  CHECK(g.kind() == MonotoneSeq::Kind::geometric);
  CHECK(g.term(1) == Rat(1, 4));
  CHECK(shift(fin({"3", "2", "1"}), 2).term(1) == Rat(1));
  CHECK(shift(fin({"3"}), 5).support().is_finite());
}

TEST_CASE("reshape: chi_prefix and star") {
  MonotoneSeq omega = MonotoneSeq::harmonic();
  MonotoneSeq c = chi_prefix(omega, 3);
  CHECK(c.support().end == 3);
  CHECK(c.term(3) == Rat(1, 3));
  CHECK(c.term(4) == Rat(0));
  std::vector<Rat> sorted = star({Rat(1), Rat(3), Rat(2)});
  CHECK(sorted == std::vector<Rat>{Rat(3), Rat(2), Rat(1)});
  // star on a sequence is the identity (already monotone), idempotent
  CHECK(structurally_equal(star(c), c));
}

TEST_CASE("reshape: ampliate") {
  MonotoneSeq g = MonotoneSeq::geometric(Rat(1), Rat(1, 2));
  MonotoneSeq d2 = ampliate(g, 2);
  CHECK(d2.term(1) == Rat(1));
  CHECK(d2.term(2) == Rat(1));
  CHECK(d2.term(3) == Rat(1, 2));
  CHECK(d2.term(4) == Rat(1, 2));
  CHECK(d2.partial_sum(3) == Rat(5, 2));
  IntervalRat t = d2.tail_sum(2);
  CHECK(t.is_point());
  CHECK(t.value() == Rat(3));  // 1 + 2*(1/2 + 1/4 + ...) = 1 + 2
  MonotoneSeq df = ampliate(fin({"2", "1"}), 3);
  CHECK(df.kind() == MonotoneSeq::Kind::finite_support);
  CHECK(df.term(4) == Rat(1));
}

TEST_CASE("scale") {
  MonotoneSeq half_omega = scale(MonotoneSeq::harmonic(), Rat(1, 2));
  CHECK(half_omega.term(3) == Rat(1, 6));
  CHECK(scale(fin({"2", "1"}), Rat(3)).term(1) == Rat(6));
}

TEST_CASE("arithmetic means") {
  MonotoneSeq omega = MonotoneSeq::harmonic();
  CHECK(am(fin({"1"}), 4) == Rat(1, 4));
  CHECK(am(omega, 3) == Rat(11, 18));
  IntervalRat a = am_inf(MonotoneSeq::geometric(Rat(1), Rat(1, 2)), 2);
  CHECK(a.is_point());
  CHECK(a.value() == Rat(1, 4));
  CHECK_THROWS_AS(am_inf(omega, 2), Error);
}

TEST_CASE("seqcore invariants hold over a term scan") {
  std::vector<MonotoneSeq> cases = {
      MonotoneSeq::harmonic(),
      MonotoneSeq::geometric(Rat(3, 2), Rat(2, 3)),
      MonotoneSeq::power_law(Rat(2), 2),
      fin({"5/2", "2", "2", "1/3"}),
      MonotoneSeq::spliced({Rat(2), Rat(1)}, 1, MonotoneSeq::harmonic()),
      ampliate(MonotoneSeq::geometric(Rat(1), Rat(1, 3)), 3),
  };
  for (const MonotoneSeq& s : cases) {
    Rat prev = s.term(1);
    Rat acc = prev;
    for (std::size_t n = 2; n <= 200; ++n) {
      Rat cur = s.term(n);
      CHECK(cur >= Rat(0));
      CHECK(cur <= prev);
      // additivity of partial sums
      acc += cur;
      prev = cur;
    }
    CHECK(acc == s.partial_sum(200));
    // tail/partial consistency for exactly summable inputs
    IntervalRat whole = s.tail_sum(1);
    if (whole.is_point()) {
      for (std::size_t n : {1u, 7u, 40u}) {
        IntervalRat t = s.tail_sum(n + 1);
        REQUIRE(t.is_point());
        CHECK(s.partial_sum(n) + t.value() == whole.value());
      }
    }
  }
}

TEST_CASE("am is nonincreasing along monotone inputs") {
  std::vector<MonotoneSeq> cases = {MonotoneSeq::harmonic(),
                                    MonotoneSeq::geometric(Rat(1), Rat(1, 2)),
                                    fin({"4", "2", "1"})};
  for (const MonotoneSeq& s : cases) {
    Rat prev = am(s, 1);
    for (std::size_t n = 2; n <= 1000; ++n) {
      Rat cur = am(s, n);
      CHECK(cur <= prev);
      prev = cur;
    }
  }
}
