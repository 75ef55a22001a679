#include <doctest.h>

#include <random>

#include "majkit/error.hpp"
#include "majkit/intermediate.hpp"

using namespace majkit;

namespace {
std::vector<Rat> rats(std::initializer_list<const char*> vals) {
  std::vector<Rat> v;
  for (const char* s : vals) v.push_back(Rat::parse(s));
  return v;
}
MonotoneSeq fin(std::initializer_list<const char*> vals) {
  std::vector<Rat> v;
  for (const char* s : vals) v.push_back(Rat::parse(s));
  return MonotoneSeq::finite(std::move(v));
}

// Exact sandwich checks for the infinite outputs at a horizon.
void check_zeta(const MonotoneSeq& xi, const MonotoneSeq& eta, const MonotoneSeq& zeta,
                std::size_t h) {
  Rat dx(0), dz(0);
  for (std::size_t n = 1; n <= h; ++n) {
    CHECK(zeta.term(n) <= eta.term(n));
    dx += xi.term(n);
    dz += zeta.term(n);
    CHECK(dx <= dz);
  }
}
void check_rho(const MonotoneSeq& xi, const MonotoneSeq& eta, const MonotoneSeq& rho,
               std::size_t h) {
  Rat dr(0), de(0);
  for (std::size_t n = 1; n <= h; ++n) {
    CHECK(xi.term(n) <= rho.term(n));
    dr += rho.term(n);
    de += eta.term(n);
    CHECK(dr <= de);
  }
}

std::pair<std::vector<Rat>, std::vector<Rat>> random_weak_pair(std::mt19937_64& rng,
                                                               std::size_t n) {
  std::vector<long long> ev(n);
  long long cur = 40 + static_cast<long long>(rng() % 40);
  for (std::size_t i = 0; i < n; ++i) {
    ev[i] = cur;
    cur -= static_cast<long long>(rng() % 9);
    if (cur < 0) cur = 0;
  }
  std::vector<long long> xv(n);
  long long num = 1 + static_cast<long long>(rng() % 4);
  for (std::size_t i = 0; i < n; ++i) xv[i] = ev[i] * num / 4;
  for (int t = 0; t < 10; ++t) {
    std::size_t i = rng() % n, j = rng() % n;
    if (i >= j) continue;
    long long eps = 1 + static_cast<long long>(rng() % 3);
    xv[i] -= eps;
    xv[j] += eps;
    bool ok = xv[i] >= 0;
    for (std::size_t a = 1; a < n && ok; ++a) ok = xv[a] <= xv[a - 1];
    if (!ok) {
      xv[i] += eps;
      xv[j] -= eps;
    }
  }
  long long den = 1 + static_cast<long long>(rng() % 20);
  std::vector<Rat> xr, er;
  for (std::size_t i = 0; i < n; ++i) {
    xr.push_back(Rat(xv[i], den));
    er.push_back(Rat(ev[i], den));
  }
  return {xr, er};
}

bool weak_holds_finite(const std::vector<Rat>& a, const std::vector<Rat>& b) {
  Rat da(0), db(0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    da += a[i];
    db += b[i];
    if (da > db) return false;
  }
  return true;
}

bool tail_holds_finite(const std::vector<Rat>& a, const std::vector<Rat>& b) {
  Rat da(0), db(0);
  for (std::size_t i = a.size(); i-- > 0;) {
    da += a[i];
    db += b[i];
    if (da > db) return false;
  }
  return true;
}
}  // namespace

TEST_CASE("finite intermediates on the fixed examples") {
  std::vector<Rat> rho =
      finite_intermediate(FiniteKind::rho_tail, rats({"2", "1"}), rats({"2", "2"}));
  CHECK(rho == rats({"3", "1"}));

  std::vector<Rat> zt =
      finite_intermediate(FiniteKind::zeta_tail, rats({"2", "1"}), rats({"2", "2"}));
  CHECK(zt == rats({"2", "1"}));

  std::vector<Rat> z =
      finite_intermediate(FiniteKind::zeta_upper, rats({"2", "2"}), rats({"2", "2"}));
  CHECK(z == rats({"2", "2"}));
}

TEST_CASE("finite intermediates survive a randomized sweep") {
  // finite_intermediate post-verifies internally (sandwich relations and
  // monotonicity) and throws on any violation.
  std::mt19937_64 rng(404);
  int done_weak = 0, done_tail = 0;
  for (int iter = 0; iter < 400; ++iter) {
    std::size_t n = 1 + rng() % 8;
    auto [xi, eta] = random_weak_pair(rng, n);
    if (weak_holds_finite(xi, eta)) {
      CHECK(finite_intermediate(FiniteKind::zeta_upper, xi, eta).size() == n);
      CHECK(finite_intermediate(FiniteKind::rho_upper, xi, eta).size() == n);
      ++done_weak;
    }
    if (tail_holds_finite(xi, eta)) {
      CHECK(finite_intermediate(FiniteKind::zeta_tail, xi, eta).size() == n);
      CHECK(finite_intermediate(FiniteKind::rho_tail, xi, eta).size() == n);
      ++done_tail;
    }
  }
  CHECK(done_weak > 100);
  CHECK(done_tail > 50);
}

TEST_CASE("clip structure") {
  MonotoneSeq omega = MonotoneSeq::harmonic();
  MonotoneSeq c = clip(omega, Rat(1, 3));
  CHECK(c.term(1) == Rat(1, 3));
  CHECK(c.term(3) == Rat(1, 3));
  CHECK(c.term(4) == Rat(1, 4));
  CHECK(structurally_equal(clip(omega, Rat(2)), omega));
}

TEST_CASE("clip threshold fixed cases") {
  SUBCASE("identical pair needs no clipping") {
    MonotoneSeq g = MonotoneSeq::geometric(Rat(1), Rat(1, 2));
    ClipThreshold ct = clip_threshold(g, g, 200);
    CHECK(ct.conclusive);
    CHECK(ct.t1 == Rat(1));
    CHECK(ct.n1 == 1);
  }
  SUBCASE("finite pair from the worked example") {
    ClipThreshold ct = clip_threshold(fin({"1/2", "1/2"}), fin({"1", "1/2"}), 200);
    CHECK(ct.conclusive);
    CHECK(ct.t1 == Rat(1, 2));
    CHECK(ct.n1 == 2);
  }
  SUBCASE("halved harmonic clips at its first term") {
    MonotoneSeq omega = MonotoneSeq::harmonic();
    ClipThreshold ct = clip_threshold(scale(omega, Rat(1, 2)), omega, 200);
    CHECK(ct.conclusive);
    CHECK(ct.t1 == Rat(1, 2));
  }
}

TEST_CASE("infinite zeta branches") {
  MonotoneSeq omega = MonotoneSeq::harmonic();
  SUBCASE("collapse under strong majorization") {
    IntermediateResult r = infinite_zeta(omega, omega, 200);
    CHECK(r.branch == IntermediateBranch::collapse);
    CHECK(r.conclusive);
    CHECK(structurally_equal(r.seq, omega));
  }
  SUBCASE("summable early exit") {
    MonotoneSeq xi = MonotoneSeq::geometric(Rat(1), Rat(1, 2));  // total 2
    MonotoneSeq eta = fin({"1", "1", "1"});
    IntermediateResult r = infinite_zeta(xi, eta, 200);
    CHECK(r.branch == IntermediateBranch::summable_clip);
    CHECK(r.conclusive);
    CHECK(r.seq.support().end == 2);
    CHECK(r.seq.term(1) == Rat(1));
    CHECK(r.seq.term(2) == Rat(1));
    check_zeta(xi, eta, r.seq, 50);
  }
  SUBCASE("divergent gap goes through the block route") {
    MonotoneSeq xi = scale(omega, Rat(1, 2));
    IntermediateResult r = infinite_zeta(xi, omega, 128);
    CHECK(r.branch == IntermediateBranch::block_splice);
    check_zeta(xi, omega, r.seq, 100);
  }
  SUBCASE("finite positive gap with shifted source") {
    MonotoneSeq xi = shift(omega, 1);
    IntermediateResult r = infinite_zeta(xi, omega, 128);
    check_zeta(xi, omega, r.seq, 100);
  }
}

TEST_CASE("infinite rho branches") {
  MonotoneSeq omega = MonotoneSeq::harmonic();
  SUBCASE("collapse") {
    IntermediateResult r = infinite_rho(omega, omega, 200);
    CHECK(r.branch == IntermediateBranch::collapse);
    CHECK(structurally_equal(r.seq, omega));
  }
  SUBCASE("attained minima go through blocks") {
    MonotoneSeq xi = scale(omega, Rat(1, 2));
    IntermediateResult r = infinite_rho(xi, omega, 128);
    CHECK(r.branch == IntermediateBranch::block_splice);
    check_rho(xi, omega, r.seq, 60);
  }
  SUBCASE("unattained infimum bumps one entry") {
    MonotoneSeq xi =
        MonotoneSeq::spliced({Rat(5, 8)}, 1, MonotoneSeq::geometric(Rat(5, 4), Rat(1, 2)));
    MonotoneSeq eta = MonotoneSeq::geometric(Rat(1), Rat(1, 2));
    IntermediateResult r = infinite_rho(xi, eta, 200);
    CHECK(r.branch == IntermediateBranch::gap_bump);
    CHECK(r.conclusive);
    CHECK(r.seq.term(1) == Rat(3, 4));  // xi_1 + alpha = 5/8 + 1/8
    CHECK(r.seq.term(2) == Rat(5, 8));
    check_rho(xi, eta, r.seq, 60);
    Rat d(0);
    for (std::size_t n = 1; n <= 40; ++n) d += eta.term(n) - r.seq.term(n);
    CHECK(d == Rat(1, 4) * Rat(1, 2).pow(39));
  }
  SUBCASE("unattained infimum behind a tied head") {
    MonotoneSeq xi = MonotoneSeq::spliced(
        {Rat(1), Rat(5, 8)}, 1, MonotoneSeq::geometric(Rat(5, 4), Rat(1, 2)));
    MonotoneSeq eta =
        MonotoneSeq::spliced({Rat(1)}, 0, MonotoneSeq::geometric(Rat(1), Rat(1, 2)));
    IntermediateResult r = infinite_rho(xi, eta, 200);
    CHECK(r.branch == IntermediateBranch::gap_bump);
    CHECK(r.seq.term(1) == Rat(1));
    CHECK(r.seq.term(2) == Rat(3, 4));
    check_rho(xi, eta, r.seq, 60);
  }
}

TEST_CASE("sandwich collapse under conclusive strong majorization") {
  std::vector<std::pair<MonotoneSeq, MonotoneSeq>> pairs;
  MonotoneSeq g = MonotoneSeq::geometric(Rat(1), Rat(1, 2));
  pairs.emplace_back(g, g);
  pairs.emplace_back(MonotoneSeq::geometric(Rat(1, 2), Rat(1, 2)), fin({"1"}));
  for (const auto& [xi, eta] : pairs) {
    IntermediateResult z = infinite_zeta(xi, eta, 128);
    IntermediateResult r = infinite_rho(xi, eta, 128);
    for (std::size_t n = 1; n <= 64; ++n) {
      CHECK(z.seq.term(n) == eta.term(n));
      CHECK(r.seq.term(n) == xi.term(n));
    }
  }
}

TEST_CASE("tail intermediates for summable pairs") {
  SUBCASE("rho through the level route on the worked pair") {
    MonotoneSeq xi = fin({"1", "1"});
    MonotoneSeq eta = fin({"3", "1"});
    IntermediateResult r = inf_intermediate(InfKind::rho, xi, eta, 128);
    CHECK(r.branch == IntermediateBranch::tail_level);
    CHECK(r.conclusive);
    CHECK(r.seq.term(1) == Rat(3));
    CHECK(r.seq.term(2) == Rat(1));
    Rat dr(0), de(0);
    for (std::size_t n = 1; n <= 8; ++n) {
      CHECK(xi.term(n) <= r.seq.term(n));
      dr += r.seq.term(n);
      de += eta.term(n);
      CHECK(de <= dr);
    }
    CHECK(dr == de);
  }
  SUBCASE("rho bump formula for geometric pairs") {
    MonotoneSeq xi = MonotoneSeq::geometric(Rat(1, 2), Rat(1, 2));  // total 1
    MonotoneSeq eta = MonotoneSeq::geometric(Rat(1), Rat(1, 2));    // total 2
    REQUIRE(relation(RelKind::at_inf, xi, eta, 64).is_holds());
    IntermediateResult r = inf_intermediate(InfKind::rho, xi, eta, 128);
    CHECK(r.seq.term(1) == Rat(3, 2));
    CHECK(r.seq.term(2) == Rat(1, 4));
    Rat dr(0), de(0);
    for (std::size_t n = 1; n <= 40; ++n) {
      CHECK(xi.term(n) <= r.seq.term(n));
      dr += r.seq.term(n);
      de += eta.term(n);
      CHECK(de <= dr);
    }
  }
  SUBCASE("zeta collapses for equal-total pairs with exchanged roles") {
    MonotoneSeq g = MonotoneSeq::geometric(Rat(1), Rat(1, 2));
    IntermediateResult r = inf_intermediate(InfKind::zeta, g, g, 128);
    CHECK(structurally_equal(r.seq, g));
  }
  SUBCASE("zeta via a prefix solve glued to the target tail") {
    MonotoneSeq tailseq = MonotoneSeq::geometric(Rat(1, 2), Rat(1, 2));
    MonotoneSeq xi = MonotoneSeq::spliced({Rat(2), Rat(1)}, 0, tailseq);
    MonotoneSeq eta = MonotoneSeq::spliced({Rat(5, 2), Rat(1)}, 0, tailseq);
    REQUIRE(relation(RelKind::at_inf, xi, eta, 64).is_holds());
    IntermediateResult r = inf_intermediate(InfKind::zeta, xi, eta, 128);
    CHECK(r.conclusive);
    Rat dz(0), dx(0);
    for (std::size_t n = 1; n <= 40; ++n) {
      CHECK(r.seq.term(n) <= eta.term(n));
      dz += r.seq.term(n);
      dx += xi.term(n);
      CHECK(dz <= dx);
    }
  }
  SUBCASE("preconditions are enforced") {
    CHECK_THROWS_AS(
        inf_intermediate(InfKind::rho, MonotoneSeq::harmonic(), MonotoneSeq::harmonic(), 64),
        Error);
    CHECK_THROWS_AS(inf_intermediate(InfKind::zeta, MonotoneSeq::geometric(Rat(1), Rat(1, 2)),
                                     MonotoneSeq::geometric(Rat(1, 4), Rat(1, 2)), 64),
                    Error);
  }
}
