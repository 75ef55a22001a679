#include <doctest.h>

#include <random>

#include "majkit/error.hpp"
#include "majkit/stoch.hpp"

using namespace majkit;

namespace {
MonotoneSeq fin(std::initializer_list<const char*> vals) {
  std::vector<Rat> v;
  for (const char* s : vals) v.push_back(Rat::parse(s));
  return MonotoneSeq::finite(std::move(v));
}

// Random exactly-orthogonal matrix built the way the step products are:
// factors I_{k-1} (+) V(m, t) (+) I with k increasing, so every entry of the
// product stays a single radical.
SignedSqrtMat random_orthogonal(std::mt19937_64& rng, std::size_t n) {
  SignedSqrtMat u = SignedSqrtMat::identity(n);
  for (std::size_t k = 1; k < n; ++k) {
    if (rng() % 4 == 0) continue;
    std::size_t m = 1 + rng() % (n - k);
    Rat t(1 + static_cast<long long>(rng() % 8), 8);
    SignedSqrtMat v = SignedSqrtMat::identity(n);
    SignedSqrtMat blk = t_transform(m, t);
    for (std::size_t i = k; i <= k + m; ++i) v.set(i, i, +1, Rat(0));
    for (const auto& [i, row] : blk.rows())
      for (const auto& [j, e] : row) v.set(k - 1 + i, k - 1 + j, e.sign, e.radicand);
    u = mat_mul(v, u);
  }
  return u;
}
}  // namespace

TEST_CASE("pivot rotation shapes") {
  SignedSqrtMat v = t_transform(1, Rat(1, 2));
  CHECK(v.find(1, 1)->radicand == Rat(1, 2));
  CHECK(v.find(1, 1)->sign == +1);
  CHECK(v.find(1, 2)->radicand == Rat(1, 2));
  CHECK(v.find(1, 2)->sign == -1);
  CHECK(v.find(2, 1)->sign == +1);
  CHECK(orthogonal_exact(v));

  SignedSqrtMat id = t_transform(1, Rat(1));
  CHECK(id.find(1, 1)->radicand == Rat(1));
  CHECK(id.find(1, 2) == nullptr);

  SignedSqrtMat v2 = t_transform(2, Rat(1, 3));
  CHECK(v2.find(1, 1) == nullptr);
  CHECK(v2.find(1, 2)->radicand == Rat(1, 3));
  CHECK(v2.find(1, 3)->radicand == Rat(2, 3));
  CHECK(v2.find(1, 3)->sign == -1);
  CHECK(v2.find(2, 1)->radicand == Rat(1));
  CHECK(orthogonal_exact(v2));
}

TEST_CASE("schur square") {
  RationalMatTrunc q = schur_square(t_transform(1, Rat(1, 2)));
  CHECK(q.at(1, 1) == Rat(1, 2));
  CHECK(q.at(1, 2) == Rat(1, 2));
  CHECK(q.at(2, 2) == Rat(1, 2));
  RationalMatTrunc q2 = schur_square(t_transform(2, Rat(1, 3)));
  CHECK(q2.at(1, 2) == Rat(1, 3));
  CHECK(q2.at(1, 3) == Rat(2, 3));
  CHECK(schur_square(SignedSqrtMat::identity(3)).at(2, 2) == Rat(1));
}

TEST_CASE("classification") {
  // column-stochastic but not row-stochastic 6 x 3 truncation
  RationalMatTrunc p(6, 3, 6);
  for (std::size_t k = 1; k <= 3; ++k) {
    p.set(2 * k - 1, k, Rat(1, 2));
    p.set(2 * k, k, Rat(1, 2));
  }
  StochClass c = classify(p);
  CHECK(c.substochastic);
  CHECK(c.column_stochastic);
  CHECK(!c.row_stochastic);

  RationalMatTrunc ds = schur_square(t_transform(1, Rat(1, 2)));
  StochClass d = classify(ds);
  CHECK(d.doubly_stochastic);

  // direct sum of two such blocks
  RationalMatTrunc blk(4, 4, 4);
  for (std::size_t b = 0; b < 2; ++b)
    for (std::size_t i = 1; i <= 2; ++i)
      for (std::size_t j = 1; j <= 2; ++j) blk.set(2 * b + i, 2 * b + j, Rat(1, 2));
  StochClass bc = classify(blk);
  CHECK(bc.doubly_stochastic);
  CHECK(bc.block_doubly);
  REQUIRE(bc.blocks.size() == 2);
  CHECK(bc.blocks[0] == std::pair<std::size_t, std::size_t>{1, 2});
  CHECK(bc.blocks[1] == std::pair<std::size_t, std::size_t>{3, 4});
}

TEST_CASE("apply rows") {
  RationalMatTrunc id = RationalMatTrunc::identity(3);
  std::vector<Rat> out = apply_rows(id, MonotoneSeq::harmonic(), 3);
  CHECK(out == std::vector<Rat>{Rat(1), Rat(1, 2), Rat(1, 3)});

  RationalMatTrunc p(2, 2, 2);
  p.set(1, 1, Rat(1, 2));
  p.set(1, 2, Rat(1, 2));
  p.set(2, 1, Rat(1, 2));
  p.set(2, 2, Rat(1, 2));
  std::vector<Rat> o2 = apply_rows(p, fin({"1"}), 2);
  CHECK(o2 == std::vector<Rat>{Rat(1, 2), Rat(1, 2)});
}

TEST_CASE("diagonal conjugation check") {
  SignedSqrtMat l = t_transform(1, Rat(1, 2));
  CHECK(diagonal_conjugation_check(l, fin({"1"}), fin({"1/2", "1/2"}), 2).is_holds());
  CHECK(diagonal_conjugation_check(SignedSqrtMat::identity(3), MonotoneSeq::harmonic(),
                                   MonotoneSeq::harmonic(), 3)
            .is_holds());
  Verdict3 f = diagonal_conjugation_check(l, fin({"1"}), fin({"1"}), 2);
  CHECK(f.is_fails());
  CHECK(f.witness().index == 1);
}

TEST_CASE("birkhoff on the fixed cases") {
  RationalMatTrunc p(2, 2, 2);
  p.set(1, 1, Rat(1, 2));
  p.set(1, 2, Rat(1, 2));
  p.set(2, 1, Rat(1, 2));
  p.set(2, 2, Rat(1, 2));
  auto terms = birkhoff_decompose(p, 2);
  REQUIRE(terms.size() == 2);
  CHECK(terms[0].weight == Rat(1, 2));
  CHECK(terms[0].perm == std::vector<std::size_t>{1, 2});
  CHECK(terms[1].perm == std::vector<std::size_t>{2, 1});

  auto idterms = birkhoff_decompose(RationalMatTrunc::identity(4), 4);
  REQUIRE(idterms.size() == 1);
  CHECK(idterms[0].weight == Rat(1));

  // (1/2) circulant: two 3-cycles of weight 1/2
  RationalMatTrunc c3(3, 3, 3);
  c3.set(1, 1, Rat(1, 2));
  c3.set(1, 2, Rat(1, 2));
  c3.set(2, 1, Rat(1, 2));
  c3.set(2, 3, Rat(1, 2));
  c3.set(3, 2, Rat(1, 2));
  c3.set(3, 3, Rat(1, 2));
  auto t3 = birkhoff_decompose(c3, 3);
  REQUIRE(t3.size() == 2);
  CHECK(t3[0].weight == Rat(1, 2));
  CHECK(t3[1].weight == Rat(1, 2));
}

TEST_CASE("birkhoff reconstructs random convex combinations") {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 40; ++iter) {
    std::size_t n = 2 + rng() % 5;
    RationalMatTrunc p(n, n, n);
    std::size_t terms = 1 + rng() % 6;
    std::vector<Rat> w;
    long long den = 1;
    for (std::size_t t = 0; t < terms; ++t) den += static_cast<long long>(rng() % 5);
    Rat left(1);
    for (std::size_t t = 0; t < terms; ++t) {
      Rat wt = t + 1 == terms ? left : left / Rat(static_cast<long long>(1 + rng() % 3));
      left -= wt;
      std::vector<std::size_t> perm(n);
      for (std::size_t i = 0; i < n; ++i) perm[i] = i + 1;
      std::shuffle(perm.begin(), perm.end(), rng);
      for (std::size_t i = 0; i < n; ++i) p.add(i + 1, perm[i], wt);
      if (left.is_zero()) break;
    }
    auto decomp = birkhoff_decompose(p, n);
    CHECK(decomp.size() <= (n - 1) * (n - 1) + 1);
    RationalMatTrunc recon(n, n, n);
    Rat total(0);
    for (const auto& term : decomp) {
      total += term.weight;
      for (std::size_t i = 0; i < n; ++i) recon.add(i + 1, term.perm[i], term.weight);
    }
    CHECK(total == Rat(1));
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t j = 1; j <= n; ++j) CHECK(recon.at(i, j) == p.at(i, j));
  }
}

TEST_CASE("orthostochastic decision small") {
  // the classic 3x3 doubly stochastic non-unistochastic matrix
  RationalMatTrunc bad(3, 3, 3);
  bad.set(1, 1, Rat(1, 2));
  bad.set(1, 2, Rat(1, 2));
  bad.set(2, 1, Rat(1, 2));
  bad.set(2, 3, Rat(1, 2));
  bad.set(3, 2, Rat(1, 2));
  bad.set(3, 3, Rat(1, 2));
  CHECK(!orthostochastic_witness(bad, 3).has_value());

  CHECK(orthostochastic_witness(RationalMatTrunc::identity(3), 3).has_value());

  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 30; ++iter) {
    // every 2x2 doubly stochastic matrix is orthostochastic
    Rat a(static_cast<long long>(rng() % 100), 100);
    RationalMatTrunc q(2, 2, 2);
    q.set(1, 1, a);
    q.set(1, 2, Rat(1) - a);
    q.set(2, 1, Rat(1) - a);
    q.set(2, 2, a);
    auto w = orthostochastic_witness(q, 2);
    REQUIRE(w.has_value());
    CHECK(orthogonal_exact(*w));
    RationalMatTrunc back = schur_square(*w);
    CHECK(back.at(1, 1) == a);
  }

  for (int iter = 0; iter < 20; ++iter) {
    std::size_t n = 2 + rng() % 4;
    SignedSqrtMat u = random_orthogonal(rng, n);
    REQUIRE(orthogonal_exact(u));
    auto w = orthostochastic_witness(schur_square(u), n);
    REQUIRE(w.has_value());
    CHECK(orthogonal_exact(*w));
  }
}

TEST_CASE("pairing matrix generator") {
  SignedSqrtMat u = half_pair_matrix(1);
  CHECK(u.find(1, 1)->radicand == Rat(1, 2));
  CHECK(u.find(1, 4)->radicand == Rat(1, 2));
  CHECK(u.find(2, 4)->sign == -1);
  CHECK(rows_orthonormal_exact(u, 2));

  SignedSqrtMat u3 = half_pair_matrix(3);
  RationalMatTrunc q = schur_square(u3);
  for (std::size_t i = 1; i <= 6; ++i) CHECK(q.row_sum(i) == Rat(1));
  CHECK(rows_orthonormal_exact(u3, 6));
}

TEST_CASE("nested column generator") {
  MonotoneSeq a = MonotoneSeq::geometric(Rat(1, 2), Rat(1, 2));
  SignedSqrtMat u = nested_column_matrix(a, 3);
  CHECK(u.find(1, 1)->radicand == Rat(1, 2));
  CHECK(u.find(2, 1)->radicand == Rat(1, 4));
  CHECK(u.find(3, 1)->radicand == Rat(1, 8));
  CHECK(u.find(3, 2) == nullptr);  // zero below the diagonal past column 1
  // b_1 = 2, b_2 = 4/3, b_3 = 8/7
  CHECK(u.find(1, 2)->radicand == Rat(1, 2) * (Rat(2) - Rat(4, 3)));
  CHECK(u.find(2, 2)->sign == -1);
  CHECK(u.find(2, 2)->radicand == Rat(1) - Rat(1, 4) * Rat(4, 3));
}

TEST_CASE("direct sum scatter") {
  RationalMatTrunc one(1, 1, 1);
  one.set(1, 1, Rat(1));
  ScatterBlock b1{{1}, {2}, one};
  ScatterBlock b2{{2}, {1}, one};
  RationalMatTrunc swap = direct_sum({b1, b2});
  CHECK(swap.at(1, 2) == Rat(1));
  CHECK(swap.at(2, 1) == Rat(1));
  CHECK(swap.rows_finalized() == 2);

  // overlapping rows rejected
  CHECK_THROWS_AS(direct_sum({b1, ScatterBlock{{1}, {3}, one}}), Error);

  // interleaved doubly stochastic blocks stay doubly stochastic
  RationalMatTrunc half = schur_square(t_transform(1, Rat(1, 2)));
  RationalMatTrunc mix =
      direct_sum({ScatterBlock{{1, 3}, {1, 3}, half}, ScatterBlock{{2, 4}, {2, 4}, half}});
  StochClass c = classify(mix);
  CHECK(c.doubly_stochastic);
}

TEST_CASE("defect profile") {
  RationalMatTrunc id = RationalMatTrunc::identity(5);
  for (const Rat& v : defect_profile(id, 5)) CHECK(v == Rat(0));

  // swap of {1,2}: profile 1, 0, 0, ...
  RationalMatTrunc sw = RationalMatTrunc::identity(5);
  sw.set(1, 1, Rat(0));
  sw.set(2, 2, Rat(0));
  sw.set(1, 2, Rat(1));
  sw.set(2, 1, Rat(1));
  auto prof = defect_profile(sw, 4);
  CHECK(prof[0] == Rat(1));
  CHECK(prof[1] == Rat(0));
  CHECK(prof[2] == Rat(0));

  // 2x2 all-1/2 blocks: 1/2, 0, 1/2, 0
  RationalMatTrunc blk(4, 4, 4);
  for (std::size_t b = 0; b < 2; ++b)
    for (std::size_t i = 1; i <= 2; ++i)
      for (std::size_t j = 1; j <= 2; ++j) blk.set(2 * b + i, 2 * b + j, Rat(1, 2));
  auto p2 = defect_profile(blk, 4);
  CHECK(p2[0] == Rat(1, 2));
  CHECK(p2[1] == Rat(0));
  CHECK(p2[2] == Rat(1, 2));
  CHECK(p2[3] == Rat(0));
}

TEST_CASE("schur squares multiply along pivot chains") {
  // Chains of factors I_{k-1} (+) V(m, t) satisfy the single-overlap property,
  // so the Schur square of the product is the product of the Schur squares.
  std::mt19937_64 rng(3);
  for (int iter = 0; iter < 20; ++iter) {
    std::size_t n = 4 + rng() % 3;
    SignedSqrtMat acc = SignedSqrtMat::identity(n);
    RationalMatTrunc acc_sq = RationalMatTrunc::identity(n);
    for (std::size_t k = 1; k < n; ++k) {
      std::size_t m = 1 + rng() % (n - k);
      Rat t(1 + static_cast<long long>(rng() % 8), 8);
      SignedSqrtMat f = SignedSqrtMat::identity(n);
      SignedSqrtMat blk = t_transform(m, t);
      for (std::size_t i = k; i <= k + m; ++i) f.set(i, i, +1, Rat(0));
      for (const auto& [i, row] : blk.rows())
        for (const auto& [j, e] : row) f.set(k - 1 + i, k - 1 + j, e.sign, e.radicand);
      acc = mat_mul(f, acc);
      acc_sq = mat_mul(schur_square(f), acc_sq);
      RationalMatTrunc direct = schur_square(acc);
      for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = 1; j <= n; ++j) CHECK(direct.at(i, j) == acc_sq.at(i, j));
    }
    CHECK(orthogonal_exact(acc));
    StochClass c = classify(schur_square(acc));
    CHECK(c.doubly_stochastic);
  }
}

TEST_CASE("markus inequality at the horizon") {
  std::mt19937_64 rng(5);
  MonotoneSeq etas[] = {MonotoneSeq::harmonic(), MonotoneSeq::geometric(Rat(1), Rat(1, 2)),
                        fin({"3", "1", "1/2"})};
  for (const MonotoneSeq& eta : etas) {
    for (int iter = 0; iter < 10; ++iter) {
      std::size_t n = 3 + rng() % 3;
      SignedSqrtMat u = random_orthogonal(rng, n);
      RationalMatTrunc p = schur_square(u);
      std::vector<Rat> image = apply_rows(p, eta, n);
      image = star(std::move(image));
      Rat sp(0);
      for (std::size_t k = 1; k <= n; ++k) {
        sp += image[k - 1];
        CHECK(sp <= eta.partial_sum(k));
      }
    }
  }
}
