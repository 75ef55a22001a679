#include <benchmark/benchmark.h>

#include <random>

#include "majkit/canon.hpp"
#include "majkit/horn.hpp"
#include "majkit/majorize.hpp"
#include "majkit/stoch.hpp"

using namespace majkit;

namespace {

std::pair<std::vector<Rat>, std::vector<Rat>> strong_pair(std::mt19937_64& rng, std::size_t n) {
  std::vector<long long> eta(n);
  long long cur = 60 + static_cast<long long>(rng() % 60);
  for (std::size_t i = 0; i < n; ++i) {
    eta[i] = cur;
    cur -= static_cast<long long>(rng() % 10);
    if (cur < 0) cur = 0;
  }
  std::vector<long long> xi = eta;
  for (int t = 0; t < 3 * static_cast<int>(n); ++t) {
    std::size_t i = rng() % n, j = rng() % n;
    if (i >= j) continue;
    long long eps = 1 + static_cast<long long>(rng() % 3);
    xi[i] -= eps;
    xi[j] += eps;
    bool ok = xi[i] >= 0;
    for (std::size_t a = 1; a < n && ok; ++a) ok = xi[a] <= xi[a - 1];
    if (!ok) {
      xi[i] += eps;
      xi[j] -= eps;
    }
  }
  std::vector<Rat> xr, er;
  for (std::size_t i = 0; i < n; ++i) {
    xr.push_back(Rat(xi[i], 60));
    er.push_back(Rat(eta[i], 60));
  }
  return {xr, er};
}

void bm_horn_witness(benchmark::State& state) {
  std::mt19937_64 rng(1);
  auto [xi, eta] = strong_pair(rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    HornWitness w = horn_witness(xi, eta);
    benchmark::DoNotOptimize(w.q.n_rows());
  }
}
BENCHMARK(bm_horn_witness)->Arg(8)->Arg(16)->Arg(32);

void bm_canon_run(benchmark::State& state) {
  MonotoneSeq omega = MonotoneSeq::harmonic();
  MonotoneSeq xi = scale(omega, Rat(1, 2));
  for (auto _ : state) {
    CanonRun run = canon_run(xi, omega, static_cast<std::size_t>(state.range(0)));
    benchmark::DoNotOptimize(run.steps.size());
  }
}
BENCHMARK(bm_canon_run)->Arg(50)->Arg(200);

void bm_birkhoff(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::size_t n = static_cast<std::size_t>(state.range(0));
  RationalMatTrunc p(n, n, n);
  Rat left(1);
  for (std::size_t t = 0; t < 8 && !left.is_zero(); ++t) {
    Rat wt = t == 7 ? left : left / Rat(2);
    left -= wt;
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i + 1;
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i < n; ++i) p.add(i + 1, perm[i], wt);
  }
  for (auto _ : state) {
    auto d = birkhoff_decompose(p, n);
    benchmark::DoNotOptimize(d.size());
  }
}
BENCHMARK(bm_birkhoff)->Arg(4)->Arg(8);

void bm_weak_relation(benchmark::State& state) {
  MonotoneSeq omega = MonotoneSeq::harmonic();
  MonotoneSeq xi = scale(omega, Rat(3, 4));
  for (auto _ : state) {
    Verdict3 v = relation(RelKind::weak, xi, omega, static_cast<std::size_t>(state.range(0)));
    benchmark::DoNotOptimize(v.is_holds());
  }
}
BENCHMARK(bm_weak_relation)->Arg(100)->Arg(1000);

void bm_harmonic_prefix(benchmark::State& state) {
  MonotoneSeq omega = MonotoneSeq::harmonic();
  for (auto _ : state) {
    PrefixScanner s(omega);
    for (long i = 0; i < state.range(0); ++i) s.next();
    benchmark::DoNotOptimize(s.partial_sum().sign());
  }
}
BENCHMARK(bm_harmonic_prefix)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
