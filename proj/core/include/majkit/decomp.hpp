#pragma once

#include "majkit/canon.hpp"
#include "majkit/majorize.hpp"
#include "majkit/stoch.hpp"

namespace majkit {

/// Estimate of alpha = liminf of the prefix-sum gap.
struct AlphaEstimate {
  enum class Kind {
    exact,     // alpha known exactly
    diverges,  // gap provably -> infinity
    interval,  // rigorous enclosure [lo, hi]
    heuristic, // horizon data only, not rigorous
  };
  Kind kind = Kind::heuristic;
  Rat value;
  Rat lo, hi;
  Rat scanned_min;  // min of the gap over the scanned range
  std::size_t scanned_argmin = 0;
};
AlphaEstimate alpha_estimate(const MonotoneSeq& xi, const MonotoneSeq& eta, std::size_t horizon);

/// Shift certificate: the pair splits as a finite front against a shifted
/// tail, both majorized.
struct ShiftCert {
  std::size_t p = 0;
  std::size_t n = 0;
  bool finite_check = false;  // xi chi[1,n] majorized by eta chi[1,n-p], exact
  Verdict3 tail_check = Verdict3::inconclusive(0);
};
/// Smallest-(n, then p) certificate with an exact finite check and a
/// non-failing tail check (conclusive when termwise comparison applies).
ShiftCert shift_search(const MonotoneSeq& xi, const MonotoneSeq& eta, std::size_t horizon);

/// Index streams carving one summable strongly-majorized subsequence pair out
/// of a nonsummable weak majorization.
struct PartitionPlan {
  std::vector<std::size_t> n1, m1;  // kept indices into xi resp. eta (sorted)
  std::vector<std::size_t> n2, m2;  // complements within [1, horizon]
  std::size_t base_n = 0, base_p = 0;
  Rat beta, gamma_floor;
  std::vector<std::size_t> k_stream, h_stream, q_stream;
  std::vector<Rat> delta_ledger;  // delta_i values of the greedy construction
  std::size_t horizon = 0;
};
PartitionPlan partition_construct(const MonotoneSeq& xi, const MonotoneSeq& eta,
                                  const ShiftCert& cert, const AlphaEstimate& alpha,
                                  std::size_t horizon);

/// Assembled orthostochastic-structured truncation: per-pair canonical blocks
/// scattered along the partition streams. Rows listed in `covered_rows`
/// satisfy (Q eta)_i = xi_i exactly; `uncovered` reports the rest of [1, K].
struct AssembleReport {
  RationalMatTrunc q;
  std::vector<std::size_t> covered_rows;
  std::vector<std::size_t> uncovered_rows;
  std::size_t depth_used = 0;
};
AssembleReport assemble(const MonotoneSeq& xi, const MonotoneSeq& eta, std::size_t depth_cap,
                        std::size_t k_rows, std::size_t horizon = 4096);

}  // namespace majkit
