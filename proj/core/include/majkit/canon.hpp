#pragma once

#include <map>
#include <vector>

#include "majkit/majorize.hpp"
#include "majkit/stoch.hpp"

namespace majkit {

/// One step of the canonical construction: at step k the k-th target value is
/// written as the convex combination t*rho_{m} + (1-t)*rho_{m+1} of the
/// residual sequence, and delta is the displaced mass.
struct CanonStep {
  std::size_t k = 0;
  std::size_t m = 0;
  Rat t;
  Rat delta;
};

/// Residual sequence after k steps: explicit head, then rho_j = eta_{j+k}.
struct RhoState {
  std::size_t k = 0;
  std::vector<Rat> head;
  std::size_t tail_offset = 0;  // rho_j = eta.term(j + tail_offset) for j > head.size()
  Rat value(const MonotoneSeq& eta, std::size_t j) const {
    return j <= head.size() ? head[j - 1] : eta.term(j + tail_offset);
  }
};

/// Per-column finalization trace: the unique below-diagonal entry of column j
/// sits at row n + q with squared value gamma2 (q = 0 once the column dies).
struct ColTrace {
  std::size_t q = 0;
  Rat gamma2;
};

/// Transcript of a canonical-construction run to K finalized rows.
struct CanonRun {
  std::vector<CanonStep> steps;
  RhoState rho;
  SignedSqrtMat w_rows;   // rows 1..K, frozen
  RationalMatTrunc q_rows;  // Schur squares of w_rows, rows_finalized = K
  std::vector<std::size_t> tracked;
  std::map<std::size_t, std::vector<ColTrace>> gamma_table;  // j -> trace at n=1..K
  std::vector<Rat> g_seq;  // g_n = gamma(n,1)^2
};

/// Runs K steps of the canonical construction for xi majorized by eta.
/// Requires xi_k > 0 for k <= K (ZeroTerm otherwise) and throws
/// NotMajorized(k) when no admissible pivot exists.
/// tracked_cols defaults to {1..K} (full gamma table).
CanonRun canon_run(const MonotoneSeq& xi, const MonotoneSeq& eta, std::size_t k_steps,
                   std::vector<std::size_t> tracked_cols = {});

/// Closed form of the run whose steps are all (1, t_k): row k of Q is
/// t_k prod(1-t_i) patterns with final entry 1-t_k. Independent oracle for
/// canon_run restricted to m == 1.
std::pair<SignedSqrtMat, RationalMatTrunc> closed_form_m1(const std::vector<Rat>& t,
                                                          std::size_t k_rows);

/// g_n = prod{(1-t_k) : m_k = 1, k <= n} and the accumulated column-1 mass;
/// mass + g_K = 1 exactly as soon as one m_k = 1 occurred.
struct GDiagnostics {
  std::vector<Rat> g_seq;
  Rat col1_mass;
};
GDiagnostics g_diagnostics(const CanonRun& run);

/// Rebuilds the step products explicitly and verifies that column j's unique
/// below-row-n entry matches the recurrence trace at every n, and that its
/// depth is monotone nonincreasing.
Verdict3 gamma_check(const CanonRun& run, std::size_t j);

/// Run classification from the step stream.
struct RunReport {
  enum class Verdict { conclusive_ortho, block_evidence, strong_evidence, inconclusive };
  Verdict verdict = Verdict::inconclusive;
  std::vector<std::size_t> block_boundaries;  // k with m_k = t_k = 1, prefix equality verified
  Rat t_mass_m1;                              // sum of t_k over steps with m_k = 1
  std::string note;
};
RunReport classify_run(const CanonRun& run, const MonotoneSeq& xi, const MonotoneSeq& eta);

/// Step-stream invariants (pivot drift bound, displaced-mass identity at
/// m = 1, residual majorization, sum bookkeeping at sampled indices).
/// Throws Error with a description on the first violation.
void check_run_invariants(const CanonRun& run, const MonotoneSeq& xi, const MonotoneSeq& eta);

}  // namespace majkit
