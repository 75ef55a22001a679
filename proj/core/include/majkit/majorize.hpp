#pragma once

#include "majkit/sequence.hpp"
#include "majkit/verdict.hpp"

namespace majkit {

/// The majorization relations on monotone null sequences.
enum class RelKind {
  weak,           // every prefix sum of xi <= eta's
  strong,         // weak + liminf of the prefix-sum gap is 0
  block,          // weak + prefix-sum equality along an infinite index set
  at_inf,         // every tail sum of xi <= eta's (summable sequences)
  strong_at_inf,  // at_inf + equal totals
  p_shift,        // xi ~ eta* and prefix sums shifted by p, from some N on
};

/// Decides `xi (rel) eta`. Conclusive answers always carry a certificate or a
/// minimal witness; everything else is Inconclusive at the given horizon.
/// `p` is used by RelKind::p_shift only.
Verdict3 relation(RelKind kind, const MonotoneSeq& xi, const MonotoneSeq& eta,
                  std::size_t horizon, std::size_t p = 0);

/// Whether min over n >= m of sum_{j<=n}(eta_j - xi_j) is attained.
/// Holds: attained at `argmin` (smallest) with exact `value`.
/// Fails: provably not attained; `value` is the exact infimum.
/// Inconclusive: horizon minimizer reported.
struct MinAttainment {
  Verdict3 attained = Verdict3::inconclusive(0);
  std::size_t argmin = 0;
  Rat value;
};
MinAttainment min_attainment(const MonotoneSeq& xi, const MonotoneSeq& eta, std::size_t m,
                             std::size_t horizon);

}  // namespace majkit
