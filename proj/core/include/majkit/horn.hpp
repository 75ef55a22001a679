#pragma once

#include <vector>

#include "majkit/stoch.hpp"

namespace majkit {

/// Finite Horn witness: an exactly orthogonal U with Schur square Q such that
/// Q eta = xi, together with the step stream (m_k, t_k) that produced it.
struct HornWitness {
  SignedSqrtMat u;
  RationalMatTrunc q;
  std::vector<std::pair<std::size_t, Rat>> steps;
};

/// Algorithmic finite Horn construction. Inputs must be nonincreasing,
/// nonnegative, of equal length N, with every prefix sum of xi at most eta's
/// and exact equality at N. Throws NotMajorized(k) / NotMonotone otherwise.
HornWitness horn_witness(const std::vector<Rat>& xi, const std::vector<Rat>& eta);

/// Witness for a finite-support target: the first `exact_cols` columns of U
/// carry exact radical structure and already reproduce (Q eta)_i = xi_i for
/// i <= K; the remaining columns are completed numerically (Gram-Schmidt) and
/// reported with their residual, never silently accepted.
struct FiniteTargetWitness {
  RationalMatTrunc q;  // exact entries confined to the first `exact_cols` columns
  std::size_t exact_cols = 0;
  std::vector<std::vector<double>> u_approx;  // K x K
  double completion_residual = 0.0;
};
FiniteTargetWitness finite_support_witness(const MonotoneSeq& xi, const MonotoneSeq& eta,
                                           std::size_t k);

/// Orthostochastic truncation Q with (Q <0^p, eta>)_i = xi_i exactly for
/// i <= k, built by the shifted construction (case split on xi_1 vs eta_N)
/// with the residual pair delegated to the canonical construction.
RationalMatTrunc shifted_witness(const MonotoneSeq& xi, const MonotoneSeq& eta, std::size_t p,
                                 std::size_t k, std::size_t horizon = 1000);

}  // namespace majkit
