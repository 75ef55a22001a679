#pragma once

#include <vector>

#include "majkit/rational.hpp"

namespace majkit {

/// One term c * sqrt(x), exact rational c and radicand x >= 0.
struct RadicalTerm {
  Rat coeff;
  Rat radicand;
};

/// Exact vanishing test for sums of radicals.
///
/// sqrt(a) and sqrt(b) are commensurable iff a*b is a perfect rational
/// square; terms are grouped into commensurability classes where each term
/// reduces to a rational multiple of the class representative's root. A sum
/// over pairwise incommensurable representatives vanishes only when every
/// class coefficient vanishes, so no integer factorization is ever needed.
bool radical_sum_is_zero(const std::vector<RadicalTerm>& terms);

/// Collapses the sum into class representatives (coeff, radicand) pairs with
/// nonzero coefficients and pairwise incommensurable radicands.
std::vector<RadicalTerm> radical_sum_canonical(const std::vector<RadicalTerm>& terms);

}  // namespace majkit
