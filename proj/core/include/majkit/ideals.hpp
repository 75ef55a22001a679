#pragma once

#include "majkit/majorize.hpp"
#include "majkit/stoch.hpp"

namespace majkit {

/// Principal operator ideal modeled by its generating sequence: membership of
/// eta means eta* <= c * D_m(g) termwise for some c > 0 and ampliation m.
struct PrincipalIdeal {
  MonotoneSeq generator;
};

struct IdealSearchParams {
  std::vector<Rat> c_grid;  // default 2^i for i in [-4, 20]
  std::size_t m_max = 64;
  static IdealSearchParams defaults();
};

/// Characteristic-set membership with a (c, m) witness; Fails is conclusive
/// only via analytic growth comparisons (power-law / geometric crosses).
struct MemberResult {
  Verdict3 verdict = Verdict3::inconclusive(0);
  Rat c;
  std::size_t m = 0;
};
MemberResult member(const MonotoneSeq& eta, const PrincipalIdeal& ideal,
                    const IdealSearchParams& params, std::size_t horizon);

/// Arithmetic-mean (am) and am-at-infinity closure membership: searches the
/// scaled-ampliated family of the generator for a majorant of xi.
enum class ClosureKind { am, am_inf };
MemberResult closure_member(ClosureKind kind, const MonotoneSeq& xi, const PrincipalIdeal& ideal,
                            const IdealSearchParams& params, std::size_t horizon);

/// Sampled invariance probe: for members xi of the ideal, checks whether
/// (P xi)* looks like a member again at the horizon. Evidence only.
struct ProbeSample {
  Verdict3 verdict = Verdict3::inconclusive(0);
  Rat c;
  std::size_t m = 0;
  std::size_t checked_to = 0;
};
struct ProbeReport {
  std::vector<ProbeSample> samples;
};
ProbeReport invariance_probe(const PrincipalIdeal& ideal, const RationalMatTrunc& p,
                             const std::vector<MonotoneSeq>& samples,
                             const IdealSearchParams& params, std::size_t horizon);

/// Finite-support convex combination of permutations; each permutation is a
/// finite index map image[i] = j (identity off the listed indices).
struct ConvexPermCombo {
  std::vector<std::pair<Rat, std::map<std::size_t, std::size_t>>> terms;
};
std::vector<Rat> convex_perm_apply(const ConvexPermCombo& combo, const MonotoneSeq& xi,
                                   std::size_t out_len);

}  // namespace majkit
