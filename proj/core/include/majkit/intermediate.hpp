#pragma once

#include "majkit/majorize.hpp"
#include "majkit/sequence.hpp"

namespace majkit {

/// The four finite intermediate-sequence problems: given nonincreasing
/// xi, eta of equal length,
///   zeta_upper:      xi strongly-majorized-by zeta <= eta    (needs xi < eta)
///   rho_upper:       xi <= rho strongly-majorized-by eta     (needs xi < eta)
///   zeta_tail:       xi tail-majorized zeta <= eta, equal totals (needs tail rel)
///   rho_tail:        xi <= rho, eta strongly-majorized-by rho (needs tail rel)
enum class FiniteKind { zeta_upper, rho_upper, zeta_tail, rho_tail };

std::vector<Rat> finite_intermediate(FiniteKind kind, const std::vector<Rat>& xi,
                                     const std::vector<Rat>& eta);

/// Minimal clip level t1 with xi majorized by min(t1, eta), together with the
/// clip index N1 (eta_{N1+1} < t1 <= eta_{N1}); conclusive when the infima of
/// the prefix-sum gaps are exactly known.
struct ClipThreshold {
  Rat t1;
  std::size_t n1 = 0;
  bool conclusive = false;
};
ClipThreshold clip_threshold(const MonotoneSeq& xi, const MonotoneSeq& eta, std::size_t horizon);

/// min(t, eta) as a lazy sequence.
MonotoneSeq clip(const MonotoneSeq& eta, const Rat& t);

/// Which proof route produced an intermediate sequence.
enum class IntermediateBranch {
  collapse,        // strong majorization already holds
  summable_clip,   // summable source, one exact clip
  block_splice,    // min-attainment route, spliced block solves
  clip_iteration,  // iterated clips with equality cuts
  gap_bump,        // finite prefix solve plus one adjusted entry
  tail_formula,    // closed tail formula
  tail_level,      // level maximization route
};

struct IntermediateResult {
  MonotoneSeq seq;
  IntermediateBranch branch;
  bool conclusive = false;  // relations certified, not just horizon-checked
  std::size_t verified_to = 0;
  std::string note;
};

/// zeta with xi strongly-majorized-by zeta <= eta (infinite case).
IntermediateResult infinite_zeta(const MonotoneSeq& xi, const MonotoneSeq& eta,
                                 std::size_t horizon);
/// rho with xi <= rho strongly-majorized-by eta (infinite case).
IntermediateResult infinite_rho(const MonotoneSeq& xi, const MonotoneSeq& eta,
                                std::size_t horizon);

/// Tail-majorization intermediates for summable pairs: zeta with
/// xi tail-majorized-by zeta <= eta, or rho with xi <= rho and equality of
/// totals against eta.
enum class InfKind { zeta, rho };
IntermediateResult inf_intermediate(InfKind kind, const MonotoneSeq& xi, const MonotoneSeq& eta,
                                    std::size_t horizon);

}  // namespace majkit
