#pragma once

#include <optional>
#include <string>
#include <vector>

#include "majkit/rational.hpp"

namespace majkit {

/// Machine-checkable reason a relation conclusively holds.
struct MajorCert {
  enum class Kind {
    horizon_plus_termwise_tail,  // prefix sums verified to n0; termwise
                                 // domination proven beyond n0 (for the
                                 // p-shifted relation, n0 is the minimal
                                 // admissible N)
    finite_support_exact,        // exhaustive check over finite data
    block_equality,              // exact prefix-sum equality at `indices`
    tail_sum_comparison,         // tail enclosures separated to n0, termwise after
    sum_equality,                // summable with exactly equal totals
  };
  Kind kind;
  std::size_t n0 = 0;
  std::vector<std::size_t> indices;
  std::string detail;
};

enum class FailReason {
  prefix_violation,   // some prefix sum of xi exceeds eta's
  tail_violation,     // some tail sum of xi exceeds eta's
  liminf_positive,    // liminf of the prefix-sum gap is provably > 0
  liminf_infinite,    // the prefix-sum gap provably diverges
  total_mismatch,     // exact totals differ
};

struct FailWitness {
  std::size_t index = 0;  // smallest violating index (0 for limit failures)
  Rat deficit;            // certified positive shortfall (lower bound for limits)
  FailReason reason = FailReason::prefix_violation;
};

/// Three-valued relation answer: conclusive Holds with a certificate,
/// conclusive Fails with a witness, or Inconclusive at a horizon (optionally
/// carrying non-conclusive evidence such as found block-equality indices).
class Verdict3 {
 public:
  enum class State { holds, fails, inconclusive };

  static Verdict3 holds(MajorCert cert) {
    Verdict3 v;
    v.state_ = State::holds;
    v.cert_ = std::move(cert);
    return v;
  }
  static Verdict3 fails(FailWitness w) {
    Verdict3 v;
    v.state_ = State::fails;
    v.witness_ = std::move(w);
    return v;
  }
  static Verdict3 inconclusive(std::size_t horizon, std::optional<MajorCert> evidence = {}) {
    Verdict3 v;
    v.state_ = State::inconclusive;
    v.horizon_ = horizon;
    v.cert_ = std::move(evidence);
    return v;
  }

  State state() const { return state_; }
  bool is_holds() const { return state_ == State::holds; }
  bool is_fails() const { return state_ == State::fails; }
  bool is_inconclusive() const { return state_ == State::inconclusive; }

  const MajorCert& certificate() const { return *cert_; }
  bool has_certificate() const { return cert_.has_value(); }
  const FailWitness& witness() const { return *witness_; }
  std::size_t horizon() const { return horizon_; }

 private:
  State state_ = State::inconclusive;
  std::optional<MajorCert> cert_;
  std::optional<FailWitness> witness_;
  std::size_t horizon_ = 0;
};

}  // namespace majkit
