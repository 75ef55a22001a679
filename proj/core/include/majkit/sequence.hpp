#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "majkit/rational.hpp"

namespace majkit {

/// Rigorous enclosure of a (sub)series value: a finite interval [lo, hi],
/// a certified divergence, or an honest "unknown".
class IntervalRat {
 public:
  enum class Kind { finite, diverges, unknown };

  static IntervalRat point(Rat v) { return IntervalRat(v, v); }
  static IntervalRat range(Rat lo, Rat hi);
  static IntervalRat diverges() { return IntervalRat(Kind::diverges); }
  static IntervalRat unknown() { return IntervalRat(Kind::unknown); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::finite; }
  bool is_point() const { return kind_ == Kind::finite && lo_ == hi_; }
  bool is_diverges() const { return kind_ == Kind::diverges; }
  bool is_unknown() const { return kind_ == Kind::unknown; }

  const Rat& lo() const;
  const Rat& hi() const;
  /// Exact value of a point interval.
  const Rat& value() const;

  IntervalRat& operator+=(const IntervalRat& o);
  friend IntervalRat operator+(IntervalRat a, const IntervalRat& b) { return a += b; }
  /// Scale by a nonnegative rational.
  IntervalRat scaled(const Rat& c) const;

 private:
  explicit IntervalRat(Kind k) : kind_(k) {}
  IntervalRat(Rat lo, Rat hi) : kind_(Kind::finite), lo_(std::move(lo)), hi_(std::move(hi)) {}
  Kind kind_;
  Rat lo_, hi_;
};

/// How much of a sequence's support is known.
struct SupportInfo {
  enum class Kind { finite, infinite, unknown } kind;
  std::size_t end = 0;  // meaningful for finite: last index with a positive term
  static SupportInfo finite(std::size_t n) { return {Kind::finite, n}; }
  static SupportInfo infinite() { return {Kind::infinite, 0}; }
  static SupportInfo unknown() { return {Kind::unknown, 0}; }
  bool is_finite() const { return kind == Kind::finite; }
  bool is_infinite() const { return kind == Kind::infinite; }
};

/// Lazy exact model of a nonnegative nonincreasing sequence converging to 0.
///
/// Variants:
///   finite_support  strictly positive values, implicit zero tail
///   geometric       c*r^(n-1), 0 < r < 1
///   power_law       c/n^s, integer s >= 1
///   spliced         explicit head, then tail viewed from `offset` on
///   prefix          values known to a horizon, tail declared monotone -> 0
///                   but not computable (queries past it fail or are unknown)
///   ampliated       each term of the base repeated m times
///
/// Values are immutable after construction; all operations are pure.
class MonotoneSeq {
 public:
  enum class Kind { finite_support, geometric, power_law, spliced, prefix, ampliated };

  MonotoneSeq() : MonotoneSeq(zero()) {}

  static MonotoneSeq finite(std::vector<Rat> values);
  static MonotoneSeq geometric(Rat c, Rat r);
  static MonotoneSeq power_law(Rat c, long s);
  static MonotoneSeq spliced(std::vector<Rat> head, std::size_t offset, MonotoneSeq tail);
  static MonotoneSeq prefix(std::vector<Rat> values);
  static MonotoneSeq ampliated(std::size_t m, MonotoneSeq base);
  static MonotoneSeq zero();
  /// The harmonic sequence <1/n>.
  static MonotoneSeq harmonic() { return power_law(Rat(1), 1); }

  Kind kind() const;

  // Accessors for the active variant (throw bad_params when inapplicable).
  const std::vector<Rat>& values() const;      // finite_support / prefix
  const Rat& coeff() const;                     // geometric / power_law
  const Rat& ratio() const;                     // geometric
  long exponent() const;                        // power_law
  const std::vector<Rat>& head() const;         // spliced
  std::size_t offset() const;                   // spliced
  MonotoneSeq tail_seq() const;                 // spliced
  std::size_t ampl_factor() const;              // ampliated
  MonotoneSeq base_seq() const;                 // ampliated

  /// Exact n-th term, 1-based. Throws HorizonExceeded past a prefix horizon.
  Rat term(std::size_t n) const;
  /// Exact sum of the first n terms (0 for n = 0).
  Rat partial_sum(std::size_t n) const;
  /// Enclosure of the tail sum from index n on.
  IntervalRat tail_sum(std::size_t n) const;
  /// Sharper tail enclosure: sums `extra` leading tail terms exactly first.
  IntervalRat tail_sum_refined(std::size_t n, std::size_t extra) const;

  /// Largest index reachable by term(); nullopt when unbounded.
  std::optional<std::size_t> accessible_to() const;
  SupportInfo support() const;
  bool is_summable_certified() const { return tail_sum(1).is_finite(); }

  /// Structural comparison after light normalization (sound, not complete:
  /// false only means "not recognized as equal").
  friend bool structurally_equal(const MonotoneSeq& a, const MonotoneSeq& b);

  struct Node;
  const Node& node() const { return *node_; }

 private:
  explicit MonotoneSeq(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Sequence transforms (spec: reshape kinds) -------------------------------

/// The truncated sequence <s_{n+1}, s_{n+2}, ...>.
MonotoneSeq shift(const MonotoneSeq& s, std::size_t n);
/// s restricted to [1, n], as a finite-support sequence.
MonotoneSeq chi_prefix(const MonotoneSeq& s, std::size_t n);
/// Monotone nonincreasing rearrangement of a raw finite list.
std::vector<Rat> star(std::vector<Rat> values);
/// star() on a sequence (finite data only: finite_support or prefix input).
MonotoneSeq star(const MonotoneSeq& s);
/// Each term repeated m times (the ampliation D_m).
MonotoneSeq ampliate(const MonotoneSeq& s, std::size_t m);
/// c * s for c >= 0.
MonotoneSeq scale(const MonotoneSeq& s, const Rat& c);

// Arithmetic means ---------------------------------------------------------

/// Cesaro mean: partial_sum(n)/n.
Rat am(const MonotoneSeq& s, std::size_t n);
/// Mean of the tail: tail_sum(n+1)/n; requires a summable input.
IntervalRat am_inf(const MonotoneSeq& s, std::size_t n);

/// Streams term(1), term(2), ... together with exact running partial sums.
class PrefixScanner {
 public:
  explicit PrefixScanner(const MonotoneSeq& s) : s_(&s) {}
  /// Advances to the next index and returns the term there.
  const Rat& next();
  std::size_t index() const { return n_; }
  const Rat& current_term() const { return term_; }
  const Rat& partial_sum() const { return sum_; }

 private:
  const MonotoneSeq* s_;
  std::size_t n_ = 0;
  Rat term_;
  Rat sum_;
};

}  // namespace majkit
