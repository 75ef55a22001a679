#pragma once

#include <optional>

#include "majkit/sequence.hpp"

namespace majkit::analysis {

/// Closed form of a sequence beyond some index:
///   geo:  term(j) = c * r^(j + d)
///   pow:  term(j) = c / (j + d)^s
///   zero: term(j) = 0
/// valid for all j > valid_from.
struct AnalyticTail {
  enum class Kind { zero, geo, pow };
  Kind kind;
  Rat c;
  Rat r;          // geo
  long s = 0;     // pow
  long long d = 0;
  std::size_t valid_from = 0;
};

std::optional<AnalyticTail> classify_tail(const MonotoneSeq& s);

/// Proof that a.term(j) <= b.term(j) for every j > n0; returns such an n0.
/// `strict` asks for a.term(j) < b.term(j) instead.
std::optional<std::size_t> dominated_from(const MonotoneSeq& a, const MonotoneSeq& b,
                                          bool strict = false);

/// xi = shift(eta, p) recognized structurally; returns p.
std::optional<std::size_t> detect_shift_of(const MonotoneSeq& xi, const MonotoneSeq& eta);

/// Rigorous analysis of D_n = sum_{j<=n} (eta_j - xi_j) as n -> infinity.
struct DiffLimit {
  enum class Kind {
    exact,      // lim D_n exists and equals `value`; D monotone beyond monotone_from
    interval,   // lim exists within [lo, hi] (rigorous); D monotone beyond monotone_from
    diverges,   // D_n -> +infinity
    unknown,    // nothing provable; scanned_min is horizon data only
  };
  Kind kind = Kind::unknown;
  Rat value;
  Rat lo, hi;
  std::size_t monotone_from = 0;
  int direction = 0;  // +1 nondecreasing beyond monotone_from, -1 nonincreasing
  bool strict = false;  // direction is strict beyond monotone_from
  Rat scanned_min;      // min of D over [1, horizon] (always filled)
  std::size_t scanned_argmin = 0;

  bool limit_is_liminf() const { return kind == Kind::exact || kind == Kind::diverges; }
};

/// Requires the weak prefix inequality to hold on [1, horizon] (callers check).
DiffLimit diff_limit(const MonotoneSeq& xi, const MonotoneSeq& eta, std::size_t horizon);

/// Exact value of sum_{j>n0} (a_j - b_j) when provable: point, rigorous
/// interval, or divergence. Assumes a >= b is NOT assumed; signs are free.
struct TailDiff {
  enum class Kind { exact, interval, diverges, unknown };
  Kind kind = Kind::unknown;
  Rat value, lo, hi;
};
TailDiff tail_difference(const MonotoneSeq& a, const MonotoneSeq& b, std::size_t n0);

}  // namespace majkit::analysis
