#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace majkit {

enum class Errc {
  horizon_exceeded,
  not_monotone,
  not_summable,
  bad_params,
  negative_entry,
  not_doubly_stochastic,
  no_matching,
  too_large,
  overlapping_indices,
  not_majorized,
  zero_term,
  not_strongly_majorized,
  bad_support,
  shift_not_certified,
  alpha_unknown,
  not_found,
  case_undetermined,
  horizon_exhausted,
  depth_exhausted,
  branch_undetermined,
  not_tail_majorized,
  column_not_tracked,
  bad_combo,
  divergent_row_sum,
  radical_collision,
  not_applicable,
  parse_error,
};

const char* errc_name(Errc c);

/// Library-wide exception. `index()` carries the offending 1-based index
/// where one exists (first violated prefix, zero term position, ...).
class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string msg, std::size_t index = 0)
      : std::runtime_error(std::move(msg)), code_(code), index_(index) {}

  Errc code() const noexcept { return code_; }
  std::size_t index() const noexcept { return index_; }

 private:
  Errc code_;
  std::size_t index_;
};

[[noreturn]] inline void raise(Errc code, std::string msg, std::size_t index = 0) {
  throw Error(code, std::move(msg), index);
}

}  // namespace majkit
