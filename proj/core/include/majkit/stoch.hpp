#pragma once

#include <map>
#include <optional>
#include <vector>

#include "majkit/radical.hpp"
#include "majkit/sequence.hpp"
#include "majkit/verdict.hpp"

namespace majkit {

/// A signed square root, sign * sqrt(radicand) with radicand > 0.
struct SqrtEntry {
  int sign = +1;  // +1 or -1
  Rat radicand;
  double to_double() const;
};

/// Sparse matrix whose entries are sign*sqrt(rational); the Schur square is
/// exactly rational. Indices are 1-based. Immutable in spirit: construction
/// code mutates, consumers treat values as frozen.
class SignedSqrtMat {
 public:
  using Row = std::map<std::size_t, SqrtEntry>;

  SignedSqrtMat() : SignedSqrtMat(0, 0) {}
  SignedSqrtMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}
  static SignedSqrtMat identity(std::size_t n);

  std::size_t n_rows() const { return rows_; }
  std::size_t n_cols() const { return cols_; }

  void set(std::size_t i, std::size_t j, int sign, Rat radicand);
  /// Adds sign*sqrt(radicand) to the entry; throws RadicalCollision when the
  /// sum is not itself a single radical.
  void accumulate(std::size_t i, std::size_t j, int sign, const Rat& radicand);
  const SqrtEntry* find(std::size_t i, std::size_t j) const;
  const Row& row(std::size_t i) const;
  const std::map<std::size_t, Row>& rows() const { return data_; }
  void set_row(std::size_t i, Row r);

  void grow(std::size_t rows, std::size_t cols);

  /// c1 * rows[a] + c2 * rows[b] entrywise, with ci = sign_i*sqrt(f_i); any
  /// colliding entries must stay single radicals.
  static Row combine(const Row& a, int sign_a, const Rat& f_a, const Row& b, int sign_b,
                     const Rat& f_b);

 private:
  std::size_t rows_, cols_;
  std::map<std::size_t, Row> data_;
};

/// Finite truncation of an infinite nonnegative matrix; rows 1..rows_finalized
/// are exact rows of the intended infinite matrix. Indices 1-based.
class RationalMatTrunc {
 public:
  using Row = std::map<std::size_t, Rat>;

  RationalMatTrunc() : RationalMatTrunc(0, 0) {}
  RationalMatTrunc(std::size_t rows, std::size_t cols, std::size_t rows_finalized = 0)
      : rows_(rows), cols_(cols), finalized_(rows_finalized) {}
  static RationalMatTrunc identity(std::size_t n);

  std::size_t n_rows() const { return rows_; }
  std::size_t n_cols() const { return cols_; }
  std::size_t rows_finalized() const { return finalized_; }
  void set_rows_finalized(std::size_t r) { finalized_ = r; }

  void set(std::size_t i, std::size_t j, Rat v);
  void add(std::size_t i, std::size_t j, const Rat& v);
  Rat at(std::size_t i, std::size_t j) const;
  const Row& row(std::size_t i) const;
  const std::map<std::size_t, Row>& rows() const { return data_; }

  Rat row_sum(std::size_t i) const;
  Rat col_sum(std::size_t j) const;

  void grow(std::size_t rows, std::size_t cols);

 private:
  std::size_t rows_, cols_, finalized_;
  std::map<std::size_t, Row> data_;
};

struct StochClass {
  bool substochastic = false;
  bool row_stochastic = false;
  bool column_stochastic = false;
  bool doubly_stochastic = false;
  bool block_doubly = false;
  std::vector<std::pair<std::size_t, std::size_t>> blocks;  // inclusive index ranges
};

// --- constructions ----------------------------------------------------------

/// The (m+1)x(m+1) orthogonal matrix whose Schur square is a permuted
/// T-transform: row 1 = sqrt(t) e_m - sqrt(1-t) e_{m+1}, rows 2..m shift
/// down, row m+1 = sqrt(1-t) e_m + sqrt(t) e_{m+1}.
SignedSqrtMat t_transform(std::size_t m, const Rat& t);
/// Same, embedded in the top-left of an n x n identity (needs m <= n-1).
SignedSqrtMat t_transform(std::size_t m, const Rat& t, std::size_t n);

RationalMatTrunc schur_square(const SignedSqrtMat& a);

StochClass classify(const RationalMatTrunc& p);

/// Exact (P s)_i for i <= out_len; all involved rows must be finalized.
std::vector<Rat> apply_rows(const RationalMatTrunc& p, const MonotoneSeq& s, std::size_t out_len);

/// Diagonal of L diag(eta) L^T compared with xi on the first n coordinates.
Verdict3 diagonal_conjugation_check(const SignedSqrtMat& l, const MonotoneSeq& eta,
                                    const MonotoneSeq& xi, std::size_t n);

struct BirkhoffTerm {
  Rat weight;
  std::vector<std::size_t> perm;  // perm[i-1] = image of row i (1-based cols)
};
/// Greedy Birkhoff decomposition of an exactly doubly stochastic N x N matrix;
/// ties broken toward the lexicographically smallest permutation.
std::vector<BirkhoffTerm> birkhoff_decompose(const RationalMatTrunc& p, std::size_t n);

/// Exhaustive sign search (N <= 5): an orthogonal matrix whose Schur square
/// is q, or nullopt when q is not orthostochastic.
std::optional<SignedSqrtMat> orthostochastic_witness(const RationalMatTrunc& q, std::size_t n);

/// Orthostochastic matrix pairing index streams n_k (non-squares) and
/// m_k = (k+1)^2 with entries +-sqrt(1/2); truncated to 2K rows.
SignedSqrtMat half_pair_matrix(std::size_t k_pairs);

/// Orthogonal matrix with zero pattern U_ij = 0 exactly for i > j > 1, built
/// from a positive sequence with exact total 1; N x N truncation.
SignedSqrtMat nested_column_matrix(const MonotoneSeq& a, std::size_t n);

struct ScatterBlock {
  std::vector<std::size_t> row_idx;  // target rows for block rows 1..k
  std::vector<std::size_t> col_idx;  // target cols for block cols 1..l
  RationalMatTrunc block;
};
RationalMatTrunc direct_sum(const std::vector<ScatterBlock>& blocks);

/// The sequence n - sum_{i,j<=n} P_ij for n = 1..horizon.
std::vector<Rat> defect_profile(const RationalMatTrunc& p, std::size_t horizon);

// --- algebra / checks -------------------------------------------------------

/// Product of radical matrices; entries must collapse to single radicals.
SignedSqrtMat mat_mul(const SignedSqrtMat& a, const SignedSqrtMat& b);
RationalMatTrunc mat_mul(const RationalMatTrunc& a, const RationalMatTrunc& b);

/// U U^T = I by exact radical tests (square matrices).
bool orthogonal_exact(const SignedSqrtMat& u);
/// Rows 1..upto pairwise orthogonal with unit norm, exactly.
bool rows_orthonormal_exact(const SignedSqrtMat& u, std::size_t upto);
/// max |(U U^T - I)_ij| in floating point.
double orthogonality_residual(const SignedSqrtMat& u);

}  // namespace majkit
