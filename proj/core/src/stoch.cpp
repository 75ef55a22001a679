#include "majkit/stoch.hpp"

#include <algorithm>
#include <cmath>

#include "majkit/error.hpp"

namespace majkit {

double SqrtEntry::to_double() const { return sign * std::sqrt(radicand.to_double()); }

SignedSqrtMat SignedSqrtMat::identity(std::size_t n) {
  SignedSqrtMat u(n, n);
  for (std::size_t i = 1; i <= n; ++i) u.set(i, i, +1, Rat(1));
  return u;
}

void SignedSqrtMat::set(std::size_t i, std::size_t j, int sign, Rat radicand) {
  if (i == 0 || j == 0 || i > rows_ || j > cols_) raise(Errc::bad_params, "index out of range");
  if (radicand.sign() < 0) raise(Errc::bad_params, "negative radicand");
  if (radicand.is_zero()) {
    auto it = data_.find(i);
    if (it != data_.end()) {
      it->second.erase(j);
      if (it->second.empty()) data_.erase(it);
    }
    return;
  }
  data_[i][j] = SqrtEntry{sign >= 0 ? +1 : -1, std::move(radicand)};
}

void SignedSqrtMat::accumulate(std::size_t i, std::size_t j, int sign, const Rat& radicand) {
  if (radicand.is_zero()) return;
  const SqrtEntry* cur = find(i, j);
  if (!cur) {
    set(i, j, sign, radicand);
    return;
  }
  Rat root;
  if (!is_perfect_square(radicand / cur->radicand, &root))
    raise(Errc::radical_collision, "sum of incommensurable radicals in one entry");
  Rat coeff = Rat(cur->sign) + Rat(sign >= 0 ? 1 : -1) * root;
  set(i, j, coeff.sign(), coeff * coeff * cur->radicand);
}

const SqrtEntry* SignedSqrtMat::find(std::size_t i, std::size_t j) const {
  auto it = data_.find(i);
  if (it == data_.end()) return nullptr;
  auto jt = it->second.find(j);
  return jt == it->second.end() ? nullptr : &jt->second;
}

const SignedSqrtMat::Row& SignedSqrtMat::row(std::size_t i) const {
  static const Row kEmpty;
  auto it = data_.find(i);
  return it == data_.end() ? kEmpty : it->second;
}

void SignedSqrtMat::set_row(std::size_t i, Row r) {
  if (r.empty())
    data_.erase(i);
  else
    data_[i] = std::move(r);
}

void SignedSqrtMat::grow(std::size_t rows, std::size_t cols) {
  rows_ = std::max(rows_, rows);
  cols_ = std::max(cols_, cols);
}

SignedSqrtMat::Row SignedSqrtMat::combine(const Row& a, int sign_a, const Rat& f_a, const Row& b,
                                          int sign_b, const Rat& f_b) {
  Row out;
  auto put = [&out](std::size_t j, int sign, Rat rad) {
    if (rad.is_zero()) return;
    auto it = out.find(j);
    if (it == out.end()) {
      out[j] = SqrtEntry{sign, std::move(rad)};
      return;
    }
    Rat root;
    if (!is_perfect_square(rad / it->second.radicand, &root))
      raise(Errc::radical_collision, "sum of incommensurable radicals in one entry", j);
    Rat coeff = Rat(it->second.sign) + Rat(sign) * root;
    if (coeff.is_zero()) {
      out.erase(it);
      return;
    }
    it->second = SqrtEntry{coeff.sign(), coeff * coeff * it->second.radicand};
  };
  if (!f_a.is_zero())
    for (const auto& [j, e] : a) put(j, sign_a * e.sign, f_a * e.radicand);
  if (!f_b.is_zero())
    for (const auto& [j, e] : b) put(j, sign_b * e.sign, f_b * e.radicand);
  return out;
}

RationalMatTrunc RationalMatTrunc::identity(std::size_t n) {
  RationalMatTrunc p(n, n, n);
  for (std::size_t i = 1; i <= n; ++i) p.set(i, i, Rat(1));
  return p;
}

void RationalMatTrunc::set(std::size_t i, std::size_t j, Rat v) {
  if (i == 0 || j == 0 || i > rows_ || j > cols_) raise(Errc::bad_params, "index out of range");
  if (v.sign() < 0) raise(Errc::negative_entry, "negative matrix entry");
  if (v.is_zero()) {
    auto it = data_.find(i);
    if (it != data_.end()) {
      it->second.erase(j);
      if (it->second.empty()) data_.erase(it);
    }
    return;
  }
  data_[i][j] = std::move(v);
}

void RationalMatTrunc::add(std::size_t i, std::size_t j, const Rat& v) {
  set(i, j, at(i, j) + v);
}

Rat RationalMatTrunc::at(std::size_t i, std::size_t j) const {
  auto it = data_.find(i);
  if (it == data_.end()) return Rat(0);
  auto jt = it->second.find(j);
  return jt == it->second.end() ? Rat(0) : jt->second;
}

const RationalMatTrunc::Row& RationalMatTrunc::row(std::size_t i) const {
  static const Row kEmpty;
  auto it = data_.find(i);
  return it == data_.end() ? kEmpty : it->second;
}

Rat RationalMatTrunc::row_sum(std::size_t i) const {
  Rat s(0);
  for (const auto& [j, v] : row(i)) s += v;
  return s;
}

Rat RationalMatTrunc::col_sum(std::size_t j) const {
  Rat s(0);
  for (const auto& [i, r] : data_) {
    auto jt = r.find(j);
    if (jt != r.end()) s += jt->second;
  }
  return s;
}

void RationalMatTrunc::grow(std::size_t rows, std::size_t cols) {
  rows_ = std::max(rows_, rows);
  cols_ = std::max(cols_, cols);
}

// --- constructions ----------------------------------------------------------

SignedSqrtMat t_transform(std::size_t m, const Rat& t) {
  if (m < 1 || t.sign() <= 0 || t > Rat(1)) raise(Errc::bad_params, "need m >= 1, 0 < t <= 1");
  SignedSqrtMat v(m + 1, m + 1);
  Rat omt = Rat(1) - t;
  v.set(1, m, +1, t);
  v.set(1, m + 1, -1, omt);
  for (std::size_t i = 2; i <= m; ++i) v.set(i, i - 1, +1, Rat(1));
  v.set(m + 1, m, +1, omt);
  v.set(m + 1, m + 1, +1, t);
  return v;
}

SignedSqrtMat t_transform(std::size_t m, const Rat& t, std::size_t n) {
  if (n < 2 || m > n - 1) raise(Errc::bad_params, "embedding needs 1 <= m <= n-1");
  SignedSqrtMat v = t_transform(m, t);
  v.grow(n, n);
  for (std::size_t i = m + 2; i <= n; ++i) v.set(i, i, +1, Rat(1));
  return v;
}

RationalMatTrunc schur_square(const SignedSqrtMat& a) {
  RationalMatTrunc q(a.n_rows(), a.n_cols(), a.n_rows());
  for (const auto& [i, row] : a.rows())
    for (const auto& [j, e] : row) q.set(i, j, e.radicand);
  return q;
}

StochClass classify(const RationalMatTrunc& p) {
  StochClass out;
  std::size_t r = p.rows_finalized() ? p.rows_finalized() : p.n_rows();
  bool sub = true, rows1 = r > 0, cols1 = p.n_cols() > 0;
  for (std::size_t i = 1; i <= r; ++i) {
    Rat s = p.row_sum(i);
    if (s > Rat(1)) sub = false;
    if (s != Rat(1)) rows1 = false;
  }
  for (std::size_t j = 1; j <= p.n_cols(); ++j) {
    Rat s = p.col_sum(j);
    if (s > Rat(1)) sub = false;
    if (s != Rat(1)) cols1 = false;
  }
  out.substochastic = sub;
  out.row_stochastic = sub && rows1;
  out.column_stochastic = sub && cols1;
  out.doubly_stochastic = out.row_stochastic && out.column_stochastic;

  if (out.doubly_stochastic && p.n_rows() == p.n_cols()) {
    // Boundaries b with no support crossing {1..b} x {b+1..} in either order.
    std::size_t n = p.n_rows();
    std::vector<std::size_t> bounds;
    std::size_t max_cross = 0;  // largest column seen in rows <= current, and vice versa
    std::size_t max_row_for_col = 0;
    for (std::size_t b = 1; b <= n; ++b) {
      for (const auto& [j, v] : p.row(b)) max_cross = std::max(max_cross, j);
      (void)max_row_for_col;
      if (max_cross <= b) bounds.push_back(b);
    }
    // Column crossings are symmetric for doubly stochastic square data: a
    // column entry below a boundary would push that row's max past it.
    bool ok = !bounds.empty() && bounds.back() == n;
    if (ok) {
      std::size_t lo = 1;
      for (std::size_t b : bounds) {
        out.blocks.emplace_back(lo, b);
        lo = b + 1;
      }
      out.block_doubly = out.blocks.size() >= 1;
    }
  }
  return out;
}

std::vector<Rat> apply_rows(const RationalMatTrunc& p, const MonotoneSeq& s, std::size_t out_len) {
  if (out_len > p.rows_finalized())
    raise(Errc::horizon_exceeded, "apply needs finalized rows", out_len);
  std::vector<Rat> out;
  out.reserve(out_len);
  for (std::size_t i = 1; i <= out_len; ++i) {
    Rat acc(0);
    for (const auto& [j, v] : p.row(i)) acc += v * s.term(j);
    out.push_back(std::move(acc));
  }
  return out;
}

Verdict3 diagonal_conjugation_check(const SignedSqrtMat& l, const MonotoneSeq& eta,
                                    const MonotoneSeq& xi, std::size_t n) {
  for (std::size_t i = 1; i <= n; ++i) {
    Rat acc(0);
    for (const auto& [j, e] : l.row(i)) acc += e.radicand * eta.term(j);
    Rat want = xi.term(i);
    if (acc != want)
      return Verdict3::fails({i, (acc - want).abs(), FailReason::prefix_violation});
  }
  return Verdict3::holds({MajorCert::Kind::finite_support_exact, n, {}, "diagonal match"});
}

// --- Birkhoff ---------------------------------------------------------------

namespace {

// Kuhn's augmenting-path matching over the positive entries of `w`,
// restricted to rows in [row_from, n]; match_col[c] = row or 0.
bool try_kuhn(const std::vector<std::vector<Rat>>& w, std::size_t n, std::size_t row,
              std::vector<std::size_t>& match_col, std::vector<bool>& seen) {
  for (std::size_t c = 1; c <= n; ++c) {
    if (w[row][c].is_zero() || seen[c]) continue;
    seen[c] = true;
    if (match_col[c] == 0 || try_kuhn(w, n, match_col[c], match_col, seen)) {
      match_col[c] = row;
      return true;
    }
  }
  return false;
}

bool exists_perfect_matching(const std::vector<std::vector<Rat>>& w, std::size_t n,
                             const std::vector<std::size_t>& fixed_cols, std::size_t next_row) {
  std::vector<std::size_t> match_col(n + 1, 0);
  for (std::size_t i = 1; i < next_row; ++i) match_col[fixed_cols[i]] = i;
  for (std::size_t i = next_row; i <= n; ++i) {
    std::vector<bool> seen(n + 1, false);
    // Fixed columns are unavailable.
    for (std::size_t i2 = 1; i2 < next_row; ++i2) seen[fixed_cols[i2]] = true;
    if (!try_kuhn(w, n, i, match_col, seen)) return false;
  }
  return true;
}

}  // namespace

std::vector<BirkhoffTerm> birkhoff_decompose(const RationalMatTrunc& p, std::size_t n) {
  if (n == 0 || n > p.n_rows() || n > p.n_cols())
    raise(Errc::bad_params, "bad Birkhoff dimension");
  std::vector<std::vector<Rat>> w(n + 1, std::vector<Rat>(n + 1, Rat(0)));
  for (std::size_t i = 1; i <= n; ++i) {
    Rat rs(0), cs(0);
    for (std::size_t j = 1; j <= n; ++j) {
      w[i][j] = p.at(i, j);
      rs += w[i][j];
      cs += p.at(j, i);
    }
    if (rs != Rat(1) || cs != Rat(1))
      raise(Errc::not_doubly_stochastic, "Birkhoff needs an exactly doubly stochastic matrix", i);
  }

  std::vector<BirkhoffTerm> out;
  Rat total(0);
  while (total < Rat(1)) {
    // Lexicographically smallest perfect matching on positive entries.
    std::vector<std::size_t> fixed(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
      bool ok = false;
      for (std::size_t c = 1; c <= n; ++c) {
        if (w[i][c].is_zero()) continue;
        bool used = false;
        for (std::size_t i2 = 1; i2 < i; ++i2) used |= fixed[i2] == c;
        if (used) continue;
        fixed[i] = c;
        if (exists_perfect_matching(w, n, fixed, i + 1)) {
          ok = true;
          break;
        }
        fixed[i] = 0;
      }
      if (!ok) raise(Errc::no_matching, "no perfect matching on positive entries", i);
    }
    Rat weight = w[1][fixed[1]];
    for (std::size_t i = 2; i <= n; ++i) weight = min(weight, w[i][fixed[i]]);
    for (std::size_t i = 1; i <= n; ++i) w[i][fixed[i]] -= weight;
    BirkhoffTerm term;
    term.weight = weight;
    term.perm.assign(fixed.begin() + 1, fixed.end());
    out.push_back(std::move(term));
    total += weight;
  }
  return out;
}

// --- orthostochastic decision -------------------------------------------------

namespace {

bool rows_orthogonal_given_signs(const RationalMatTrunc& q, const std::vector<std::vector<int>>& sign,
                                 std::size_t a, std::size_t b) {
  std::vector<RadicalTerm> terms;
  for (std::size_t j = 1; j < sign[a].size(); ++j) {
    Rat qa = q.at(a, j), qb = q.at(b, j);
    if (qa.is_zero() || qb.is_zero()) continue;
    terms.push_back({Rat(sign[a][j] * sign[b][j]), qa * qb});
  }
  return radical_sum_is_zero(terms);
}

bool sign_search(const RationalMatTrunc& q, std::size_t n, std::size_t i, std::size_t j,
                 std::vector<std::vector<int>>& sign) {
  if (i > n) return true;
  if (j > n) {
    for (std::size_t prev = 1; prev < i; ++prev)
      if (!rows_orthogonal_given_signs(q, sign, prev, i)) return false;
    return sign_search(q, n, i + 1, 2, sign);
  }
  if (q.at(i, j).is_zero()) return sign_search(q, n, i, j + 1, sign);
  for (int s : {+1, -1}) {
    sign[i][j] = s;
    if (sign_search(q, n, i, j + 1, sign)) return true;
  }
  sign[i][j] = +1;
  return false;
}

}  // namespace

std::optional<SignedSqrtMat> orthostochastic_witness(const RationalMatTrunc& q, std::size_t n) {
  if (n > 5) raise(Errc::too_large, "sign search limited to N <= 5", n);
  if (n == 0) raise(Errc::bad_params, "empty matrix");
  for (std::size_t i = 1; i <= n; ++i) {
    Rat rs(0), cs(0);
    for (std::size_t j = 1; j <= n; ++j) {
      rs += q.at(i, j);
      cs += q.at(j, i);
    }
    if (rs != Rat(1) || cs != Rat(1))
      raise(Errc::not_doubly_stochastic, "sign search needs a doubly stochastic matrix", i);
  }
  // Row/column sign flips preserve orthogonality and the Schur square, so the
  // first row and first column may be pinned to +.
  std::vector<std::vector<int>> sign(n + 1, std::vector<int>(n + 1, +1));
  if (!sign_search(q, n, 2, 2, sign)) return std::nullopt;
  SignedSqrtMat u(n, n);
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= n; ++j)
      if (!q.at(i, j).is_zero()) u.set(i, j, sign[i][j], q.at(i, j));
  return u;
}

// --- paper-style generators ---------------------------------------------------

SignedSqrtMat half_pair_matrix(std::size_t k_pairs) {
  if (k_pairs < 1) raise(Errc::bad_params, "need at least one pair");
  // m_k = (k+1)^2; n_k enumerates the complement in increasing order.
  std::vector<std::size_t> m_idx(k_pairs + 1), n_idx(k_pairs + 1);
  for (std::size_t k = 1; k <= k_pairs; ++k) m_idx[k] = (k + 1) * (k + 1);
  std::size_t next = 1, taken = 0, sq = 2;
  while (taken < k_pairs) {
    if (next == sq * sq) {
      ++sq;
    } else {
      n_idx[++taken] = next;
    }
    ++next;
  }
  SignedSqrtMat u(2 * k_pairs, m_idx[k_pairs]);
  Rat half(1, 2);
  for (std::size_t k = 1; k <= k_pairs; ++k) {
    u.set(2 * k - 1, n_idx[k], +1, half);
    u.set(2 * k - 1, m_idx[k], +1, half);
    u.set(2 * k, n_idx[k], +1, half);
    u.set(2 * k, m_idx[k], -1, half);
  }
  return u;
}

SignedSqrtMat nested_column_matrix(const MonotoneSeq& a, std::size_t n) {
  if (n < 1) raise(Errc::bad_params, "empty truncation");
  IntervalRat total = a.tail_sum(1);
  if (!total.is_point() || total.value() != Rat(1))
    raise(Errc::bad_params, "needs a positive sequence with exact total 1");
  std::vector<Rat> av(n + 2), b(n + 2);
  Rat psum(0);
  for (std::size_t i = 1; i <= n + 1; ++i) {
    av[i] = a.term(i);
    if (av[i].sign() <= 0) raise(Errc::bad_params, "sequence must stay positive", i);
    psum += av[i];
    b[i] = psum.inv();
  }
  SignedSqrtMat u(n, n);
  for (std::size_t i = 1; i <= n; ++i) {
    u.set(i, 1, +1, av[i]);
    if (i > 1) u.set(i, i, -1, Rat(1) - av[i] * b[i]);
    for (std::size_t j = std::max<std::size_t>(2, i + 1); j <= n; ++j)
      u.set(i, j, +1, av[i] * (b[j - 1] - b[j]));
  }
  return u;
}

RationalMatTrunc direct_sum(const std::vector<ScatterBlock>& blocks) {
  std::size_t max_r = 0, max_c = 0;
  std::map<std::size_t, bool> used_r, used_c;
  for (const auto& blk : blocks) {
    if (blk.row_idx.size() < blk.block.n_rows() || blk.col_idx.size() < blk.block.n_cols())
      raise(Errc::bad_params, "index lists shorter than block shape");
    for (std::size_t r : blk.row_idx) {
      if (used_r[r]) raise(Errc::overlapping_indices, "row index reused", r);
      used_r[r] = true;
      max_r = std::max(max_r, r);
    }
    for (std::size_t c : blk.col_idx) {
      if (used_c[c]) raise(Errc::overlapping_indices, "column index reused", c);
      used_c[c] = true;
      max_c = std::max(max_c, c);
    }
  }
  RationalMatTrunc out(max_r, max_c, 0);
  // A target row is exact when its source block row is finalized.
  std::map<std::size_t, bool> row_final;
  for (const auto& blk : blocks) {
    for (const auto& [i, row] : blk.block.rows())
      for (const auto& [j, v] : row) out.set(blk.row_idx[i - 1], blk.col_idx[j - 1], v);
    for (std::size_t i = 1; i <= blk.block.n_rows(); ++i)
      if (i <= blk.block.rows_finalized()) row_final[blk.row_idx[i - 1]] = true;
  }
  std::size_t fin = 0;
  while (row_final.count(fin + 1) && row_final[fin + 1]) ++fin;
  out.set_rows_finalized(fin);
  return out;
}

std::vector<Rat> defect_profile(const RationalMatTrunc& p, std::size_t horizon) {
  if (horizon > p.rows_finalized())
    raise(Errc::horizon_exceeded, "profile needs finalized rows", horizon);
  // Column-major view for incremental corner sums.
  std::map<std::size_t, std::vector<std::pair<std::size_t, Rat>>> cols;
  for (const auto& [i, row] : p.rows())
    for (const auto& [j, v] : row) cols[j].emplace_back(i, v);
  Rat corner(0);
  std::vector<Rat> out;
  out.reserve(horizon);
  for (std::size_t b = 1; b <= horizon; ++b) {
    for (const auto& [j, v] : p.row(b))
      if (j <= b) corner += v;
    auto it = cols.find(b);
    if (it != cols.end())
      for (const auto& [i, v] : it->second)
        if (i < b) corner += v;
    out.push_back(Rat(static_cast<long long>(b)) - corner);
  }
  return out;
}

// --- algebra ------------------------------------------------------------------

SignedSqrtMat mat_mul(const SignedSqrtMat& a, const SignedSqrtMat& b) {
  if (a.n_cols() != b.n_rows()) raise(Errc::bad_params, "shape mismatch");
  SignedSqrtMat c(a.n_rows(), b.n_cols());
  for (const auto& [i, arow] : a.rows())
    for (const auto& [k, ae] : arow)
      for (const auto& [j, be] : b.row(k))
        c.accumulate(i, j, ae.sign * be.sign, ae.radicand * be.radicand);
  return c;
}

RationalMatTrunc mat_mul(const RationalMatTrunc& a, const RationalMatTrunc& b) {
  if (a.n_cols() != b.n_rows()) raise(Errc::bad_params, "shape mismatch");
  RationalMatTrunc c(a.n_rows(), b.n_cols(), 0);
  for (const auto& [i, arow] : a.rows())
    for (const auto& [k, av] : arow)
      for (const auto& [j, bv] : b.row(k)) c.add(i, j, av * bv);
  return c;
}

bool rows_orthonormal_exact(const SignedSqrtMat& u, std::size_t upto) {
  for (std::size_t i = 1; i <= upto; ++i) {
    Rat norm(0);
    for (const auto& [j, e] : u.row(i)) norm += e.radicand;
    if (norm != Rat(1)) return false;
  }
  for (std::size_t i = 1; i <= upto; ++i) {
    for (std::size_t k = i + 1; k <= upto; ++k) {
      std::vector<RadicalTerm> terms;
      const auto& ri = u.row(i);
      for (const auto& [j, e] : u.row(k)) {
        auto it = ri.find(j);
        if (it == ri.end()) continue;
        terms.push_back({Rat(e.sign * it->second.sign), e.radicand * it->second.radicand});
      }
      if (!radical_sum_is_zero(terms)) return false;
    }
  }
  return true;
}

bool orthogonal_exact(const SignedSqrtMat& u) {
  if (u.n_rows() != u.n_cols()) return false;
  return rows_orthonormal_exact(u, u.n_rows());
}

double orthogonality_residual(const SignedSqrtMat& u) {
  std::size_t n = u.n_rows();
  double worst = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t k = i; k <= n; ++k) {
      double acc = 0;
      const auto& ri = u.row(i);
      for (const auto& [j, e] : u.row(k)) {
        auto it = ri.find(j);
        if (it != ri.end()) acc += e.to_double() * it->second.to_double();
      }
      double want = i == k ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(acc - want));
    }
  }
  return worst;
}

}  // namespace majkit
