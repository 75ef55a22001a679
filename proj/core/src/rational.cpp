#include "majkit/rational.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "majkit/error.hpp"

namespace majkit {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::horizon_exceeded: return "HorizonExceeded";
    case Errc::not_monotone: return "NotMonotone";
    case Errc::not_summable: return "NotSummable";
    case Errc::bad_params: return "BadParams";
    case Errc::negative_entry: return "NegativeEntry";
    case Errc::not_doubly_stochastic: return "NotDoublyStochastic";
    case Errc::no_matching: return "NoMatching";
    case Errc::too_large: return "TooLarge";
    case Errc::overlapping_indices: return "OverlappingIndices";
    case Errc::not_majorized: return "NotMajorized";
    case Errc::zero_term: return "ZeroTerm";
    case Errc::not_strongly_majorized: return "NotStronglyMajorized";
    case Errc::bad_support: return "BadSupport";
    case Errc::shift_not_certified: return "ShiftNotCertified";
    case Errc::alpha_unknown: return "AlphaUnknown";
    case Errc::not_found: return "NotFound";
    case Errc::case_undetermined: return "CaseUndetermined";
    case Errc::horizon_exhausted: return "HorizonExhausted";
    case Errc::depth_exhausted: return "DepthExhausted";
    case Errc::branch_undetermined: return "BranchUndetermined";
    case Errc::not_tail_majorized: return "NotTailMajorized";
    case Errc::column_not_tracked: return "ColumnNotTracked";
    case Errc::bad_combo: return "BadCombo";
    case Errc::divergent_row_sum: return "DivergentRowSum";
    case Errc::radical_collision: return "RadicalCollision";
    case Errc::not_applicable: return "NotApplicable";
    case Errc::parse_error: return "ParseError";
  }
  return "Unknown";
}

Rat::Rat(long long n) {
  mpz_class z;
  mpz_import(z.get_mpz_t(), 1, -1, sizeof(n), 0, 0, &n);
  if (n < 0) {
    // import works on magnitude; redo via string for negatives
    v_ = mpq_class(std::to_string(n));
  } else {
    v_ = mpq_class(z);
  }
}

Rat::Rat(unsigned long long n) { v_ = mpq_class(std::to_string(n)); }

Rat::Rat(long long num, long long den) {
  if (den == 0) raise(Errc::bad_params, "zero denominator");
  v_ = mpq_class(std::to_string(num) + "/" + std::to_string(den));
  canonicalize();
}

Rat Rat::parse(std::string_view s) {
  if (s.empty()) raise(Errc::parse_error, "empty rational literal");
  std::string t(s);
  // Decimal form: sign, digits, '.', digits
  auto dot = t.find('.');
  if (dot != std::string::npos) {
    std::string intpart = t.substr(0, dot);
    std::string frac = t.substr(dot + 1);
    if (frac.find_first_not_of("0123456789") != std::string::npos)
      raise(Errc::parse_error, "bad decimal literal: " + t);
    bool neg = !intpart.empty() && intpart[0] == '-';
    if (neg) intpart = intpart.substr(1);
    if (intpart.empty()) intpart = "0";
    mpz_class num(intpart + frac, 10);
    mpz_class den(1);
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    mpq_class q(num, den);
    q.canonicalize();
    if (neg) q = -q;
    return Rat(q);
  }
  mpq_class q;
  if (q.set_str(t, 10) != 0) raise(Errc::parse_error, "bad rational literal: " + t);
  if (q.get_den() == 0) raise(Errc::parse_error, "zero denominator: " + t);
  q.canonicalize();
  return Rat(q);
}

Rat Rat::from_double_approx(double d) {
  if (!std::isfinite(d)) raise(Errc::bad_params, "non-finite double");
  mpq_class q(d);
  return Rat(q);
}

std::string Rat::str() const {
  std::ostringstream os;
  os << v_;
  return os.str();
}

std::string Rat::decimal(int digits) const {
  mpf_class f(0, static_cast<mp_bitcnt_t>(digits * 4 + 32));
  f = v_;
  mp_exp_t exp;
  std::string mant = f.get_str(exp, 10, digits);
  bool neg = !mant.empty() && mant[0] == '-';
  if (neg) mant = mant.substr(1);
  if (mant.empty()) return "0";
  std::string out;
  if (exp <= 0) {
    out = "0." + std::string(static_cast<std::size_t>(-exp), '0') + mant;
  } else if (static_cast<std::size_t>(exp) >= mant.size()) {
    out = mant + std::string(static_cast<std::size_t>(exp) - mant.size(), '0');
  } else {
    out = mant.substr(0, static_cast<std::size_t>(exp)) + "." + mant.substr(static_cast<std::size_t>(exp));
  }
  return neg ? "-" + out : out;
}

Rat Rat::operator-() const {
  Rat r;
  r.v_ = -v_;
  return r;
}
Rat& Rat::operator+=(const Rat& o) { v_ += o.v_; return *this; }
Rat& Rat::operator-=(const Rat& o) { v_ -= o.v_; return *this; }
Rat& Rat::operator*=(const Rat& o) { v_ *= o.v_; return *this; }
Rat& Rat::operator/=(const Rat& o) {
  if (o.is_zero()) raise(Errc::bad_params, "division by zero");
  v_ /= o.v_;
  return *this;
}

Rat Rat::abs() const {
  Rat r;
  r.v_ = ::abs(v_);
  return r;
}

Rat Rat::pow(long e) const {
  if (e < 0) {
    if (is_zero()) raise(Errc::bad_params, "0^negative");
    return inv().pow(-e);
  }
  mpq_class out;
  mpz_pow_ui(out.get_num_mpz_t(), v_.get_num_mpz_t(), static_cast<unsigned long>(e));
  mpz_pow_ui(out.get_den_mpz_t(), v_.get_den_mpz_t(), static_cast<unsigned long>(e));
  return Rat(out);
}

Rat Rat::inv() const {
  if (is_zero()) raise(Errc::bad_params, "inverse of zero");
  mpq_class out;
  mpq_inv(out.get_mpq_t(), v_.get_mpq_t());
  return Rat(out);
}

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.v_; }

bool is_perfect_square(const mpz_class& z) {
  if (sgn(z) < 0) return false;
  return mpz_perfect_square_p(z.get_mpz_t()) != 0;
}

bool is_perfect_square(const Rat& r, Rat* root) {
  if (r.sign() < 0) return false;
  if (!is_perfect_square(r.num()) || !is_perfect_square(r.den())) return false;
  if (root) {
    mpz_class n, d;
    mpz_sqrt(n.get_mpz_t(), r.num().get_mpz_t());
    mpz_sqrt(d.get_mpz_t(), r.den().get_mpz_t());
    mpq_class q(n, d);
    q.canonicalize();
    *root = Rat(q);
  }
  return true;
}

mpz_class floor_int(const Rat& r) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), r.num().get_mpz_t(), r.den().get_mpz_t());
  return q;
}

}  // namespace majkit
