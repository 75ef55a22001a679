#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace majkit {

/// Exact rational number. Thin value wrapper around GMP's mpq_class that
/// keeps the denominator positive and the fraction reduced at all times,
/// parses/prints the repo-wide "p/q" wire format, and avoids leaking
/// gmpxx expression templates into client code.
class Rat {
 public:
  Rat() : v_(0) {}
  Rat(int n) : v_(n) {}
  Rat(long n) : v_(static_cast<signed long>(n)) {}
  Rat(long long n);
  Rat(unsigned long long n);
  Rat(long long num, long long den);
  explicit Rat(const mpq_class& v) : v_(v) { canonicalize(); }
  explicit Rat(const mpz_class& z) : v_(z) {}

  /// Parses "p", "p/q", or a plain decimal like "0.25". Throws Errc::parse_error.
  static Rat parse(std::string_view s);

  static Rat from_double_approx(double d);

  const mpq_class& raw() const { return v_; }
  const mpz_class& num() const { return v_.get_num(); }
  const mpz_class& den() const { return v_.get_den(); }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }

  double to_double() const { return v_.get_d(); }
  /// "p" when integral, else "p/q".
  std::string str() const;
  /// Decimal rendering with `digits` significant digits (export only).
  std::string decimal(int digits = 15) const;

  Rat operator-() const;
  Rat& operator+=(const Rat& o);
  Rat& operator-=(const Rat& o);
  Rat& operator*=(const Rat& o);
  Rat& operator/=(const Rat& o);

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

  friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
         : c > 0 ? std::strong_ordering::greater
                 : std::strong_ordering::equal;
  }

  Rat abs() const;
  /// this^e for integer e >= 0 (or any e when nonzero).
  Rat pow(long e) const;
  Rat inv() const;

  friend std::ostream& operator<<(std::ostream& os, const Rat& r);

 private:
  void canonicalize() { v_.canonicalize(); }
  mpq_class v_;
};

inline const Rat& min(const Rat& a, const Rat& b) { return b < a ? b : a; }
inline const Rat& max(const Rat& a, const Rat& b) { return a < b ? b : a; }

/// True when z is a perfect square (z >= 0).
bool is_perfect_square(const mpz_class& z);
/// True when r = (a/b)^2 for some rational a/b; fills `root` with the
/// nonnegative root when so.
bool is_perfect_square(const Rat& r, Rat* root = nullptr);

/// Floor of log base (p/q) ... not needed; utility: integer floor of r.
mpz_class floor_int(const Rat& r);

}  // namespace majkit
