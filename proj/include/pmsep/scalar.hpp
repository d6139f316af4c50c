#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace pmsep {

enum class NumericMode { rational, floating };

/// Absolute tolerance used by every comparison in floating mode.
inline constexpr double kFloatTolerance = 1e-9;

/// Mode used when Scalars are created from literals or text. Rational by
/// default; switched process-wide, normally once at startup.
NumericMode numeric_mode();
void set_numeric_mode(NumericMode mode);

/// RAII switch of the numeric mode, restoring the previous one on exit.
class NumericModeGuard {
 public:
  explicit NumericModeGuard(NumericMode mode);
  ~NumericModeGuard();
  NumericModeGuard(const NumericModeGuard&) = delete;
  NumericModeGuard& operator=(const NumericModeGuard&) = delete;

 private:
  NumericMode previous_;
};

/// A number that is either an exact rational (GMP) or a finite double.
///
/// Rational values are always canonical (lowest terms, positive
/// denominator). Arithmetic between a rational and a float yields a float.
/// In float mode every comparison treats |a - b| <= kFloatTolerance as
/// equality, so `sign()`, `==` and `<` are tolerant.
class Scalar {
 public:
  Scalar();
  Scalar(int value);  // NOLINT(google-explicit-constructor)
  Scalar(long value);  // NOLINT(google-explicit-constructor)
  Scalar(long long value);  // NOLINT(google-explicit-constructor)
  Scalar(long num, long den);
  explicit Scalar(const mpq_class& q);

  static Scalar from_double(double value);
  static Scalar exact(const mpq_class& q) { return Scalar(q); }

  /// Accepts "p/q", integers and decimals ("0.49", "-1.5e-2"). Decimals are
  /// converted exactly in rational mode.
  static Scalar parse(std::string_view text);

  [[nodiscard]] bool is_float() const { return floating_; }
  [[nodiscard]] int sign() const;
  [[nodiscard]] bool is_zero() const { return sign() == 0; }
  [[nodiscard]] double to_double() const;

  /// Exact value; for floats, the exact binary value of the double.
  [[nodiscard]] mpq_class to_rational() const;

  /// "p/q" (or "p" when the denominator is 1).
  [[nodiscard]] std::string str() const;

  Scalar& operator+=(const Scalar& rhs);
  Scalar& operator-=(const Scalar& rhs);
  Scalar& operator*=(const Scalar& rhs);
  Scalar& operator/=(const Scalar& rhs);

  /// this -= a * b, without a temporary Scalar.
  void sub_mul(const Scalar& a, const Scalar& b);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  Scalar operator-() const;

  friend int compare(const Scalar& a, const Scalar& b);
  friend bool operator==(const Scalar& a, const Scalar& b) { return compare(a, b) == 0; }
  friend std::weak_ordering operator<=>(const Scalar& a, const Scalar& b) {
    const int c = compare(a, b);
    return c < 0 ? std::weak_ordering::less
                 : (c > 0 ? std::weak_ordering::greater : std::weak_ordering::equivalent);
  }

 private:
  void promote();
  void snap();

  mpq_class q_;
  double d_ = 0.0;
  bool floating_ = false;
};

Scalar abs(const Scalar& x);
Scalar min(const Scalar& a, const Scalar& b);
Scalar max(const Scalar& a, const Scalar& b);

std::ostream& operator<<(std::ostream& os, const Scalar& x);

}  // namespace pmsep
