#include "pmsep/scalar.hpp"

#include <cstdlib>

#include <atomic>
#include <cctype>
#include <cmath>
#include <ostream>
#include <string>

#include "pmsep/errors.hpp"

namespace pmsep {

namespace {

std::atomic<NumericMode> g_mode{NumericMode::rational};

bool float_mode() { return g_mode.load(std::memory_order_relaxed) == NumericMode::floating; }

mpq_class parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw InputError("empty number");
  if (s.find('/') != std::string::npos) {
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw InputError("bad rational '" + s + "'");
    if (q.get_den() == 0) throw InputError("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
  }
  // [sign] digits [. digits] [(e|E) [sign] digits]
  std::size_t i = 0;
  bool negative = false;
  if (s[i] == '+' || s[i] == '-') negative = s[i++] == '-';
  std::string digits;
  long exponent = 0;
  bool any_digit = false;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
    digits += s[i++];
    any_digit = true;
  }
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      digits += s[i++];
      --exponent;
      any_digit = true;
    }
  }
  if (!any_digit) throw InputError("bad number '" + s + "'");
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    std::size_t used = 0;
    long e = 0;
    try {
      e = std::stol(s.substr(i), &used);
    } catch (const std::exception&) {
      throw InputError("bad exponent in '" + s + "'");
    }
    i += used;
    exponent += e;
  }
  if (i != s.size()) throw InputError("trailing characters in '" + s + "'");
  if (exponent > 4096 || exponent < -4096) throw InputError("exponent out of range in '" + s + "'");
  mpz_class num(digits, 10);
  if (negative) num = -num;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  mpq_class q = exponent < 0 ? mpq_class(num, scale) : mpq_class(num * scale);
  q.canonicalize();
  return q;
}

}  // namespace

NumericMode numeric_mode() { return g_mode.load(std::memory_order_relaxed); }
void set_numeric_mode(NumericMode mode) { g_mode.store(mode, std::memory_order_relaxed); }

NumericModeGuard::NumericModeGuard(NumericMode mode) : previous_(numeric_mode()) {
  set_numeric_mode(mode);
}
NumericModeGuard::~NumericModeGuard() { set_numeric_mode(previous_); }

Scalar::Scalar() : floating_(float_mode()) {}

Scalar::Scalar(int value) : Scalar(static_cast<long>(value)) {}

Scalar::Scalar(long value) : floating_(float_mode()) {
  if (floating_)
    d_ = static_cast<double>(value);
  else
    q_ = value;
}

Scalar::Scalar(long long value) : Scalar(static_cast<long>(value)) {}

Scalar::Scalar(long num, long den) : floating_(float_mode()) {
  if (den == 0) throw DomainError("zero denominator");
  if (floating_) {
    d_ = static_cast<double>(num) / static_cast<double>(den);
  } else {
    q_ = mpq_class(num, den);
    q_.canonicalize();
  }
}

Scalar::Scalar(const mpq_class& q) : q_(q) { q_.canonicalize(); }

Scalar Scalar::from_double(double value) {
  if (!std::isfinite(value)) throw DomainError("non-finite scalar");
  Scalar s;
  if (s.floating_) {
    s.d_ = value;
  } else {
    s.q_ = value;
  }
  return s;
}

Scalar Scalar::parse(std::string_view text) {
  std::size_t b = 0;
  std::size_t e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  mpq_class q = parse_rational(text.substr(b, e - b));
  if (float_mode()) return from_double(q.get_d());
  return Scalar(q);
}

int Scalar::sign() const {
  if (floating_) {
    if (d_ > kFloatTolerance) return 1;
    if (d_ < -kFloatTolerance) return -1;
    return 0;
  }
  return sgn(q_);
}

double Scalar::to_double() const {
  if (floating_) return d_;
  // mpq_get_d truncates; dividing two exactly representable doubles rounds correctly.
  const mpz_class& num = q_.get_num();
  const mpz_class& den = q_.get_den();
  if (mpz_sizeinbase(num.get_mpz_t(), 2) <= 53 && mpz_sizeinbase(den.get_mpz_t(), 2) <= 53)
    return num.get_d() / den.get_d();
  mpf_class f(q_, 256);
  mp_exp_t exp = 0;
  const std::string digits = f.get_str(exp, 10, 40);
  if (digits.empty()) return 0.0;
  const bool neg = digits.front() == '-';
  const std::string text = std::string(neg ? "-" : "") + "0." + digits.substr(neg ? 1 : 0) + "e" + std::to_string(exp);
  return std::strtod(text.c_str(), nullptr);
}

mpq_class Scalar::to_rational() const {
  if (!floating_) return q_;
  mpq_class q(d_);
  return q;
}

std::string Scalar::str() const {
  mpq_class q = to_rational();
  return q.get_str(10);
}

void Scalar::promote() {
  if (!floating_) {
    d_ = q_.get_d();
    q_ = 0;
    floating_ = true;
  }
}

void Scalar::snap() {
  if (!std::isfinite(d_)) throw DomainError("non-finite value in float mode");
}

Scalar& Scalar::operator+=(const Scalar& rhs) {
  if (!floating_ && !rhs.floating_) {
    q_ += rhs.q_;
    return *this;
  }
  promote();
  d_ += rhs.to_double();
  snap();
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& rhs) {
  if (!floating_ && !rhs.floating_) {
    q_ -= rhs.q_;
    return *this;
  }
  promote();
  d_ -= rhs.to_double();
  snap();
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& rhs) {
  if (!floating_ && !rhs.floating_) {
    q_ *= rhs.q_;
    return *this;
  }
  promote();
  d_ *= rhs.to_double();
  snap();
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& rhs) {
  if (rhs.floating_ ? rhs.d_ == 0.0 : sgn(rhs.q_) == 0) throw DomainError("division by zero");
  if (!floating_ && !rhs.floating_) {
    q_ /= rhs.q_;
    return *this;
  }
  promote();
  d_ /= rhs.to_double();
  snap();
  return *this;
}

void Scalar::sub_mul(const Scalar& a, const Scalar& b) {
  if (!floating_ && !a.floating_ && !b.floating_) {
    thread_local mpq_class tmp;
    mpq_mul(tmp.get_mpq_t(), a.q_.get_mpq_t(), b.q_.get_mpq_t());
    q_ -= tmp;
    return;
  }
  promote();
  d_ -= a.to_double() * b.to_double();
  snap();
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  if (r.floating_)
    r.d_ = -r.d_;
  else
    r.q_ = -r.q_;
  return r;
}

int compare(const Scalar& a, const Scalar& b) {
  if (!a.floating_ && !b.floating_) return cmp(a.q_, b.q_);
  const double diff = a.to_double() - b.to_double();
  if (diff > kFloatTolerance) return 1;
  if (diff < -kFloatTolerance) return -1;
  return 0;
}

Scalar abs(const Scalar& x) { return x.sign() < 0 ? -x : x; }
Scalar min(const Scalar& a, const Scalar& b) { return b < a ? b : a; }
Scalar max(const Scalar& a, const Scalar& b) { return a < b ? b : a; }

std::ostream& operator<<(std::ostream& os, const Scalar& x) {
  if (x.is_float()) return os << x.to_double();
  return os << x.str();
}

}  // namespace pmsep
