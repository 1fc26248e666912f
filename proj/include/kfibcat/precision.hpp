#pragma once

// Arbitrary-precision real arithmetic on top of MPFR with decimal precision
// accounting and sign decisions that survive outward rounding.

#include <mpfr.h>
#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdlib>
#include <functional>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace kfibcat {

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Raised when a computation needs more working precision than it was given.
struct PrecisionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when a value that gates a proof step cannot be certified.
struct CertificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kMinPrecisionDigits = 50;
inline constexpr int kDefaultPrecisionDigits = 1050;
inline constexpr int kRecheckPrecisionDigits = 2 * kDefaultPrecisionDigits;

/// Working precision in decimal digits.
class Precision {
 public:
  explicit Precision(int digits) : digits_(digits) {
    if (digits < kMinPrecisionDigits) {
      throw DomainError("precision below " + std::to_string(kMinPrecisionDigits) +
                        " decimal digits: " + std::to_string(digits));
    }
  }

  int digits() const { return digits_; }

  // 16 guard bits on top of the decimal requirement.
  mpfr_prec_t bits() const {
    return static_cast<mpfr_prec_t>(std::ceil(digits_ * 3.321928094887362)) + 16;
  }

  Precision doubled() const { return Precision(2 * digits_); }

  auto operator<=>(const Precision&) const = default;

 private:
  int digits_;
};

inline Precision default_precision() { return Precision(kDefaultPrecisionDigits); }

/// Immutable arbitrary-precision real tagged with the decimal precision it was
/// computed at. Binary operations run at the lower of the two precisions.
class RealValue {
 public:
  RealValue() : RealValue(0L, default_precision()) {}

  RealValue(long v, Precision p) : prec_(p) {
    init();
    mpfr_set_si(value_, v, MPFR_RNDN);
  }

  RealValue(const mpz_class& v, Precision p) : prec_(p) {
    init();
    mpfr_set_z(value_, v.get_mpz_t(), MPFR_RNDN);
  }

  RealValue(const mpq_class& v, Precision p) : prec_(p) {
    init();
    mpfr_set_q(value_, v.get_mpq_t(), MPFR_RNDN);
  }

  /// Parses decimal or scientific notation ("0.000957", "9e229").
  static RealValue parse(const std::string& text, Precision p) {
    RealValue r(p);
    char* end = nullptr;
    mpfr_strtofr(r.value_, text.c_str(), &end, 10, MPFR_RNDN);
    if (end == text.c_str() || *end != '\0') {
      throw DomainError("not a number: " + text);
    }
    return r;
  }

  RealValue(const RealValue& other) : prec_(other.prec_) {
    init();
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }

  RealValue(RealValue&& other) noexcept : prec_(other.prec_) {
    mpfr_init2(value_, MPFR_PREC_MIN);
    mpfr_swap(value_, other.value_);
  }

  RealValue& operator=(RealValue other) noexcept {
    std::swap(prec_, other.prec_);
    mpfr_swap(value_, other.value_);
    return *this;
  }

  ~RealValue() { mpfr_clear(value_); }

  Precision precision() const { return prec_; }
  mpfr_srcptr get() const { return value_; }

  /// Same value re-tagged (and rounded) at another precision.
  RealValue at(Precision p) const {
    RealValue r(p);
    mpfr_set(r.value_, value_, MPFR_RNDN);
    return r;
  }

  int sign() const { return mpfr_sgn(value_); }
  bool is_finite() const { return mpfr_number_p(value_) != 0; }
  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }

  mpz_class floor() const {
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), value_, MPFR_RNDD);
    return z;
  }

  mpz_class ceil() const {
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), value_, MPFR_RNDU);
    return z;
  }

  mpz_class round() const {
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), value_, MPFR_RNDN);
    return z;
  }

  /// Exact rational equal to the stored binary value.
  mpq_class to_rational() const {
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), value_);
    return q;
  }

  /// Scientific notation with `significant` digits, e.g. "7.0900e9".
  std::string to_string(int significant = 12) const {
    if (mpfr_zero_p(value_)) return "0";
    if (!mpfr_number_p(value_)) return mpfr_nan_p(value_) ? "nan" : (sign() > 0 ? "inf" : "-inf");
    mpfr_exp_t exp10 = 0;
    char* raw = mpfr_get_str(nullptr, &exp10, 10, static_cast<size_t>(significant), value_, MPFR_RNDN);
    std::string digits(raw);
    mpfr_free_str(raw);
    std::string out;
    if (digits.front() == '-') {
      out.push_back('-');
      digits.erase(0, 1);
    }
    out.push_back(digits.front());
    if (digits.size() > 1) {
      out.push_back('.');
      out.append(digits, 1);
    }
    long e = static_cast<long>(exp10) - 1;
    if (e != 0) out += "e" + std::to_string(e);
    return out;
  }

  friend RealValue operator+(const RealValue& a, const RealValue& b) {
    return binary(a, b, mpfr_add);
  }
  friend RealValue operator-(const RealValue& a, const RealValue& b) {
    return binary(a, b, mpfr_sub);
  }
  friend RealValue operator*(const RealValue& a, const RealValue& b) {
    return binary(a, b, mpfr_mul);
  }
  friend RealValue operator/(const RealValue& a, const RealValue& b) {
    if (b.sign() == 0) throw DomainError("division by zero");
    return binary(a, b, mpfr_div);
  }
  friend RealValue operator-(const RealValue& a) {
    RealValue r(a.prec_);
    mpfr_neg(r.value_, a.value_, MPFR_RNDN);
    return r;
  }

  friend RealValue operator+(const RealValue& a, long b) { return a + RealValue(b, a.prec_); }
  friend RealValue operator-(const RealValue& a, long b) { return a - RealValue(b, a.prec_); }
  friend RealValue operator*(const RealValue& a, long b) { return a * RealValue(b, a.prec_); }
  friend RealValue operator/(const RealValue& a, long b) { return a / RealValue(b, a.prec_); }
  friend RealValue operator-(long a, const RealValue& b) { return RealValue(a, b.prec_) - b; }
  friend RealValue operator/(long a, const RealValue& b) { return RealValue(a, b.prec_) / b; }

  // Plain (non-certified) ordering on the stored values; proof decisions go
  // through certified_compare.
  friend bool operator<(const RealValue& a, const RealValue& b) { return mpfr_less_p(a.value_, b.value_) != 0; }
  friend bool operator>(const RealValue& a, const RealValue& b) { return b < a; }
  friend bool operator<=(const RealValue& a, const RealValue& b) { return mpfr_lessequal_p(a.value_, b.value_) != 0; }
  friend bool operator>=(const RealValue& a, const RealValue& b) { return b <= a; }

  template <class Fn>
  static RealValue unary(const RealValue& x, Fn fn) {
    RealValue r(x.prec_);
    fn(r.value_, x.value_, MPFR_RNDN);
    return r;
  }

 private:
  explicit RealValue(Precision p) : prec_(p) { init(); }

  void init() { mpfr_init2(value_, prec_.bits()); }

  template <class Fn>
  static RealValue binary(const RealValue& a, const RealValue& b, Fn fn) {
    RealValue r(std::min(a.prec_, b.prec_));
    fn(r.value_, a.value_, b.value_, MPFR_RNDN);
    return r;
  }

  friend RealValue pow_int(const RealValue& x, long n);
  friend RealValue ten_to_minus(int exponent, Precision p);

  Precision prec_;
  mpfr_t value_;
};

inline std::ostream& operator<<(std::ostream& os, const RealValue& x) { return os << x.to_string(12); }

inline RealValue abs(const RealValue& x) { return RealValue::unary(x, mpfr_abs); }

inline RealValue eval_log(const RealValue& x) {
  if (x.sign() <= 0) throw DomainError("logarithm of a nonpositive value");
  return RealValue::unary(x, mpfr_log);
}

inline RealValue eval_exp(const RealValue& x) { return RealValue::unary(x, mpfr_exp); }

inline RealValue eval_sqrt(const RealValue& x) {
  if (x.sign() < 0) throw DomainError("square root of a negative value");
  return RealValue::unary(x, mpfr_sqrt);
}

inline RealValue pow_int(const RealValue& x, long n) {
  RealValue r(x.prec_);
  mpfr_pow_si(r.value_, x.value_, n, MPFR_RNDN);
  return r;
}

/// Real power x^y for x > 0.
inline RealValue pow_real(const RealValue& x, const RealValue& y) {
  return eval_exp(y * eval_log(x));
}

/// 10^(-exponent) at precision p.
inline RealValue ten_to_minus(int exponent, Precision p) {
  RealValue r(p);
  mpfr_set_si(r.value_, 10, MPFR_RNDN);
  mpfr_pow_si(r.value_, r.value_, -exponent, MPFR_RNDN);
  return r;
}

inline RealValue log_of(long v, Precision p) { return eval_log(RealValue(v, p)); }

/// ||x||, the distance from x to the nearest integer, in [0, 1/2].
inline RealValue dist_to_nearest_int(const RealValue& x) {
  RealValue frac = x - RealValue(x.floor(), x.precision());
  RealValue other = 1L - frac;
  return frac < other ? frac : other;
}

enum class CertifiedSign { positive, negative, zero_indistinguishable };

inline const char* to_string(CertifiedSign s) {
  switch (s) {
    case CertifiedSign::positive: return "positive";
    case CertifiedSign::negative: return "negative";
    case CertifiedSign::zero_indistinguishable: return "zero-indistinguishable";
  }
  return "?";
}

/// Sign of x - y. The difference is taken with both downward and upward
/// rounding; a sign is reported only when both agree and |x - y| is at least
/// 10^(-digits/2) at the lower of the two precisions.
inline CertifiedSign certified_compare(const RealValue& x, const RealValue& y) {
  const Precision p = std::min(x.precision(), y.precision());
  mpfr_t lo, hi;
  mpfr_init2(lo, p.bits());
  mpfr_init2(hi, p.bits());
  mpfr_sub(lo, x.get(), y.get(), MPFR_RNDD);
  mpfr_sub(hi, x.get(), y.get(), MPFR_RNDU);
  const RealValue threshold = ten_to_minus(p.digits() / 2, p);
  CertifiedSign out = CertifiedSign::zero_indistinguishable;
  if (mpfr_sgn(lo) > 0 && mpfr_cmp(lo, threshold.get()) >= 0) {
    out = CertifiedSign::positive;
  } else if (mpfr_sgn(hi) < 0) {
    mpfr_neg(hi, hi, MPFR_RNDN);
    if (mpfr_cmp(hi, threshold.get()) >= 0) out = CertifiedSign::negative;
  }
  mpfr_clear(lo);
  mpfr_clear(hi);
  return out;
}

inline CertifiedSign certified_sign(const RealValue& x) {
  return certified_compare(x, RealValue(0L, x.precision()));
}

/// A real quantity that can be re-evaluated at any precision.
using RealFn = std::function<RealValue(Precision)>;

/// Double-and-recheck: the sign of `fn` must be certified and identical at p
/// and at 2p. Throws CertificationError otherwise.
inline CertifiedSign recheck_sign(const RealFn& fn, Precision p, const std::string& what) {
  const CertifiedSign first = certified_sign(fn(p));
  const CertifiedSign second = certified_sign(fn(p.doubled()));
  if (first == CertifiedSign::zero_indistinguishable || first != second) {
    throw CertificationError("sign of " + what + " not certified: " + to_string(first) + " at " +
                             std::to_string(p.digits()) + " digits, " + to_string(second) + " at " +
                             std::to_string(p.doubled().digits()));
  }
  return first;
}

}  // namespace kfibcat
