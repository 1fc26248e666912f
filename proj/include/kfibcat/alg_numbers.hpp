#pragma once

// Certified numerics for psi_k(t) = t^k - t^(k-1) - ... - 1, its dominant
// root alpha(k), f_k(alpha) and the logarithmic heights used in the linear
// forms.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "kfibcat/kfib.hpp"
#include "kfibcat/precision.hpp"

namespace kfibcat {

struct CharPoly {
  int k;
  // Leading coefficient first: 1, -1, ..., -1.
  std::vector<long> coefficients;

  explicit CharPoly(int k_) : k(k_) {
    if (k < 2) throw DomainError("k must be at least 2");
    coefficients.assign(static_cast<size_t>(k) + 1, -1);
    coefficients.front() = 1;
  }

  mpz_class evaluate(const mpz_class& t) const {
    mpz_class acc = 0;
    for (long c : coefficients) acc = acc * t + c;
    return acc;
  }

  RealValue evaluate(const RealValue& t) const {
    RealValue acc(0L, t.precision());
    for (long c : coefficients) acc = acc * t + c;
    return acc;
  }
};

namespace detail {

// (t - 1) psi_k(t) = t^k (t - 2) + 1; same sign as psi_k for t > 1.
inline RealValue shifted_psi(int k, const RealValue& t) { return pow_int(t, k) * (t - 2L) + 1L; }

inline mpq_class shifted_psi_exact(int k, const mpq_class& t) {
  mpq_class power;
  mpz_pow_ui(power.get_num_mpz_t(), t.get_num_mpz_t(), static_cast<unsigned long>(k));
  mpz_pow_ui(power.get_den_mpz_t(), t.get_den_mpz_t(), static_cast<unsigned long>(k));
  return power * (t - 2) + 1;
}

inline RealValue shifted_psi_derivative(int k, const RealValue& t) {
  return pow_int(t, k - 1) * (t * static_cast<long>(k + 1) - static_cast<long>(2 * k));
}

}  // namespace detail

struct DominantRoot {
  int k;
  RealValue alpha;
  RealValue enclosure_radius;
};

/// Bisection on [2(1 - 2^-k), 2], Newton refinement, then a sign check of
/// psi_k at alpha -/+ radius with radius = 10^-(digits - 10).
inline DominantRoot dominant_root(int k, Precision p) {
  if (k < 2) throw DomainError("k must be at least 2");
  // 2 - alpha is about 2^-k; it has to be resolved.
  if (p.digits() < static_cast<int>(0.30103 * k) + 30) {
    throw PrecisionError("alpha(" + std::to_string(k) + ") needs more than " + std::to_string(p.digits()) + " digits");
  }
  RealValue lo = (1L - pow_int(RealValue(2L, p), -k)) * 2L;
  RealValue hi(2L, p);
  if (detail::shifted_psi(k, lo).sign() >= 0 || detail::shifted_psi(k, hi).sign() <= 0) {
    throw CertificationError("psi_k does not change sign on the seed bracket for k=" + std::to_string(k));
  }
  for (int i = 0; i < 64; ++i) {
    RealValue mid = (lo + hi) / 2L;
    if (detail::shifted_psi(k, mid).sign() < 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  RealValue x = (lo + hi) / 2L;
  const RealValue tol = ten_to_minus(p.digits() + 5, p);
  for (int iter = 0; iter < 64; ++iter) {
    RealValue step = detail::shifted_psi(k, x) / detail::shifted_psi_derivative(k, x);
    x = x - step;
    if (abs(step) < tol) break;
  }

  // psi_k has integer coefficients, so its sign at the rational endpoints
  // alpha -/+ radius is decided exactly.
  const RealValue radius = ten_to_minus(p.digits() - 10, p);
  const mpq_class centre = x.to_rational();
  const mpq_class r(mpz_class(1), pow10(static_cast<unsigned long>(p.digits() - 10)));
  if (sgn(detail::shifted_psi_exact(k, centre - r)) >= 0 || sgn(detail::shifted_psi_exact(k, centre + r)) <= 0) {
    throw CertificationError("could not bracket alpha(" + std::to_string(k) + ") at " +
                             std::to_string(p.digits()) + " digits");
  }
  return DominantRoot{k, x, radius};
}

inline RealValue fk_function(int k, const RealValue& t) {
  return (t - 1L) / ((t - 2L) * static_cast<long>(k + 1) + 2L);
}

struct FkValue {
  int k;
  RealValue value;
};

/// f_k(alpha), certified inside (0.5, 0.75); escalates precision once.
inline FkValue fk_at_alpha(int k, Precision p) {
  for (Precision q = p;; q = q.doubled()) {
    const RealValue v = fk_function(k, dominant_root(k, q).alpha);
    const auto lower = certified_compare(v, RealValue::parse("0.5", q));
    const auto upper = certified_compare(RealValue::parse("0.75", q), v);
    if (lower == CertifiedSign::positive && upper == CertifiedSign::positive) return FkValue{k, v.at(p)};
    if (lower == CertifiedSign::negative || upper == CertifiedSign::negative) {
      throw CertificationError("f_k(alpha) outside (0.5, 0.75) for k=" + std::to_string(k));
    }
    if (q > p) {
      throw CertificationError("f_k(alpha) enclosure straddles an endpoint for k=" + std::to_string(k));
    }
  }
}

struct HeightBounds {
  RealValue h_alpha;     // (log alpha) / k
  RealValue h_fk_bound;  // 3 log k
};

inline HeightBounds height_bounds(int k, Precision p) {
  const RealValue log_alpha = eval_log(dominant_root(k, p).alpha);
  return HeightBounds{log_alpha / static_cast<long>(k), log_of(k, p) * 3L};
}

/// Everything the bound and reduction passes need for one k, evaluated once.
struct KConstants {
  int k;
  Precision precision;
  RealValue alpha;
  RealValue log_alpha;
  RealValue fk;
};

inline KConstants compute_k_constants(int k, Precision p) {
  const DominantRoot root = dominant_root(k, p);
  return KConstants{k, p, root.alpha, eval_log(root.alpha), fk_at_alpha(k, p).value};
}

/// Process-wide memo keyed by (k, digits).
inline const KConstants& k_constants(int k, Precision p) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, KConstants> cache;
  {
    std::lock_guard lock(mu);
    auto it = cache.find({k, p.digits()});
    if (it != cache.end()) return it->second;
  }
  KConstants fresh = compute_k_constants(k, p);
  std::lock_guard lock(mu);
  return cache.try_emplace({k, p.digits()}, std::move(fresh)).first->second;
}

/// alpha^(n-2) <= F_n <= alpha^(n-1). Exponent 0 sides are compared exactly.
inline bool power_bracket_holds(KSequence& seq, long n, const RealValue& alpha) {
  const Precision p = alpha.precision();
  const mpz_class f = seq.term(n);
  auto le = [&](long exponent, bool power_on_left) {
    if (exponent == 0) return power_on_left ? f >= 1 : f <= 1;
    const RealValue power = pow_int(alpha, exponent);
    const RealValue fv(f, p);
    const CertifiedSign s = power_on_left ? certified_compare(fv, power) : certified_compare(power, fv);
    return s == CertifiedSign::positive;
  };
  return le(n - 2, true) && le(n - 1, false);
}

/// |F_n - f_k(alpha) alpha^(n-1)| < 1/2 for 1 <= n <= n_max.
inline bool dominance_check(int k, long n_max, Precision p = default_precision()) {
  if (n_max < 2) throw DomainError("n_max must be at least 2");
  KSequence seq(k);
  seq.extend_to(n_max);
  for (Precision q = p;; q = q.doubled()) {
    const KConstants& kc = k_constants(k, q);
    const RealValue half = RealValue(1L, q) / 2L;
    bool indeterminate = false;
    for (long n = 1; n <= n_max; ++n) {
      const RealValue gap = half - abs(RealValue(seq.at(n), q) - kc.fk * pow_int(kc.alpha, n - 1));
      const CertifiedSign s = certified_sign(gap);
      if (s == CertifiedSign::negative) return false;
      if (s == CertifiedSign::zero_indistinguishable) {
        indeterminate = true;
        break;
      }
    }
    if (!indeterminate) return true;
    if (q > p) throw CertificationError("dominance check indeterminate for k=" + std::to_string(k));
  }
}

/// All k roots of psi_k by Durand-Kerner in long double. Diagnostic only
/// (k <= 20); the dominant root is the one of largest modulus.
inline std::vector<std::complex<long double>> all_roots(int k) {
  if (k < 2 || k > 20) throw DomainError("all_roots is limited to 2 <= k <= 20");
  using C = std::complex<long double>;
  const CharPoly poly(k);
  auto eval = [&](C z) {
    C acc = 0;
    for (long c : poly.coefficients) acc = acc * z + static_cast<long double>(c);
    return acc;
  };
  std::vector<C> z(static_cast<size_t>(k));
  const C seed(0.4L, 0.9L);
  for (size_t i = 0; i < z.size(); ++i) z[i] = std::pow(seed, static_cast<long double>(i));
  for (int iter = 0; iter < 2000; ++iter) {
    long double change = 0;
    for (size_t i = 0; i < z.size(); ++i) {
      C denom = 1;
      for (size_t j = 0; j < z.size(); ++j) {
        if (j != i) denom *= z[i] - z[j];
      }
      const C delta = eval(z[i]) / denom;
      z[i] -= delta;
      change = std::max(change, std::abs(delta));
    }
    if (change < 1e-17L) break;
  }
  return z;
}

struct ConjugateDiagnostic {
  bool others_inside_unit_circle;
  bool fk_of_others_below_one;
  long double max_other_modulus;
  long double max_fk_other;
};

inline ConjugateDiagnostic conjugate_diagnostic(int k) {
  auto roots = all_roots(k);
  std::sort(roots.begin(), roots.end(),
            [](const auto& a, const auto& b) { return std::abs(a) > std::abs(b); });
  ConjugateDiagnostic out{true, true, 0, 0};
  for (size_t i = 1; i < roots.size(); ++i) {
    const auto z = roots[i];
    const auto fz = (z - 1.0L) / (2.0L + static_cast<long double>(k + 1) * (z - 2.0L));
    out.max_other_modulus = std::max(out.max_other_modulus, std::abs(z));
    out.max_fk_other = std::max(out.max_fk_other, std::abs(fz));
  }
  out.others_inside_unit_circle = out.max_other_modulus < 1;
  out.fk_of_others_below_one = out.max_fk_other < 1;
  return out;
}

}  // namespace kfibcat
