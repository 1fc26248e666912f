#pragma once

// Continued fractions of high-precision reals.
//
// Partial quotients are certified twice: the value is widened to an interval
// of a few hundred ulps and only quotients shared by both endpoints are kept,
// then the whole expansion is repeated at doubled precision and must agree.

#include <gmpxx.h>

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kfibcat/kfib.hpp"
#include "kfibcat/precision.hpp"

namespace kfibcat {

/// When to stop emitting partial quotients: after `count` quotients, or once
/// a convergent denominator exceeds `q_exceeds` (that convergent included).
struct StopCondition {
  std::optional<size_t> count;
  std::optional<mpz_class> q_exceeds;

  static StopCondition quotients(size_t n) { return StopCondition{n, std::nullopt}; }
  static StopCondition denominator_above(mpz_class q) { return StopCondition{std::nullopt, std::move(q)}; }
};

struct Convergent {
  size_t index = 0;
  mpz_class p;
  mpz_class q;
};

struct CFExpansion {
  RealFn source;
  Precision precision{kDefaultPrecisionDigits};
  RealValue x;
  std::vector<mpz_class> a;
  std::vector<mpz_class> p;
  std::vector<mpz_class> q;

  size_t size() const { return a.size(); }
  Convergent convergent(size_t i) const { return Convergent{i, p.at(i), q.at(i)}; }
};

namespace detail {

// Quotients shared by every real in [lo, hi], up to `limit` of them.
inline std::vector<mpz_class> interval_quotients(mpq_class lo, mpq_class hi, size_t limit) {
  std::vector<mpz_class> out;
  while (out.size() < limit) {
    mpz_class a_lo, a_hi;
    mpz_fdiv_q(a_lo.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
    mpz_fdiv_q(a_hi.get_mpz_t(), hi.get_num_mpz_t(), hi.get_den_mpz_t());
    if (a_lo != a_hi) break;
    out.push_back(a_lo);
    lo -= a_lo;
    hi -= a_lo;
    if (sgn(lo) == 0 || sgn(hi) == 0) break;
    // 1/x reverses the order of the endpoints.
    mpq_class next_lo = 1 / hi;
    mpq_class next_hi = 1 / lo;
    lo = std::move(next_lo);
    hi = std::move(next_hi);
  }
  return out;
}

inline std::vector<mpz_class> certified_quotients(const RealValue& x, size_t limit) {
  const mpq_class centre = x.to_rational();
  // 256 ulps of the working precision, relative to max(|x|, 1).
  mpq_class radius(1);
  mpz_class scale = pow2(static_cast<unsigned long>(x.precision().bits() - 8));
  radius /= scale;
  mpq_class magnitude = abs(centre);
  if (magnitude > 1) radius *= magnitude;
  return interval_quotients(centre - radius, centre + radius, limit);
}

inline bool stop_reached(const StopCondition& stop, const std::vector<mpz_class>& a,
                         const std::vector<mpz_class>& q) {
  if (stop.count && a.size() >= *stop.count) return true;
  if (stop.q_exceeds && !q.empty() && q.back() > *stop.q_exceeds) return true;
  return false;
}

}  // namespace detail

/// Expands `source` evaluated at `precision`, re-expands at doubled precision
/// and keeps the common prefix. Throws PrecisionError when the certified
/// prefix ends before the stop condition is met.
inline CFExpansion expand(const RealFn& source, const StopCondition& stop,
                          Precision precision = default_precision()) {
  if (!stop.count && !stop.q_exceeds) throw DomainError("expand needs a stop condition");
  const RealValue x = source(precision);
  const size_t cap = stop.count.value_or(static_cast<size_t>(precision.digits()) * 3);
  std::vector<mpz_class> first = detail::certified_quotients(x, cap);
  const std::vector<mpz_class> second = detail::certified_quotients(source(precision.doubled()), cap);

  size_t agree = 0;
  while (agree < first.size() && agree < second.size() && first[agree] == second[agree]) ++agree;
  first.resize(agree);

  CFExpansion cf{source, precision, x, {}, {}, {}};
  mpz_class p_prev = 1, p_prev2 = 0, q_prev = 0, q_prev2 = 1;
  for (const mpz_class& ai : first) {
    mpz_class pi = ai * p_prev + p_prev2;
    mpz_class qi = ai * q_prev + q_prev2;
    p_prev2 = std::exchange(p_prev, pi);
    q_prev2 = std::exchange(q_prev, qi);
    cf.a.push_back(ai);
    cf.p.push_back(std::move(pi));
    cf.q.push_back(std::move(qi));
    if (detail::stop_reached(stop, cf.a, cf.q)) return cf;
  }
  throw PrecisionError("continued fraction exhausted " + std::to_string(precision.digits()) +
                       " digits after " + std::to_string(cf.a.size()) + " certified quotients");
}

/// expand() with one doubling of precision on exhaustion.
inline CFExpansion expand_escalating(const RealFn& source, const StopCondition& stop, Precision precision) {
  try {
    return expand(source, stop, precision);
  } catch (const PrecisionError&) {
    return expand(source, stop, precision.doubled());
  }
}

/// max(a_0, ..., a_{i_max}).
inline mpz_class max_partial_quotient(const CFExpansion& cf, size_t i_max) {
  if (i_max >= cf.size()) {
    throw IndexError("need " + std::to_string(i_max + 1) + " partial quotients, have " +
                     std::to_string(cf.size()));
  }
  return *std::max_element(cf.a.begin(), cf.a.begin() + static_cast<long>(i_max) + 1);
}

/// Smallest i with q_i > threshold; re-expands (escalating precision) when the
/// current expansion is too short.
inline Convergent first_convergent_exceeding(CFExpansion& cf, const mpz_class& threshold) {
  auto find = [&]() -> std::optional<Convergent> {
    for (size_t i = 0; i < cf.size(); ++i) {
      if (cf.q[i] > threshold) return cf.convergent(i);
    }
    return std::nullopt;
  };
  if (auto hit = find()) return *hit;
  cf = expand_escalating(cf.source, StopCondition::denominator_above(threshold), cf.precision);
  if (auto hit = find()) return *hit;
  throw PrecisionError("no certified convergent denominator above threshold");
}

/// Makes sure convergents up to index i exist.
inline void ensure_quotients(CFExpansion& cf, size_t count) {
  if (cf.size() >= count) return;
  cf = expand_escalating(cf.source, StopCondition::quotients(count), cf.precision);
}

/// Exponent bound from the Legendre argument for |x - s/r| < c / (r base^X).
///
/// When c / (r base^X) < 1 / (2 r^2), s/r is a convergent p_i/q_i with
/// q_i <= q_cap and |x - p_i/q_i| > 1 / ((a_{i+1} + 2) q_i^2), so
/// base^X < c (a_max + 2) q_cap. Otherwise base^X <= 2 c r <= 2 c q_cap.
struct LegendreBound {
  size_t last_index_within_cap = 0;  // largest i with q_i <= q_cap
  mpz_class a_max;                   // over a_0 .. a_{last_index_within_cap + 1}
  RealValue convergent_branch_value;
  RealValue convergent_branch_exponent;
  RealValue complementary_value;
  RealValue complementary_exponent;
  RealValue exponent_bound;  // max of the two branch exponents
};

inline LegendreBound legendre_bound(CFExpansion& cf, const mpz_class& q_cap, const RealValue& rhs_coeff,
                                    const RealValue& base) {
  if (q_cap < 1) throw DomainError("q_cap must be positive");
  if (base <= RealValue(1L, base.precision())) throw DomainError("base must exceed 1");
  const Convergent above = first_convergent_exceeding(cf, q_cap);
  ensure_quotients(cf, above.index + 1);
  // q_0 may already exceed the cap (a_0 = 0 gives q_0 = 1); index 0 is then
  // the last candidate.
  const size_t last = above.index == 0 ? 0 : above.index - 1;
  LegendreBound out;
  out.last_index_within_cap = last;
  out.a_max = max_partial_quotient(cf, std::min(last + 1, cf.size() - 1));
  const Precision p = std::min(rhs_coeff.precision(), base.precision());
  const RealValue log_base = eval_log(base);
  const RealValue cap(q_cap, p);
  out.convergent_branch_value = rhs_coeff * RealValue(mpz_class(out.a_max + 2), p) * cap;
  out.convergent_branch_exponent = eval_log(out.convergent_branch_value) / log_base;
  out.complementary_value = rhs_coeff * cap * 2L;
  out.complementary_exponent = eval_log(out.complementary_value) / log_base;
  out.exponent_bound = std::max(out.convergent_branch_exponent, out.complementary_exponent);
  return out;
}

}  // namespace kfibcat
