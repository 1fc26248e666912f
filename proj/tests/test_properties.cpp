#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "kfibcat/alg_numbers.hpp"
#include "kfibcat/baker_bounds.hpp"
#include "kfibcat/cf_engine.hpp"
#include "kfibcat/dp_reduction.hpp"
#include "kfibcat/search.hpp"

using namespace kfibcat;

namespace {
const Precision P(300);
std::mt19937_64 rng(20241019);

long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

RealValue random_real(Precision p) {
  // Random rational with a 40-digit denominator, scaled into [-1000, 1000].
  mpz_class num(std::to_string(uniform(-1000000000000L, 1000000000000L)));
  num = num * pow10(28) + uniform(0, 999999999999999L);
  return RealValue(mpq_class(num, pow10(37)), p);
}
}  // namespace

TEST(PrecisionProperty, DoublingChangesDerivedValuesLittle) {
  const std::vector<RealFn> fns{
      [](Precision p) { return log_of(10, p) / log_of(2, p); },
      [](Precision p) { return dominant_root(5, p).alpha; },
      [](Precision p) { return fk_at_alpha(7, p).value; },
      [](Precision p) { return eval_log(dominant_root(30, p).alpha); },
  };
  for (size_t i = 0; i < fns.size(); ++i) {
    const RealValue a = fns[i](P);
    const RealValue b = fns[i](P.doubled());
    EXPECT_LT(abs(a - b.at(P)), ten_to_minus(P.digits() - 10, P)) << i;
  }
}

TEST(PrecisionProperty, DistPeriodicAndSymmetric) {
  for (int i = 0; i < 200; ++i) {
    const RealValue x = random_real(P);
    const long n = uniform(-100000, 100000);
    const RealValue d = dist_to_nearest_int(x);
    EXPECT_LT(abs(d - dist_to_nearest_int(x + n)), ten_to_minus(250, P));
    EXPECT_LT(abs(d - dist_to_nearest_int(RealValue(0L, P) - x)), ten_to_minus(250, P));
    EXPECT_LE(d, RealValue::parse("0.5", P));
  }
}

TEST(PrecisionProperty, CompareAntisymmetricTransitive) {
  auto flip = [](CertifiedSign s) {
    return s == CertifiedSign::positive   ? CertifiedSign::negative
           : s == CertifiedSign::negative ? CertifiedSign::positive
                                          : s;
  };
  for (int i = 0; i < 200; ++i) {
    const RealValue a = random_real(P), b = random_real(P), c = random_real(P);
    EXPECT_EQ(certified_compare(a, b), flip(certified_compare(b, a)));
    if (certified_compare(a, b) == CertifiedSign::positive && certified_compare(b, c) == CertifiedSign::positive) {
      EXPECT_EQ(certified_compare(a, c), CertifiedSign::positive);
    }
  }
}

TEST(SequenceProperty, PowersOfTwoPrefix) {
  for (int k = 2; k <= 64; ++k) {
    KSequence seq(k);
    for (long n = 2; n <= k + 1; ++n) EXPECT_EQ(seq.term(n), pow2(static_cast<unsigned long>(n - 2))) << k << ' ' << n;
    EXPECT_LT(seq.term(k + 2), pow2(static_cast<unsigned long>(k)));
  }
}

TEST(SequenceProperty, RecurrenceShortcut) {
  // F_{n+1} = 2 F_n - F_{n-k}
  for (int k : {2, 3, 9, 40}) {
    KSequence seq(k);
    for (long n = 2; n <= 250; ++n) EXPECT_EQ(seq.term(n + 1), 2 * seq.term(n) - seq.term(n - k));
  }
}

TEST(SequenceProperty, Digits10MatchesString) {
  for (int i = 0; i < 300; ++i) {
    mpz_class x = term(static_cast<int>(uniform(2, 30)), uniform(1, 400));
    x += uniform(0, 5);
    EXPECT_EQ(digits10(x), static_cast<long>(x.get_str().size())) << x.get_str();
  }
  for (unsigned long e = 0; e < 200; ++e) {
    EXPECT_EQ(digits10(pow10(e)), static_cast<long>(e + 1));
    if (e > 0) {
      EXPECT_EQ(digits10(pow10(e) - 1), static_cast<long>(e));
    }
  }
}

TEST(SequenceProperty, ConcatIsStringConcat) {
  for (int i = 0; i < 100; ++i) {
    const int k = static_cast<int>(uniform(2, 20));
    const mpz_class a = term(k, uniform(1, 80)), b = term(k, uniform(1, 80));
    EXPECT_EQ(concat_value(a, b).get_str(), a.get_str() + b.get_str());
  }
}

TEST(RootProperty, RandomPowerBracketAndDominance) {
  // F_n in [alpha^(n-2), alpha^(n-1)], |F_n - f_k alpha^(n-1)| < 1/2.
  for (int i = 0; i < 200; ++i) {
    const int k = static_cast<int>(uniform(2, 50));
    const long n = uniform(1, 300);
    KSequence seq(k);
    const KConstants& kc = k_constants(k, P);
    EXPECT_TRUE(power_bracket_holds(seq, n, kc.alpha)) << k << ' ' << n;
    const RealValue gap = RealValue(1L, P) / 2L - abs(RealValue(seq.term(n), P) - kc.fk * pow_int(kc.alpha, n - 1));
    EXPECT_EQ(certified_sign(gap), CertifiedSign::positive) << k << ' ' << n;
  }
}

TEST(RootProperty, EnclosureAndDerivative) {
  for (int k : {2, 3, 17, 250}) {
    const DominantRoot r = dominant_root(k, P);
    EXPECT_LT(detail::shifted_psi(k, r.alpha - r.enclosure_radius).sign(), 0);
    EXPECT_GT(detail::shifted_psi(k, r.alpha + r.enclosure_radius).sign(), 0);
    EXPECT_EQ(certified_sign(detail::shifted_psi_derivative(k, r.alpha)), CertifiedSign::positive);
  }
}

TEST(RootProperty, MonotoneInK) {
  RealValue prev = dominant_root(2, P).alpha;
  for (int k = 3; k <= 200; k += static_cast<int>(uniform(1, 9))) {
    const RealValue a = dominant_root(k, P).alpha;
    EXPECT_EQ(certified_compare(a, prev), CertifiedSign::positive) << k;
    prev = a;
  }
}

TEST(RootProperty, FkAndAlphaRangesUpTo500) {
  const Precision p(200);
  const RealValue two(2L, p);
  for (int k = 2; k <= 500; ++k) {
    const RealValue a = dominant_root(k, p).alpha;
    EXPECT_GT(a, (1L - pow_int(two, -k)) * 2L) << k;
    EXPECT_LT(a, two) << k;
    EXPECT_NO_THROW(fk_at_alpha(k, p)) << k;
  }
}

TEST(BoundProperty, MatveevMonotone) {
  const Precision p = bound_precision();
  MatveevInstance base{3, 2, RealValue(100L, p), {RealValue(1L, p), RealValue(2L, p), RealValue(3L, p)}};
  const RealValue e0 = matveev_exponent(base);
  for (size_t i = 0; i < 3; ++i) {
    MatveevInstance bigger = base;
    bigger.A[i] = bigger.A[i] * 2L;
    EXPECT_LT(matveev_exponent(bigger), e0);
  }
  MatveevInstance bigger_b = base;
  bigger_b.B = RealValue(1000L, p);
  EXPECT_LT(matveev_exponent(bigger_b), e0);
}

TEST(BoundProperty, GuzmanExhaustiveScan) {
  // f / (log f)^e increases for f > e^e, so scanning to 10x the bound is exhaustive.
  for (int e : {1, 2}) {
    for (long H : {100L, 1000L, 10000L}) {
      const RealValue h(H, bound_precision());
      const bool hypothesis = H > static_cast<long>(std::pow(4.0 * e * e, e));
      if (hypothesis) {
        EXPECT_NO_THROW(guzman_invert(e, h));
      } else {
        EXPECT_THROW(guzman_invert(e, h), DomainError);
      }
      const double g = std::pow(2.0, e) * static_cast<double>(H) * std::pow(std::log(static_cast<double>(H)), e);
      const long limit = static_cast<long>(g) * 10;
      for (long f = 2; f <= limit; ++f) {
        const double lhs = static_cast<double>(f) / std::pow(std::log(static_cast<double>(f)), e);
        if (lhs < static_cast<double>(H)) {
          ASSERT_LT(static_cast<double>(f), g) << e << ' ' << H << ' ' << f;
        }
      }
    }
  }
}

TEST(BoundProperty, ChainMonotoneInK) {
  RealValue prev = bound_chain(3L).bound_n;
  for (long k = 4; k <= 420; k += 13) {
    const RealValue b = bound_chain(k).bound_n;
    EXPECT_GT(b, prev) << k;
    prev = b;
  }
}

TEST(CFProperty, RecurrenceAndClassicalBound) {
  const auto src = [](Precision p) { return dominant_root(3, p).alpha; };
  const CFExpansion cf = expand(src, StopCondition::quotients(200), P);
  const RealValue x = src(P);
  for (size_t i = 1; i < cf.size(); ++i) {
    const mpz_class det = cf.p[i] * cf.q[i - 1] - cf.p[i - 1] * cf.q[i];
    EXPECT_EQ(det, (i % 2 == 1) ? 1 : -1) << i;
    const RealValue q(cf.q[i], P);
    EXPECT_LT(abs(x - RealValue(cf.p[i], P) / q) * q * q, RealValue(1L, P)) << i;
  }
}

TEST(CFProperty, DoubledPrecisionReproducesQuotients) {
  const auto src = [](Precision p) { return log_of(10, p) / log_of(2, p); };
  const CFExpansion a = expand(src, StopCondition::quotients(250), P);
  const CFExpansion b = expand(src, StopCondition::quotients(250), P.doubled());
  for (size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.a[i], b.a[i]) << i;
}

TEST(CFProperty, LegendreDirection) {
  const auto src = [](Precision p) { return log_of(3, p) / log_of(7, p); };
  const CFExpansion cf = expand(src, StopCondition::quotients(60), P);
  const RealValue x = src(P);
  int hits = 0;
  for (int i = 0; i < 2000; ++i) {
    const mpz_class q = uniform(1, 1000000);
    const mpz_class p = (x * RealValue(q, P)).round();
    if (gcd(p, q) != 1) continue;
    const RealValue qv(q, P);
    if (abs(x - RealValue(p, P) / qv) * qv * qv * 2L < RealValue(1L, P)) {
      ++hits;
      const bool found = std::find(cf.q.begin(), cf.q.end(), q) != cf.q.end();
      EXPECT_TRUE(found) << p.get_str() << '/' << q.get_str();
    }
  }
  // Also every convergent itself qualifies.
  for (size_t i = 1; i + 1 < cf.size(); ++i) {
    const RealValue qv(cf.q[i], P);
    if (abs(x - RealValue(cf.p[i], P) / qv) * qv * qv * 2L < RealValue(1L, P)) ++hits;
  }
  EXPECT_GT(hits, 0);
}

TEST(ReductionProperty, EpsilonStableUnderDoubling) {
  const auto phi = [](Precision p) { return (eval_sqrt(RealValue(5L, p)) + 1L) / 2L; };
  ReductionInstance inst{phi, [](Precision p) { return log_of(3, p); }, RealValue(2L, P), RealValue(3L, P),
                         pow10(40), "phi, log 3"};
  ReductionPolicy policy;
  policy.recheck = false;
  const ReductionOutcome a = reduce(inst, P, policy);
  const ReductionOutcome b = reduce(inst, P.doubled(), policy);
  EXPECT_EQ(a.q_index, b.q_index);
  EXPECT_LT(abs(a.epsilon - b.epsilon.at(P)) / a.epsilon, RealValue::parse("1e-3", P));
}

TEST(SearchProperty, WindowsAndDuplicates) {
  const auto sols = brute_force({2, 12, 35, 35});
  for (const auto& s : sols) {
    EXPECT_TRUE(verify_solution(s));
    EXPECT_LT(s.n, s.m + s.l + 6);
    EXPECT_GT(s.n, s.m + s.l - 3);
  }
  for (const auto& s : sols) {
    if (!s.canonical) continue;
    // F_1 = F_2 = 1: the index-2 alternate must be present and flagged.
    for (bool on_m : {true, false}) {
      if ((on_m ? s.m : s.l) != 1) continue;
      ConcatSolution alt = s;
      (on_m ? alt.m : alt.l) = 2;
      const auto it = std::find_if(sols.begin(), sols.end(), [&](const ConcatSolution& t) {
        return t.k == alt.k && t.n == alt.n && t.m == alt.m && t.l == alt.l;
      });
      ASSERT_NE(it, sols.end());
      EXPECT_FALSE(it->canonical);
    }
  }
}
