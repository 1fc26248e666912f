#include <gtest/gtest.h>

#include "kfibcat/cf_engine.hpp"

using namespace kfibcat;

namespace {
const Precision P(200);

RealValue phi(Precision p) { return (eval_sqrt(RealValue(5L, p)) + 1L) / 2L; }
RealValue log2_over_log10(Precision p) { return log_of(2, p) / log_of(10, p); }
}  // namespace

TEST(Expand, GoldenRatioConvergentsAreFibonacci) {
  const CFExpansion cf = expand(phi, StopCondition::quotients(60), P);
  ASSERT_EQ(cf.size(), 60u);
  mpz_class a = 1, b = 1;  // q_0 = F_1, q_1 = F_2
  for (size_t i = 0; i < cf.size(); ++i) {
    EXPECT_EQ(cf.a[i], 1) << i;
    EXPECT_EQ(cf.q[i], a) << i;
    EXPECT_EQ(cf.p[i], b) << i;
    mpz_class next = a + b;
    a = b;
    b = next;
  }
}

TEST(Expand, Log2OverLog10Prefix) {
  const CFExpansion cf = expand(log2_over_log10, StopCondition::quotients(5), P);
  const long expect[] = {0, 3, 3, 9, 2};
  for (size_t i = 0; i < 5; ++i) EXPECT_EQ(cf.a[i], expect[i]) << i;
}

TEST(Expand, Sqrt2Periodic) {
  const CFExpansion cf = expand([](Precision p) { return eval_sqrt(RealValue(2L, p)); }, StopCondition::quotients(100), P);
  EXPECT_EQ(cf.a[0], 1);
  for (size_t i = 1; i < cf.size(); ++i) EXPECT_EQ(cf.a[i], 2) << i;
}

TEST(Expand, ExhaustionThrows) {
  // A rational source terminates; the certified prefix stops there.
  EXPECT_THROW(expand([](Precision p) { return RealValue(mpq_class(7, 4), p); }, StopCondition::quotients(10), P),
               PrecisionError);
  EXPECT_THROW(expand(phi, StopCondition{}, P), DomainError);
  // 200 digits cannot certify 2000 quotients of phi.
  EXPECT_THROW(expand(phi, StopCondition::quotients(2000), P), PrecisionError);
}

TEST(Expand, StopAtDenominator) {
  const CFExpansion cf = expand(phi, StopCondition::denominator_above(1000), P);
  EXPECT_GT(cf.q.back(), 1000);
  EXPECT_LE(cf.q[cf.size() - 2], 1000);
  EXPECT_EQ(cf.q.back(), 1597);
}

TEST(Convergents, FirstExceedingAndMax) {
  CFExpansion cf = expand(log2_over_log10, StopCondition::quotients(10), P);
  const Convergent c = first_convergent_exceeding(cf, mpz_class(100));
  EXPECT_GT(c.q, 100);
  EXPECT_LE(cf.q[c.index - 1], 100);
  EXPECT_EQ(max_partial_quotient(cf, 4), 9);
  EXPECT_THROW(max_partial_quotient(cf, 1000), IndexError);
  // Re-expands on demand.
  const Convergent far = first_convergent_exceeding(cf, pow10(60));
  EXPECT_GT(far.q, pow10(60));
}

TEST(Convergents, ConvergentsApproximate) {
  const CFExpansion cf = expand(log2_over_log10, StopCondition::quotients(40), P);
  const RealValue x = log2_over_log10(P);
  for (size_t i = 1; i + 1 < cf.size(); ++i) {
    // |x - p/q| < 1/q^2
    const RealValue q(cf.q[i], P);
    const RealValue err = abs(x - RealValue(cf.p[i], P) / q);
    EXPECT_LT(err * q * q, RealValue(1L, P)) << i;
  }
}

TEST(Legendre, BoundMatchesHandComputation) {
  CFExpansion cf = expand(phi, StopCondition::quotients(10), P);
  const LegendreBound b = legendre_bound(cf, mpz_class(100), RealValue(1L, P), RealValue(2L, P));
  EXPECT_EQ(b.a_max, 1);
  EXPECT_EQ(cf.q[b.last_index_within_cap], 89);
  // 2^X < 3 * 100 -> X < log2 300.
  EXPECT_LT(abs(b.convergent_branch_exponent - eval_log(RealValue(300L, P)) / log_of(2, P)), ten_to_minus(150, P));
  EXPECT_LT(abs(b.complementary_exponent - eval_log(RealValue(200L, P)) / log_of(2, P)), ten_to_minus(150, P));
  EXPECT_THROW(legendre_bound(cf, mpz_class(0), RealValue(1L, P), RealValue(2L, P)), DomainError);
}
