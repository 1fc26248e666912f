#include <gtest/gtest.h>

#include "kfibcat/precision.hpp"

using namespace kfibcat;

namespace {
const Precision P(200);
}

TEST(Precision, RejectsTooFewDigits) {
  EXPECT_THROW(Precision(49), DomainError);
  EXPECT_NO_THROW(Precision(50));
  EXPECT_EQ(Precision(100).doubled().digits(), 200);
  EXPECT_GE(Precision(1050).bits(), 3488);
}

TEST(RealValue, LogRatioOracle) {
  // log 10 / log 2 = 3.32192809488736234787031942948939017586...
  const RealValue r = log_of(10, P) / log_of(2, P);
  const RealValue ref = RealValue::parse("3.32192809488736234787031942948939017586", P);
  EXPECT_LT(abs(r - ref), ten_to_minus(38, P));
}

TEST(RealValue, ParseAndFormat) {
  EXPECT_EQ(RealValue::parse("7.1e9", P).to_string(2), "7.1e9");
  EXPECT_EQ(RealValue(5393L, P).to_string(4), "5.393e3");
  EXPECT_THROW(RealValue::parse("abc", P), DomainError);
}

TEST(RealValue, RoundingHelpers) {
  const RealValue x = RealValue::parse("-2.5", P);
  EXPECT_EQ(x.floor(), -3);
  EXPECT_EQ(x.ceil(), -2);
  EXPECT_EQ(RealValue::parse("2.4", P).round(), 2);
  EXPECT_EQ(RealValue(mpq_class(7, 4), P).to_rational(), mpq_class(7, 4));
}

TEST(RealValue, DomainErrors) {
  EXPECT_THROW(eval_log(RealValue(0L, P)), DomainError);
  EXPECT_THROW(eval_log(RealValue(-1L, P)), DomainError);
  EXPECT_THROW(RealValue(1L, P) / RealValue(0L, P), DomainError);
}

TEST(RealValue, MixedPrecisionUsesLower) {
  const RealValue a(1L, Precision(100));
  const RealValue b(1L, Precision(300));
  EXPECT_EQ((a + b).precision().digits(), 100);
}

TEST(RealValue, DistToNearestInt) {
  EXPECT_LT(abs(dist_to_nearest_int(RealValue::parse("3.25", P)) - RealValue::parse("0.25", P)), ten_to_minus(150, P));
  EXPECT_LT(abs(dist_to_nearest_int(RealValue::parse("-3.75", P)) - RealValue::parse("0.25", P)), ten_to_minus(150, P));
  EXPECT_EQ(dist_to_nearest_int(RealValue(4L, P)).sign(), 0);
}

TEST(CertifiedCompare, SignsAndIndistinguishable) {
  const RealValue one(1L, P);
  EXPECT_EQ(certified_compare(one, RealValue(0L, P)), CertifiedSign::positive);
  EXPECT_EQ(certified_compare(RealValue(0L, P), one), CertifiedSign::negative);
  EXPECT_EQ(certified_compare(one, one + ten_to_minus(150, P)), CertifiedSign::zero_indistinguishable);
  EXPECT_EQ(certified_compare(one + ten_to_minus(90, P), one), CertifiedSign::positive);
}

TEST(CertifiedCompare, RecheckSign) {
  EXPECT_EQ(recheck_sign([](Precision p) { return log_of(3, p) - 1L; }, P, "log 3 - 1"), CertifiedSign::positive);
  EXPECT_THROW(recheck_sign([](Precision p) { return RealValue(0L, p); }, P, "zero"), CertificationError);
}
