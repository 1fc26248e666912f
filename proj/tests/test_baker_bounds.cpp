#include <gtest/gtest.h>

#include "kfibcat/baker_bounds.hpp"

using namespace kfibcat;

namespace {
const Precision P = bound_precision();
RealValue rel_err(const RealValue& a, const char* b) { return abs(a / RealValue::parse(b, P) - 1L); }
}  // namespace

TEST(Matveev, ConstantOracle) {
  // 1.4 * 30^5 * 2^4.5 = 769784726.27...
  EXPECT_LT(rel_err(matveev_constant(2), "7.6978472627e8"), RealValue::parse("1e-9", P));
  EXPECT_LT(rel_err(matveev_constant(3), "1.4318621539e11"), RealValue::parse("1e-9", P));
}

TEST(Matveev, Exponent) {
  MatveevInstance inst{2, 1, RealValue(10L, P), {RealValue(1L, P), RealValue(1L, P)}};
  const RealValue e = matveev_exponent(inst);
  const RealValue expect = -matveev_constant(2) * (log_of(10, P) + 1L);
  EXPECT_LT(abs(e - expect), ten_to_minus(80, P));
  inst.A[0] = RealValue::parse("0.1", P);
  EXPECT_THROW(matveev_exponent(inst), DomainError);
  inst.t = 4;
  EXPECT_THROW(inst.validate(), DomainError);
}

TEST(Guzman, Preconditions) {
  EXPECT_THROW(guzman_invert(2, RealValue(256L, P)), DomainError);  // (4*4)^2
  EXPECT_THROW(guzman_invert(0, RealValue(256L, P)), DomainError);
  EXPECT_NO_THROW(guzman_invert(2, RealValue(257L, P)));
}

TEST(Guzman, TightInversionBelowGuzman) {
  const RealValue H = RealValue::parse("1.2e24", P);
  const RealValue tight = invert_log_power(2, H);
  EXPECT_LT(tight, guzman_invert(2, H));
  EXPECT_LT(abs(tight / pow_int(eval_log(tight), 2) - H) / H, RealValue::parse("1e-60", P));
}

TEST(Chain, SmallKConstantsCloseToPrinted) {
  const SmallKChain c = small_k_chain();
  EXPECT_LT(rel_err(c.nl_first.computed, "7.09e9"), RealValue::parse("1e-3", P));
  EXPECT_EQ(c.n_case_l_le_m.computed.to_string(3), "9.96e11");
  EXPECT_EQ(c.n_final.computed.to_string(3), "5.12e26");
  for (const auto& l : c.lemmas) EXPECT_TRUE(l.holds) << l.statement;
}

TEST(Chain, BoundAtKEqualsPrintedFormula) {
  // n < 5.2e26 k^7 log^4 k
  const BoundChainResult r = bound_chain(10L);
  const RealValue k(10L, P);
  const RealValue expect = RealValue::parse("5.2e26", P) * pow_int(k, 7) * pow_int(eval_log(k), 4);
  EXPECT_LT(abs(r.bound_n / expect - 1L), RealValue::parse("1e-60", P));
  EXPECT_EQ(n_bound_integer(10), r.bound_n.ceil());
}

TEST(Chain, StrictModeUsesComputedConstants) {
  const RealValue printed = bound_chain(10L, ChainMode::printed).bound_n;
  const RealValue strict = bound_chain(10L, ChainMode::strict).bound_n;
  EXPECT_LT(strict, printed);
}

TEST(Chain, ConstantChecksCarryDerivations) {
  const auto checks = bound_chain_constant_checks();
  EXPECT_EQ(checks.size(), 12u);
  for (const auto& c : checks) {
    EXPECT_FALSE(c.name.empty());
    EXPECT_FALSE(c.derivation.empty());
    EXPECT_GT(c.computed.sign(), 0);
  }
}
