#include <gtest/gtest.h>

#include <set>

#include "kfibcat/search.hpp"

using namespace kfibcat;

TEST(Search, KnownSolutionsSmallRange) {
  const auto sols = brute_force({3, 10, 40, 40});
  std::set<std::tuple<int, long, long, long>> got;
  for (const auto& s : sols) {
    EXPECT_TRUE(verify_solution(s));
    if (s.canonical) got.insert({s.k, s.n, s.m, s.l});
  }
  const std::set<std::tuple<int, long, long, long>> expect{{3, 7, 3, 4}, {3, 8, 4, 4}, {8, 16, 6, 9}};
  EXPECT_EQ(got, expect);
}

TEST(Search, FibonacciCase) {
  std::set<std::string> values;
  for (const auto& s : brute_force({2, 2, 40, 40})) values.insert(s.value.get_str());
  EXPECT_EQ(values, (std::set<std::string>{"13", "21", "55"}));
}

TEST(Search, DuplicateIndexTuplesFlagged) {
  const auto sols = brute_force({2, 2, 10, 10});
  int canonical = 0, duplicate = 0;
  for (const auto& s : sols) (s.canonical ? canonical : duplicate)++;
  EXPECT_EQ(canonical, 3);
  EXPECT_EQ(duplicate, 2);  // F_1 = F_2 = 1
}

TEST(Search, WindowedMatchesExhaustive) {
  const auto a = brute_force({3, 6, 25, 25}, SearchMode::windowed);
  const auto b = brute_force({3, 6, 25, 25}, SearchMode::exhaustive);
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
}

TEST(Search, WorkersDoNotChangeResult) {
  EXPECT_EQ(brute_force({3, 12, 30, 30}, SearchMode::windowed, 1), brute_force({3, 12, 30, 30}, SearchMode::windowed, 3));
}

TEST(Search, RangeValidation) {
  EXPECT_THROW(brute_force({1, 3, 10, 10}), DomainError);
  EXPECT_THROW(brute_force({5, 3, 10, 10}), DomainError);
  EXPECT_THROW(brute_force({3, 3, 0, 10}), DomainError);
}

TEST(Verify, Reasons) {
  ConcatSolution ok{3, 7, 3, 4, 1, mpz_class(24), true};
  EXPECT_TRUE(verify_solution(ok));
  ConcatSolution bad = ok;
  bad.value = 25;
  EXPECT_EQ(verify_solution(bad).reason, VerifyReason::identity);
  bad = ok;
  bad.d = 2;
  EXPECT_EQ(verify_solution(bad).reason, VerifyReason::identity);
  bad = ok;
  bad.l = 0;
  EXPECT_EQ(verify_solution(bad).reason, VerifyReason::bad_indices);
}

TEST(Windowed, FindsTribonacciSolutions) {
  const auto sols = windowed_search(3, 5, 60, 40);
  std::set<long> ns;
  for (const auto& s : sols) {
    if (s.canonical) ns.insert(s.n);
  }
  EXPECT_EQ(ns, (std::set<long>{7, 8}));
}

TEST(PowerCase, Certificate) {
  const PowerCaseCertificate c = power_case_certificate(200, 200);
  EXPECT_TRUE(c.no_mersenne_power_of_five);
  EXPECT_TRUE(c.parity_branch);
  EXPECT_TRUE(c.small_n_direct);
  EXPECT_TRUE(power_case_impossible(200, 200));
  EXPECT_THROW(power_case_certificate(0, 10), DomainError);
}
