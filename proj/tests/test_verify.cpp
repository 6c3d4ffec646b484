#include <gtest/gtest.h>

#include "singwave/verify.hpp"

using namespace singwave;

TEST(Hardy, ClosedFormPolynomial) {
  // psi = x(1-x): int psi^2/x^2 = 1/3, 4 int psi'^2 = 4/3
  const auto r = hardy_check([](double x) { return x * (1 - x); }, [](double x) { return 1 - 2 * x; });
  EXPECT_NEAR(r.lhs, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(r.rhs, 4.0 / 3.0, 1e-12);
  EXPECT_TRUE(r.holds());
}

TEST(Hardy, NearExtremalFunctionApproachesTheConstant) {
  // x^{1/2 + e}(1 - x) pushes the ratio towards 1 as e -> 0
  double prev = 0.0;
  for (double e : {0.5, 0.2, 0.05}) {
    const double p = 0.5 + e;
    const auto r = hardy_check([p](double x) { return std::pow(x, p) * (1 - x); },
                               [p](double x) { return p * std::pow(x, p - 1) * (1 - x) - std::pow(x, p); });
    EXPECT_TRUE(r.holds());
    EXPECT_GT(r.ratio(), prev);
    prev = r.ratio();
  }
  EXPECT_GT(prev, 0.5);
}

TEST(Hardy, SeededSweepIsReproducible) {
  const auto a = hardy_sweep(100, 7), b = hardy_sweep(100, 7);
  EXPECT_EQ(a.failures, 0);
  EXPECT_EQ(a.worst_ratio, b.worst_ratio);
  EXPECT_LT(a.worst_ratio, 1.0);
}

TEST(Resolvent, LowerBoundHolds) {
  const auto r = resolvent_bound_check(2.0, 0.0, 5.0, 50, 400, 3);
  EXPECT_NEAR(r.bound, 2.0 / (1.0 + 6.0 / 5.0), 1e-15);
  EXPECT_GE(r.worst_ratio, 1.0);
  EXPECT_EQ(resolvent_bound(2.0, 0.5, -4.0), resolvent_bound(2.0, 0.5, 4.0));
  EXPECT_THROW(resolvent_bound_check(1.0, 1.5, 2.0, 1), std::invalid_argument);
  EXPECT_THROW(resolvent_bound_check(1.0, 0.5, 0.0, 1), std::invalid_argument);
}

TEST(Gupta, BoundWithEqualityAtOne) {
  const auto rows = gupta_bound_check(20);
  ASSERT_EQ(rows.size(), 20u);
  EXPECT_NEAR(rows[0].mu, -1.0, 1e-14);
  EXPECT_NEAR(rows[0].margin(), 0.0, 1e-14);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GT(rows[i].margin(), 0.0);
}

TEST(Lemma, IntegrationByPartsFormHolds) {
  for (const auto& d : {sine_data(1), bump_data(), sine_data(2)})
    for (int n = 1; n <= 3; ++n) {
      const auto r = lemma_condition_identity(d, n);
      EXPECT_LT(r.corrected_discrepancy(), 1e-10 * (1.0 + r.data_norm * r.data_norm)) << d.name << " n=" << n;
    }
}

TEST(Lemma, UnscaledFormOnlyHoldsAtMuEqualMinusOne) {
  // energy = -mu <r, f>; the two agree only where mu = -1, i.e. n = 1
  EXPECT_LT(lemma_condition_identity(sine_data(1), 1).literal_discrepancy(), 1e-12);
  EXPECT_GT(lemma_condition_identity(sine_data(1), 2).literal_discrepancy(), 1e-2);
}
