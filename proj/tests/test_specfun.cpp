#include <gtest/gtest.h>

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/laguerre.hpp>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "singwave/specfun.hpp"

using singwave::cplx;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

}  // namespace

TEST(Kummer, MatchesMultiprecisionSeries) {
  // small, moderate and large arguments in every quadrant, including the
  // oscillatory region |Im z| >> |Re z| where the eigenvalues live
  const std::vector<cplx> zs{{0.3, 0.0},  {-0.7, 0.4},  {2.5, -1.0},  {-5.0, 3.0},  {8.0, 20.0},
                             {-15.0, 30.0}, {12.0, -45.0}, {-30.0, 70.0}, {25.0, 90.0}, {-60.0, -40.0}};
  for (double a : {-0.5, 0.3, -1.7, -2.7, 0.9}) {
    for (const auto& z : zs) {
      const cplx got = singwave::kummer_m(a, 2.0, z);
      const cplx want = oracle::kummer(a, 2.0, z);
      EXPECT_LT(rel(got, want), 1e-11) << "a=" << a << " z=" << z;
    }
  }
}

TEST(Kummer, TerminatesForNonPositiveIntegerA) {
  // M(-n, 2, z) = L_n^(1)(z) / (n+1)
  for (int n = 0; n <= 6; ++n)
    for (double x : {-3.0, 0.5, 4.0})
      EXPECT_NEAR(singwave::kummer_m(-n, 2.0, x).real(), boost::math::laguerre(n, 1, x) / (n + 1.0),
                  1e-12 * (1.0 + std::abs(boost::math::laguerre(n, 1, x))));
}

TEST(Kummer, KummerTransformationProperty) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-40.0, 40.0), ua(-3.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const double a = ua(rng);
    const cplx z(u(rng), u(rng));
    const cplx lhs = singwave::kummer_m(a, 2.0, z);
    const cplx rhs = std::exp(z) * singwave::kummer_m(2.0 - a, 2.0, -z);
    EXPECT_LT(rel(lhs, rhs), 1e-10) << "a=" << a << " z=" << z;
  }
}

TEST(Kummer, DerivativeMatchesFiniteDifference) {
  for (double a : {-0.5, 0.3, -2.7})
    for (cplx z : {cplx(0.4, 0.2), cplx(-6.0, 9.0), cplx(10.0, -30.0)}) {
      const double h = 1e-5 * (1.0 + std::abs(z));
      const cplx fd = (singwave::kummer_m(a, 2.0, z + h) - singwave::kummer_m(a, 2.0, z - h)) / (2.0 * h);
      EXPECT_LT(rel(singwave::kummer_m_derivative(a, 2.0, z), fd), 1e-7);
    }
}

TEST(Kummer, IsOneAtZeroAndExactForAEqualsZero) {
  EXPECT_EQ(singwave::kummer_m(0.3, 2.0, 0.0), cplx(1.0));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  for (int t = 0; t < 100; ++t) EXPECT_LT(std::abs(singwave::kummer_m(0.0, 2.0, {u(rng), u(rng)}) - 1.0), 1e-14);
}

TEST(Laguerre, MatchesBoost) {
  for (int n = 0; n <= 15; ++n)
    for (double x : {0.0, 0.3, 2.0, 7.5, 20.0}) {
      const double want = boost::math::laguerre(n, 1, x);
      EXPECT_NEAR(singwave::laguerre(n, 1.0, x), want, 1e-12 * (1.0 + std::abs(want)));
      EXPECT_NEAR(singwave::laguerre_coeffs(n, 1.0)(x), want, 1e-9 * (1.0 + std::abs(want)));
    }
}

TEST(Laguerre, DerivativeIdentity) {
  for (int n = 1; n <= 8; ++n)
    for (double x : {0.5, 3.0, 9.0}) {
      const double fd = oracle::d1([&](double t) { return singwave::laguerre(n, 1.0, t); }, x, 1e-5);
      EXPECT_NEAR(singwave::laguerre_derivative(n, 1.0, x), fd, 1e-6 * (1.0 + std::abs(fd)));
    }
}

TEST(Laguerre, RootsAreZerosAndSumToTrace) {
  for (int n = 1; n <= 25; ++n) {
    const auto r = singwave::laguerre_roots(n, 1.0);
    ASSERT_EQ(static_cast<int>(r.size()), n);
    double sum = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      sum += r[i];
      EXPECT_GT(r[i], 0.0);
      if (i > 0) EXPECT_GT(r[i], r[i - 1]);
      EXPECT_LT(std::abs(singwave::laguerre(n, 1.0, r[i]) / singwave::laguerre_derivative(n, 1.0, r[i])),
                1e-12 * (1.0 + r[i]));
    }
    // trace of the Jacobi matrix: sum (2k + 2), k = 0..n-1
    EXPECT_NEAR(sum, n * (n + 1.0), 1e-9 * n * n);
  }
}

TEST(Laguerre, RootsInterlace) {
  for (int n = 2; n <= 12; ++n) {
    const auto a = singwave::laguerre_roots(n - 1, 1.0);
    const auto b = singwave::laguerre_roots(n, 1.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_LT(b[i], a[i]);
      EXPECT_LT(a[i], b[i + 1]);
    }
  }
}

TEST(PPoly, ConstantTermAndDegree) {
  for (int n = 0; n <= 12; ++n) {
    const auto p = singwave::p_poly(n);
    EXPECT_EQ(p.degree(), n);
    EXPECT_NEAR(p.constant(), 1.0, 1e-12);
  }
  // P_1(x) = sum_k (-1)^k binom(2,k+1) sum_{m<=k} (k-m)!/k! x^m = 2 - (1 + x) = 1 - x
  const auto p1 = singwave::p_poly(1);
  EXPECT_NEAR(p1.coeffs[0], 1.0, 1e-15);
  EXPECT_NEAR(p1.coeffs[1], -1.0, 1e-15);
}

TEST(ExpIntegral, RealAxisMatchesBoost) {
  for (double x : {1e-3, 0.1, 0.9, 1.9999, 2.0001, 5.0, 30.0})
    EXPECT_LT(rel(singwave::exp_integral_e1(x), boost::math::expint(1, x)), 1e-13) << x;
}

TEST(ExpIntegral, ComplexMatchesQuadrature) {
  for (cplx z : {cplx(0.5, 0.5), cplx(1.0, -1.9), cplx(0.1, 4.0), cplx(3.0, 10.0), cplx(0.02, -30.0),
                 cplx(8.0, 0.3)})
    EXPECT_LT(rel(singwave::exp_integral_e1(z), oracle::e1(z)), 1e-10) << z;
}

TEST(ExpIntegral, RejectsLeftHalfPlane) {
  EXPECT_THROW(singwave::exp_integral_e1({-1.0, 1.0}), std::domain_error);
}

TEST(SecondSolution, SolvesLaguerreEquation) {
  // xi v'' + (2 - xi) v' + n v = 0, derivatives by the trapezoidal Cauchy
  // integral on a circle of radius r, which converges geometrically
  const double r = 0.25;
  const int m = 64;
  for (int n = 0; n <= 4; ++n)
    for (cplx xi : {cplx(-0.7, 0.0), cplx(-2.0, 1.0), cplx(-4.0, -3.0), cplx(-0.3, 2.5)}) {
      cplx v0 = 0.0, v1 = 0.0, v2 = 0.0;
      double parts = 0.0;
      for (int k = 0; k < m; ++k) {
        const cplx w = std::polar(1.0, 2.0 * std::numbers::pi * k / m);
        const cplx z = xi + r * w;
        const cplx v = singwave::second_solution_v(n, z);
        parts = std::max(parts, std::abs(singwave::laguerre(n, 1.0, z) * singwave::exp_integral_e1(-z)));
        v0 += v / static_cast<double>(m);
        v1 += v / (r * w) / static_cast<double>(m);
        v2 += 2.0 * v / (r * r * w * w) / static_cast<double>(m);
      }
      const cplx res = xi * v2 + (2.0 - xi) * v1 + static_cast<double>(n) * v0;
      const double scale = (std::abs(xi) / (r * r) + std::abs(2.0 - xi) / r + n) * (parts + std::abs(v0));
      EXPECT_LT(std::abs(res) / scale, 1e-12) << "n=" << n << " xi=" << xi;
      EXPECT_LT(std::abs(v0 - singwave::second_solution_v(n, xi)), 1e-12 * (parts + std::abs(v0)));
    }
}
