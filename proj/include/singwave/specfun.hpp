#pragma once

// Complex special functions used by the spectral and Laplace-domain code:
// Kummer's M(a,b,z), associated Laguerre polynomials, the auxiliary
// polynomials P_n, the exponential integral E1 and the second solution of
// the Laguerre equation built from them.

#include <Eigen/Eigenvalues>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "singwave/error.hpp"

namespace singwave {

/// Real polynomial stored in ascending degree order.
struct PolynomialCoeffs {
  std::vector<double> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  double leading() const { return coeffs.back(); }
  double constant() const { return coeffs.front(); }

  template <class T>
  T operator()(T x) const {
    T acc = T(0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + T(*it);
    return acc;
  }

  PolynomialCoeffs derivative() const {
    if (coeffs.size() <= 1) return {{0.0}};
    std::vector<double> d(coeffs.size() - 1);
    for (std::size_t i = 1; i < coeffs.size(); ++i) d[i - 1] = static_cast<double>(i) * coeffs[i];
    return {std::move(d)};
  }
};

namespace detail {

inline constexpr int kMaxSeriesTerms = 10000;
inline constexpr double kSeriesRelTol = 1e-17;
inline constexpr double kKummerSwitchRe = -1.0;  // apply M(a,b,z) = e^z M(b-a,b,-z) below this
inline constexpr double kAsymptoticMinAbs = 40.0;
inline constexpr double kCancellationLimit = 64.0;  // sum |t_k| / |sum t_k| accepted in double

inline bool is_nonpositive_integer(double a) { return a <= 0.0 && a == std::floor(a); }

/// 1/Gamma(x), zero at the poles.
inline double rgamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  return 1.0 / std::tgamma(x);
}

struct SeriesResult {
  cplx value;
  double abs_sum;  // sum of |t_k|, measures cancellation
  int terms;
};

inline SeriesResult kummer_series(double a, double b, cplx z) {
  cplx term{1.0, 0.0};
  cplx sum{1.0, 0.0};
  double abs_sum = 1.0;
  int small = 0;
  for (int k = 0; k < kMaxSeriesTerms; ++k) {
    term *= (a + k) / ((b + k) * (k + 1.0)) * z;
    const double m = std::abs(term);
    if (m == 0.0) return {sum, abs_sum, k + 1};
    sum += term;
    abs_sum += m;
    if (m < kSeriesRelTol * std::abs(sum)) {
      if (++small == 3) return {sum, abs_sum, k + 1};
    } else {
      small = 0;
    }
  }
  throw convergence_error("Kummer series did not converge", std::abs(z), kMaxSeriesTerms);
}

/// The same power series summed in Digits-decimal floating point, for
/// arguments where the double sum cancels catastrophically.
template <unsigned Digits>
cplx kummer_series_mp(double a, double b, cplx z) {
  using Real = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<Digits>>;
  const Real ra(a), rb(b), zr(z.real()), zi(z.imag());
  Real tr(1), ti(0), sr(1), si(0);
  int small = 0;
  for (int k = 0; k < kMaxSeriesTerms; ++k) {
    const Real ratio = (ra + k) / ((rb + k) * Real(k + 1));
    const Real nr = (tr * zr - ti * zi) * ratio;
    const Real ni = (tr * zi + ti * zr) * ratio;
    tr = nr;
    ti = ni;
    if (tr == 0 && ti == 0) break;
    sr += tr;
    si += ti;
    const double m = std::hypot(static_cast<double>(tr), static_cast<double>(ti));
    const double s = std::hypot(static_cast<double>(sr), static_cast<double>(si));
    if (m < 1e-24 * std::max(s, 1.0)) {
      if (++small == 3) break;
    } else {
      small = 0;
    }
    if (k + 1 == kMaxSeriesTerms)
      throw convergence_error("extended-precision Kummer series did not converge", std::abs(z),
                              kMaxSeriesTerms);
  }
  return {static_cast<double>(sr), static_cast<double>(si)};
}

struct AsymptoticSum {
  cplx value;
  double error;  // magnitude of the first neglected term
};

// sum_s (p)_s (q)_s / s! * w^s, truncated at the smallest term
inline AsymptoticSum asymptotic_sum(double p, double q, cplx w) {
  cplx term{1.0, 0.0};
  cplx sum{1.0, 0.0};
  double prev = 1.0;
  for (int s = 0; s < 2000; ++s) {
    term *= (p + s) * (q + s) / (s + 1.0) * w;
    const double m = std::abs(term);
    if (m == 0.0) return {sum, 0.0};
    if (m > prev) return {sum, prev};
    sum += term;
    prev = m;
    if (m < kSeriesRelTol * std::abs(sum)) return {sum, m};
  }
  return {sum, prev};
}

/// Large-|z| expansion of M(a,b,z) for -pi/2 - small <= arg z <= pi/2 + small.
/// Returns nullopt when the optimally truncated expansion is not accurate to
/// about 1e-15 of the larger of its two contributions.
inline std::optional<cplx> kummer_asymptotic(double a, double b, cplx z) {
  const cplx log_z = std::log(z);
  const double gb = std::tgamma(b);
  // Stokes multiplier exp(+-i pi a) for the algebraic contribution.
  const double pa = std::numbers::pi * a;
  const cplx stokes = z.imag() > 0.0   ? cplx(std::cos(pa), std::sin(pa))
                      : z.imag() < 0.0 ? cplx(std::cos(pa), -std::sin(pa))
                                       : cplx(std::cos(pa), 0.0);

  const auto s1 = asymptotic_sum(a, a - b + 1.0, -1.0 / z);
  const auto s2 = asymptotic_sum(1.0 - a, b - a, 1.0 / z);
  const cplx pre1 = gb * rgamma(b - a) * stokes * std::exp(-a * log_z);
  const cplx pre2 = gb * rgamma(a) * std::exp(z + (a - b) * log_z);
  const double scale = std::max(std::abs(pre1 * s1.value), std::abs(pre2 * s2.value));
  const double err = std::abs(pre1) * s1.error + std::abs(pre2) * s2.error;
  if (!(err <= 1e-15 * scale)) return std::nullopt;
  return pre1 * s1.value + pre2 * s2.value;
}

inline cplx kummer_m_right(double a, double b, cplx z) {
  const double az = std::abs(z);
  if (az >= kAsymptoticMinAbs) {
    if (auto v = kummer_asymptotic(a, b, z)) return *v;
  }
  const auto s = kummer_series(a, b, z);
  if (s.abs_sum <= kCancellationLimit * std::abs(s.value)) return s.value;
  if (az <= 70.0) return kummer_series_mp<50>(a, b, z);
  if (az <= 220.0) return kummer_series_mp<120>(a, b, z);
  throw convergence_error("Kummer M: no accurate method for this argument", az, s.terms);
}

}  // namespace detail

/// Kummer's confluent hypergeometric function M(a,b,z) (b not a non-positive integer).
///
/// Power series with a term recurrence; Kummer's transformation for
/// Re z < -1; the two-sided asymptotic expansion for |z| >= 40 when it is
/// accurate; the series in extended precision when the double sum cancels.
inline cplx kummer_m(double a, double b, cplx z) {
  if (detail::is_nonpositive_integer(b))
    throw std::domain_error("kummer_m: b must not be a non-positive integer");
  if (z == cplx(0.0, 0.0)) return {1.0, 0.0};
  if (z.real() < detail::kKummerSwitchRe) return std::exp(z) * detail::kummer_m_right(b - a, b, -z);
  return detail::kummer_m_right(a, b, z);
}

/// dM/dz = (a/b) M(a+1, b+1, z), the term-wise derivative of the series.
inline cplx kummer_m_derivative(double a, double b, cplx z) {
  if (a == 0.0) return {0.0, 0.0};
  return (a / b) * kummer_m(a + 1.0, b + 1.0, z);
}

/// Associated Laguerre polynomial L_n^(beta)(x) by the three-term recurrence.
template <class T>
T laguerre(int n, double beta, T x) {
  if (n < 0) throw std::domain_error("laguerre: negative degree");
  T prev = T(1);
  if (n == 0) return prev;
  T cur = T(1.0 + beta) - x;
  for (int k = 1; k < n; ++k) {
    T next = ((T(2.0 * k + 1.0 + beta) - x) * cur - T(k + beta) * prev) / T(k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// d/dx L_n^(beta)(x) = -L_{n-1}^(beta+1)(x).
template <class T>
T laguerre_derivative(int n, double beta, T x) {
  if (n == 0) return T(0);
  return -laguerre(n - 1, beta + 1.0, x);
}

/// Coefficients of L_n^(beta): (-1)^m binom(n+beta, n-m) / m!.
inline PolynomialCoeffs laguerre_coeffs(int n, double beta) {
  if (n < 0) throw std::domain_error("laguerre_coeffs: negative degree");
  std::vector<double> c(n + 1);
  for (int m = 0; m <= n; ++m) {
    // binom(n+beta, n-m) = Gamma(n+beta+1) / (Gamma(n-m+1) Gamma(m+beta+1))
    const double binom = std::exp(std::lgamma(n + beta + 1.0) - std::lgamma(n - m + 1.0) -
                                  std::lgamma(m + beta + 1.0));
    c[m] = (m % 2 ? -1.0 : 1.0) * std::round(binom) / std::tgamma(m + 1.0);
  }
  return {std::move(c)};
}

/// Zeros of L_n^(beta), ascending. Eigenvalues of the symmetric Jacobi
/// matrix of the generalized Laguerre weight, polished by Newton steps on
/// the recurrence.
inline std::vector<double> laguerre_roots(int n, double beta) {
  if (n < 0) throw std::domain_error("laguerre_roots: negative degree");
  if (n == 0) return {};
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int k = 0; k < n; ++k) diag[k] = 2.0 * k + beta + 1.0;
  for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(k * (k + beta));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw numeric_error("laguerre_roots: eigensolver failed");
  std::vector<double> roots(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  for (double& x : roots) {
    for (int it = 0; it < 3; ++it) {
      const double d = laguerre(n, beta, x) / laguerre_derivative(n, beta, x);
      x -= d;
      if (std::abs(d) <= 1e-16 * std::abs(x)) break;
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

/// P_n(x) = sum_k (-1)^k binom(n+1,k+1) sum_{m<=k} (k-m)!/k! x^m.
inline PolynomialCoeffs p_poly(int n) {
  if (n < 0) throw std::domain_error("p_poly: negative degree");
  std::vector<double> c(n + 1, 0.0);
  for (int k = 0; k <= n; ++k) {
    const double sign = k % 2 ? -1.0 : 1.0;
    const double binom = std::round(std::exp(std::lgamma(n + 2.0) - std::lgamma(k + 2.0) -
                                             std::lgamma(n - k + 1.0)));
    // (k-m)!/k! built as a running product from m = 0 upwards
    double ratio = 1.0;
    for (int m = 0; m <= k; ++m) {
      c[m] += sign * binom * ratio;
      if (m < k) ratio /= static_cast<double>(k - m);
    }
  }
  return {std::move(c)};
}

/// Exponential integral E1(z) = int_1^inf e^{-tz}/t dt for Re z > 0.
inline cplx exp_integral_e1(cplx z) {
  if (!(z.real() > 0.0)) throw std::domain_error("exp_integral_e1: requires Re z > 0");
  if (std::abs(z) <= 2.0) {
    // -gamma - log z - sum_{k>=1} (-z)^k / (k k!)
    cplx term{1.0, 0.0};
    cplx sum{0.0, 0.0};
    for (int k = 1; k < 200; ++k) {
      term *= -z / static_cast<double>(k);
      const cplx add = term / static_cast<double>(k);
      sum += add;
      if (std::abs(add) < 1e-17 * std::abs(sum)) break;
    }
    return -std::numbers::egamma - std::log(z) - sum;
  }
  // Modified Lentz evaluation of e^{-z} / (z+1 - 1/(z+3 - 4/(z+5 - ...)))
  constexpr double tiny = 1e-300;
  cplx b = z + 1.0;
  cplx c = 1.0 / tiny;
  cplx d = 1.0 / b;
  cplx h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const cplx del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) return h * std::exp(-z);
  }
  throw convergence_error("E1 continued fraction did not converge", std::abs(z), 100000);
}

/// Second solution of xi v'' + (2 - xi) v' + n v = 0 that is independent of
/// L_n^(1): v(xi) = P_n(xi) e^xi / xi + L_n^(1)(xi) E1(-xi), for Re(-xi) > 0.
inline cplx second_solution_v(int n, cplx xi) {
  if (xi == cplx(0.0, 0.0)) throw std::domain_error("second_solution_v: singular at xi = 0");
  const PolynomialCoeffs p = p_poly(n);
  return p(xi) * std::exp(xi) / xi + laguerre(n, 1.0, xi) * exp_integral_e1(-xi);
}

}  // namespace singwave
