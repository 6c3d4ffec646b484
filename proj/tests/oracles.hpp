#pragma once

// Reference implementations used only by the tests. They share no code with
// the library: plain multiprecision series and Boost quadrature.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

using mp_real = boost::multiprecision::cpp_bin_float_100;
using mp_cplx = boost::multiprecision::cpp_complex_100;
using cplx = std::complex<double>;

/// M(a, b, z) by its power series in 100-digit arithmetic.
inline mp_cplx kummer_mp(const mp_real& a, const mp_real& b, const mp_cplx& z) {
  mp_cplx term(1), sum(1);
  const mp_real eps("1e-90");
  for (int k = 0; k < 20000; ++k) {
    term *= (a + k) / (b + k) * z / mp_real(k + 1);
    sum += term;
    if (abs(term) < eps * abs(sum) && k > 5) break;
  }
  return sum;
}

inline cplx kummer(double a, double b, cplx z) {
  const mp_cplx r = kummer_mp(mp_real(a), mp_real(b), mp_cplx(mp_real(z.real()), mp_real(z.imag())));
  return {static_cast<double>(r.real()), static_cast<double>(r.imag())};
}

/// Zero of M(1 - alpha, 2, -2 lambda) by Newton in 100-digit arithmetic.
inline cplx eigenvalue(double alpha, cplx seed) {
  const mp_real a = 1 - mp_real(alpha);
  mp_cplx lam(mp_real(seed.real()), mp_real(seed.imag()));
  for (int it = 0; it < 60; ++it) {
    const mp_cplx f = kummer_mp(a, 2, -2 * lam);
    const mp_cplx df = -2 * (a / 2) * kummer_mp(a + 1, 3, -2 * lam);
    const mp_cplx step = f / df;
    lam -= step;
    if (abs(step) < mp_real("1e-40") * (1 + abs(lam))) break;
  }
  return {static_cast<double>(lam.real()), static_cast<double>(lam.imag())};
}

/// E1(z) = e^{-z} int_0^inf e^{-z w} / (1 + w) dw with the path w = s e^{-i arg z}
/// rotated so the exponential decays without oscillation; exp-sinh on the
/// real and imaginary parts.
inline cplx e1(cplx z) {
  boost::math::quadrature::exp_sinh<double> q;
  const double r = std::abs(z);
  const cplx dir = std::conj(z) / r;
  auto g = [=](double s) { return dir * std::exp(-r * s) / (1.0 + s * dir); };
  auto re = [&](double s) { return g(s).real(); };
  auto im = [&](double s) { return g(s).imag(); };
  return std::exp(-z) * cplx(q.integrate(re), q.integrate(im));
}

/// Adaptive Gauss-Kronrod on a complex integrand, parts separately.
inline cplx integrate(const std::function<cplx(double)>& f, double a, double b) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  auto re = [&](double x) { return f(x).real(); };
  auto im = [&](double x) { return f(x).imag(); };
  return {GK::integrate(re, a, b, 20, 1e-13), GK::integrate(im, a, b, 20, 1e-13)};
}

/// Second-order central differences.
template <class F>
auto d1(F&& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}
template <class F>
auto d2(F&& f, double x, double h) {
  return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

/// Fourth-order central differences.
template <class F>
auto d1_4(F&& f, double x, double h) {
  return (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h);
}
template <class F>
auto d2_4(F&& f, double x, double h) {
  return (-f(x - 2.0 * h) + 16.0 * f(x - h) - 30.0 * f(x) + 16.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h * h);
}

}  // namespace oracle
