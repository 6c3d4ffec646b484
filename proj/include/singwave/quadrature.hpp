#pragma once

// Thin wrappers over Boost's adaptive Gauss-Kronrod rule.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <complex>
#include <vector>

#include "singwave/error.hpp"

namespace singwave {

inline constexpr double kQuadTol = 1e-12;
inline constexpr unsigned kQuadMaxDepth = 15;

/// Adaptive G-K (61 points) of a real or complex integrand over [a, b].
template <class F>
auto integrate(F&& f, double a, double b, double tol = kQuadTol, unsigned max_depth = kQuadMaxDepth) {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 61>::integrate(f, a, b, max_depth, tol);
}

/// Integral of f over each cell [x_i, x_{i+1}] of an increasing node list,
/// with a fixed 21-point G-K rule per cell.
template <class F>
auto cell_integrals(F&& f, const std::vector<double>& nodes) {
  using boost::math::quadrature::gauss_kronrod;
  using R = decltype(f(0.0));
  std::vector<R> out(nodes.size() > 0 ? nodes.size() - 1 : 0);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
    out[i] = gauss_kronrod<double, 21>::integrate(f, nodes[i], nodes[i + 1], 0);
  return out;
}

}  // namespace singwave
