#pragma once

// Laplace-domain solution for integer alpha = n + 1. With r(x,tau) =
// tau u0 + u1 + 2(n+1) u0 / x the transform U solves
//     -U'' + tau^2 U + (2(n+1) tau / x) U = r,  U(0) = U(1) = 0,
// and splits as U = U1 + U2, U1 entire in tau, U2 carrying the poles mu_k.

#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>
#include <stdexcept>
#include <vector>

#include "singwave/error.hpp"
#include "singwave/evolution.hpp"
#include "singwave/initial_data.hpp"
#include "singwave/quadrature.hpp"
#include "singwave/specfun.hpp"
#include "singwave/spectrum.hpp"

namespace singwave {

inline constexpr double kPoleProximity = 1e-8;
inline constexpr double kMaxCell = 1.0 / 256;  // widest quadrature cell in solve_laplace_U

struct PartialFractions {
  int n = 0;
  std::vector<double> poles;   // mu_k, ascending
  std::vector<double> coeffs;  // a_k

  /// 1 + sum a_k / (tau - mu_k).
  cplx operator()(cplx tau) const {
    cplx s = 1.0;
    for (std::size_t k = 0; k < poles.size(); ++k) s += coeffs[k] / (tau - poles[k]);
    return s;
  }
};

/// P_n(-2 tau) / L_n^(1)(-2 tau) = 1 + sum a_k / (tau - mu_k), residues
/// a_k = P_n(-2 mu_k) / (-2 L_n^(1)'(-2 mu_k)).
inline PartialFractions partial_fractions(int n) {
  if (n < 1) throw std::invalid_argument("partial_fractions: n must be >= 1");
  PartialFractions pf;
  pf.n = n;
  const auto P = p_poly(n);
  for (const auto& m : laguerre_modes(n)) {
    const double z = -2.0 * m.mu;
    const double a = P(z) / (-2.0 * laguerre_derivative(n, 1.0, z));
    if (!(std::abs(a) > 1e-12))
      throw numeric_error("partial_fractions: vanishing coefficient at mu = " + std::to_string(m.mu));
    pf.poles.push_back(m.mu);
    pf.coeffs.push_back(a);
  }
  return pf;
}

/// Left-hand side minus right-hand side of the partial-fraction identity.
inline cplx partial_fraction_residual(const PartialFractions& pf, cplx tau) {
  const auto P = p_poly(pf.n);
  return P(-2.0 * tau) / laguerre(pf.n, 1.0, -2.0 * tau) - pf(tau);
}

/// r(x, tau) = tau u0 + u1 + 2(n+1) u0 / x.
inline cplx laplace_rhs(const InitialData& d, int n, double x, cplx tau) {
  const double u0 = d.u0(x);
  return tau * u0 + d.u1(x) + 2.0 * (n + 1) * u0 / x;
}

/// y_L(x) = x e^{tau x} L_n^(1)(-2 tau x), the solution vanishing at 0.
inline cplx y_left(int n, double x, cplx tau) {
  return x * std::exp(tau * x) * laguerre(n, 1.0, -2.0 * tau * x);
}

/// v(xi) = P_n(xi) e^xi / xi + L_n^(1)(xi) E1(-xi), Re(-xi) > 0.
inline cplx y_right(int n, double x, cplx tau) {
  const cplx yl1 = y_left(n, 1.0, tau);
  return y_left(n, x, tau) * std::exp(tau) * second_solution_v(n, -2.0 * tau) -
         x * std::exp(tau * x) * yl1 * second_solution_v(n, -2.0 * tau * x);
}

/// W[y_L, y_R] = (n+1) L_n^(1)(-2 tau) / (2 tau e^{-tau}) with the
/// convention W[f, g] = f' g - f g'.
inline cplx wronskian_closed_form(int n, cplx tau) {
  return (n + 1.0) * laguerre(n, 1.0, -2.0 * tau) / (2.0 * tau * std::exp(-tau));
}

/// int_x^1 e^{-2 tau s} / s ds: E1 differences for Re tau > 0; otherwise the
/// entire series -ln x + sum (-2 tau)^k (1 - x^k) / (k k!) for |tau| <= 4 and
/// quadrature in u = ln s beyond.
inline cplx exp_over_s_integral(cplx tau, double x) {
  if (x >= 1.0) return 0.0;
  if (tau.real() > 0.0) return exp_integral_e1(2.0 * tau * x) - exp_integral_e1(2.0 * tau);
  if (std::abs(tau) <= 4.0) {
    cplx sum = -std::log(x);
    cplx term = 1.0;
    double xk = 1.0;
    for (int k = 1; k < 200; ++k) {
      term *= -2.0 * tau / static_cast<double>(k);
      xk *= x;
      const cplx add = term * (1.0 - xk) / static_cast<double>(k);
      sum += add;
      if (std::abs(add) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
  }
  return integrate([tau](double u) { return std::exp(-2.0 * tau * std::exp(u)); }, std::log(x), 0.0);
}

/// Bracket of the G1 kernel:
/// e^{-tau x} P_n(-2 tau x) - x e^{tau x} L_n^(1)(-2 tau x) (2 tau int_x^1 e^{-2 tau s}/s ds + e^{-2 tau}).
inline cplx green_bracket(int n, const PolynomialCoeffs& P, double x, cplx tau) {
  const cplx z = -2.0 * tau * x;
  if (x == 0.0) return P(z);
  return std::exp(-tau * x) * P(z) - x * std::exp(tau * x) * laguerre(n, 1.0, z) *
                                         (2.0 * tau * exp_over_s_integral(tau, x) + std::exp(-2.0 * tau));
}

/// G1(x, y, tau) = y_L(y) * bracket(x) / (n+1) for 0 < y <= x < 1, Re tau > 0.
inline cplx green_g1(int n, double x, double y, cplx tau) {
  if (!(tau.real() > 0.0)) throw std::domain_error("green_g1: requires Re tau > 0");
  if (!(y > 0.0 && y <= x && x < 1.0)) throw std::invalid_argument("green_g1: requires 0 < y <= x < 1");
  return y_left(n, y, tau) * green_bracket(n, p_poly(n), x, tau) / (n + 1.0);
}

/// G2(x, y, tau) = -(1/(n+1)) x y e^{tau(x+y-2)} L_n^(1)(-2 tau x) L_n^(1)(-2 tau y).
inline cplx green_g2(int n, double x, double y, cplx tau) {
  return -x * y * std::exp(tau * (x + y - 2.0)) * laguerre(n, 1.0, -2.0 * tau * x) *
         laguerre(n, 1.0, -2.0 * tau * y) / (n + 1.0);
}

/// U(x, tau) = U1 + U2 on x_grid (points in [0,1]). The G1 integrals are
/// accumulated cell by cell (fixed 21-point G-K) over the sorted grid and the
/// data breakpoints, refined to cells no wider than kMaxCell.
inline std::vector<cplx> solve_laplace_U(const InitialData& d, int n, cplx tau,
                                         const std::vector<double>& x_grid) {
  if (n < 0) throw std::invalid_argument("solve_laplace_U: n must be >= 0");
  PartialFractions pf;
  if (n >= 1) {
    pf = partial_fractions(n);
    for (double mu : pf.poles)
      if (std::abs(tau - mu) < kPoleProximity)
        throw numeric_error("solve_laplace_U: tau within 1e-8 of the pole " + std::to_string(mu));
  }
  for (double x : x_grid)
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("solve_laplace_U: grid outside [0,1]");

  std::vector<double> nodes{0.0, 1.0};
  nodes.insert(nodes.end(), x_grid.begin(), x_grid.end());
  nodes.insert(nodes.end(), d.breaks.begin(), d.breaks.end());
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  std::vector<double> fine{0.0};
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const int parts = static_cast<int>(std::ceil((nodes[i + 1] - nodes[i]) / kMaxCell));
    for (int j = 1; j <= parts; ++j)
      fine.push_back(j == parts ? nodes[i + 1] : nodes[i] + j * (nodes[i + 1] - nodes[i]) / parts);
  }
  nodes = std::move(fine);

  const auto P = p_poly(n);
  auto r = [&](double y) { return laplace_rhs(d, n, y, tau); };
  auto left = [&](double y) { return y_left(n, y, tau) * r(y); };
  auto right = [&](double y) { return green_bracket(n, P, y, tau) * r(y); };

  const std::size_t m = nodes.size();
  const auto cl = cell_integrals(left, nodes);
  const auto cr = cell_integrals(right, nodes);
  std::vector<cplx> IL(m, 0.0), J(m, 0.0);
  for (std::size_t i = 0; i + 1 < m; ++i) IL[i + 1] = IL[i] + cl[i];
  for (std::size_t i = m - 1; i > 0; --i) J[i - 1] = J[i] + cr[i - 1];

  cplx S = 0.0;
  for (std::size_t k = 0; k < pf.poles.size(); ++k) S += pf.coeffs[k] / (tau - pf.poles[k]);

  std::vector<cplx> U;
  U.reserve(x_grid.size());
  for (double x : x_grid) {
    const std::size_t i = static_cast<std::size_t>(std::lower_bound(nodes.begin(), nodes.end(), x) - nodes.begin());
    const cplx u1 = (green_bracket(n, P, x, tau) * IL[i] + y_left(n, x, tau) * J[i]) / (n + 1.0);
    const cplx u2 = -S * x * std::exp(tau * (x - 2.0)) * laguerre(n, 1.0, -2.0 * tau * x) * IL[m - 1] / (n + 1.0);
    U.push_back(u1 + u2);
  }
  return U;
}

/// Explicit transform at alpha = 1:
///   U = x int_x^1 u0(r)/r e^{tau(x-r)} dr
///     + x int_x^1 r^{-2} int_0^r (u0(s) - s u0'(s) + s u1(s)) e^{tau(x-2r+s)} ds dr.
inline cplx laplace_U_alpha1(const InitialData& d, double x, cplx tau) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  auto first = [&](double r) { return cplx(d.u0(r) / r) * std::exp(tau * (x - r)); };
  auto inner = [&](double r) {
    auto g = [&](double s) { return cplx(d.u0(s) - s * d.du0(s) + s * d.u1(s)) * std::exp(tau * (s - r)); };
    return integrate(g, 0.0, r) / (r * r) * std::exp(tau * (x - r));
  };
  return x * (integrate(first, x, 1.0) + integrate(inner, x, 1.0));
}

/// Which inner product enters the tail coefficients.
enum class TailPairing {
  resolvent,  // <r(., mu_k), f_k>_{L2}, as produced by inverting the G2 term
  energy,     // -<(u0,u1),(f_k,-mu_k f_k)>_H / mu_k, the same number via integration by parts
};

/// Coefficient c_k with u2 = -sum a_k / (n+1) e^{mu_k (t-2)} f_k(x) c_k.
inline std::vector<double> tail_coefficients(const InitialData& d, int n,
                                             TailPairing pairing = TailPairing::energy) {
  std::vector<double> c;
  const SpectralProblem p(n + 1.0);
  for (const auto& m : real_modes(p)) {
    if (pairing == TailPairing::energy) {
      c.push_back(-energy_pairing(d, m) / m.mu);
    } else {
      std::vector<double> pts{0.0, 1.0};
      pts.insert(pts.end(), d.breaks.begin(), d.breaks.end());
      std::sort(pts.begin(), pts.end());
      c.push_back(integrate_piecewise(
          [&](double x) { return laplace_rhs(d, n, x, m.mu).real() * m(x); }, pts));
    }
  }
  return c;
}

/// Post-extinction tail u2(x, t), t > 2.
inline std::vector<double> tail_u2(const InitialData& d, int n, double t, const std::vector<double>& x_grid,
                                   TailPairing pairing = TailPairing::energy) {
  if (!(t > 2.0)) throw std::invalid_argument("tail_u2: requires t > 2");
  std::vector<double> u(x_grid.size(), 0.0);
  if (n < 1) return u;
  const auto pf = partial_fractions(n);
  const auto c = tail_coefficients(d, n, pairing);
  const auto modes = real_modes(SpectralProblem(n + 1.0));
  for (std::size_t k = 0; k < modes.size(); ++k) {
    const double w = -pf.coeffs[k] / (n + 1.0) * std::exp(modes[k].mu * (t - 2.0)) * c[k];
    for (std::size_t i = 0; i < x_grid.size(); ++i) u[i] += w * modes[k](x_grid[i]);
  }
  return u;
}

/// Relative error of each snapshot with t > 2 against tail_u2, as (t, error).
inline std::vector<std::pair<double, double>> tail_match_error(const InitialData& d, int n,
                                                               const SimulationRun& run) {
  std::vector<std::pair<double, double>> out;
  const auto xs = run.grid.nodes();
  for (const auto& s : run.snapshots)
    if (s.t > 2.0) out.emplace_back(s.t, relative_l2(s.state.u, tail_u2(d, n, s.t, xs)));
  return out;
}

}  // namespace singwave
