#pragma once

// Numerical checks of the inequalities and identities the other modules rely on.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "singwave/error.hpp"
#include "singwave/evolution.hpp"
#include "singwave/initial_data.hpp"
#include "singwave/laplace.hpp"
#include "singwave/spline.hpp"

namespace singwave {

// ---------------------------------------------------------------------------
// Hardy inequality: int psi^2 / x^2 <= 4 int psi'^2 for psi(0) = 0.

struct HardyResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio() const { return rhs > 0.0 ? lhs / rhs : 0.0; }
  bool holds() const { return lhs <= rhs * (1.0 + 1e-6); }
};

template <class F, class DF>
HardyResult hardy_check(F&& psi, DF&& dpsi, const std::vector<double>& breaks = {}) {
  std::vector<double> pts{0.0, 1.0};
  pts.insert(pts.end(), breaks.begin(), breaks.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  HardyResult r;
  r.lhs = integrate_piecewise([&](double x) { const double p = psi(x) / x; return p * p; }, pts);
  r.rhs = 4.0 * integrate_piecewise([&](double x) { const double d = dpsi(x); return d * d; }, pts);
  return r;
}

inline HardyResult hardy_check(const CubicSpline& s) {
  const auto& k = s.knots();
  return hardy_check([&](double x) { return s(x); }, [&](double x) { return s.derivative(x); },
                     std::vector<double>(k.begin() + 1, k.end() - 1));
}

/// Natural cubic spline through `knots` uniform knots with N(0,1) interior
/// values and zeros at both ends.
inline CubicSpline random_spline(std::mt19937_64& rng, int knots = 9) {
  std::normal_distribution<double> nd;
  std::vector<double> x(knots), y(knots, 0.0);
  for (int i = 0; i < knots; ++i) x[i] = static_cast<double>(i) / (knots - 1);
  for (int i = 1; i + 1 < knots; ++i) y[i] = nd(rng);
  return CubicSpline(x, y);
}

struct HardySweep {
  int trials = 0;
  int failures = 0;
  double worst_ratio = 0.0;
  std::uint64_t seed = 0;
};

inline HardySweep hardy_sweep(int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  HardySweep out{trials, 0, 0.0, seed};
  for (int t = 0; t < trials; ++t) {
    const auto r = hardy_check(random_spline(rng));
    out.worst_ratio = std::max(out.worst_ratio, r.ratio());
    if (!r.holds()) ++out.failures;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Resolvent lower bound ||(G - tau) w||_H >= (alpha - sigma) / (1 + 3 alpha / |eta|),
// tau = -sigma + i eta, ||w||_H = 1.

inline double resolvent_bound(double alpha, double sigma, double eta) {
  return (alpha - sigma) / (1.0 + 3.0 * alpha / std::abs(eta));
}

struct ResolventResult {
  double bound = 0.0;
  double worst_ratio = 0.0;  // min over witnesses of ||(G - tau) w||_H / bound
  double worst_residual = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
};

namespace detail {

inline double complex_energy(const Grid& g, const std::vector<cplx>& u, const std::vector<cplx>& v) {
  double e = 0.0;
  cplx prev = 0.0;
  for (int i = 0; i <= g.N; ++i) {
    const cplx cur = i < g.N ? u[i] : cplx(0.0);
    e += std::norm(cur - prev);
    prev = cur;
  }
  e /= g.h;
  for (const auto& vi : v) e += g.h * std::norm(vi);
  return e;
}

}  // namespace detail

/// Discrete check with `trials` random complex spline witnesses on an N-point grid.
inline ResolventResult resolvent_bound_check(double alpha, double sigma, double eta, int trials, int N = 1000,
                                             std::uint64_t seed = 1) {
  if (!(sigma > 0.0 || sigma == 0.0) || !(sigma < alpha))
    throw std::invalid_argument("resolvent_bound_check: requires 0 <= sigma < alpha");
  if (eta == 0.0) throw std::invalid_argument("resolvent_bound_check: requires eta != 0");
  const Grid g(N);
  const cplx tau(-sigma, eta);
  ResolventResult out;
  out.bound = resolvent_bound(alpha, sigma, eta);
  out.trials = trials;
  out.seed = seed;
  out.worst_ratio = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  const double ih2 = 1.0 / (g.h * g.h);
  for (int t = 0; t < trials; ++t) {
    const auto a = random_spline(rng), b = random_spline(rng), c = random_spline(rng), d = random_spline(rng);
    std::vector<cplx> w1(N), w2(N);
    for (int i = 0; i < N; ++i) {
      const double x = g.x(i);
      w1[i] = {a(x), b(x)};
      w2[i] = {c(x), d(x)};
    }
    const double nrm = std::sqrt(detail::complex_energy(g, w1, w2));
    for (int i = 0; i < N; ++i) {
      w1[i] /= nrm;
      w2[i] /= nrm;
    }
    std::vector<cplx> r1(N), r2(N);
    for (int i = 0; i < N; ++i) {
      const cplx left = i > 0 ? w1[i - 1] : cplx(0.0);
      const cplx right = i + 1 < N ? w1[i + 1] : cplx(0.0);
      r1[i] = w2[i] - tau * w1[i];
      r2[i] = (left - 2.0 * w1[i] + right) * ih2 - 2.0 * alpha / g.x(i) * w2[i] - tau * w2[i];
    }
    const double res = std::sqrt(detail::complex_energy(g, r1, r2));
    const double ratio = res / out.bound;
    if (ratio < out.worst_ratio) {
      out.worst_ratio = ratio;
      out.worst_residual = res;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Gupta bound: the eigenvalue closest to zero at alpha = n + 1 satisfies |mu| <= 3/(2+n).

struct GuptaRow {
  int n;
  double mu;     // largest (closest to zero) eigenvalue
  double bound;  // 3 / (2 + n)
  double margin() const { return bound - std::abs(mu); }
};

inline std::vector<GuptaRow> gupta_bound_check(int n_max) {
  if (n_max < 1) throw std::invalid_argument("gupta_bound_check: n_max must be >= 1");
  std::vector<GuptaRow> rows;
  for (int n = 1; n <= n_max; ++n) {
    const auto modes = laguerre_modes(n);
    GuptaRow row{n, modes.back().mu, 3.0 / (2.0 + n)};
    // equality at n = 1 is exact up to rounding in the root
    if (row.margin() < -1e-12) {
      std::ostringstream os;
      os << "Gupta bound violated at n = " << n << ": |mu| = " << std::abs(row.mu) << " > " << row.bound;
      throw numeric_error(os.str());
    }
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Pairing identity between the energy inner product and <r(., mu_k), f_k>.

struct LemmaRow {
  int k;
  double mu;
  double energy;     // <(u0,u1),(f_k,-mu_k f_k)>_H
  double resolvent;  // <r(., mu_k), f_k>_{L2}
};

struct LemmaResult {
  std::vector<LemmaRow> rows;
  double data_norm = 0.0;  // ||(u0,u1)||_H
  /// max_k |energy - resolvent|, the identity as printed
  double literal_discrepancy() const {
    double m = 0.0;
    for (const auto& r : rows) m = std::max(m, std::abs(r.energy - r.resolvent));
    return m;
  }
  /// max_k |energy + mu_k resolvent|, the identity with the factor -mu_k that
  /// integration by parts produces
  double corrected_discrepancy() const {
    double m = 0.0;
    for (const auto& r : rows) m = std::max(m, std::abs(r.energy + r.mu * r.resolvent));
    return m;
  }
};

inline LemmaResult lemma_condition_identity(const InitialData& d, int n) {
  if (n < 1) throw std::invalid_argument("lemma_condition_identity: n must be >= 1");
  LemmaResult out;
  out.data_norm = h_norm(d);
  const auto e = projection_condition(d, n);
  const auto r = tail_coefficients(d, n, TailPairing::resolvent);
  const auto modes = real_modes(SpectralProblem(n + 1.0));
  for (int k = 0; k < n; ++k) out.rows.push_back({k + 1, modes[k].mu, e[k], r[k]});
  return out;
}

}  // namespace singwave
