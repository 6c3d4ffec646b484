#pragma once

// Initial data (u0, u1) for the damped wave equation and the energy-space
// inner product <(a0,a1),(b0,b1)>_H = int a0' b0' + int a1 b1.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "singwave/error.hpp"
#include "singwave/quadrature.hpp"
#include "singwave/specfun.hpp"
#include "singwave/spectrum.hpp"
#include "singwave/spline.hpp"

namespace singwave {

struct InitialData {
  std::string name;
  std::function<double(double)> u0;
  std::function<double(double)> du0;  // u0'
  std::function<double(double)> u1;
  std::vector<double> breaks;  // interior points where the data are not smooth
};

/// Breakpoints of both arguments merged with 0 and 1.
inline std::vector<double> merged_breaks(const InitialData& a, const InitialData& b) {
  std::vector<double> pts{0.0, 1.0};
  pts.insert(pts.end(), a.breaks.begin(), a.breaks.end());
  pts.insert(pts.end(), b.breaks.begin(), b.breaks.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

/// Integral over [0,1] split at the given breakpoints.
template <class F>
double integrate_piecewise(F&& f, const std::vector<double>& pts) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) s += integrate(f, pts[i], pts[i + 1]);
  return s;
}

inline double h_inner(const InitialData& a, const InitialData& b) {
  const auto pts = merged_breaks(a, b);
  return integrate_piecewise([&](double x) { return a.du0(x) * b.du0(x) + a.u1(x) * b.u1(x); }, pts);
}

inline double h_norm(const InitialData& a) { return std::sqrt(std::max(0.0, h_inner(a, a))); }

/// ca * a + cb * b.
inline InitialData combine(double ca, const InitialData& a, double cb, const InitialData& b) {
  InitialData out;
  out.name = a.name + "+" + b.name;
  out.u0 = [=, f = a.u0, g = b.u0](double x) { return ca * f(x) + cb * g(x); };
  out.du0 = [=, f = a.du0, g = b.du0](double x) { return ca * f(x) + cb * g(x); };
  out.u1 = [=, f = a.u1, g = b.u1](double x) { return ca * f(x) + cb * g(x); };
  out.breaks = merged_breaks(a, b);
  out.breaks.erase(out.breaks.begin());
  out.breaks.pop_back();
  return out;
}

inline InitialData zero_data() {
  auto z = [](double) { return 0.0; };
  return {"zero", z, z, z, {}};
}

/// u0 = sin(m pi x), u1 = 0.
inline InitialData sine_data(int m) {
  if (m < 1) throw config_error("sine preset: m must be >= 1");
  const double w = m * std::numbers::pi;
  return {"sine:" + std::to_string(m), [w](double x) { return std::sin(w * x); },
          [w](double x) { return w * std::cos(w * x); }, [](double) { return 0.0; }, {}};
}

/// Smooth bump supported in (0.2, 0.8): u0 = exp(1 - 1/(1 - s^2)), s = (x - 0.5)/0.3, u1 = 0.
inline InitialData bump_data() {
  constexpr double c = 0.5, w = 0.3;
  auto u0 = [](double x) {
    const double s = (x - c) / w;
    return std::abs(s) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - s * s)) : 0.0;
  };
  auto du0 = [](double x) {
    const double s = (x - c) / w;
    if (std::abs(s) >= 1.0) return 0.0;
    const double q = 1.0 - s * s;
    return std::exp(1.0 - 1.0 / q) * (-2.0 * s / (q * q)) / w;
  };
  return {"bump", u0, du0, [](double) { return 0.0; }, {c - w, c + w}};
}

/// Real eigenfunction f(x) = x e^{mu x} M(1 - alpha, 2, -2 mu x) and its derivative
/// for a real eigenvalue mu (Laguerre form at integer alpha).
struct RealMode {
  double alpha = 0.0;
  double mu = 0.0;
  std::optional<int> n;

  double operator()(double x) const {
    if (n) return LaguerreMode{*n, mu}(x);
    return x * std::exp(mu * x) * kummer_m(1.0 - alpha, 2.0, cplx(-2.0 * mu * x, 0.0)).real();
  }
  double derivative(double x) const {
    if (n) return LaguerreMode{*n, mu}.derivative(x);
    const double z = -2.0 * mu * x;
    const double m = kummer_m(1.0 - alpha, 2.0, cplx(z, 0.0)).real();
    const double dm = kummer_m_derivative(1.0 - alpha, 2.0, cplx(z, 0.0)).real();
    return std::exp(mu * x) * ((1.0 + mu * x) * m - 2.0 * mu * x * dm);
  }
};

/// Real modes of the problem, ascending in mu.
inline std::vector<RealMode> real_modes(const SpectralProblem& p) {
  std::vector<RealMode> out;
  if (p.integer_n) {
    for (const auto& m : laguerre_modes(*p.integer_n)) out.push_back({p.alpha, m.mu, p.integer_n});
    return out;
  }
  if (p.real_eigenvalue_count() == 0) return out;
  for (const auto& ev : find_eigenvalues(p, 1, 1.0))
    if (ev.branch == Branch::real) out.push_back({p.alpha, ev.value.real(), std::nullopt});
  return out;
}

/// <(u0,u1),(f,-mu f)>_H = <u0',f'> - mu <u1,f> for a real mode.
inline double energy_pairing(const InitialData& d, const RealMode& m) {
  std::vector<double> pts{0.0, 1.0};
  pts.insert(pts.end(), d.breaks.begin(), d.breaks.end());
  std::sort(pts.begin(), pts.end());
  return integrate_piecewise(
      [&](double x) { return d.du0(x) * m.derivative(x) - m.mu * d.u1(x) * m(x); }, pts);
}

/// Standing wave data (f_k, mu_k f_k) for the k-th real eigenvalue.
inline InitialData mode_data(const SpectralProblem& p, int k) {
  const auto modes = real_modes(p);
  if (k < 1 || k > static_cast<int>(modes.size()))
    throw config_error("mode preset: alpha = " + std::to_string(p.alpha) + " has " +
                       std::to_string(modes.size()) + " real eigenvalue(s), requested k = " +
                       std::to_string(k));
  const RealMode m = modes[k - 1];
  return {"mode:" + std::to_string(k), [m](double x) { return m(x); },
          [m](double x) { return m.derivative(x); }, [m](double x) { return m.mu * m(x); }, {}};
}

/// Spline-interpolated data through samples; Dirichlet zeros are added at
/// x = 0 and x = 1 when those endpoints are missing.
inline InitialData spline_data(std::vector<double> x, std::vector<double> u0, std::vector<double> u1,
                               std::string name = "spline") {
  if (x.size() != u0.size() || x.size() != u1.size())
    throw config_error("initial data: column lengths differ");
  if (x.empty()) throw config_error("initial data: no rows");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < 0.0 || x[i] > 1.0) throw config_error("initial data: x outside [0,1]");
    if (i > 0 && !(x[i] > x[i - 1])) throw config_error("initial data: x must be strictly increasing");
  }
  if (x.front() > 0.0) {
    x.insert(x.begin(), 0.0);
    u0.insert(u0.begin(), 0.0);
    u1.insert(u1.begin(), 0.0);
  }
  if (x.back() < 1.0) {
    x.push_back(1.0);
    u0.push_back(0.0);
    u1.push_back(0.0);
  }
  if (u0.front() != 0.0 || u0.back() != 0.0)
    throw config_error("initial data: u0 must vanish at x = 0 and x = 1");
  auto s0 = std::make_shared<CubicSpline>(x, u0);
  auto s1 = std::make_shared<CubicSpline>(x, u1);
  std::vector<double> breaks(x.begin() + 1, x.end() - 1);
  return {std::move(name), [s0](double t) { return (*s0)(t); },
          [s0](double t) { return s0->derivative(t); }, [s1](double t) { return (*s1)(t); },
          std::move(breaks)};
}

/// CSV with columns x,u0,u1; a non-numeric first line is taken as a header.
inline InitialData read_data_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open initial data file: " + path);
  std::vector<double> x, u0, u1;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double a, b, c;
    if (!(ls >> a >> b >> c)) {
      if (x.empty() && lineno == 1) continue;
      throw config_error(path + ":" + std::to_string(lineno) + ": expected x,u0,u1");
    }
    x.push_back(a);
    u0.push_back(b);
    u1.push_back(c);
  }
  return spline_data(std::move(x), std::move(u0), std::move(u1), "file:" + path);
}

/// Preset by name: sine:m, bump, mode:k, file:<path>, zero.
inline InitialData make_initial_data(const std::string& spec, const SpectralProblem& p) {
  auto arg = [&](const std::string& prefix) { return spec.substr(prefix.size()); };
  auto to_int = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw config_error("bad integer in preset '" + spec + "'");
    }
  };
  if (spec == "bump") return bump_data();
  if (spec == "zero") return zero_data();
  if (spec.rfind("sine:", 0) == 0) return sine_data(to_int(arg("sine:")));
  if (spec.rfind("mode:", 0) == 0) return mode_data(p, to_int(arg("mode:")));
  if (spec.rfind("file:", 0) == 0) return read_data_csv(arg("file:"));
  throw config_error("unknown initial data preset '" + spec + "' (sine:m, bump, mode:k, file:<path>)");
}

}  // namespace singwave
