#pragma once

// Method-of-lines simulation of u_tt + (2 alpha / x) u_t = u_xx on (0,1),
// u(0) = u(1) = 0, as the first-order system (u, v)' = (v, u_xx - (2 alpha/x) v).
// Nodes x_i = i h, i = 1..N, h = 1/(N+1); x = 0 is never a node.

#include <Eigen/Dense>

#include <charconv>
#include <cmath>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "singwave/error.hpp"
#include "singwave/initial_data.hpp"
#include "singwave/spectrum.hpp"

namespace singwave {

struct Grid {
  int N = 0;
  double h = 0.0;

  explicit Grid(int n) : N(n), h(1.0 / (n + 1)) {
    if (n < 2) throw std::invalid_argument("Grid: need at least 2 interior points");
  }
  double x(int i) const { return (i + 1) * h; }  // 0-based index i -> node x_{i+1}
  std::vector<double> nodes() const {
    std::vector<double> xs(N);
    for (int i = 0; i < N; ++i) xs[i] = x(i);
    return xs;
  }
};

struct State {
  std::vector<double> u;
  std::vector<double> v;
};

struct EnergyTrace {
  std::vector<double> times;
  std::vector<double> energies;
};

enum class Scheme { implicit_midpoint, crank_nicolson };

inline const char* to_string(Scheme s) {
  return s == Scheme::implicit_midpoint ? "implicit-midpoint" : "crank-nicolson";
}

inline State sample(const InitialData& d, const Grid& g) {
  State s{std::vector<double>(g.N), std::vector<double>(g.N)};
  for (int i = 0; i < g.N; ++i) {
    s.u[i] = d.u0(g.x(i));
    s.v[i] = d.u1(g.x(i));
  }
  return s;
}

/// (v, D2 u - (2 alpha / x_i) v) with the standard second difference.
inline State apply_generator(double alpha, const Grid& g, const State& s) {
  State out{s.v, std::vector<double>(g.N)};
  const double ih2 = 1.0 / (g.h * g.h);
  for (int i = 0; i < g.N; ++i) {
    const double left = i > 0 ? s.u[i - 1] : 0.0;
    const double right = i + 1 < g.N ? s.u[i + 1] : 0.0;
    out.v[i] = (left - 2.0 * s.u[i] + right) * ih2 - 2.0 * alpha / g.x(i) * s.v[i];
  }
  return out;
}

/// h sum ((u_{i+1} - u_i)/h)^2 over the N+1 cells plus h sum v_i^2.
inline double energy(const Grid& g, const State& s) {
  double e = 0.0;
  double prev = 0.0;
  for (int i = 0; i <= g.N; ++i) {
    const double cur = i < g.N ? s.u[i] : 0.0;
    const double d = cur - prev;
    e += d * d;
    prev = cur;
  }
  e /= g.h;
  for (double vi : s.v) e += g.h * vi * vi;
  return e;
}

struct SimOptions {
  int N = 2000;
  double dt = 5e-4;
  double T = 4.0;
  Scheme scheme = Scheme::implicit_midpoint;
  std::vector<double> snapshot_times;
  double energy_tolerance = 1e-10;  // allowed per-step increase, relative to E(0)
};

struct Snapshot {
  double t;
  State state;
};

struct SimulationRun {
  double alpha = 0.0;
  Grid grid{2};
  double dt = 0.0;
  Scheme scheme = Scheme::implicit_midpoint;
  int steps = 0;
  State final_state;
  std::vector<Snapshot> snapshots;
  EnergyTrace trace;
  double max_energy_increase = 0.0;  // largest E(t_{i+1}) - E(t_i), relative to E(0)
};

namespace detail {

/// Thomas factorization of a constant tridiagonal matrix, reused every step.
class Tridiagonal {
 public:
  Tridiagonal(std::vector<double> diag, double off) : off_(off), c_(diag.size()), inv_(diag.size()) {
    const std::size_t n = diag.size();
    double prev_c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double den = diag[i] - off_ * prev_c;
      if (!(std::abs(den) > 0.0)) throw numeric_error("tridiagonal factorization broke down at row " + std::to_string(i));
      inv_[i] = 1.0 / den;
      c_[i] = off_ * inv_[i];
      prev_c = c_[i];
    }
  }

  void solve(std::vector<double>& rhs) const {
    const std::size_t n = rhs.size();
    double prev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      rhs[i] = (rhs[i] - off_ * prev) * inv_[i];
      prev = rhs[i];
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c_[i] * rhs[i + 1];
  }

 private:
  double off_;
  std::vector<double> c_, inv_;
};

}  // namespace detail

/// Implicit midpoint rule. Eliminating u^+ leaves one tridiagonal solve per step:
///   (I + dt/2 D - dt^2/4 D2) v^+ = (I - dt/2 D + dt^2/4 D2) v + dt D2 u,
///   u^+ = u + dt/2 (v + v^+),
/// with D = diag(2 alpha / x_i). For this linear autonomous system the
/// Crank-Nicolson scheme is the same map.
inline SimulationRun simulate(double alpha, const State& initial, const SimOptions& o) {
  if (!(o.dt > 0.0)) throw std::invalid_argument("simulate: dt must be positive");
  if (!(o.T >= 0.0)) throw std::invalid_argument("simulate: T must be non-negative");
  if (!(alpha >= 0.0)) throw std::invalid_argument("simulate: alpha must be non-negative");
  const Grid g(o.N);
  if (static_cast<int>(initial.u.size()) != g.N || static_cast<int>(initial.v.size()) != g.N)
    throw std::invalid_argument("simulate: initial state does not match the grid");

  SimulationRun run;
  run.alpha = alpha;
  run.grid = g;
  run.dt = o.dt;
  run.scheme = o.scheme;
  run.steps = static_cast<int>(std::ceil(o.T / o.dt - 1e-9));

  const double ih2 = 1.0 / (g.h * g.h);
  const double q = o.dt * o.dt / 4.0;
  std::vector<double> damp(g.N), diag(g.N);
  for (int i = 0; i < g.N; ++i) {
    damp[i] = 2.0 * alpha / g.x(i);
    diag[i] = 1.0 + 0.5 * o.dt * damp[i] + 2.0 * q * ih2;
  }
  const detail::Tridiagonal A(diag, -q * ih2);

  auto d2 = [&](const std::vector<double>& w, int i) {
    const double left = i > 0 ? w[i - 1] : 0.0;
    const double right = i + 1 < g.N ? w[i + 1] : 0.0;
    return (left - 2.0 * w[i] + right) * ih2;
  };

  std::vector<double> snap_steps;
  for (double t : o.snapshot_times) {
    if (t < 0.0 || t > run.steps * o.dt + 1e-12) throw std::invalid_argument("simulate: snapshot time outside [0, T]");
    snap_steps.push_back(std::round(t / o.dt));
  }
  auto take_snapshots = [&](int step, const State& s) {
    for (double k : snap_steps)
      if (static_cast<int>(k) == step) run.snapshots.push_back({step * o.dt, s});
  };

  State s = initial;
  const double e0 = energy(g, s);
  run.trace.times.push_back(0.0);
  run.trace.energies.push_back(e0);
  take_snapshots(0, s);

  std::vector<double> rhs(g.N), vnew(g.N);
  for (int step = 1; step <= run.steps; ++step) {
    for (int i = 0; i < g.N; ++i)
      rhs[i] = (1.0 - 0.5 * o.dt * damp[i]) * s.v[i] + q * d2(s.v, i) + o.dt * d2(s.u, i);
    vnew = rhs;
    A.solve(vnew);
    for (int i = 0; i < g.N; ++i) {
      if (!std::isfinite(vnew[i])) throw numeric_error("simulate: non-finite value at step " + std::to_string(step));
      s.u[i] += 0.5 * o.dt * (s.v[i] + vnew[i]);
    }
    s.v.swap(vnew);
    const double e = energy(g, s);
    const double prev = run.trace.energies.back();
    if (e0 > 0.0) {
      const double rise = (e - prev) / e0;
      run.max_energy_increase = std::max(run.max_energy_increase, rise);
      if (rise > o.energy_tolerance)
        throw numeric_error("simulate: energy increased by " + std::to_string(rise) + " E(0) at step " +
                            std::to_string(step));
    }
    run.trace.times.push_back(step * o.dt);
    run.trace.energies.push_back(e);
    take_snapshots(step, s);
  }
  run.final_state = std::move(s);
  return run;
}

inline SimulationRun simulate(double alpha, const InitialData& d, const SimOptions& o) {
  return simulate(alpha, sample(d, Grid(o.N)), o);
}

/// The n pairings <(u0,u1),(f_k,-mu_k f_k)>_H, k = 1..n (ascending mu_k).
inline std::vector<double> projection_condition(const InitialData& d, int n) {
  if (n < 1) throw std::invalid_argument("projection_condition: n must be >= 1");
  std::vector<double> out;
  for (const auto& m : real_modes(SpectralProblem(n + 1.0))) out.push_back(energy_pairing(d, m));
  return out;
}

/// Removes the component of the data along span{(f_j, mu_j f_j)} so that all
/// pairings of the projection condition vanish.
inline InitialData project_out(const InitialData& d, int n) {
  const auto modes = real_modes(SpectralProblem(n + 1.0));
  const auto b = projection_condition(d, n);
  Eigen::MatrixXd G(n, n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      const InitialData wj = mode_data(SpectralProblem(n + 1.0), j + 1);
      G(k, j) = energy_pairing(wj, modes[k]);
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(G);
  const auto& sv = svd.singularValues();
  if (!(sv(n - 1) > 1e-12 * sv(0)))
    throw numeric_error("project_out: Gram matrix is numerically singular");
  const Eigen::VectorXd c = G.fullPivLu().solve(Eigen::Map<const Eigen::VectorXd>(b.data(), n));
  InitialData out = d;
  for (int j = 0; j < n; ++j) out = combine(1.0, out, -c(j), mode_data(SpectralProblem(n + 1.0), j + 1));
  out.name = d.name + " (projected)";
  return out;
}

/// First recorded time after which E(t) < threshold_ratio E(0) for good.
inline std::optional<double> extinction_time(const SimulationRun& run, double threshold_ratio) {
  const auto& E = run.trace.energies;
  if (E.empty() || !(E.front() > 0.0)) return std::nullopt;
  const double thr = threshold_ratio * E.front();
  if (!(E.back() < thr)) return std::nullopt;
  std::size_t i = E.size() - 1;
  while (i > 0 && E[i - 1] < thr) --i;
  return run.trace.times[i];
}

/// Least-squares slope of (1/2) log E(t) over t in [t0, t1].
inline double decay_rate(const EnergyTrace& tr, double t0, double t1) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const double t = tr.times[i];
    if (t < t0 || t > t1) continue;
    if (!(tr.energies[i] > 0.0)) throw numeric_error("decay_rate: non-positive energy in the window");
    const double y = 0.5 * std::log(tr.energies[i]);
    sx += t;
    sy += y;
    sxx += t * t;
    sxy += t * y;
    ++m;
  }
  if (m < 2) throw std::invalid_argument("decay_rate: fewer than two samples in the window");
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

/// sqrt(sum (a-b)^2 / sum b^2).
inline double relative_l2(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("relative_l2: size mismatch");
  double e = 0.0, n = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    e += (a[i] - b[i]) * (a[i] - b[i]);
    n += b[i] * b[i];
  }
  return n > 0.0 ? std::sqrt(e / n) : std::sqrt(e);
}

/// Error of the simulated standing wave mode:k against e^{mu_k t} f_k at each
/// of o.snapshot_times.
inline std::vector<double> standing_wave_error(double alpha, int k, const SimOptions& o) {
  const SpectralProblem p(alpha);
  const auto modes = real_modes(p);
  const auto run = simulate(alpha, mode_data(p, k), o);
  const auto& m = modes.at(k - 1);
  std::vector<double> out;
  for (const auto& s : run.snapshots) {
    std::vector<double> exact(run.grid.N);
    for (int i = 0; i < run.grid.N; ++i) exact[i] = std::exp(m.mu * s.t) * m(run.grid.x(i));
    out.push_back(relative_l2(s.state.u, exact));
  }
  return out;
}

/// Shortest decimal that reads back to the same double.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

/// Header `# singwave v1, alpha=<a>, N=<n>, dt=<dt>` then rows t,x,u,v, one
/// block per snapshot separated by blank lines.
inline void write_snapshots(std::ostream& os, const SimulationRun& run) {
  os << "# singwave v1, alpha=" << format_double(run.alpha) << ", N=" << run.grid.N
     << ", dt=" << format_double(run.dt) << "\n";
  for (std::size_t k = 0; k < run.snapshots.size(); ++k) {
    if (k > 0) os << "\n";
    const auto& s = run.snapshots[k];
    const std::string t = format_double(s.t);
    for (int i = 0; i < run.grid.N; ++i)
      os << t << "," << format_double(run.grid.x(i)) << "," << format_double(s.state.u[i]) << ","
         << format_double(s.state.v[i]) << "\n";
  }
}

inline void write_energy(std::ostream& os, const EnergyTrace& tr) {
  os << "t,E\n";
  for (std::size_t i = 0; i < tr.times.size(); ++i)
    os << format_double(tr.times[i]) << "," << format_double(tr.energies[i]) << "\n";
}

}  // namespace singwave
