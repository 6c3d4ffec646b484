#pragma once

// Eigenvalues of the generator of u_tt + (2 alpha / x) u_t = u_xx on (0,1)
// with Dirichlet conditions. lambda is an eigenvalue iff
//     F(lambda) = M(1 - alpha, 2, -2 lambda) = 0,
// with eigenfunction f(x) = x e^{lambda x} M(1 - alpha, 2, -2 lambda x).
// For alpha = n + 1 the spectrum is the n zeros of L_n^(1)(-2 mu).

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "singwave/error.hpp"
#include "singwave/parallel.hpp"
#include "singwave/specfun.hpp"

namespace singwave {

enum class Branch { real, upper, lower };
enum class SeedSource { laguerre, asymptotic, scan };

inline const char* to_string(Branch b) {
  switch (b) {
    case Branch::real: return "real";
    case Branch::upper: return "upper";
    case Branch::lower: return "lower";
  }
  return "?";
}

inline const char* to_string(SeedSource s) {
  switch (s) {
    case SeedSource::laguerre: return "laguerre";
    case SeedSource::asymptotic: return "asymptotic";
    case SeedSource::scan: return "scan";
  }
  return "?";
}

/// `never` forces the generic Kummer path even at integer alpha.
enum class IntegerDetection { automatic, never };

inline constexpr double kIntegerAlphaTol = 1e-14;

struct SpectralProblem {
  double alpha;
  std::optional<int> integer_n;  // set iff alpha = n + 1 (within kIntegerAlphaTol)

  explicit SpectralProblem(double a, IntegerDetection detect = IntegerDetection::automatic)
      : alpha(a) {
    if (!(a > 0.0) || !std::isfinite(a))
      throw std::invalid_argument("SpectralProblem: alpha must be positive and finite");
    const double r = std::round(a);
    if (detect == IntegerDetection::automatic && r >= 1.0 && std::abs(a - r) <= kIntegerAlphaTol)
      integer_n = static_cast<int>(r) - 1;
  }

  /// Number of negative real eigenvalues: ceil(alpha - 1), or n at alpha = n + 1.
  int real_eigenvalue_count() const {
    if (integer_n) return *integer_n;
    return std::max(0, static_cast<int>(std::ceil(alpha - 1.0)));
  }

  bool alpha_is_integer() const { return alpha == std::round(alpha); }
};

struct Eigenvalue {
  cplx value;
  int index = 0;  // 1-based within its branch
  Branch branch = Branch::real;
  double residual = 0.0;  // |F(value)|
  int multiplicity = 1;
  SeedSource source = SeedSource::scan;
};

/// F(lambda) = M(1 - alpha, 2, -2 lambda).
inline cplx char_fn(const SpectralProblem& p, cplx lambda) {
  return kummer_m(1.0 - p.alpha, 2.0, -2.0 * lambda);
}

/// dF/dlambda = -(1 - alpha) M(2 - alpha, 3, -2 lambda).
inline cplx char_fn_derivative(const SpectralProblem& p, cplx lambda) {
  const double a = 1.0 - p.alpha;
  if (a == 0.0) return {0.0, 0.0};
  return -a * kummer_m(a + 1.0, 3.0, -2.0 * lambda);
}

struct Rect {
  double re_min, re_max, im_min, im_max;

  double width() const { return re_max - re_min; }
  double height() const { return im_max - im_min; }
  bool contains(cplx z) const {
    return z.real() > re_min && z.real() < re_max && z.imag() > im_min && z.imag() < im_max;
  }
  std::string str() const {
    std::ostringstream os;
    os.precision(10);
    os << "[" << re_min << ", " << re_max << "] x [" << im_min << ", " << im_max << "]i";
    return os.str();
  }
};

struct ContourOptions {
  double samples_per_unit = 3.0;
  int min_samples_per_edge = 12;
  double max_phase_step = 0.5;  // radians between accepted neighbouring samples
  int max_depth = 30;
  int max_retries = 5;
};

namespace detail {

/// F vanishes on, or too close to, the contour.
class boundary_zero_error : public numeric_error {
 public:
  using numeric_error::numeric_error;
};

template <class Fn>
double phase_segment(const Fn& f, cplx z0, cplx f0, cplx z1, cplx f1, int depth,
                     const ContourOptions& o) {
  const double d = std::arg(f1 / f0);
  if (std::abs(d) <= o.max_phase_step) return d;
  if (depth >= o.max_depth) throw boundary_zero_error("phase varies too fast along the contour");
  const cplx zm = 0.5 * (z0 + z1);
  const cplx fm = f(zm);
  if (std::abs(fm) == 0.0) throw boundary_zero_error("zero on the contour");
  if (!std::isfinite(fm.real()) || !std::isfinite(fm.imag()))
    throw numeric_error("characteristic function overflow on the contour");
  return phase_segment(f, z0, f0, zm, fm, depth + 1, o) +
         phase_segment(f, zm, fm, z1, f1, depth + 1, o);
}

/// Winding number of f around the counter-clockwise boundary of r.
template <class Fn>
int winding_number(const Fn& f, const Rect& r, const ContourOptions& o) {
  const std::array<cplx, 5> corners = {cplx(r.re_min, r.im_min), cplx(r.re_max, r.im_min),
                                       cplx(r.re_max, r.im_max), cplx(r.re_min, r.im_max),
                                       cplx(r.re_min, r.im_min)};
  double total = 0.0;
  for (int e = 0; e < 4; ++e) {
    const cplx a = corners[e];
    const cplx b = corners[e + 1];
    const int n = std::max(o.min_samples_per_edge,
                           static_cast<int>(std::ceil(std::abs(b - a) * o.samples_per_unit)));
    cplx z0 = a;
    cplx f0 = f(z0);
    if (std::abs(f0) == 0.0) throw boundary_zero_error("zero at a contour sample");
    for (int i = 1; i <= n; ++i) {
      const cplx z1 = a + (b - a) * (static_cast<double>(i) / n);
      const cplx f1 = f(z1);
      if (std::abs(f1) == 0.0) throw boundary_zero_error("zero at a contour sample");
      if (!std::isfinite(f1.real()) || !std::isfinite(f1.imag()))
        throw numeric_error("characteristic function overflow on the contour");
      total += phase_segment(f, z0, f0, z1, f1, 0, o);
      z0 = z1;
      f0 = f1;
    }
  }
  const double w = total / (2.0 * std::numbers::pi);
  const double rounded = std::round(w);
  if (std::abs(w - rounded) > 0.05)
    throw convergence_error("argument principle: non-integer winding " + std::to_string(w),
                            std::max(std::abs(r.re_min), std::abs(r.im_max)), 0);
  return static_cast<int>(rounded);
}

}  // namespace detail

/// Number of zeros of F (with multiplicity) inside `rect`, by the argument
/// principle. A zero on the boundary triggers up to five slightly enlarged
/// retries.
inline int count_zeros(const SpectralProblem& p, Rect rect, const ContourOptions& opts = {}) {
  auto f = [&p](cplx z) { return char_fn(p, z); };
  for (int attempt = 0; attempt <= opts.max_retries; ++attempt) {
    try {
      return detail::winding_number(f, rect, opts);
    } catch (const detail::boundary_zero_error&) {
      const double d = 1e-3 * (attempt + 1) * std::max(rect.width(), rect.height());
      rect.re_min -= 0.71 * d;
      rect.re_max += 0.37 * d;
      rect.im_min -= 0.53 * d;
      rect.im_max += 0.89 * d;
    }
  }
  throw numeric_error("count_zeros: zero on the boundary of " + rect.str() + " after retries");
}

/// Offset between the expansion index m and the pair index k: m = k + ceil(alpha - 1).
/// The first ceil(alpha - 1) values of m belong to the real eigenvalues.
inline int asymptotic_index(const SpectralProblem& p, int k) {
  return k + std::max(0, static_cast<int>(std::ceil(p.alpha - 1.0)));
}

/// Large-|lambda| expansion at expansion index m >= 1:
///   lambda ~ -+ (2m+1-alpha) pi i / 2 - (1/2) Log(-Gamma(1-alpha)/Gamma(1+alpha) (+-2 m pi i)^{2 alpha}),
/// upper sign for the upper branch, principal logarithms throughout.
inline cplx asymptotic_expansion(const SpectralProblem& p, int m, Branch branch) {
  if (p.integer_n || p.alpha_is_integer())
    throw std::domain_error("asymptotic_expansion: not applicable for integer alpha");
  if (m < 1) throw std::invalid_argument("asymptotic_expansion: m must be >= 1");
  if (branch == Branch::real)
    throw std::invalid_argument("asymptotic_expansion: branch must be upper or lower");
  const double a = p.alpha;
  const double sign = branch == Branch::upper ? -1.0 : 1.0;  // sign inside (+-2 m pi i)
  const double ratio = -std::tgamma(1.0 - a) / std::tgamma(1.0 + a);
  const cplx power = std::exp(2.0 * a * std::log(cplx(0.0, sign * 2.0 * m * std::numbers::pi)));
  return cplx(0.0, -sign * (2.0 * m + 1.0 - a) * std::numbers::pi / 2.0) -
         0.5 * std::log(ratio * power);
}

/// Seed for the k-th conjugate pair (k >= 1, ordered by |Im|).
inline cplx asymptotic_eigenvalue(const SpectralProblem& p, int k, Branch branch) {
  if (k < 1) throw std::invalid_argument("asymptotic_eigenvalue: k must be >= 1");
  return asymptotic_expansion(p, asymptotic_index(p, k), branch);
}

/// Newton step size |F / F'| relative to 1 + |lambda|: the backward error used
/// to accept a zero, insensitive to the exponential growth of |F|.
inline double relative_residual(const SpectralProblem& p, cplx lambda) {
  const cplx df = char_fn_derivative(p, lambda);
  if (std::abs(df) == 0.0) return std::numeric_limits<double>::infinity();
  return std::abs(char_fn(p, lambda) / df) / (1.0 + std::abs(lambda));
}

struct NewtonResult {
  cplx value;
  double residual;
  int iterations;
  bool converged;
};

/// Damped Newton on F: steps are capped at `max_step` and halved while they
/// increase |F|; stops at |step| < 1e-12 (1 + |lambda|) or after max_iter.
inline NewtonResult newton_refine(const SpectralProblem& p, cplx seed, int max_iter = 50,
                                  double max_step = std::numeric_limits<double>::infinity()) {
  cplx lam = seed;
  cplx f = char_fn(p, lam);
  for (int it = 1; it <= max_iter; ++it) {
    const cplx df = char_fn_derivative(p, lam);
    if (std::abs(df) == 0.0 || !std::isfinite(std::abs(df))) break;
    cplx step = f / df;
    if (std::abs(step) > max_step) step *= max_step / std::abs(step);
    cplx next = lam - step;
    cplx fn = char_fn(p, next);
    for (int h = 0; h < 30 && !(std::abs(fn) <= std::abs(f)); ++h) {
      step *= 0.5;
      next = lam - step;
      fn = char_fn(p, next);
    }
    lam = next;
    f = fn;
    if (std::abs(step) < 1e-12 * (1.0 + std::abs(lam))) return {lam, std::abs(f), it, true};
  }
  return {lam, std::abs(f), max_iter, false};
}

struct FindOptions {
  bool audit = true;
  ContourOptions contour{};
  double residual_tol = 1e-9;  // on relative_residual
  double max_real_extent = 2000.0;
};

namespace detail {

inline bool same_zero(cplx a, cplx b) { return std::abs(a - b) <= 1e-8 * (1.0 + std::abs(a)); }

struct ZeroSet {
  std::vector<cplx> values;
  std::vector<SeedSource> sources;

  bool contains(cplx z) const {
    return std::any_of(values.begin(), values.end(), [&](cplx v) { return same_zero(v, z); });
  }
  // Adds z and its conjugate; snaps numerically real values onto the axis.
  bool add(cplx z, SeedSource src) {
    if (std::abs(z.imag()) <= 1e-10 * (1.0 + std::abs(z))) z = {z.real(), 0.0};
    if (contains(z)) return false;
    values.push_back(z);
    sources.push_back(src);
    if (z.imag() != 0.0) {
      values.push_back(std::conj(z));
      sources.push_back(src);
    }
    return true;
  }
  int count_inside(const Rect& r) const {
    return static_cast<int>(
        std::count_if(values.begin(), values.end(), [&](cplx v) { return r.contains(v); }));
  }
};

/// Negative real zeros: scan -2 lambda outwards for sign changes of F, then
/// bracketed refinement.
inline std::vector<double> scan_real_zeros(const SpectralProblem& p, int expected, double extent,
                                           double max_extent) {
  std::vector<double> out;
  auto f = [&p](double lam) { return char_fn(p, cplx(lam, 0.0)).real(); };
  double lam = -1e-6;
  double flam = f(lam);
  while (-lam < max_extent) {
    if (static_cast<int>(out.size()) >= expected && -lam >= extent) break;
    const double next = lam - (0.01 + 0.005 * std::abs(lam));
    const double fnext = f(next);
    if (fnext == 0.0) {
      out.push_back(next);
    } else if ((flam < 0.0) != (fnext < 0.0) && flam != 0.0) {
      boost::uintmax_t iters = 200;
      auto tol = boost::math::tools::eps_tolerance<double>(52);
      const auto br = boost::math::tools::toms748_solve(f, next, lam, fnext, flam, tol, iters);
      out.push_back(0.5 * (br.first + br.second));
    }
    lam = next;
    flam = fnext;
  }
  return out;
}

struct Auditor {
  const SpectralProblem& problem;
  ZeroSet& zeros;
  const FindOptions& opts;
  int leaves = 0;

  int count(const Rect& r) const {
    return winding_number([this](cplx z) { return char_fn(problem, z); }, r, opts.contour);
  }

  void search_missing(const Rect& r) {
    const double cap = 0.5 * std::max(r.width(), r.height());
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const cplx seed(r.re_min + (i + 0.5) / 3.0 * r.width(),
                        r.im_min + (j + 0.5) / 3.0 * r.height());
        const auto nr = newton_refine(problem, seed, 80, cap);
        if (nr.converged && r.contains(nr.value) &&
            relative_residual(problem, nr.value) < opts.residual_tol)
          zeros.add(nr.value, SeedSource::scan);
      }
    }
  }

  [[noreturn]] void mismatch(const Rect& r, int c) const {
    std::ostringstream os;
    os << "eigenvalue audit mismatch: rectangle " << r.str() << " holds " << c << " zeros, found "
       << zeros.count_inside(r);
    throw numeric_error(os.str());
  }

  // Leaves hold at most two zeros; a leaf whose zeros are not all known gets
  // a local Newton search and, failing that, is split further.
  void audit(const Rect& r, int c, int depth) {
    if (zeros.count_inside(r) > c) mismatch(r, c);
    if (c <= 2) {
      ++leaves;
      if (zeros.count_inside(r) == c) return;
      search_missing(r);
      if (zeros.count_inside(r) == c) return;
      if (zeros.count_inside(r) > c || depth > 40) mismatch(r, c);
    }
    static constexpr std::array<double, 8> offsets = {0.0123, -0.0347, 0.0611, -0.0889,
                                                      0.1157, -0.1423, 0.1711, -0.1979};
    const bool split_im = r.height() >= r.width();
    for (double off : offsets) {
      const double lo = split_im ? r.im_min : r.re_min;
      const double len = split_im ? r.height() : r.width();
      const double s = lo + (0.5 + off) * len;
      const bool near_known =
          std::any_of(zeros.values.begin(), zeros.values.end(), [&](cplx z) {
            const double coord = split_im ? z.imag() : z.real();
            return std::abs(coord - s) < 1e-3 * len;
          });
      if (near_known) continue;
      Rect a = r, b = r;
      if (split_im) {
        a.im_max = s;
        b.im_min = s;
      } else {
        a.re_max = s;
        b.re_min = s;
      }
      int ca = 0, cb = 0;
      try {
        ca = count(a);
        cb = count(b);
      } catch (const boundary_zero_error&) {
        continue;
      }
      if (ca + cb != c)
        throw numeric_error("eigenvalue audit: inconsistent zero counts while splitting " +
                            r.str());
      audit(a, ca, depth + 1);
      audit(b, cb, depth + 1);
      return;
    }
    throw numeric_error("eigenvalue audit: could not split " + r.str());
  }
};

}  // namespace detail

/// All eigenvalues with |lambda| <= search_radius plus the first k_max
/// conjugate pairs (by |Im|). Integer alpha uses Laguerre zeros; otherwise a
/// real-axis scan, Newton from asymptotic seeds, and an argument-principle
/// audit that every counted zero was found.
inline std::vector<Eigenvalue> find_eigenvalues(const SpectralProblem& p, int k_max,
                                                double search_radius,
                                                const FindOptions& opts = {}) {
  if (k_max < 1) throw std::invalid_argument("find_eigenvalues: k_max must be >= 1");
  std::vector<Eigenvalue> out;

  if (p.integer_n) {
    const int n = *p.integer_n;
    const auto roots = laguerre_roots(n, 1.0);
    // mu = -x/2; ascending mu is descending x
    for (int i = 0; i < n; ++i) {
      const double mu = -0.5 * roots[n - 1 - i];
      Eigenvalue ev;
      ev.value = {mu, 0.0};
      ev.index = i + 1;
      ev.branch = Branch::real;
      ev.residual = std::abs(char_fn(p, ev.value));
      ev.source = SeedSource::laguerre;
      out.push_back(ev);
    }
    return out;
  }

  detail::ZeroSet zeros;
  const int n_real = p.real_eigenvalue_count();
  for (double z : detail::scan_real_zeros(p, n_real, search_radius, opts.max_real_extent)) {
    const auto nr = newton_refine(p, cplx(z, 0.0));
    zeros.add(nr.converged ? cplx(nr.value.real(), 0.0) : cplx(z, 0.0), SeedSource::scan);
  }

  const bool has_pairs = !p.alpha_is_integer();
  auto uppers = [&zeros] {
    std::vector<cplx> u;
    for (cplx z : zeros.values)
      if (z.imag() > 0.0) u.push_back(z);
    std::sort(u.begin(), u.end(), [](cplx a, cplx b) { return a.imag() < b.imag(); });
    return u;
  };

  if (has_pairs) {
    int j_max = k_max + 2;
    while (asymptotic_eigenvalue(p, j_max, Branch::upper).imag() < search_radius + 2.0 * std::numbers::pi)
      ++j_max;
    for (int j = 1; j <= j_max; ++j) {
      const auto nr = newton_refine(p, asymptotic_eigenvalue(p, j, Branch::upper), 80, 1.0);
      if (nr.converged && nr.value.imag() > 0.0 && nr.value.real() < 0.0 &&
          relative_residual(p, nr.value) < opts.residual_tol)
        zeros.add(nr.value, SeedSource::asymptotic);
    }
  }

  // Top edge of the audited box: halfway between two consecutive known pairs,
  // with at least k_max pairs and the search disc below it.
  auto choose_top = [&](const std::vector<cplx>& u) -> double {
    if (!has_pairs) return std::max(search_radius, 1.0);
    std::size_t i = static_cast<std::size_t>(k_max);
    while (i < u.size() && u[i - 1].imag() <= search_radius) ++i;
    if (i >= u.size())
      return std::max(search_radius, u.empty() ? 0.0 : u.back().imag()) + 2.0 * std::numbers::pi;
    return 0.5 * (u[i - 1].imag() + u[i].imag());
  };

  if (opts.audit) {
    bool complete = false;
    for (int round = 0; round < 6 && !complete; ++round) {
      const double top = choose_top(uppers());
      double re_lo = -search_radius;
      for (cplx z : zeros.values)
        if (std::abs(z.imag()) < top) re_lo = std::min(re_lo, z.real());
      Rect box{re_lo - 2.0, -1e-3, -top, top};
      detail::Auditor auditor{p, zeros, opts};
      int c = 0;
      bool counted = false;
      for (int attempt = 0; attempt <= opts.contour.max_retries && !counted; ++attempt) {
        try {
          c = auditor.count(box);
          counted = true;
        } catch (const detail::boundary_zero_error&) {
          box.re_min -= 0.137 * (attempt + 1);
          box.im_min -= 0.011 * (attempt + 1);
          box.im_max += 0.011 * (attempt + 1);
        }
      }
      if (!counted) throw numeric_error("find_eigenvalues: zero on audit boundary " + box.str());
      auditor.audit(box, c, 0);
      const auto u = uppers();
      const auto inside = std::count_if(u.begin(), u.end(), [&](cplx z) { return box.contains(z); });
      complete = !has_pairs || (inside >= k_max && box.im_max >= search_radius);
    }
    if (!complete) throw numeric_error("find_eigenvalues: could not enclose the requested pairs");
  }

  std::vector<double> reals;
  std::vector<std::pair<cplx, SeedSource>> ups;
  for (std::size_t i = 0; i < zeros.values.size(); ++i) {
    const cplx z = zeros.values[i];
    if (z.imag() == 0.0) reals.push_back(z.real());
    else if (z.imag() > 0.0) ups.emplace_back(z, zeros.sources[i]);
  }
  std::sort(reals.begin(), reals.end());
  std::sort(ups.begin(), ups.end(),
            [](const auto& a, const auto& b) { return a.first.imag() < b.first.imag(); });

  for (std::size_t i = 0; i < reals.size(); ++i) {
    Eigenvalue ev;
    ev.value = {reals[i], 0.0};
    ev.index = static_cast<int>(i) + 1;
    ev.branch = Branch::real;
    ev.residual = std::abs(char_fn(p, ev.value));
    ev.source = SeedSource::scan;
    out.push_back(ev);
  }
  for (std::size_t i = 0; i < ups.size(); ++i) {
    const cplx z = ups[i].first;
    const int k = static_cast<int>(i) + 1;
    if (k > k_max && std::abs(z) > search_radius) continue;
    Eigenvalue up;
    up.value = z;
    up.index = k;
    up.branch = Branch::upper;
    up.residual = std::abs(char_fn(p, z));
    up.source = ups[i].second;
    Eigenvalue lo = up;
    lo.value = std::conj(z);
    lo.branch = Branch::lower;
    lo.residual = std::abs(char_fn(p, lo.value));
    out.push_back(up);
    out.push_back(lo);
  }
  std::stable_sort(out.begin(), out.end(), [](const Eigenvalue& a, const Eigenvalue& b) {
    if (a.branch != b.branch) return static_cast<int>(a.branch) < static_cast<int>(b.branch);
    if (a.branch == Branch::real) return a.value.real() < b.value.real();
    return std::abs(a.value.imag()) < std::abs(b.value.imag());
  });
  for (const auto& ev : out)
    if (!(relative_residual(p, ev.value) < opts.residual_tol))
      throw numeric_error("find_eigenvalues: residual above tolerance at index " +
                          std::to_string(ev.index));
  return out;
}

/// Eigenfunction evaluator paired with its eigenvalue.
struct Mode {
  Eigenvalue eigenvalue;
  std::function<cplx(double)> evaluator;

  cplx operator()(double x) const { return evaluator(x); }
};

/// f(x) = x e^{lambda x} M(1 - alpha, 2, -2 lambda x); at alpha = n + 1 the
/// Laguerre form x e^{mu x} L_n^(1)(-2 mu x), which is (n+1) times the former.
inline Mode eigenfunction(const SpectralProblem& p, const Eigenvalue& ev) {
  if (!(relative_residual(p, ev.value) < 1e-9))
    throw std::invalid_argument("eigenfunction: eigenvalue residual too large");
  const cplx lam = ev.value;
  if (p.integer_n) {
    const int n = *p.integer_n;
    return {ev, [n, lam](double x) -> cplx {
              return x * std::exp(lam * x) * laguerre(n, 1.0, -2.0 * lam * x);
            }};
  }
  const double a = 1.0 - p.alpha;
  return {ev, [a, lam](double x) -> cplx {
            if (x == 0.0) return {0.0, 0.0};
            return x * std::exp(lam * x) * kummer_m(a, 2.0, -2.0 * lam * x);
          }};
}

/// Real eigenfunction f_k(x) = x e^{mu x} L_n^(1)(-2 mu x) at alpha = n + 1.
struct LaguerreMode {
  int n = 0;
  double mu = 0.0;

  double operator()(double x) const { return x * std::exp(mu * x) * laguerre(n, 1.0, -2.0 * mu * x); }

  double derivative(double x) const {
    const double z = -2.0 * mu * x;
    const double e = std::exp(mu * x);
    return e * ((1.0 + mu * x) * laguerre(n, 1.0, z) - 2.0 * mu * x * laguerre_derivative(n, 1.0, z));
  }
};

/// Modes for alpha = n + 1, ascending in mu (k = 1 is the most negative).
inline std::vector<LaguerreMode> laguerre_modes(int n) {
  std::vector<LaguerreMode> modes;
  const auto roots = laguerre_roots(n, 1.0);
  for (int i = n - 1; i >= 0; --i) modes.push_back({n, -0.5 * roots[i]});
  return modes;
}

/// sup Re lambda; nullopt for an empty spectrum.
inline std::optional<double> spectral_abscissa(const std::vector<Eigenvalue>& evs) {
  if (evs.empty()) return std::nullopt;
  double s = evs.front().value.real();
  for (const auto& ev : evs) s = std::max(s, ev.value.real());
  return s;
}

// ---------------------------------------------------------------------------
// Sweeps in alpha

struct SweepOptions {
  int k_max = 5;
  double search_radius = 1.0;
  double pairing_tol = 2.0;
  bool at_integers = false;
  int jobs = 1;
  FindOptions find{};
};

struct SweepRow {
  double alpha;
  int trajectory;
  Branch branch;
  cplx value;
};

struct SweepResult {
  std::vector<double> alphas;
  std::vector<std::vector<Eigenvalue>> spectra;
  std::vector<int> real_counts;
  std::vector<SweepRow> rows;
  std::vector<std::string> warnings;
};

/// Uniform grid from lo to hi (inclusive up to rounding) with optional extra
/// points m +- 10^-p (p = 2..refine_digits) around each integer m in (lo, hi).
inline std::vector<double> make_alpha_grid(double lo, double hi, double step, int refine_digits = 0,
                                           bool include_integers = false) {
  if (!(step > 0.0) || !(hi >= lo)) throw std::invalid_argument("make_alpha_grid: bad range");
  std::vector<double> g;
  const long count = std::lround(std::floor((hi - lo) / step + 1e-9));
  for (long i = 0; i <= count; ++i) g.push_back(std::round((lo + i * step) * 1e12) / 1e12);
  for (double m = std::ceil(lo); m <= hi; m += 1.0) {
    if (m <= lo || m >= hi) continue;
    for (int d = 2; d <= refine_digits; ++d) {
      const double eps = std::pow(10.0, -d);
      g.push_back(m - eps);
      g.push_back(m + eps);
    }
  }
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end(), [](double a, double b) { return std::abs(a - b) < 1e-13; }),
          g.end());
  if (!include_integers)
    g.erase(std::remove_if(g.begin(), g.end(),
                           [](double a) { return a == std::round(a) && a >= 1.0; }),
            g.end());
  return g;
}

/// Eigenvalues along a sorted list of alphas, linked into trajectories by
/// nearest-neighbour matching between consecutive alphas (real and upper
/// branches; lower ones are conjugates).
inline SweepResult alpha_sweep(const std::vector<double>& alphas, const SweepOptions& opts = {}) {
  if (!std::is_sorted(alphas.begin(), alphas.end()))
    throw std::invalid_argument("alpha_sweep: alphas must be sorted ascending");
  SweepResult res;
  for (double a : alphas) {
    const SpectralProblem p(a);
    if (p.integer_n && !opts.at_integers) {
      res.warnings.push_back("skipped integer alpha " + std::to_string(a));
      continue;
    }
    res.alphas.push_back(a);
  }
  res.spectra = parallel_map(res.alphas.size(), opts.jobs, [&](std::size_t i) {
    return find_eigenvalues(SpectralProblem(res.alphas[i]), opts.k_max, opts.search_radius, opts.find);
  });

  struct Track {
    int id;
    Branch branch;
    cplx value;
  };
  std::vector<Track> active;
  int next_id = 0;
  for (std::size_t i = 0; i < res.alphas.size(); ++i) {
    const double a = res.alphas[i];
    std::vector<const Eigenvalue*> cur;
    int n_real = 0;
    for (const auto& ev : res.spectra[i]) {
      if (ev.branch == Branch::real) ++n_real;
      if (ev.branch == Branch::lower) continue;
      if (ev.branch == Branch::upper && ev.index > opts.k_max) continue;
      cur.push_back(&ev);
    }
    res.real_counts.push_back(n_real);

    struct Cand {
      double d;
      std::size_t prev, cur;
    };
    std::vector<Cand> cands;
    for (std::size_t pi = 0; pi < active.size(); ++pi)
      for (std::size_t ci = 0; ci < cur.size(); ++ci)
        if (active[pi].branch == cur[ci]->branch) {
          const double d = std::abs(active[pi].value - cur[ci]->value);
          if (d <= opts.pairing_tol) cands.push_back({d, pi, ci});
        }
    std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
      return x.d < y.d || (x.d == y.d && (x.prev < y.prev || (x.prev == y.prev && x.cur < y.cur)));
    });
    std::vector<int> assigned(cur.size(), -1);
    std::vector<bool> used(active.size(), false);
    for (const auto& c : cands) {
      if (used[c.prev] || assigned[c.cur] >= 0) continue;
      // ambiguity: another unused track almost as close
      for (const auto& o : cands)
        if (o.cur == c.cur && o.prev != c.prev && !used[o.prev] && o.d < 1.5 * c.d + 1e-12) {
          res.warnings.push_back("ambiguous pairing at alpha " + std::to_string(a));
          break;
        }
      used[c.prev] = true;
      assigned[c.cur] = active[c.prev].id;
    }
    std::vector<Track> next;
    for (std::size_t ci = 0; ci < cur.size(); ++ci) {
      const int id = assigned[ci] >= 0 ? assigned[ci] : next_id++;
      next.push_back({id, cur[ci]->branch, cur[ci]->value});
      res.rows.push_back({a, id, cur[ci]->branch, cur[ci]->value});
    }
    active = std::move(next);
  }
  return res;
}

}  // namespace singwave
