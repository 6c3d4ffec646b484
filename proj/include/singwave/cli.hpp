#pragma once

// Command-line driver: spectrum, sweep, simulate, extinction, verify.
// All options live on the top-level app so that a flat config file applies
// to whichever subcommand is run.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "singwave/error.hpp"
#include "singwave/evolution.hpp"
#include "singwave/initial_data.hpp"
#include "singwave/laplace.hpp"
#include "singwave/parallel.hpp"
#include "singwave/spectrum.hpp"
#include "singwave/verify.hpp"

namespace singwave::cli {

inline constexpr const char* kVersion = "1.0.0";

using json = nlohmann::ordered_json;

struct RunConfig {
  std::string subcommand;

  double alpha = 1.5;
  int kmax = 5;
  double radius = 1.0;
  bool no_audit = false;

  double alpha_min = 1.1;
  double alpha_max = 2.9;
  double alpha_step = 0.01;
  int refine_digits = 4;
  bool at_integers = false;
  double pairing_tol = 2.0;

  std::string preset = "sine:1";
  bool project = false;
  int N = 2000;
  double dt = 5e-4;
  double T = 4.0;
  std::string scheme = "implicit-midpoint";
  std::vector<double> snapshots;  // empty: every snapshot_every
  double snapshot_every = 0.5;
  std::string energy_out;

  double threshold = 1e-2;         // verdict on E(2.2)/E(0)
  double extinction_level = 1e-10;  // E(t)/E(0) level that defines the extinction time
  bool allow_noninteger = false;

  std::string check = "all";
  int nmax = 20;
  int trials = 200;
  std::uint64_t seed = 1;
  int verify_N = 1000;
  std::optional<double> sigma;
  std::optional<double> eta;

  std::string format = "csv";
  std::string out;
  int jobs = 1;
};

inline std::string num(double x) { return format_double(x); }

/// Accepts either a JSON object or key=value lines (INI syntax).
class FlatConfig : public CLI::ConfigINI {
 public:
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    const std::string text((std::istreambuf_iterator<char>(input)), std::istreambuf_iterator<char>());
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || text[first] != '{') {
      std::istringstream is(text);
      return CLI::ConfigINI::from_config(is);
    }
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError(std::string("config: ") + e.what());
    }
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : doc.items()) {
      CLI::ConfigItem item;
      item.name = key;
      auto scalar = [](const nlohmann::json& v) -> std::string {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        if (v.is_number()) return v.dump();
        throw CLI::ConversionError("config: nested values are not supported");
      };
      if (value.is_array())
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      else
        item.inputs.push_back(scalar(value));
      items.push_back(std::move(item));
    }
    return items;
  }
};

inline void build_app(CLI::App& app, RunConfig& c) {
  app.fallthrough();
  app.require_subcommand(1, 1);
  app.set_config("--config", "", "flat key=value or JSON config file; flags take precedence");
  app.config_formatter(std::make_shared<FlatConfig>());
  app.allow_config_extras(CLI::config_extras_mode::error);

  app.add_option("--alpha", c.alpha, "damping parameter")->capture_default_str();
  app.add_option("--kmax", c.kmax, "number of conjugate pairs")->capture_default_str();
  app.add_option("--radius", c.radius, "also return every eigenvalue with |lambda| <= radius")->capture_default_str();
  app.add_flag("--no-audit", c.no_audit, "skip the argument-principle audit");

  app.add_option("--alpha-min", c.alpha_min)->capture_default_str();
  app.add_option("--alpha-max", c.alpha_max)->capture_default_str();
  app.add_option("--alpha-step", c.alpha_step)->capture_default_str();
  app.add_option("--refine-digits", c.refine_digits, "extra points m +- 10^-p, p = 2..digits, near integers")
      ->capture_default_str();
  app.add_flag("--at-integers", c.at_integers, "keep exact integer alphas in a sweep");
  app.add_option("--pairing-tol", c.pairing_tol, "max jump when linking trajectories")->capture_default_str();

  app.add_option("--preset", c.preset, "sine:m, bump, mode:k, file:<path>, zero")->capture_default_str();
  app.add_flag("--project", c.project, "remove the real-mode components (integer alpha)");
  app.add_option("--N", c.N, "interior grid points")->capture_default_str();
  app.add_option("--dt", c.dt)->capture_default_str();
  app.add_option("--T", c.T, "final time")->capture_default_str();
  app.add_option("--scheme", c.scheme)
      ->check(CLI::IsMember({"implicit-midpoint", "crank-nicolson"}))
      ->capture_default_str();
  app.add_option("--snapshots", c.snapshots, "snapshot times")->delimiter(',');
  app.add_option("--snapshot-every", c.snapshot_every)->capture_default_str();
  app.add_option("--energy-out", c.energy_out, "energy CSV path (default <out>.energy.csv)");

  app.add_option("--threshold", c.threshold, "extinction verdict threshold on E(2.2)/E(0)")->capture_default_str();
  app.add_option("--extinction-level", c.extinction_level, "E(t)/E(0) level defining the extinction time")
      ->capture_default_str();
  app.add_flag("--allow-noninteger", c.allow_noninteger);

  app.add_option("--check", c.check)
      ->check(CLI::IsMember({"all", "hardy", "resolvent", "gupta", "lemma"}))
      ->capture_default_str();
  app.add_option("--nmax", c.nmax)->capture_default_str();
  app.add_option("--trials", c.trials)->capture_default_str();
  app.add_option("--seed", c.seed)->capture_default_str();
  app.add_option("--verify-N", c.verify_N, "grid for the resolvent check")->capture_default_str();
  app.add_option("--sigma", c.sigma);
  app.add_option("--eta", c.eta);

  app.add_option("--format", c.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--out", c.out, "output path (default stdout)");
  app.add_option("--jobs", c.jobs, "worker threads (default SINGWAVE_JOBS or 1)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  app.add_subcommand("spectrum", "eigenvalue table");
  app.add_subcommand("sweep", "eigenvalue trajectories over an alpha range");
  app.add_subcommand("simulate", "time evolution: snapshots and energy trace");
  app.add_subcommand("extinction", "finite-time extinction study");
  app.add_subcommand("verify", "inequality and identity checks");
}

inline json config_echo(const RunConfig& c) {
  json j;
  j["subcommand"] = c.subcommand;
  if (c.subcommand == "spectrum") {
    j["alpha"] = c.alpha;
    j["kmax"] = c.kmax;
    j["radius"] = c.radius;
    j["audit"] = !c.no_audit;
  } else if (c.subcommand == "sweep") {
    j["alpha_min"] = c.alpha_min;
    j["alpha_max"] = c.alpha_max;
    j["alpha_step"] = c.alpha_step;
    j["refine_digits"] = c.refine_digits;
    j["at_integers"] = c.at_integers;
    j["kmax"] = c.kmax;
    j["radius"] = c.radius;
    j["pairing_tol"] = c.pairing_tol;
    j["audit"] = !c.no_audit;
  } else if (c.subcommand == "simulate" || c.subcommand == "extinction") {
    j["alpha"] = c.alpha;
    j["preset"] = c.preset;
    j["project"] = c.project;
    j["N"] = c.N;
    j["dt"] = c.dt;
    j["T"] = c.T;
    j["scheme"] = c.scheme;
    if (c.subcommand == "simulate") {
      j["snapshots"] = c.snapshots;
      j["snapshot_every"] = c.snapshot_every;
    } else {
      j["threshold"] = c.threshold;
      j["extinction_level"] = c.extinction_level;
      j["allow_noninteger"] = c.allow_noninteger;
    }
  } else if (c.subcommand == "verify") {
    j["check"] = c.check;
    j["nmax"] = c.nmax;
    j["trials"] = c.trials;
    j["verify_N"] = c.verify_N;
    if (c.sigma) j["sigma"] = *c.sigma;
    if (c.eta) j["eta"] = *c.eta;
    j["alpha"] = c.alpha;
  }
  j["format"] = c.format;
  j["jobs"] = c.jobs;
  return j;
}

inline json metadata(const RunConfig& c) {
  json m;
  m["tool"] = "singwave";
  m["version"] = kVersion;
  m["config"] = config_echo(c);
  m["seeds"] = c.subcommand == "verify" ? json{{"seed", c.seed}} : json::object();
  return m;
}

/// Writes to --out, or to `fallback` when no path is given.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw config_error("cannot open output file: " + path);
      os_ = &file_;
    }
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

// ---------------------------------------------------------------------------

inline void validate(const RunConfig& c) {
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw config_error(msg);
  };
  const std::string& s = c.subcommand;
  if (s == "spectrum" || s == "simulate" || s == "extinction")
    need(c.alpha > 0.0 && std::isfinite(c.alpha), "--alpha must be positive");
  if (s == "spectrum" || s == "sweep") {
    need(c.kmax >= 1, "--kmax must be >= 1");
    need(c.radius >= 0.0, "--radius must be >= 0");
  }
  if (s == "sweep") {
    need(c.alpha_min > 0.0 && c.alpha_max >= c.alpha_min, "need 0 < --alpha-min <= --alpha-max");
    need(c.alpha_step > 0.0, "--alpha-step must be positive");
    need(c.refine_digits >= 0 && c.refine_digits <= 12, "--refine-digits must be in [0, 12]");
  }
  if (s == "simulate" || s == "extinction") {
    need(c.N >= 2, "--N must be >= 2");
    need(c.dt > 0.0, "--dt must be positive");
    need(c.T >= 0.0, "--T must be non-negative");
    const SpectralProblem p(c.alpha);
    if (c.project)
      need(p.integer_n.has_value(), "--project requires integer alpha");
    if (s == "extinction") {
      need(p.integer_n.has_value() || c.allow_noninteger,
           "extinction requires integer alpha (pass --allow-noninteger to override)");
      need(c.T > 2.2, "extinction needs --T > 2.2");
      need(c.N % 4 == 0, "extinction refines from N/4; --N must be divisible by 4");
      need(c.threshold > 0.0 && c.threshold < 1.0, "--threshold must be in (0, 1)");
      need(c.extinction_level > 0.0 && c.extinction_level < 1.0, "--extinction-level must be in (0, 1)");
    }
    for (double t : c.snapshots) need(t >= 0.0 && t <= c.T, "snapshot time outside [0, T]");
    need(c.snapshot_every > 0.0, "--snapshot-every must be positive");
  }
  if (s == "verify") {
    need(c.nmax >= 1, "--nmax must be >= 1");
    need(c.trials >= 1, "--trials must be >= 1");
    need(c.verify_N >= 2, "--verify-N must be >= 2");
    if (c.sigma) need(*c.sigma >= 0.0 && *c.sigma < c.alpha, "--sigma must be in [0, alpha)");
    if (c.eta) need(*c.eta != 0.0, "--eta must be non-zero");
  }
}

// ---------------------------------------------------------------------------
// spectrum

inline int cmd_spectrum(const RunConfig& c, std::ostream& out) {
  const SpectralProblem p(c.alpha);
  FindOptions fo;
  fo.audit = !c.no_audit;
  const auto evs = find_eigenvalues(p, c.kmax, c.radius, fo);

  // integer alpha: confirm the Laguerre zeros against an argument-principle count
  std::optional<int> contour_count;
  std::optional<Rect> contour_box;
  if (p.integer_n && !c.no_audit) {
    double reach = c.radius;
    for (const auto& e : evs) reach = std::max(reach, std::abs(e.value) + 1.0);
    const Rect box{-std::max(reach, 1.0), -1e-2, -std::max(c.radius, 1.0), std::max(c.radius, 1.0)};
    const int cnt = count_zeros(p, box);
    const auto inside = std::count_if(evs.begin(), evs.end(), [&](const Eigenvalue& e) { return box.contains(e.value); });
    if (cnt != inside)
      throw numeric_error("spectrum: contour count " + std::to_string(cnt) + " != " + std::to_string(inside) +
                          " eigenvalues in " + box.str());
    contour_count = cnt;
    contour_box = box;
  }

  if (c.format == "json") {
    json j;
    j["metadata"] = metadata(c);
    j["metadata"]["empty_spectrum"] = evs.empty();
    j["metadata"]["real_count"] = p.real_eigenvalue_count();
    const auto sa = spectral_abscissa(evs);
    j["metadata"]["spectral_abscissa"] = sa ? json(*sa) : json(nullptr);
    if (contour_count) {
      j["metadata"]["contour_count"] = *contour_count;
      j["metadata"]["contour_box"] = contour_box->str();
    }
    j["eigenvalues"] = json::array();
    for (const auto& e : evs)
      j["eigenvalues"].push_back({{"index", e.index},
                                  {"branch", to_string(e.branch)},
                                  {"re", e.value.real()},
                                  {"im", e.value.imag()},
                                  {"residual", e.residual},
                                  {"source", to_string(e.source)}});
    out << j.dump(2) << "\n";
  } else {
    out << "index,branch,re,im,residual,source\n";
    if (evs.empty()) out << "# empty spectrum\n";
    for (const auto& e : evs)
      out << e.index << "," << to_string(e.branch) << "," << num(e.value.real()) << "," << num(e.value.imag())
          << "," << num(e.residual) << "," << to_string(e.source) << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// sweep

inline int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto grid = make_alpha_grid(c.alpha_min, c.alpha_max, c.alpha_step, c.refine_digits, c.at_integers);
  SweepOptions so;
  so.k_max = c.kmax;
  so.search_radius = c.radius;
  so.pairing_tol = c.pairing_tol;
  so.at_integers = c.at_integers;
  so.jobs = c.jobs;
  so.find.audit = !c.no_audit;
  const auto res = alpha_sweep(grid, so);

  std::vector<int> count_at(res.rows.size());
  for (std::size_t r = 0, i = 0; r < res.rows.size(); ++r) {
    while (res.alphas[i] != res.rows[r].alpha) ++i;
    count_at[r] = res.real_counts[i];
  }
  for (const auto& w : res.warnings) err << "warning: " << w << "\n";

  if (c.format == "json") {
    json j;
    j["metadata"] = metadata(c);
    j["metadata"]["alphas"] = res.alphas;
    j["metadata"]["real_counts"] = res.real_counts;
    j["metadata"]["warnings"] = res.warnings;
    j["metadata"]["empty"] = res.rows.empty();
    j["rows"] = json::array();
    for (std::size_t r = 0; r < res.rows.size(); ++r) {
      const auto& row = res.rows[r];
      j["rows"].push_back({{"alpha", row.alpha},
                           {"trajectory_id", row.trajectory},
                           {"branch", to_string(row.branch)},
                           {"re", row.value.real()},
                           {"im", row.value.imag()},
                           {"real_count", count_at[r]}});
    }
    out << j.dump(2) << "\n";
  } else {
    out << "alpha,trajectory_id,branch,re,im,real_count\n";
    for (std::size_t r = 0; r < res.rows.size(); ++r) {
      const auto& row = res.rows[r];
      out << num(row.alpha) << "," << row.trajectory << "," << to_string(row.branch) << ","
          << num(row.value.real()) << "," << num(row.value.imag()) << "," << count_at[r] << "\n";
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// simulate

inline InitialData prepared_data(const RunConfig& c) {
  const SpectralProblem p(c.alpha);
  InitialData d = make_initial_data(c.preset, p);
  if (c.project && p.integer_n && *p.integer_n >= 1) d = project_out(d, *p.integer_n);
  return d;
}

inline SimOptions sim_options(const RunConfig& c) {
  SimOptions o;
  o.N = c.N;
  o.dt = c.dt;
  o.T = c.T;
  o.scheme = c.scheme == "crank-nicolson" ? Scheme::crank_nicolson : Scheme::implicit_midpoint;
  return o;
}

inline int cmd_simulate(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const InitialData d = prepared_data(c);
  SimOptions o = sim_options(c);
  o.snapshot_times = c.snapshots;
  if (o.snapshot_times.empty()) {
    const long m = std::lround(std::floor(c.T / c.snapshot_every + 1e-9));
    for (long i = 0; i <= m; ++i) o.snapshot_times.push_back(i * c.snapshot_every);
  }
  const auto run = simulate(c.alpha, d, o);
  const double e0 = run.trace.energies.front();
  err << "simulate: " << run.steps << " steps, E(T)/E(0) = " << run.trace.energies.back() / e0
      << ", max relative energy rise = " << run.max_energy_increase << "\n";

  if (c.format == "json") {
    json j;
    j["metadata"] = metadata(c);
    j["metadata"]["data"] = d.name;
    j["metadata"]["steps"] = run.steps;
    j["metadata"]["max_energy_increase"] = run.max_energy_increase;
    j["energy"] = {{"t", run.trace.times}, {"E", run.trace.energies}};
    j["snapshots"] = json::array();
    const auto xs = run.grid.nodes();
    for (const auto& s : run.snapshots)
      j["snapshots"].push_back({{"t", s.t}, {"x", xs}, {"u", s.state.u}, {"v", s.state.v}});
    Sink sink(c.out, out);
    *sink << j.dump() << "\n";
    return 0;
  }
  if (c.out.empty()) {
    write_energy(out, run.trace);
    return 0;
  }
  {
    Sink sink(c.out, out);
    write_snapshots(*sink, run);
  }
  Sink energy_sink(c.energy_out.empty() ? c.out + ".energy.csv" : c.energy_out, out);
  write_energy(*energy_sink, run.trace);
  return 0;
}

// ---------------------------------------------------------------------------
// extinction

inline double energy_at(const EnergyTrace& tr, double t) {
  for (std::size_t i = 0; i < tr.times.size(); ++i)
    if (tr.times[i] >= t - 1e-12) return tr.energies[i];
  return tr.energies.back();
}

inline json extinction_report(const RunConfig& c) {
  const SpectralProblem p(c.alpha);
  const InitialData d = prepared_data(c);
  const int n = p.integer_n.value_or(-1);
  json j;
  j["alpha"] = c.alpha;
  j["data"] = d.name;
  j["data_norm"] = h_norm(d);
  if (n >= 1) j["projection_condition"] = projection_condition(d, n);
  else j["projection_condition"] = json::array();

  struct Level {
    int N;
    double dt;
  };
  const std::vector<Level> levels{{c.N / 4, 4 * c.dt}, {c.N / 2, 2 * c.dt}, {c.N, c.dt}};
  std::vector<double> tail_times;
  for (double t : {2.5, 3.0, 3.5})
    if (t <= c.T) tail_times.push_back(t);

  auto runs = parallel_map(levels.size(), c.jobs, [&](std::size_t i) {
    SimOptions o = sim_options(c);
    o.N = levels[i].N;
    o.dt = levels[i].dt;
    if (i + 1 == levels.size()) o.snapshot_times = tail_times;
    return simulate(c.alpha, d, o);
  });

  json lv = json::array();
  std::vector<double> ratios;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const auto& tr = runs[i].trace;
    const double e0 = tr.energies.front();
    const double r = e0 > 0.0 ? energy_at(tr, 2.2) / e0 : 0.0;
    ratios.push_back(r);
    const auto te = extinction_time(runs[i], c.extinction_level);
    lv.push_back({{"N", levels[i].N},
                  {"dt", levels[i].dt},
                  {"energy_ratio_2_2", r},
                  {"energy_ratio_T", e0 > 0.0 ? tr.energies.back() / e0 : 0.0},
                  {"extinction_time", te ? json(*te) : json(nullptr)},
                  {"max_energy_increase", runs[i].max_energy_increase}});
  }
  j["levels"] = lv;
  const bool decreasing = ratios[0] > ratios[1] && ratios[1] > ratios[2];
  j["refinement_decreasing"] = decreasing;
  // a converged nonzero E(2.2) means no extinction; extinction shows up as
  // E(2.2) shrinking with the discretization error
  const double factor = std::min(ratios[0] / ratios[1], ratios[1] / ratios[2]);
  j["refinement_factor"] = factor;
  const bool extinct = ratios.back() < c.threshold && factor > 2.0;
  j["verdict"] = extinct ? "extinction" : "no extinction";
  const auto te = extinction_time(runs.back(), c.extinction_level);
  j["extinction_time"] = te ? json(*te) : json(nullptr);

  if (!extinct) {
    j["decay_rate"] = decay_rate(runs.back().trace, c.T / 2, c.T);
    const auto evs = find_eigenvalues(p, 1, 1.0);
    const auto sa = spectral_abscissa(evs);
    j["spectral_abscissa"] = sa ? json(*sa) : json(nullptr);
  }

  if (n >= 1 && !extinct && !tail_times.empty()) {
    const auto tail = tail_match_error(d, n, runs.back());
    double worst = 0.0;
    json per = json::array();
    for (const auto& [t, e] : tail) {
      per.push_back({{"t", t}, {"error", e}});
      worst = std::max(worst, e);
    }
    SimOptions o = sim_options(c);
    o.snapshot_times = tail_times;
    const auto bench = standing_wave_error(c.alpha, 1, o);
    const double bench_worst = *std::max_element(bench.begin(), bench.end());
    j["tail_comparison"] = {{"per_time", per},
                            {"max_error", worst},
                            {"standing_wave_error", bench_worst},
                            {"within_2x_benchmark", worst <= 2.0 * bench_worst}};
  }
  return j;
}

inline void flatten(const json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
  } else if (j.is_number_float()) {
    out << prefix << "," << num(j.get<double>()) << "\n";
  } else if (j.is_string()) {
    out << prefix << "," << j.get<std::string>() << "\n";
  } else {
    out << prefix << "," << j.dump() << "\n";
  }
}

inline int cmd_extinction(const RunConfig& c, std::ostream& out) {
  const json report = extinction_report(c);
  if (c.format == "json") {
    json j;
    j["metadata"] = metadata(c);
    j["report"] = report;
    out << j.dump(2) << "\n";
  } else {
    out << "key,value\n";
    flatten(report, "", out);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// verify

struct CheckRow {
  std::string check;
  std::string item;
  double value;
  double threshold;
  double margin;  // positive when the check passes
  bool pass;
  std::string note;
};

inline std::vector<CheckRow> run_checks(const RunConfig& c) {
  std::vector<CheckRow> rows;
  const bool all = c.check == "all";

  if (all || c.check == "hardy") {
    const auto h = hardy_sweep(c.trials, c.seed);
    rows.push_back({"hardy", "worst lhs/rhs over " + std::to_string(h.trials) + " splines", h.worst_ratio, 1.0,
                    1.0 - h.worst_ratio, h.failures == 0, std::to_string(h.failures) + " failures"});
  }

  if (all || c.check == "resolvent") {
    struct Case {
      double alpha, sigma, eta;
    };
    std::vector<Case> cases;
    if (c.sigma || c.eta) cases.push_back({c.alpha, c.sigma.value_or(0.0), c.eta.value_or(5.0)});
    else cases = {{2.0, 0.0, 5.0}, {1.5, 0.5, 2.0}, {3.0, 1.0, 10.0}};
    const auto res = parallel_map(cases.size(), c.jobs, [&](std::size_t i) {
      return resolvent_bound_check(cases[i].alpha, cases[i].sigma, cases[i].eta, c.trials, c.verify_N, c.seed);
    });
    for (std::size_t i = 0; i < cases.size(); ++i) {
      std::ostringstream item;
      item << "alpha=" << num(cases[i].alpha) << " sigma=" << num(cases[i].sigma) << " eta=" << num(cases[i].eta);
      rows.push_back({"resolvent", item.str(), res[i].worst_ratio, 0.95, res[i].worst_ratio - 0.95,
                      res[i].worst_ratio >= 0.95, "bound " + num(res[i].bound)});
    }
  }

  if (all || c.check == "gupta") {
    for (const auto& m : [&] {
           std::vector<GuptaRow> g;
           for (int n = 1; n <= c.nmax; ++n) g.push_back({n, laguerre_modes(n).back().mu, 3.0 / (2.0 + n)});
           return g;
         }()) {
      rows.push_back({"gupta", "n=" + std::to_string(m.n), std::abs(m.mu), m.bound, m.margin(), m.margin() >= -1e-12,
                      m.n == 1 ? "equality expected" : ""});
    }
  }

  if (all || c.check == "lemma") {
    struct Case {
      std::string preset;
      int n;
    };
    std::vector<Case> cases;
    for (const char* preset : {"sine:1", "sine:2", "bump"})
      for (int n = 1; n <= 3; ++n) cases.push_back({preset, n});
    const auto res = parallel_map(cases.size(), c.jobs, [&](std::size_t i) {
      const SpectralProblem p(cases[i].n + 1.0);
      return lemma_condition_identity(make_initial_data(cases[i].preset, p), cases[i].n);
    });
    for (std::size_t i = 0; i < cases.size(); ++i) {
      const double scale = std::max(1.0, res[i].data_norm * res[i].data_norm);
      const double v = res[i].corrected_discrepancy() / scale;
      rows.push_back({"lemma", cases[i].preset + " n=" + std::to_string(cases[i].n), v, 1e-8, 1e-8 - v, v < 1e-8,
                      "as printed (no -mu factor): " + num(res[i].literal_discrepancy() / scale)});
    }
  }
  return rows;
}

inline int cmd_verify(const RunConfig& c, std::ostream& out) {
  const auto rows = run_checks(c);
  bool ok = true;
  for (const auto& r : rows) ok = ok && r.pass;
  if (c.format == "json") {
    json j;
    j["metadata"] = metadata(c);
    j["all_pass"] = ok;
    j["checks"] = json::array();
    for (const auto& r : rows)
      j["checks"].push_back({{"check", r.check},
                             {"item", r.item},
                             {"value", r.value},
                             {"threshold", r.threshold},
                             {"margin", r.margin},
                             {"pass", r.pass},
                             {"note", r.note}});
    out << j.dump(2) << "\n";
  } else {
    out << "check,item,value,threshold,margin,pass,note\n";
    for (const auto& r : rows)
      out << r.check << "," << r.item << "," << num(r.value) << "," << num(r.threshold) << "," << num(r.margin)
          << "," << (r.pass ? "pass" : "FAIL") << "," << r.note << "\n";
  }
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------

/// Parses argv and runs the subcommand. Exit codes: 0 success, 1 computation
/// error or failed check, 2 configuration error.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Spectra and time evolution of u_tt + (2 alpha / x) u_t = u_xx on (0, 1)", "singwave"};
  RunConfig c;
  c.jobs = default_jobs();
  build_app(app, c);
  app.set_version_flag("--version", kVersion);
  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }
  for (auto* sub : app.get_subcommands()) c.subcommand = sub->get_name();

  try {
    validate(c);
    if (c.subcommand == "simulate") return cmd_simulate(c, out, err);
    Sink sink(c.out, out);
    if (c.subcommand == "spectrum") return cmd_spectrum(c, *sink);
    if (c.subcommand == "sweep") return cmd_sweep(c, *sink, err);
    if (c.subcommand == "extinction") return cmd_extinction(c, *sink);
    if (c.subcommand == "verify") return cmd_verify(c, *sink);
    throw config_error("unknown subcommand");
  } catch (const config_error& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace singwave::cli
