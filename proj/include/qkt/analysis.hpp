#pragma once

#include <filesystem>
#include <limits>
#include <optional>

#include "qkt/dissipative_evolution.hpp"

namespace qkt {

// ordinary least squares on (log x, log y); exponent is the slope
struct ScalingFit {
  double exponent = 0;
  double exponent_stderr = 0;
  double log_prefactor = 0;
  double r_squared = 0;
  double fit_min = 0;
  double fit_max = 0;
  int n_points = 0;
};

ScalingFit fit_power_law(const std::vector<double>& xs, const std::vector<double>& ys,
                         double range_min = 0,
                         double range_max = std::numeric_limits<double>::infinity());

// smallest step where qfi >= level * global max; empty when the trace is
// still rising at its end (max at the final point with positive final slope)
std::optional<long> detect_saturation(const QfiTrace& trace, double level = 0.95);

// late-time value of a settled trace (the plateau the dissipative QFI decays
// or rises to); callers should confirm saturation first via detect_saturation
double saturated_qfi(const QfiTrace& trace);

enum class SweepMethod { PureExact, PureEcho, Dissipative };
enum class SweepVariable { SpinCount, Time, Gamma, Delta };

std::string to_string(SweepMethod m);
std::string to_string(SweepVariable v);
SweepMethod sweep_method_from_string(const std::string& s);
SweepVariable sweep_variable_from_string(const std::string& s);

// parameters held fixed across sweep points; beta is specified structurally
// as coeff * pi * j + delta so resonance values stay exact when N varies
struct SweepFixed {
  int n_spins = 20;
  double alpha = kPi / 2;
  double beta_pi_j_coeff = 1.0;
  double delta = 0.0;
  double gamma = 0.0;
  double theta0 = kPi / 4;
  double phi0 = kPi / 4;
  long n_max = 1000;
  int substeps = 0;               // 0 = auto
  std::vector<double> eps_list;   // empty = auto ladder from a pure-QFI bound
  int points_per_decade = 16;
};

struct SweepSpec {
  SweepVariable variable = SweepVariable::SpinCount;
  std::vector<double> values;  // non-empty, strictly increasing
  SweepFixed fixed;
  SweepMethod method = SweepMethod::PureExact;
};

struct SweepPoint {
  double value = 0;
  QfiTrace trace;
  bool from_cache = false;
  double wall_time_s = 0;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepPoint> points;  // ordered by value
};

struct SweepOptions {
  int workers = 1;
  bool use_cache = true;
  std::filesystem::path cache_dir;  // empty: $QKT_CACHE_DIR or ./qkt-cache
};

// executes the requested simulations point by point (parallel up to
// `workers`), deterministic given the spec; per-point results are cached on
// disk keyed by a content hash of the resolved point parameters
SweepResult run_sweep(const SweepSpec& spec, const SweepOptions& opts = {});

// resolved per-point parameters (useful for manifests and error reporting)
struct PointParams {
  int n_spins;
  double alpha, beta, delta, gamma, theta0, phi0;
  long n_max;
  int substeps;
  std::vector<double> eps_list;
  std::string method;
};
PointParams resolve_point(const SweepSpec& spec, double value);

std::filesystem::path default_cache_dir();

// (value, qfi at `step`) rows; step must be a checkpoint of every trace
std::vector<std::pair<double, double>> table_at_time(const SweepResult& result, long step);

}  // namespace qkt
