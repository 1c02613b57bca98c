#include "qkt/analysis.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "qkt/trace_io.hpp"
#include "qkt/version.hpp"

namespace qkt {

ScalingFit fit_power_law(const std::vector<double>& xs, const std::vector<double>& ys,
                         double range_min, double range_max) {
  if (xs.size() != ys.size()) throw std::invalid_argument("fit_power_law: size mismatch");
  std::vector<double> lx, ly;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] < range_min || xs[i] > range_max) continue;
    if (!(xs[i] > 0) || !(ys[i] > 0)) {
      throw std::invalid_argument("fit_power_law: non-positive value inside fit range (x=" +
                                  std::to_string(xs[i]) + ", y=" + std::to_string(ys[i]) + ")");
    }
    lx.push_back(std::log(xs[i]));
    ly.push_back(std::log(ys[i]));
  }
  const int n = static_cast<int>(lx.size());
  if (n < 3) {
    throw std::invalid_argument("fit_power_law: need >= 3 points inside range, have " +
                                std::to_string(n));
  }

  double sx = 0, sy = 0;
  for (int i = 0; i < n; ++i) {
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (!(sxx > 0)) throw std::invalid_argument("fit_power_law: degenerate abscissa");

  ScalingFit fit;
  fit.exponent = sxy / sxx;
  fit.log_prefactor = my - fit.exponent * mx;
  double ss_res = 0;
  for (int i = 0; i < n; ++i) {
    const double r = ly[i] - (fit.log_prefactor + fit.exponent * lx[i]);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  fit.exponent_stderr = n > 2 ? std::sqrt(ss_res / (n - 2) / sxx) : 0.0;
  fit.fit_min = *std::min_element(lx.begin(), lx.end());
  fit.fit_max = *std::max_element(lx.begin(), lx.end());
  fit.fit_min = std::exp(fit.fit_min);
  fit.fit_max = std::exp(fit.fit_max);
  fit.n_points = n;
  return fit;
}

std::optional<long> detect_saturation(const QfiTrace& trace, double level) {
  if (!(level > 0 && level < 1)) {
    throw std::invalid_argument("detect_saturation: level must be in (0, 1)");
  }
  const size_t n = trace.qfi.size();
  if (n < 2) return std::nullopt;

  size_t imax = 0;
  for (size_t i = 1; i < n; ++i) {
    if (trace.qfi[i] > trace.qfi[imax]) imax = i;
  }
  const double vmax = trace.qfi[imax];
  if (!(vmax > 0)) return std::nullopt;

  // still rising at the end: the maximum sits on the final sample and the
  // trace was climbing into it
  if (imax == n - 1 && trace.qfi[n - 1] > trace.qfi[n - 2]) return std::nullopt;

  for (size_t i = 0; i < n; ++i) {
    if (trace.qfi[i] >= level * vmax) return trace.steps[i];
  }
  return std::nullopt;
}

double saturated_qfi(const QfiTrace& trace) {
  if (trace.qfi.empty()) throw std::invalid_argument("saturated_qfi: empty trace");
  return trace.qfi.back();
}

std::string to_string(SweepMethod m) {
  switch (m) {
    case SweepMethod::PureExact: return "pure-exact";
    case SweepMethod::PureEcho: return "pure-echo";
    case SweepMethod::Dissipative: return "dissipative";
  }
  return "?";
}

std::string to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::SpinCount: return "N";
    case SweepVariable::Time: return "t";
    case SweepVariable::Gamma: return "gamma";
    case SweepVariable::Delta: return "delta";
  }
  return "?";
}

SweepMethod sweep_method_from_string(const std::string& s) {
  if (s == "pure-exact") return SweepMethod::PureExact;
  if (s == "pure-echo") return SweepMethod::PureEcho;
  if (s == "dissipative") return SweepMethod::Dissipative;
  throw std::invalid_argument("unknown method: " + s);
}

SweepVariable sweep_variable_from_string(const std::string& s) {
  if (s == "N") return SweepVariable::SpinCount;
  if (s == "t") return SweepVariable::Time;
  if (s == "gamma") return SweepVariable::Gamma;
  if (s == "delta") return SweepVariable::Delta;
  throw std::invalid_argument("unknown sweep variable: " + s);
}

PointParams resolve_point(const SweepSpec& spec, double value) {
  PointParams p;
  const SweepFixed& f = spec.fixed;
  p.n_spins = f.n_spins;
  p.alpha = f.alpha;
  p.delta = f.delta;
  p.gamma = f.gamma;
  p.theta0 = f.theta0;
  p.phi0 = f.phi0;
  p.n_max = f.n_max;
  p.substeps = f.substeps;
  p.eps_list = f.eps_list;
  p.method = to_string(spec.method);

  switch (spec.variable) {
    case SweepVariable::SpinCount: {
      const double rounded = std::round(value);
      if (std::abs(value - rounded) > 1e-9 || static_cast<long>(rounded) % 2 != 0 ||
          rounded < 2) {
        throw std::invalid_argument("run_sweep: N values must be even integers >= 2, got " +
                                    std::to_string(value));
      }
      p.n_spins = static_cast<int>(rounded);
      break;
    }
    case SweepVariable::Time:
      if (value < 0 || std::abs(value - std::round(value)) > 1e-9) {
        throw std::invalid_argument("run_sweep: t values must be non-negative integer steps");
      }
      p.n_max = static_cast<long>(std::round(value));
      break;
    case SweepVariable::Gamma:
      if (value < 0) throw std::invalid_argument("run_sweep: gamma must be >= 0");
      p.gamma = value;
      break;
    case SweepVariable::Delta:
      p.delta = value;
      break;
  }
  p.beta = f.beta_pi_j_coeff * kPi * (p.n_spins / 2.0) + p.delta;
  return p;
}

std::filesystem::path default_cache_dir() {
  if (const char* env = std::getenv("QKT_CACHE_DIR"); env && *env) return env;
  return "qkt-cache";
}

namespace {

nlohmann::json point_json(const PointParams& p, const std::vector<long>& checkpoints) {
  nlohmann::json out;
  out["version"] = kToolVersion;
  out["method"] = p.method;
  out["N"] = p.n_spins;
  out["alpha"] = p.alpha;
  out["beta"] = p.beta;
  out["delta"] = p.delta;
  out["gamma"] = p.gamma;
  out["theta0"] = p.theta0;
  out["phi0"] = p.phi0;
  out["n_max"] = p.n_max;
  out["substeps"] = p.substeps;
  out["eps"] = p.eps_list;
  out["checkpoints"] = checkpoints;
  return out;
}

uint64_t fnv1a(const std::string& data) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string cache_key(const PointParams& p, const std::vector<long>& checkpoints) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(point_json(p, checkpoints).dump())));
  return buf;
}

// runs one resolved sweep point; eps ladder and substeps must already be final
QfiTrace run_point(const PointParams& p, const std::vector<long>& checkpoints) {
  auto sys = std::make_shared<const SpinSystem>(build_spin_system(p.n_spins));
  const Vector psi0 = coherent_state(*sys, {p.theta0, p.phi0});
  const FloquetOperator f = build_floquet(sys, p.alpha, p.beta);
  QfiTrace trace;
  if (p.method == "pure-exact") {
    trace = qfi_trace_pure(f, psi0, checkpoints);
  } else if (p.method == "pure-echo") {
    trace = qfi_trace_echo(f, psi0, checkpoints, p.eps_list);
  } else if (p.method == "dissipative") {
    trace = qfi_trace_dissipative(f, p.gamma, psi0, checkpoints, p.eps_list, p.substeps);
  } else {
    throw std::invalid_argument("run_point: unknown method " + p.method);
  }
  trace.params.delta = p.delta;
  trace.params.theta0 = p.theta0;
  trace.params.phi0 = p.phi0;
  return trace;
}

// a-priori QFI magnitude bound used to size the auto eps ladder: the exact
// pure trace is cheap and bounds the echo/dissipative value from above
double pure_qfi_bound(const PointParams& p) {
  auto sys = std::make_shared<const SpinSystem>(build_spin_system(p.n_spins));
  const Vector psi0 = coherent_state(*sys, {p.theta0, p.phi0});
  const FloquetOperator f = build_floquet(sys, p.alpha, p.beta);
  const QfiTrace t = qfi_trace_pure(f, psi0, {p.n_max});
  return t.qfi.empty() ? 0.0 : t.qfi.back();
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, const SweepOptions& opts) {
  if (spec.values.empty()) throw std::invalid_argument("run_sweep: values must be non-empty");
  for (size_t i = 1; i < spec.values.size(); ++i) {
    if (!(spec.values[i] > spec.values[i - 1])) {
      throw std::invalid_argument("run_sweep: values must be strictly increasing");
    }
  }
  if (spec.method == SweepMethod::Dissipative && spec.variable != SweepVariable::Gamma &&
      spec.fixed.gamma < 0) {
    throw std::invalid_argument("run_sweep: gamma must be >= 0");
  }

  // time sweeps reuse one trajectory: all requested times become checkpoints
  // of a single run per remaining parameter set
  const bool time_sweep = spec.variable == SweepVariable::Time;

  std::vector<PointParams> points;
  std::vector<std::vector<long>> schedules;
  if (time_sweep) {
    PointParams p = resolve_point(spec, spec.values.back());
    std::vector<long> cps;
    for (double v : spec.values) cps.push_back(static_cast<long>(std::round(v)));
    points.push_back(p);
    schedules.push_back(cps);
  } else {
    for (double v : spec.values) {
      points.push_back(resolve_point(spec, v));
      schedules.push_back(checkpoint_schedule(points.back().n_max,
                                              spec.fixed.points_per_decade));
    }
  }

  // finalize auto parameters so cache keys are stable
  for (auto& p : points) {
    if (p.method == "dissipative" && p.substeps <= 0) {
      p.substeps = default_substeps(p.gamma, p.n_spins);
    }
    if (p.method != "pure-exact" && p.eps_list.empty()) {
      p.eps_list = echo_eps_ladder(pure_qfi_bound(p));
    }
  }

  const std::filesystem::path cache_dir =
      opts.cache_dir.empty() ? default_cache_dir() : opts.cache_dir;

  SweepResult result;
  result.spec = spec;
  result.points.resize(points.size());

  std::atomic<size_t> next{0};
  std::mutex error_mutex;
  std::string first_error;

  auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= points.size()) break;
      const auto start = std::chrono::steady_clock::now();
      try {
        SweepPoint& slot = result.points[i];
        slot.value = time_sweep ? spec.values.back() : spec.values[i];
        const std::string key = cache_key(points[i], schedules[i]);
        const auto csv_path = cache_dir / (key + ".csv");
        const auto meta_path = cache_dir / (key + ".json");
        if (opts.use_cache && std::filesystem::exists(csv_path) &&
            std::filesystem::exists(meta_path)) {
          slot.trace = trace_from_csv(read_file(csv_path));
          trace_params_from_json(read_file(meta_path), slot.trace);
          slot.from_cache = true;
        } else {
          slot.trace = run_point(points[i], schedules[i]);
          if (opts.use_cache) {
            write_file(csv_path, trace_to_csv(slot.trace));
            write_file(meta_path, trace_metadata_json(slot.trace));
          }
        }
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (first_error.empty()) {
          first_error = "sweep point " + to_string(spec.variable) + "=" +
                        format_double(time_sweep ? spec.values.back() : spec.values[i]) +
                        " failed: " + e.what();
        }
      }
      result.points[i].wall_time_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
  };

  const int n_workers = std::max(1, std::min<int>(opts.workers, static_cast<int>(points.size())));
  std::vector<std::thread> pool;
  for (int w = 0; w < n_workers - 1; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (!first_error.empty()) throw std::runtime_error(first_error);

  // a time sweep produced one trace; split it into per-value rows
  if (time_sweep) {
    const QfiTrace& full = result.points[0].trace;
    std::vector<SweepPoint> split(spec.values.size());
    for (size_t k = 0; k < spec.values.size(); ++k) {
      const long step = static_cast<long>(std::round(spec.values[k]));
      SweepPoint& sp = split[k];
      sp.value = spec.values[k];
      sp.from_cache = result.points[0].from_cache;
      sp.wall_time_s = k == 0 ? result.points[0].wall_time_s : 0.0;
      sp.trace.params = full.params;
      sp.trace.period = full.period;
      for (size_t i = 0; i < full.steps.size(); ++i) {
        if (full.steps[i] == step) {
          sp.trace.steps.push_back(full.steps[i]);
          sp.trace.qfi.push_back(full.qfi[i]);
          if (!full.trace_error.empty()) {
            sp.trace.trace_error.push_back(full.trace_error[i]);
            sp.trace.min_eigenvalue.push_back(full.min_eigenvalue[i]);
          }
        }
      }
    }
    result.points = std::move(split);
  }
  return result;
}

std::vector<std::pair<double, double>> table_at_time(const SweepResult& result, long step) {
  std::vector<std::pair<double, double>> table;
  for (const auto& point : result.points) {
    bool found = false;
    for (size_t i = 0; i < point.trace.steps.size(); ++i) {
      if (point.trace.steps[i] == step) {
        table.emplace_back(point.value, point.trace.qfi[i]);
        found = true;
        break;
      }
    }
    if (!found) {
      throw std::invalid_argument("table_at_time: step " + std::to_string(step) +
                                  " not sampled for value " + format_double(point.value));
    }
  }
  return table;
}

}  // namespace qkt
