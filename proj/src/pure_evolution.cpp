#include "qkt/pure_evolution.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qkt {

PureTrajectory initial_trajectory(const Vector& psi0, double alpha0) {
  PureTrajectory t;
  t.psi = psi0;
  t.dpsi = Vector::Zero(psi0.size());
  t.step = 0;
  t.alpha0 = alpha0;
  return t;
}

PureTrajectory step_with_derivative(const FloquetOperator& f, const PureTrajectory& traj) {
  const SpinSystem& s = *f.sys;
  if (traj.psi.size() != s.dim) {
    throw std::invalid_argument("step_with_derivative: dimension mismatch");
  }
  PureTrajectory out;
  out.alpha0 = traj.alpha0;
  out.step = traj.step + 1;
  out.psi = f.u * traj.psi;
  out.dpsi = f.u * traj.dpsi;
  for (int i = 0; i < s.dim; ++i) {
    out.dpsi(i) += Complex(0, -s.jz(i, i).real()) * out.psi(i);
  }
  return out;
}

double qfi_pure(const PureTrajectory& traj) {
  const double dd = traj.dpsi.squaredNorm();
  const double cross = std::norm(traj.psi.dot(traj.dpsi));
  return std::max(0.0, 4.0 * (dd - cross));
}

double loschmidt_echo(const SpinSystem& sys, double alpha, double beta, double epsilon,
                      const Vector& psi0, long n, double period) {
  if (n < 0) throw std::invalid_argument("loschmidt_echo: n must be >= 0");
  auto shared = std::make_shared<const SpinSystem>(sys);
  const FloquetOperator fa = build_floquet(shared, alpha, beta, period);
  const FloquetOperator fb = build_floquet(shared, alpha + epsilon, beta, period);
  Vector a = psi0, b = psi0;
  for (long k = 0; k < n; ++k) {
    a = fa.u * a;
    b = fb.u * b;
  }
  return std::min(1.0, std::norm(a.dot(b)));
}

double extrapolate_eps2(const std::vector<std::pair<double, double>>& samples,
                        double* residual_rel) {
  const int n = static_cast<int>(samples.size());
  const int order = std::min(3, n);
  Eigen::MatrixXd a(n, order);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    const double x = samples[i].first * samples[i].first;
    for (int c = 0; c < order; ++c) a(i, c) = std::pow(x, c);
    y(i) = samples[i].second;
  }
  const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(y);
  if (residual_rel) {
    const Eigen::VectorXd fit = a * coef;
    double rel = 0;
    for (int i = 0; i < n; ++i) {
      const double scale = std::max(std::abs(y(i)), 1e-300);
      rel = std::max(rel, std::abs(fit(i) - y(i)) / scale);
    }
    *residual_rel = rel;
  }
  return coef(0);
}

EchoQfiEstimate qfi_from_echo(const SpinSystem& sys, double alpha, double beta,
                              const Vector& psi0, long n,
                              const std::vector<double>& eps_list, double period) {
  std::set<double> distinct(eps_list.begin(), eps_list.end());
  distinct.erase(0.0);
  if (distinct.size() < 2) {
    throw std::invalid_argument("qfi_from_echo: need >= 2 distinct nonzero eps values");
  }
  EchoQfiEstimate est;
  if (n == 0) return est;

  auto shared = std::make_shared<const SpinSystem>(sys);
  const FloquetOperator fa = build_floquet(shared, alpha, beta, period);
  Vector ref = psi0;
  for (long k = 0; k < n; ++k) ref = fa.u * ref;

  for (double eps : distinct) {
    const FloquetOperator fb = build_floquet(shared, alpha + eps, beta, period);
    Vector b = psi0;
    for (long k = 0; k < n; ++k) b = fb.u * b;
    const double echo = std::min(1.0, std::norm(ref.dot(b)));
    est.samples.emplace_back(eps, 4.0 * (1.0 - echo) / (eps * eps));
  }
  est.value = std::max(0.0, extrapolate_eps2(est.samples, &est.residual_rel));
  est.residual_warning = est.residual_rel > 1e-3;
  return est;
}

std::vector<double> echo_eps_ladder(double qfi_estimate) {
  double top = 1e-3;
  if (qfi_estimate > 0) {
    // keep eps^2 * I at or below 1e-2 for the largest rung
    top = std::min(top, 0.1 / std::sqrt(qfi_estimate));
  }
  return {top, top / 2, top / 4};
}

std::vector<long> checkpoint_schedule(long n_max, int points_per_decade, long multiple) {
  if (multiple < 1) throw std::invalid_argument("checkpoint_schedule: multiple must be >= 1");
  std::set<long> cps{0};
  auto insert = [&](long n) {
    n = ((n + multiple - 1) / multiple) * multiple;  // round up onto the stride
    if (n >= 1 && n <= n_max) cps.insert(n);
  };
  for (long n = 1; n <= std::min<long>(64, n_max); n += multiple == 1 ? 1 : multiple) insert(n);
  for (long decade = 10; decade <= n_max && decade > 0; decade *= 10) insert(decade);
  if (n_max > 64) {
    const double lmin = std::log10(64.0), lmax = std::log10(static_cast<double>(n_max));
    const int total = std::max(2, static_cast<int>((lmax - lmin) * points_per_decade));
    for (int k = 0; k <= total; ++k) {
      const double l = lmin + (lmax - lmin) * k / total;
      insert(std::llround(std::pow(10.0, l)));
    }
  }
  insert(n_max);
  return {cps.begin(), cps.end()};
}

QfiTrace qfi_trace_pure(const FloquetOperator& f, const Vector& psi0,
                        const std::vector<long>& checkpoints) {
  QfiTrace trace;
  trace.period = f.period;
  trace.params.n_spins = f.sys->n_spins();
  trace.params.alpha = f.alpha;
  trace.params.beta = f.beta;
  trace.params.method = "pure-exact";

  std::set<long> want(checkpoints.begin(), checkpoints.end());
  const long n_max = want.empty() ? 0 : *want.rbegin();
  PureTrajectory traj = initial_trajectory(psi0, f.alpha);
  if (want.count(0)) {
    trace.steps.push_back(0);
    trace.qfi.push_back(qfi_pure(traj));
  }
  for (long n = 1; n <= n_max; ++n) {
    traj = step_with_derivative(f, traj);
    if (n % 10000 == 0 || n == n_max) {
      const double drift = std::abs(traj.psi.norm() - 1.0);
      if (drift > 1e-10 * (1.0 + n / 10000.0)) {
        throw NumericalError("qfi_trace_pure: norm drift " + std::to_string(drift) +
                             " at step " + std::to_string(n));
      }
    }
    if (want.count(n)) {
      trace.steps.push_back(n);
      trace.qfi.push_back(qfi_pure(traj));
    }
  }
  return trace;
}

QfiTrace qfi_trace_echo(const FloquetOperator& f, const Vector& psi0,
                        const std::vector<long>& checkpoints,
                        const std::vector<double>& eps_list) {
  std::set<double> distinct(eps_list.begin(), eps_list.end());
  distinct.erase(0.0);
  if (distinct.size() < 2) {
    throw std::invalid_argument("qfi_trace_echo: need >= 2 distinct nonzero eps values");
  }

  QfiTrace trace;
  trace.period = f.period;
  trace.params.n_spins = f.sys->n_spins();
  trace.params.alpha = f.alpha;
  trace.params.beta = f.beta;
  trace.params.method = "pure-echo";

  std::vector<std::pair<double, Vector>> branches;  // (eps, state)
  std::vector<FloquetOperator> ops;
  for (double e : distinct) {
    branches.emplace_back(e, psi0);
    ops.push_back(build_floquet(f.sys, f.alpha + e, f.beta, f.period));
  }
  Vector ref = psi0;

  std::set<long> want(checkpoints.begin(), checkpoints.end());
  const long n_max = want.empty() ? 0 : *want.rbegin();
  auto record = [&](long n) {
    std::vector<std::pair<double, double>> samples;
    for (auto& [e, state] : branches) {
      const double echo = std::min(1.0, std::norm(ref.dot(state)));
      samples.emplace_back(e, 4.0 * (1.0 - echo) / (e * e));
    }
    trace.steps.push_back(n);
    trace.qfi.push_back(n == 0 ? 0.0 : std::max(0.0, extrapolate_eps2(samples)));
  };

  if (want.count(0)) record(0);
  for (long n = 1; n <= n_max; ++n) {
    ref = f.u * ref;
    for (size_t i = 0; i < branches.size(); ++i) branches[i].second = ops[i].u * branches[i].second;
    if (want.count(n)) record(n);
  }
  return trace;
}

}  // namespace qkt
