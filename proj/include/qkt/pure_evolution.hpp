#pragma once

#include <string>
#include <vector>

#include "qkt/floquet.hpp"

namespace qkt {

// Stroboscopic pure state together with its exact alpha-derivative. The
// derivative recursion uses d(U)/d(alpha) = -i*Jz*U, which holds because the
// rotation factor carries all alpha dependence. No renormalization is applied
// during evolution; norm drift trips a loud failure instead.
struct PureTrajectory {
  Vector psi;
  Vector dpsi;
  long step = 0;
  double alpha0 = 0;
};

// dpsi starts at zero: the initial state does not depend on alpha
PureTrajectory initial_trajectory(const Vector& psi0, double alpha0);

// one period: psi <- U psi, dpsi <- -i*Jz*(U psi) + U dpsi
PureTrajectory step_with_derivative(const FloquetOperator& f, const PureTrajectory& traj);

// 4 (<dpsi|dpsi> - |<psi|dpsi>|^2), clipped at zero
double qfi_pure(const PureTrajectory& traj);

// |<psi0| U_alpha^n{}^dag U_{alpha+eps}^n |psi0>|^2
double loschmidt_echo(const SpinSystem& sys, double alpha, double beta, double epsilon,
                      const Vector& psi0, long n, double period = 1.0);

struct EchoQfiEstimate {
  double value = 0;                                // extrapolated to eps -> 0
  std::vector<std::pair<double, double>> samples;  // (eps, 4(1-F)/eps^2)
  double residual_rel = 0;                         // least-squares fit residual
  bool residual_warning = false;                   // residual_rel > 1e-3
};

// evaluates 4(1-F_eps)/eps^2 over the ladder and Richardson-extrapolates with
// a quadratic in eps^2
EchoQfiEstimate qfi_from_echo(const SpinSystem& sys, double alpha, double beta,
                              const Vector& psi0, long n,
                              const std::vector<double>& eps_list,
                              double period = 1.0);

// least-squares fit of y = c0 + c1 x + c2 x^2 in x = eps^2 over (eps, y)
// samples, returning c0; shared by the pure and mixed echo paths
double extrapolate_eps2(const std::vector<std::pair<double, double>>& samples,
                        double* residual_rel = nullptr);

// default ladder {1e-3, 5e-4, 2.5e-4}, rescaled down when an a-priori QFI
// magnitude estimate says the largest eps would leave the quadratic-response
// regime (eps^2 * I <= 0.01)
std::vector<double> echo_eps_ladder(double qfi_estimate);

// QFI trace metadata + samples; the CSV/JSON schema lives in trace_io
struct TraceParams {
  int n_spins = 0;
  double alpha = 0;
  double beta = 0;
  double delta = 0;
  double gamma = 0;
  double theta0 = 0;
  double phi0 = 0;
  int substeps = 0;
  std::string method;  // pure-exact | pure-echo | dissipative
};

struct QfiTrace {
  std::vector<long> steps;
  std::vector<double> qfi;
  // dissipative extras, empty for pure methods
  std::vector<double> trace_error;
  std::vector<double> min_eigenvalue;
  TraceParams params;
  double period = 1.0;
};

// log-spaced checkpoints up to n_max, plus every step through 64 and every
// power of ten; with multiple > 1 all checkpoints beyond 0 are rounded onto
// that stride (recurrence-aligned sampling)
std::vector<long> checkpoint_schedule(long n_max, int points_per_decade = 16,
                                      long multiple = 1);

// exact-derivative QFI trace; norm drift beyond 1e-10 per 1e4 steps aborts
QfiTrace qfi_trace_pure(const FloquetOperator& f, const Vector& psi0,
                        const std::vector<long>& checkpoints);

// echo-based QFI trace (one forward pair of states per eps, sampled at the
// checkpoints)
QfiTrace qfi_trace_echo(const FloquetOperator& f, const Vector& psi0,
                        const std::vector<long>& checkpoints,
                        const std::vector<double>& eps_list);

}  // namespace qkt
