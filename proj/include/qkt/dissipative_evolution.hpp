#pragma once

#include "qkt/pure_evolution.hpp"

namespace qkt {

// Density matrix evolved under the noisy stroboscopic map: the superradiant
// dissipator integrates over each inter-kick interval, then the period
// unitary conjugates. Hermitian, trace-one, positive up to integration error.
struct DensityTrajectory {
  Matrix rho;
  long step = 0;
  double gamma = 0;            // dissipation strength (inverse time units)
  double alpha = 0;            // operating alpha of this branch
  double trace_deviation = 0;  // |tr rho - 1| observed before the last renormalization
  double cumulative_trace_correction = 0;
};

DensityTrajectory initial_density(const Vector& psi0, double gamma, double alpha);

// Gamma rho = gamma * (2 J- rho J+ - {J+ J-, rho}); Hermitian and traceless.
// J+- are one-banded here, so this is O(dim^2).
Matrix apply_superradiant_generator(const SpinSystem& sys, const Matrix& rho, double gamma);

// smallest substep count satisfying the gamma*N*h <= 0.01 guard and keeping
// h * ||Gamma|| small (the generator norm grows like gamma * N^2, which is
// what actually limits the explicit integrator)
int default_substeps(double gamma, int n_spins, double period = 1.0);

// integrate d(rho)/dt = Gamma rho over one period with classical RK4 in
// `substeps` equal steps, then conjugate by U. Trace is renormalized when it
// drifts beyond 1e-10; positivity below -1e-6 aborts with a step-size
// diagnostic.
DensityTrajectory dissipative_step(const FloquetOperator& f, const DensityTrajectory& traj,
                                   int substeps);

// Uhlmann fidelity (|| sqrt(rho1) sqrt(rho2) ||_1)^2 via Hermitian square
// roots and singular values; eigenvalues below 1e-14 * max are clipped to 0
double fidelity_mixed(const Matrix& rho1, const Matrix& rho2);

struct FidelityDiagnostics {
  double clipped_weight = 0;  // total eigenvalue mass clipped across both inputs
};
double fidelity_mixed(const Matrix& rho1, const Matrix& rho2, FidelityDiagnostics& diag);

// echo-based mixed-state QFI at step n: branches at alpha and alpha + eps
// evolve under identical noise, then Richardson extrapolation as in the pure
// case. substeps = 0 picks default_substeps.
EchoQfiEstimate qfi_mixed(const SpinSystem& sys, double alpha, double beta, double gamma,
                          const Vector& psi0, long n, const std::vector<double>& eps_list,
                          int substeps = 0, double period = 1.0);

// full dissipative QFI trace with per-checkpoint trace_error / min_eigenvalue
// columns
QfiTrace qfi_trace_dissipative(const FloquetOperator& f, double gamma, const Vector& psi0,
                               const std::vector<long>& checkpoints,
                               const std::vector<double>& eps_list, int substeps = 0);

}  // namespace qkt
