#include "qkt/dissipative_evolution.hpp"

#include <cmath>
#include <set>

namespace qkt {

namespace {

// subdiagonal ladder coefficients: J- |j,m_i> = c(i) |j,m_{i+1}> in the
// descending basis, c(i) = sqrt(j(j+1) - m(m-1)); J+J- = diag(c^2)
RealVector lowering_coefficients(const SpinSystem& sys) {
  RealVector c(sys.dim);
  for (int i = 0; i < sys.dim; ++i) {
    const double m = sys.j - i;
    c(i) = std::sqrt(std::max(0.0, sys.j * (sys.j + 1) - m * (m - 1)));
  }
  return c;
}

// gamma * (2 J- rho J+ - {J+J-, rho}) using the banded structure
void add_superradiant(const RealVector& c, double gamma, const Matrix& rho, double coeff,
                      Matrix& out) {
  const int dim = static_cast<int>(rho.rows());
  for (int b = 0; b < dim; ++b) {
    const double wb = c(b) * c(b);
    for (int a = 0; a < dim; ++a) {
      const double wa = c(a) * c(a);
      Complex v = -(wa + wb) * rho(a, b);
      if (a >= 1 && b >= 1) v += 2.0 * c(a - 1) * c(b - 1) * rho(a - 1, b - 1);
      out(a, b) += coeff * gamma * v;
    }
  }
}

}  // namespace

DensityTrajectory initial_density(const Vector& psi0, double gamma, double alpha) {
  DensityTrajectory t;
  t.rho = psi0 * psi0.adjoint();
  t.gamma = gamma;
  t.alpha = alpha;
  return t;
}

Matrix apply_superradiant_generator(const SpinSystem& sys, const Matrix& rho, double gamma) {
  if (rho.rows() != sys.dim || rho.cols() != sys.dim) {
    throw std::invalid_argument("apply_superradiant_generator: dimension mismatch");
  }
  if (hermiticity_error(rho) > 1e-8 * std::max(1.0, max_abs(rho))) {
    throw std::invalid_argument("apply_superradiant_generator: rho not Hermitian");
  }
  const RealVector c = lowering_coefficients(sys);
  Matrix out = Matrix::Zero(sys.dim, sys.dim);
  add_superradiant(c, gamma, rho, 1.0, out);
  return out;
}

int default_substeps(double gamma, int n_spins, double period) {
  const double j = n_spins / 2.0;
  // gamma*N*h <= 0.01 plus a stiffness bound: the generator norm scales like
  // 4*gamma*j^2, and the explicit one-step method needs h below ~1/norm
  const double by_guard = 100.0 * gamma * n_spins * period;
  const double by_stiffness = 4.0 * gamma * j * j * period;
  return std::max({1, static_cast<int>(std::ceil(by_guard)),
                   static_cast<int>(std::ceil(by_stiffness))});
}

DensityTrajectory dissipative_step(const FloquetOperator& f, const DensityTrajectory& traj,
                                   int substeps) {
  const SpinSystem& s = *f.sys;
  if (traj.rho.rows() != s.dim) {
    throw std::invalid_argument("dissipative_step: dimension mismatch");
  }
  const double h = f.period / substeps;
  if (substeps < 1 || !(traj.gamma * s.n_spins() * h < 0.05)) {
    throw std::invalid_argument(
        "dissipative_step: substeps too small for gamma*N*h < 0.05 (substeps=" +
        std::to_string(substeps) + ")");
  }

  DensityTrajectory out = traj;
  out.step = traj.step + 1;
  const RealVector c = lowering_coefficients(s);
  const int dim = s.dim;

  Matrix k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim), tmp(dim, dim);
  for (int u = 0; u < substeps; ++u) {
    k1.setZero();
    add_superradiant(c, traj.gamma, out.rho, 1.0, k1);
    tmp = out.rho + (0.5 * h) * k1;
    k2.setZero();
    add_superradiant(c, traj.gamma, tmp, 1.0, k2);
    tmp = out.rho + (0.5 * h) * k2;
    k3.setZero();
    add_superradiant(c, traj.gamma, tmp, 1.0, k3);
    tmp = out.rho + h * k3;
    k4.setZero();
    add_superradiant(c, traj.gamma, tmp, 1.0, k4);
    out.rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }

  out.rho = (f.u * out.rho * f.u.adjoint()).eval();
  out.rho = 0.5 * (out.rho + out.rho.adjoint()).eval();

  const double tr = out.rho.trace().real();
  out.trace_deviation = std::abs(tr - 1.0);
  if (out.trace_deviation > 1e-10) {
    out.rho /= tr;
    out.cumulative_trace_correction += out.trace_deviation;
  }

  const double min_eig =
      Eigen::SelfAdjointEigenSolver<Matrix>(out.rho, Eigen::EigenvaluesOnly)
          .eigenvalues()
          .minCoeff();
  if (min_eig < -1e-6) {
    throw NumericalError("dissipative_step: positivity violated (min eigenvalue " +
                         std::to_string(min_eig) + " at step " + std::to_string(out.step) +
                         "); increase substeps (currently " + std::to_string(substeps) + ")");
  }
  return out;
}

namespace {

Matrix hermitian_sqrt(const Matrix& rho, double* clipped) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
  if (es.info() != Eigen::Success) {
    throw NumericalError("fidelity_mixed: eigendecomposition failed");
  }
  const double cutoff = 1e-14 * std::max(0.0, es.eigenvalues().maxCoeff());
  RealVector roots(rho.rows());
  for (int i = 0; i < rho.rows(); ++i) {
    const double lam = es.eigenvalues()(i);
    if (lam <= cutoff) {
      roots(i) = 0;
      if (clipped && lam < 0) *clipped += -lam;
    } else {
      roots(i) = std::sqrt(lam);
    }
  }
  return es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

double fidelity_mixed(const Matrix& rho1, const Matrix& rho2, FidelityDiagnostics& diag) {
  if (rho1.rows() != rho2.rows() || rho1.cols() != rho2.cols() || rho1.rows() != rho1.cols()) {
    throw std::invalid_argument("fidelity_mixed: dimension mismatch");
  }
  const Matrix s1 = hermitian_sqrt(rho1, &diag.clipped_weight);
  const Matrix s2 = hermitian_sqrt(rho2, &diag.clipped_weight);
  const Matrix prod = s1 * s2;
  const double trace_norm =
      Eigen::BDCSVD<Matrix>(prod).singularValues().sum();
  return std::clamp(trace_norm * trace_norm, 0.0, 1.0);
}

double fidelity_mixed(const Matrix& rho1, const Matrix& rho2) {
  FidelityDiagnostics diag;
  return fidelity_mixed(rho1, rho2, diag);
}

EchoQfiEstimate qfi_mixed(const SpinSystem& sys, double alpha, double beta, double gamma,
                          const Vector& psi0, long n, const std::vector<double>& eps_list,
                          int substeps, double period) {
  std::set<double> distinct(eps_list.begin(), eps_list.end());
  distinct.erase(0.0);
  if (distinct.size() < 2) {
    throw std::invalid_argument("qfi_mixed: need >= 2 distinct nonzero eps values");
  }
  EchoQfiEstimate est;
  if (n == 0) return est;

  auto shared = std::make_shared<const SpinSystem>(sys);
  if (substeps <= 0) substeps = default_substeps(gamma, shared->n_spins(), period);

  const FloquetOperator fa = build_floquet(shared, alpha, beta, period);
  DensityTrajectory ref = initial_density(psi0, gamma, alpha);
  for (long k = 0; k < n; ++k) ref = dissipative_step(fa, ref, substeps);

  for (double eps : distinct) {
    const FloquetOperator fb = build_floquet(shared, alpha + eps, beta, period);
    DensityTrajectory branch = initial_density(psi0, gamma, alpha + eps);
    for (long k = 0; k < n; ++k) branch = dissipative_step(fb, branch, substeps);
    const double fid = fidelity_mixed(ref.rho, branch.rho);
    est.samples.emplace_back(eps, 4.0 * (1.0 - fid) / (eps * eps));
  }

  est.value = std::max(0.0, extrapolate_eps2(est.samples, &est.residual_rel));
  est.residual_warning = est.residual_rel > 1e-3;
  return est;
}

QfiTrace qfi_trace_dissipative(const FloquetOperator& f, double gamma, const Vector& psi0,
                               const std::vector<long>& checkpoints,
                               const std::vector<double>& eps_list, int substeps) {
  std::set<double> distinct(eps_list.begin(), eps_list.end());
  distinct.erase(0.0);
  if (distinct.size() < 2) {
    throw std::invalid_argument("qfi_trace_dissipative: need >= 2 distinct nonzero eps values");
  }
  if (substeps <= 0) substeps = default_substeps(gamma, f.sys->n_spins(), f.period);

  QfiTrace trace;
  trace.period = f.period;
  trace.params.n_spins = f.sys->n_spins();
  trace.params.alpha = f.alpha;
  trace.params.beta = f.beta;
  trace.params.gamma = gamma;
  trace.params.substeps = substeps;
  trace.params.method = "dissipative";

  DensityTrajectory ref = initial_density(psi0, gamma, f.alpha);
  std::vector<std::pair<double, DensityTrajectory>> branches;
  std::vector<FloquetOperator> ops;
  for (double e : distinct) {
    branches.emplace_back(e, initial_density(psi0, gamma, f.alpha + e));
    ops.push_back(build_floquet(f.sys, f.alpha + e, f.beta, f.period));
  }

  std::set<long> want(checkpoints.begin(), checkpoints.end());
  const long n_max = want.empty() ? 0 : *want.rbegin();

  auto record = [&](long n) {
    std::vector<std::pair<double, double>> samples;
    for (auto& [e, branch] : branches) {
      const double fid = fidelity_mixed(ref.rho, branch.rho);
      samples.emplace_back(e, 4.0 * (1.0 - fid) / (e * e));
    }
    trace.steps.push_back(n);
    trace.qfi.push_back(n == 0 ? 0.0 : std::max(0.0, extrapolate_eps2(samples)));
    trace.trace_error.push_back(ref.trace_deviation);
    trace.min_eigenvalue.push_back(
        Eigen::SelfAdjointEigenSolver<Matrix>(ref.rho, Eigen::EigenvaluesOnly)
            .eigenvalues()
            .minCoeff());
  };

  if (want.count(0)) record(0);
  for (long n = 1; n <= n_max; ++n) {
    ref = dissipative_step(f, ref, substeps);
    for (size_t i = 0; i < branches.size(); ++i) {
      branches[i].second = dissipative_step(ops[i], branches[i].second, substeps);
    }
    if (want.count(n)) record(n);
  }
  return trace;
}

}  // namespace qkt
