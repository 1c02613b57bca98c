#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qkt/dissipative_evolution.hpp"

using namespace qkt;

namespace {

std::shared_ptr<const SpinSystem> sys_for(int n) {
  return std::make_shared<const SpinSystem>(build_spin_system(n));
}

Matrix random_density(const SpinSystem& sys, std::mt19937& rng) {
  std::normal_distribution<double> gauss;
  Matrix a(sys.dim, sys.dim);
  for (int r = 0; r < sys.dim; ++r)
    for (int c = 0; c < sys.dim; ++c) a(r, c) = Complex(gauss(rng), gauss(rng));
  Matrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  return rho;
}

// dense-matrix route for the dissipator, independent of the banded kernel
Matrix dense_generator(const SpinSystem& sys, const Matrix& rho, double gamma) {
  const Matrix jpjm = sys.jplus * sys.jminus;
  return gamma * (2.0 * sys.jminus * rho * sys.jplus - jpjm * rho - rho * jpjm);
}

}  // namespace

TEST_CASE("dark state is stationary") {
  auto sys = sys_for(10);
  Matrix rho = Matrix::Zero(sys->dim, sys->dim);
  rho(sys->dim - 1, sys->dim - 1) = 1.0;  // |j,-j><j,-j|
  const Matrix out = apply_superradiant_generator(*sys, rho, 1.3);
  CHECK(max_abs(out) < 1e-14);
}

TEST_CASE("generator output is traceless and Hermitian") {
  auto sys = sys_for(10);
  std::mt19937 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix rho = random_density(*sys, rng);
    const Matrix out = apply_superradiant_generator(*sys, rho, 0.8);
    CHECK(std::abs(out.trace()) < 1e-12);
    CHECK(hermiticity_error(out) < 1e-10);
  }
}

TEST_CASE("generator matches hand-evaluated ladder elements at j=1") {
  auto sys = sys_for(2);
  Matrix rho = Matrix::Zero(3, 3);
  rho(0, 0) = 1.0;  // |1,1><1,1|
  const Matrix out = apply_superradiant_generator(*sys, rho, 1.0);
  CHECK(out(1, 1).real() == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(out(0, 0).real() == doctest::Approx(-4.0).epsilon(1e-14));
  CHECK(std::abs(out(2, 2)) < 1e-14);
}

TEST_CASE("banded kernel equals the dense-matrix route") {
  auto sys = sys_for(14);
  std::mt19937 rng(21);
  for (int trial = 0; trial < 4; ++trial) {
    const Matrix rho = random_density(*sys, rng);
    const Matrix banded = apply_superradiant_generator(*sys, rho, 0.37);
    const Matrix dense = dense_generator(*sys, rho, 0.37);
    CHECK(max_abs(banded - dense) < 1e-12);
  }
}

TEST_CASE("zero dissipation reduces to unitary conjugation") {
  auto sys = sys_for(10);
  const FloquetOperator f = build_floquet(sys, kPi / 2, kPi * sys->j);
  const Vector psi0 = coherent_state(*sys, {kPi / 4, kPi / 4});
  DensityTrajectory t = initial_density(psi0, 0.0, f.alpha);
  t = dissipative_step(f, t, 1);
  const Matrix expected = f.u * (psi0 * psi0.adjoint()) * f.u.adjoint();
  CHECK(max_abs(t.rho - expected) < 1e-13);
  CHECK(t.step == 1);
}

TEST_CASE("noisy step preserves trace and Hermiticity") {
  auto sys = sys_for(20);
  const FloquetOperator f = build_floquet(sys, kPi / 2, kPi * sys->j);
  DensityTrajectory t = initial_density(coherent_state(*sys, {kPi / 4, kPi / 4}), 5e-3, f.alpha);
  const int substeps = default_substeps(5e-3, 20);
  for (int n = 0; n < 20; ++n) t = dissipative_step(f, t, substeps);
  CHECK(std::abs(t.rho.trace().real() - 1.0) < 1e-9);
  CHECK(hermiticity_error(t.rho) < 1e-10);
  CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(t.rho, Eigen::EigenvaluesOnly)
            .eigenvalues()
            .minCoeff() > -1e-8);
}

TEST_CASE("substep guard rejects too-coarse integration") {
  auto sys = sys_for(20);
  const FloquetOperator f = build_floquet(sys, kPi / 2, kPi * sys->j);
  DensityTrajectory t = initial_density(coherent_state(*sys, {kPi / 4, kPi / 4}), 0.01, f.alpha);
  // gamma*N*h = 0.2 >= 0.05
  CHECK_THROWS_AS(dissipative_step(f, t, 1), std::invalid_argument);
  CHECK_THROWS_AS(dissipative_step(f, t, 0), std::invalid_argument);
}

TEST_CASE("default substep count respects the guard") {
  for (double gamma : {3e-4, 5e-4, 7e-4, 1e-2}) {
    for (int n : {20, 100, 200}) {
      const int s = default_substeps(gamma, n);
      CHECK(gamma * n / s < 0.05);
      CHECK(s >= 1);
    }
  }
}

TEST_CASE("free decay ends in the dark state") {
  auto sys = sys_for(4);
  const FloquetOperator f = build_floquet(sys, 0.0, 0.0);  // no rotation, no kick
  DensityTrajectory t = initial_density(coherent_state(*sys, {kPi / 4, kPi / 4}), 0.05, 0.0);
  const int substeps = default_substeps(0.05, 4);
  for (int n = 0; n < 400; ++n) t = dissipative_step(f, t, substeps);
  CHECK(t.rho(sys->dim - 1, sys->dim - 1).real() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("uhlmann fidelity identities") {
  auto sys = sys_for(8);
  std::mt19937 rng(5);
  const Matrix rho = random_density(*sys, rng);
  CHECK(fidelity_mixed(rho, rho) == doctest::Approx(1.0).epsilon(1e-10));

  const Vector a = coherent_state(*sys, {1.0, 0.5});
  const Vector b = coherent_state(*sys, {1.4, 2.5});
  const Matrix pa = a * a.adjoint(), pb = b * b.adjoint();
  CHECK(fidelity_mixed(pa, pb) == doctest::Approx(std::norm(a.dot(b))).epsilon(1e-10));

  const Matrix mixed = Matrix::Identity(sys->dim, sys->dim) / sys->dim;
  CHECK(fidelity_mixed(mixed, pa) == doctest::Approx(1.0 / sys->dim).epsilon(1e-10));

  // symmetry
  CHECK(fidelity_mixed(pa, mixed) == doctest::Approx(fidelity_mixed(mixed, pa)).epsilon(1e-12));
}

TEST_CASE("mixed qfi reduces to the pure value without noise") {
  const SpinSystem sys = build_spin_system(12);
  auto shared = std::make_shared<const SpinSystem>(sys);
  const double beta = kPi * sys.j;
  const Vector psi0 = coherent_state(sys, {kPi / 4, kPi / 4});

  const FloquetOperator f = build_floquet(shared, kPi / 2, beta);
  PureTrajectory t = initial_trajectory(psi0, f.alpha);
  for (int n = 0; n < 20; ++n) t = step_with_derivative(f, t);
  const double exact = qfi_pure(t);

  const EchoQfiEstimate est =
      qfi_mixed(sys, kPi / 2, beta, 0.0, psi0, 20, echo_eps_ladder(exact), 1);
  CHECK(est.value == doctest::Approx(exact).epsilon(1e-3));

  CHECK(qfi_mixed(sys, kPi / 2, beta, 0.0, psi0, 0, {1e-4, 5e-5}).value == 0.0);
}

TEST_CASE("dissipative trace carries diagnostics columns") {
  auto sys = sys_for(8);
  const FloquetOperator f = build_floquet(sys, kPi / 2, kPi * sys->j);
  const Vector psi0 = coherent_state(*sys, {kPi / 4, kPi / 4});
  const std::vector<long> cps{0, 1, 4, 8};
  const QfiTrace trace = qfi_trace_dissipative(f, 1e-3, psi0, cps, {4e-4, 2e-4, 1e-4});
  CHECK(trace.steps == cps);
  CHECK(trace.qfi[0] == 0.0);
  CHECK(trace.trace_error.size() == cps.size());
  CHECK(trace.min_eigenvalue.size() == cps.size());
  for (double m : trace.min_eigenvalue) CHECK(m > -1e-8);
  CHECK(trace.params.method == "dissipative");
  CHECK(trace.params.substeps >= 1);
}

TEST_CASE("halving the substep size barely moves the qfi") {
  const SpinSystem sys = build_spin_system(16);
  auto shared = std::make_shared<const SpinSystem>(sys);
  const FloquetOperator f = build_floquet(shared, kPi / 2, kPi * sys.j);
  const Vector psi0 = coherent_state(sys, {kPi / 4, kPi / 4});
  const double gamma = 2e-3;
  const std::vector<long> cps{32};
  const std::vector<double> eps{4e-4, 2e-4, 1e-4};

  const int s = default_substeps(gamma, 16);
  const double coarse = qfi_trace_dissipative(f, gamma, psi0, cps, eps, s).qfi.back();
  const double fine = qfi_trace_dissipative(f, gamma, psi0, cps, eps, 2 * s).qfi.back();
  CHECK(std::abs(fine - coarse) / fine < 5e-3);
}
