#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qkt/floquet.hpp"
#include "qkt/phase_space.hpp"

using namespace qkt;

namespace {

std::shared_ptr<const SpinSystem> sys_for(int n) {
  return std::make_shared<const SpinSystem>(build_spin_system(n));
}

}  // namespace

TEST_CASE("zero kick gives the diagonal rotation") {
  auto sys = sys_for(6);
  const double alpha = 0.93;
  const FloquetOperator f = build_floquet(sys, alpha, 0.0);
  for (int i = 0; i < sys->dim; ++i) {
    const double m = sys->j - i;
    CHECK(std::abs(f.u(i, i) - std::polar(1.0, -alpha * m)) < 1e-15);
    for (int k = 0; k < sys->dim; ++k) {
      if (k != i) CHECK(std::abs(f.u(i, k)) < 1e-15);
    }
  }

  const FloquetOperator id = build_floquet(sys, 0.0, 0.0);
  CHECK(max_abs(id.u - Matrix::Identity(sys->dim, sys->dim)) < 1e-15);
}

TEST_CASE("propagator is unitary at the recurrence point") {
  auto sys = sys_for(112);
  const FloquetOperator f = build_floquet(sys, kPi / 2, kPi * sys->j);
  CHECK(unitarity_error(f.u) < 1e-10);
}

TEST_CASE("resonance beta values") {
  CHECK(resonance_beta(10, 1, 4) == doctest::Approx(10 * kPi).epsilon(1e-15));
  CHECK(resonance_beta(10, 1, 2) == doctest::Approx(20 * kPi).epsilon(1e-15));
  CHECK(resonance_beta(10, 1, 8) == doctest::Approx(5 * kPi).epsilon(1e-15));
  CHECK_THROWS_AS(resonance_beta(10, 2, 4), std::invalid_argument);
  CHECK_THROWS_AS(resonance_beta(10, 0, 3), std::invalid_argument);
  CHECK_THROWS_AS(resonance_beta(10, 1, -2), std::invalid_argument);
}

TEST_CASE("recurrence periods of the three resonance cases") {
  auto sys = sys_for(20);
  const double j = sys->j;

  auto r2 = check_recurrence(build_floquet(sys, kPi / 2, 2 * kPi * j), 60);
  REQUIRE(r2.has_value());
  CHECK(r2->period == 2);
  CHECK(r2->residual < 1e-8);
  CHECK(std::abs(std::abs(r2->global_phase) - 1.0) < 1e-12);

  auto r8 = check_recurrence(build_floquet(sys, kPi / 2, kPi * j), 60);
  REQUIRE(r8.has_value());
  CHECK(r8->period == 8);
  CHECK(r8->residual < 1e-8);

  auto r48 = check_recurrence(build_floquet(sys, kPi / 2, kPi * j / 2), 60);
  REQUIRE(r48.has_value());
  CHECK(r48->period == 48);
  CHECK(r48->residual < 1e-8);
}

TEST_CASE("recurrence detection ignores a global phase") {
  auto sys = sys_for(8);
  FloquetOperator f = build_floquet(sys, kPi / 2, kPi * sys->j);
  f.u *= std::polar(1.0, 0.7321);
  auto r = check_recurrence(f, 60);
  REQUIRE(r.has_value());
  CHECK(r->period == 8);
  CHECK(r->residual < 1e-8);
}

TEST_CASE("returned period is minimal") {
  auto sys = sys_for(8);
  const FloquetOperator f = build_floquet(sys, kPi / 2, kPi * sys->j);
  // residual at every proper divisor of 8 stays far above tolerance
  Matrix p = Matrix::Identity(sys->dim, sys->dim);
  for (int n = 1; n <= 8; ++n) {
    p = p * f.u;
    if (n == 8 || (n != 1 && n != 2 && n != 4)) continue;
    Complex phase = p.trace() / static_cast<double>(sys->dim);
    phase = std::abs(phase) > 0 ? phase / std::abs(phase) : Complex(1, 0);
    Matrix diff = p;
    diff.diagonal().array() -= phase;
    CHECK(max_abs(diff) > 1e-3);
  }
}

TEST_CASE("no recurrence for generic kick strength") {
  auto sys = sys_for(20);
  const FloquetOperator f = build_floquet(sys, kPi / 2, 1.0);
  CHECK(!check_recurrence(f, 100).has_value());
}

TEST_CASE("entanglement-free property of the 2-pi-j case") {
  auto sys = sys_for(20);
  const double j = sys->j;
  CHECK(entanglement_free_check(build_floquet(sys, kPi / 2, 2 * kPi * j)));
  CHECK(entanglement_free_check(build_floquet(sys, kPi / 2, 0.0)));
  CHECK(!entanglement_free_check(build_floquet(sys, kPi / 2, kPi * j)));
}

TEST_CASE("mid-cycle state of the pi-j case is far from coherent") {
  auto sys = sys_for(20);
  const FloquetOperator f = build_floquet(sys, kPi / 2, kPi * sys->j);
  Vector psi = coherent_state(*sys, {kPi / 4, kPi / 4});
  for (int n = 0; n < 3; ++n) psi = f.u * psi;
  CHECK(best_coherent_fit(*sys, psi).fidelity < 1.0 - 1e-6);
}
