#include "qkt/floquet.hpp"

#include <cmath>
#include <numeric>

#include "qkt/phase_space.hpp"

namespace qkt {

FloquetOperator build_floquet(std::shared_ptr<const SpinSystem> sys, double alpha,
                              double beta, double period) {
  if (!sys) throw std::invalid_argument("build_floquet: null spin system");
  FloquetOperator f;
  f.sys = std::move(sys);
  f.alpha = alpha;
  f.beta = beta;
  f.period = period;

  const SpinSystem& s = *f.sys;
  const Matrix kick = unitary_from_hermitian(s.jy * s.jy, beta / (2 * s.j));
  // rotation factor is diagonal in this basis; scale rows of the kick
  Vector rot(s.dim);
  for (int i = 0; i < s.dim; ++i) rot(i) = std::polar(1.0, -alpha * s.jz(i, i).real());
  f.u = rot.asDiagonal() * kick;
  return f;
}

double resonance_beta(double j, int r, int s) {
  if (r <= 0 || s <= 0) {
    throw std::invalid_argument("resonance_beta: r and s must be positive");
  }
  if (std::gcd(r, s) != 1) {
    throw std::invalid_argument("resonance_beta: r and s must be coprime, got " +
                                std::to_string(r) + "/" + std::to_string(s));
  }
  return 4.0 * kPi * j * r / s;
}

std::optional<RecurrenceResult> check_recurrence(const FloquetOperator& f,
                                                 int max_period, double tol) {
  if (max_period < 1) throw std::invalid_argument("check_recurrence: max_period must be >= 1");
  if (!(tol > 0)) throw std::invalid_argument("check_recurrence: tol must be positive");

  const int dim = f.sys->dim;
  Matrix p = Matrix::Identity(dim, dim);
  for (int n = 1; n <= max_period; ++n) {
    p = p * f.u;
    Complex phase = p.trace() / static_cast<double>(dim);
    const double mag = std::abs(phase);
    phase = mag > 0 ? phase / mag : Complex(1, 0);
    // residual relative to the best phase-aligned identity
    Matrix diff = p;
    diff.diagonal().array() -= phase;
    const double residual = max_abs(diff);
    if (residual < tol) return RecurrenceResult{n, phase, residual};
  }
  return std::nullopt;
}

bool entanglement_free_check(const FloquetOperator& f, double tol) {
  // a handful of well-spread Bloch directions; one period must keep each of
  // them coherent
  static const CoherentStateParams samples[] = {
      {kPi / 2, kPi / 4}, {kPi / 4, kPi / 4}, {kPi / 2, 0.0},
      {2.0, 1.0},         {0.8, 4.2},         {2.6, 5.5},
  };
  for (const auto& p : samples) {
    const Vector psi = f.u * coherent_state(*f.sys, p);
    if (best_coherent_fit(*f.sys, psi).fidelity <= 1.0 - tol) return false;
  }
  return true;
}

}  // namespace qkt
