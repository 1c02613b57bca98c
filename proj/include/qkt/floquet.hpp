#pragma once

#include <memory>
#include <optional>

#include "qkt/spin_algebra.hpp"

namespace qkt {

// One-period propagator U = exp(-i*alpha*Jz) * exp(-i*beta*Jy^2/(2j)):
// the state is kicked first, then rotated. alpha is the parameter under
// estimation. Immutable after build; safe to share across workers.
struct FloquetOperator {
  std::shared_ptr<const SpinSystem> sys;
  double alpha = 0;
  double beta = 0;
  double period = 1.0;  // kick period T; time labels are t = n*T
  Matrix u;
};

struct RecurrenceResult {
  int period = 0;          // smallest n with U^n = phase * I within tol
  Complex global_phase{1, 0};
  double residual = 0;     // max-norm distance of U^n from phase * I
};

FloquetOperator build_floquet(std::shared_ptr<const SpinSystem> sys, double alpha,
                              double beta, double period = 1.0);

// resonance kick strengths beta = 4*pi*j*r/s for coprime positive (r, s);
// non-coprime input is rejected, not normalized
double resonance_beta(double j, int r, int s);

// smallest n <= max_period with U^n proportional to the identity; the phase
// is estimated from the mean diagonal entry, so detection is insensitive to
// any global phase on U. Empty when no power recurs.
std::optional<RecurrenceResult> check_recurrence(const FloquetOperator& f,
                                                 int max_period, double tol = 1e-8);

// true iff one period maps every sampled coherent state to another coherent
// state (best-fit coherent fidelity > 1 - tol); the beta = 2*pi*j resonance
// passes because that propagator factors into local unitaries
bool entanglement_free_check(const FloquetOperator& f, double tol = 1e-6);

}  // namespace qkt
