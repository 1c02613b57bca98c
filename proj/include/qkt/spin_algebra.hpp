#pragma once

#include "qkt/types.hpp"

namespace qkt {

// Collective angular-momentum operators for N = 2j spins restricted to the
// (2j+1)-dimensional symmetric subspace. Basis ordering is fixed to
// m = j, j-1, ..., -j (descending), so jz = diag(j, ..., -j); all
// serialization uses this order. Immutable after construction.
struct SpinSystem {
  double j = 0;   // spin quantum number, j = N/2
  int dim = 0;    // 2j + 1
  Matrix jx, jy, jz;
  Matrix jplus, jminus;

  int n_spins() const { return static_cast<int>(2 * j); }
};

struct CoherentStateParams {
  double theta = 0;  // polar angle, [0, pi]
  double phi = 0;    // azimuth, [0, 2*pi)
};

// reduce arbitrary angles to theta in [0, pi], phi in [0, 2*pi); the reduced
// pair labels the same Bloch direction
CoherentStateParams canonical_angles(double theta, double phi);

// great-circle angle between the Bloch directions of two parameter pairs
double bloch_angle(const CoherentStateParams& a, const CoherentStateParams& b);

// N even, N >= 2; ladder elements sqrt(j(j+1) - m(m+-1)), jx/jy assembled
// from jplus/jminus so jplus = jx + i*jy holds exactly
SpinSystem build_spin_system(int n_spins);

// |theta,phi> = exp[i*theta*(Jx sin(phi) - Jy cos(phi))] |j,j>, evaluated by
// Hermitian eigendecomposition of the generator. The global phase is fixed so
// the m = +j amplitude is real and non-negative (vacuous when that amplitude
// underflows, e.g. theta = pi).
Vector coherent_state(const SpinSystem& sys, const CoherentStateParams& p);

// closed-form amplitudes <j,m|theta,phi> in the descending-m basis:
//   sqrt(C(2j, j+m)) cos(theta/2)^(j+m) sin(theta/2)^(j-m) e^{i(j-m)phi}.
// Same state and phase convention as coherent_state, but evaluated in the log
// domain (no rotation matrix), safe for large j. Used as the per-grid-point
// fast path by the phase-space module.
Vector coherent_amplitudes(double j, const CoherentStateParams& p);

// exp(-i*scale*H) for Hermitian H; rejects non-Hermitian input (1e-10
// entrywise). Strictly diagonal input takes an exact elementwise path.
Matrix unitary_from_hermitian(const Matrix& h, double scale);

// max-norm diagnostics
double hermiticity_error(const Matrix& m);  // max |M - M^dag|
double unitarity_error(const Matrix& u);    // max |U U^dag - I|
double max_abs(const Matrix& m);

}  // namespace qkt
