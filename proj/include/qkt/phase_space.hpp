#pragma once

#include "qkt/spin_algebra.hpp"

namespace qkt {

// Husimi distribution P(theta, phi) = <theta,phi| rho |theta,phi> sampled on
// a uniform sphere grid: theta midpoints of [0, pi], phi on [0, 2*pi).
struct HusimiGrid {
  int n_theta = 0;
  int n_phi = 0;
  RealVector thetas;
  RealVector phis;
  RealMatrix values;  // n_theta x n_phi, entries in [0, 1]
};

HusimiGrid husimi(const SpinSystem& sys, const Vector& psi, int n_theta = 128,
                  int n_phi = 256);
HusimiGrid husimi(const SpinSystem& sys, const Matrix& rho, int n_theta = 128,
                  int n_phi = 256);

// quadrature sum (2j+1)/(4pi) * sum P sin(theta) dtheta dphi; equals 1 for a
// normalized state up to grid resolution
double husimi_normalization(const HusimiGrid& grid, double j);

// connected components of {P > rel_threshold * max P}, 8-neighbor
// connectivity, periodic in phi
int count_peaks(const HusimiGrid& grid, double rel_threshold = 0.5);

// |<psi0|psit>|^2
double recurrence_fidelity(const Vector& psi0, const Vector& psit);

struct CoherentFit {
  CoherentStateParams params;
  double fidelity = 0;  // |<theta,phi|psi>|^2 at the fitted direction
};

// coarse Husimi grid search followed by local shrinking refinement; finds the
// best coherent-state approximation to a pure state
CoherentFit best_coherent_fit(const SpinSystem& sys, const Vector& psi);

}  // namespace qkt
