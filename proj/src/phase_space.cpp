#include "qkt/phase_space.hpp"

#include <cmath>
#include <vector>

namespace qkt {

namespace {

HusimiGrid make_grid(int n_theta, int n_phi) {
  if (n_theta < 8 || n_phi < 8) {
    throw std::invalid_argument("husimi: grid sizes must be >= 8");
  }
  HusimiGrid g;
  g.n_theta = n_theta;
  g.n_phi = n_phi;
  g.thetas = RealVector(n_theta);
  g.phis = RealVector(n_phi);
  for (int a = 0; a < n_theta; ++a) g.thetas(a) = (a + 0.5) * kPi / n_theta;
  for (int b = 0; b < n_phi; ++b) g.phis(b) = b * 2 * kPi / n_phi;
  g.values = RealMatrix(n_theta, n_phi);
  return g;
}

}  // namespace

HusimiGrid husimi(const SpinSystem& sys, const Vector& psi, int n_theta, int n_phi) {
  HusimiGrid g = make_grid(n_theta, n_phi);
  // pure-state fast path: P = |<theta,phi|psi>|^2 from closed-form amplitudes,
  // one O(dim) pass per grid point. phi enters only through e^{i(j-m)phi} with
  // j - m = i, so magnitudes are shared along each theta row.
  for (int a = 0; a < g.n_theta; ++a) {
    const Vector amp0 = coherent_amplitudes(sys.j, {g.thetas(a), 0.0});
    for (int b = 0; b < g.n_phi; ++b) {
      const double phi = g.phis(b);
      Complex overlap = 0;
      for (int i = 0; i < sys.dim; ++i) {
        overlap += amp0(i).real() * std::polar(1.0, -static_cast<double>(i) * phi) * psi(i);
      }
      g.values(a, b) = std::norm(overlap);
    }
  }
  return g;
}

HusimiGrid husimi(const SpinSystem& sys, const Matrix& rho, int n_theta, int n_phi) {
  HusimiGrid g = make_grid(n_theta, n_phi);
  for (int a = 0; a < g.n_theta; ++a) {
    const Vector amp0 = coherent_amplitudes(sys.j, {g.thetas(a), 0.0});
    for (int b = 0; b < g.n_phi; ++b) {
      const double phi = g.phis(b);
      Vector c(sys.dim);
      for (int i = 0; i < sys.dim; ++i) {
        c(i) = amp0(i).real() * std::polar(1.0, static_cast<double>(i) * phi);
      }
      const Complex val = c.adjoint() * rho * c;
      g.values(a, b) = std::max(0.0, val.real());
    }
  }
  return g;
}

double husimi_normalization(const HusimiGrid& grid, double j) {
  const double dtheta = kPi / grid.n_theta;
  const double dphi = 2 * kPi / grid.n_phi;
  double sum = 0;
  for (int a = 0; a < grid.n_theta; ++a) {
    const double w = std::sin(grid.thetas(a)) * dtheta * dphi;
    for (int b = 0; b < grid.n_phi; ++b) sum += grid.values(a, b) * w;
  }
  return (2 * j + 1) / (4 * kPi) * sum;
}

int count_peaks(const HusimiGrid& grid, double rel_threshold) {
  if (!(rel_threshold > 0 && rel_threshold < 1)) {
    throw std::invalid_argument("count_peaks: rel_threshold must be in (0, 1)");
  }
  const double cut = rel_threshold * grid.values.maxCoeff();
  const int nt = grid.n_theta, np = grid.n_phi;
  std::vector<char> mask(static_cast<size_t>(nt) * np), seen(mask.size(), 0);
  for (int a = 0; a < nt; ++a)
    for (int b = 0; b < np; ++b) mask[a * np + b] = grid.values(a, b) > cut;

  int components = 0;
  std::vector<int> stack;
  for (int start = 0; start < nt * np; ++start) {
    if (!mask[start] || seen[start]) continue;
    ++components;
    stack.push_back(start);
    seen[start] = 1;
    while (!stack.empty()) {
      const int cur = stack.back();
      stack.pop_back();
      const int a = cur / np, b = cur % np;
      for (int da = -1; da <= 1; ++da) {
        for (int db = -1; db <= 1; ++db) {
          const int aa = a + da;
          if (aa < 0 || aa >= nt) continue;  // theta is not periodic
          const int bb = (b + db + np) % np;  // phi wraps
          const int idx = aa * np + bb;
          if (mask[idx] && !seen[idx]) {
            seen[idx] = 1;
            stack.push_back(idx);
          }
        }
      }
    }
  }
  return components;
}

double recurrence_fidelity(const Vector& psi0, const Vector& psit) {
  if (psi0.size() != psit.size()) {
    throw std::invalid_argument("recurrence_fidelity: dimension mismatch");
  }
  return std::norm(psi0.dot(psit));
}

CoherentFit best_coherent_fit(const SpinSystem& sys, const Vector& psi) {
  auto overlap2 = [&](double theta, double phi) {
    const Vector amp = coherent_amplitudes(sys.j, {theta, phi});
    return std::norm(amp.dot(psi));
  };

  // coarse scan
  const int nt = 48, np = 96;
  double best_t = 0, best_p = 0, best_v = -1;
  for (int a = 0; a < nt; ++a) {
    const double theta = (a + 0.5) * kPi / nt;
    for (int b = 0; b < np; ++b) {
      const double phi = b * 2 * kPi / np;
      const double v = overlap2(theta, phi);
      if (v > best_v) {
        best_v = v;
        best_t = theta;
        best_p = phi;
      }
    }
  }

  // local shrinking-grid ascent around the coarse maximum
  double ht = kPi / nt, hp = 2 * kPi / np;
  for (int round = 0; round < 24; ++round) {
    bool improved = false;
    for (int da = -2; da <= 2; ++da) {
      for (int db = -2; db <= 2; ++db) {
        if (da == 0 && db == 0) continue;
        const CoherentStateParams cand =
            canonical_angles(best_t + da * ht / 2, best_p + db * hp / 2);
        const double v = overlap2(cand.theta, cand.phi);
        if (v > best_v) {
          best_v = v;
          best_t = cand.theta;
          best_p = cand.phi;
          improved = true;
        }
      }
    }
    if (!improved) {
      ht /= 2;
      hp /= 2;
    }
    if (ht < 1e-10) break;
  }
  return {{best_t, best_p}, best_v};
}

}  // namespace qkt
