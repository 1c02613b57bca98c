#include "qkt/spin_algebra.hpp"

#include <cmath>

namespace qkt {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

double hermiticity_error(const Matrix& m) {
  return max_abs(m - m.adjoint());
}

double unitarity_error(const Matrix& u) {
  return max_abs(u * u.adjoint() - Matrix::Identity(u.rows(), u.cols()));
}

CoherentStateParams canonical_angles(double theta, double phi) {
  const double two_pi = 2 * kPi;
  theta = std::fmod(theta, two_pi);
  if (theta < 0) theta += two_pi;
  if (theta > kPi) {
    theta = two_pi - theta;
    phi += kPi;
  }
  phi = std::fmod(phi, two_pi);
  if (phi < 0) phi += two_pi;
  return {theta, phi};
}

double bloch_angle(const CoherentStateParams& a, const CoherentStateParams& b) {
  const double ca = std::sin(a.theta) * std::cos(a.phi) * std::sin(b.theta) * std::cos(b.phi) +
                    std::sin(a.theta) * std::sin(a.phi) * std::sin(b.theta) * std::sin(b.phi) +
                    std::cos(a.theta) * std::cos(b.theta);
  return std::acos(std::clamp(ca, -1.0, 1.0));
}

SpinSystem build_spin_system(int n_spins) {
  if (n_spins < 2 || n_spins % 2 != 0) {
    throw std::invalid_argument(
        "build_spin_system: N must be an even integer >= 2, got " + std::to_string(n_spins));
  }
  SpinSystem sys;
  sys.j = n_spins / 2.0;
  sys.dim = n_spins + 1;
  const double j = sys.j;
  const int dim = sys.dim;

  sys.jz = Matrix::Zero(dim, dim);
  sys.jplus = Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const double m = j - i;
    sys.jz(i, i) = m;
    // J+ |j,m> = sqrt(j(j+1) - m(m+1)) |j,m+1>; column i holds m = j - i,
    // row i-1 holds m+1
    if (i >= 1) sys.jplus(i - 1, i) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  sys.jminus = sys.jplus.adjoint();
  sys.jx = 0.5 * (sys.jplus + sys.jminus);
  sys.jy = Complex(0, -0.5) * (sys.jplus - sys.jminus);
  return sys;
}

Vector coherent_state(const SpinSystem& sys, const CoherentStateParams& p) {
  const CoherentStateParams c = canonical_angles(p.theta, p.phi);
  const Matrix gen = std::sin(c.phi) * sys.jx - std::cos(c.phi) * sys.jy;
  // exp(+i*theta*gen) applied to the highest-weight state e0
  Vector psi = unitary_from_hermitian(gen, -c.theta).col(0);
  const Complex top = psi(0);
  if (std::abs(top) > 1e-14) psi *= std::conj(top) / std::abs(top);
  return psi;
}

Vector coherent_amplitudes(double j, const CoherentStateParams& p) {
  const CoherentStateParams c = canonical_angles(p.theta, p.phi);
  const int dim = static_cast<int>(2 * j) + 1;
  const double ct = std::cos(c.theta / 2);
  const double st = std::sin(c.theta / 2);
  Vector amp(dim);
  for (int i = 0; i < dim; ++i) {
    const double m = j - i;
    const double log_binom =
        std::lgamma(2 * j + 1) - std::lgamma(j + m + 1) - std::lgamma(j - m + 1);
    // log-domain product; a vanishing factor with nonzero power kills the
    // amplitude outright (pole states)
    double log_mag = 0.5 * log_binom;
    bool zero = false;
    if (j + m > 0) {
      if (ct > 0) log_mag += (j + m) * std::log(ct);
      else zero = true;
    }
    if (j - m > 0) {
      if (st > 0) log_mag += (j - m) * std::log(st);
      else zero = true;
    }
    const double mag = zero ? 0.0 : std::exp(log_mag);
    amp(i) = mag * std::polar(1.0, (j - m) * c.phi);
  }
  return amp;
}

Matrix unitary_from_hermitian(const Matrix& h, double scale) {
  if (h.rows() != h.cols()) {
    throw std::invalid_argument("unitary_from_hermitian: matrix must be square");
  }
  const double herr = hermiticity_error(h);
  if (herr > 1e-10) {
    throw std::invalid_argument(
        "unitary_from_hermitian: input not Hermitian (max deviation " + std::to_string(herr) + ")");
  }
  const int dim = static_cast<int>(h.rows());

  bool diagonal = true;
  for (int c = 0; c < dim && diagonal; ++c) {
    for (int r = 0; r < dim; ++r) {
      if (r != c && h(r, c) != Complex(0, 0)) {
        diagonal = false;
        break;
      }
    }
  }
  if (diagonal) {
    Matrix u = Matrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) u(i, i) = std::polar(1.0, -scale * h(i, i).real());
    return u;
  }

  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) {
    throw NumericalError("unitary_from_hermitian: eigendecomposition failed");
  }
  const Matrix& v = es.eigenvectors();
  Vector phases(dim);
  for (int i = 0; i < dim; ++i) phases(i) = std::polar(1.0, -scale * es.eigenvalues()(i));
  return v * phases.asDiagonal() * v.adjoint();
}

}  // namespace qkt
