#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace qkt {

using Real = double;
using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

// thrown when a numerical-integrity guard trips (unitarity loss, positivity
// violation, norm drift); the CLI maps it to a distinct exit code
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qkt
