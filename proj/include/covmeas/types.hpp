#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace covmeas {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Invalid quantum numbers or arguments outside an operation's domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Operands whose dimensions disagree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Geometric inputs at a singular configuration (parallel axes, poles).
class DegenerateInputError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Requested case is outside what the implementation handles.
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Reading or writing files failed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace covmeas
