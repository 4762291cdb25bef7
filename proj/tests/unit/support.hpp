#pragma once

#include <cmath>
#include <random>

#include "covmeas/spin_rep.hpp"

namespace testing_support {

using covmeas::CMatrix;
using covmeas::Complex;
using covmeas::SpinJ;

// J_x, J_y, J_z from the ladder matrix elements, m = j..-j.
struct Ladder {
  CMatrix jx, jy, jz;
};

inline Ladder ladder_operators(SpinJ j) {
  const int d = j.dim();
  const double jj = j.value();
  CMatrix jp = CMatrix::Zero(d, d);
  CMatrix jz = CMatrix::Zero(d, d);
  for (int r = 0; r < d; ++r) {
    const double m = jj - r;
    jz(r, r) = m;
    if (r > 0) jp(r - 1, r) = std::sqrt(jj * (jj + 1) - m * (m + 1));
  }
  const CMatrix jm = jp.adjoint();
  return {(jp + jm) / 2.0, (jp - jm) / Complex(0, 2), jz};
}

// exp(-i angle H) for Hermitian H via its eigen-decomposition.
inline CMatrix unitary_exp(const CMatrix& h, double angle) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  CMatrix phases = CMatrix::Zero(h.rows(), h.cols());
  for (Eigen::Index k = 0; k < h.rows(); ++k) phases(k, k) = std::exp(Complex(0, -angle * es.eigenvalues()(k)));
  return es.eigenvectors() * phases * es.eigenvectors().adjoint();
}

// Largest |a_k - c b_k| over the best global phase c.
inline double phase_distance(const covmeas::CVector& a, const covmeas::CVector& b) {
  const Complex ov = b.dot(a);
  const Complex c = std::abs(ov) > 0 ? ov / std::abs(ov) : Complex(1, 0);
  return (a - c * b).cwiseAbs().maxCoeff();
}

inline double phase_distance(const CMatrix& a, const CMatrix& b) {
  const Complex ov = (b.adjoint() * a).trace();
  const Complex c = std::abs(ov) > 0 ? ov / std::abs(ov) : Complex(1, 0);
  return (a - c * b).cwiseAbs().maxCoeff();
}

inline covmeas::Direction random_direction(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return {std::acos(2 * u(gen) - 1), 2 * M_PI * u(gen)};
}

}  // namespace testing_support
