#pragma once

#include <vector>

#include "covmeas/group_rep.hpp"
#include "covmeas/spin_rep.hpp"

namespace covmeas {

enum class ScoreRule { kZeroOne, kCosSquaredHalfAngle };

struct CovariantOptimum {
  double fidelity = 0.0;
  // signal weight per invariant block (same order as family.blocks)
  std::vector<double> coefficients;
  // Schur-fixed fiducial norm per block, sqrt(d_b / |G|)
  std::vector<double> fiducial_norms;
  StateVector signal;    // |A_E>
  StateVector fiducial;  // |B>
  ScoreRule score_rule = ScoreRule::kZeroOne;
};

/// Best zero-one score of a covariant measurement on a multiplicity-free
/// signal space, maximized jointly over the signal and the Schur-constrained
/// fiducial. F = sum_b d_b / |G|.
CovariantOptimum finite_group_optimum(const SignalFamily& family);

/// <cos chi> between the normalized m = 0 block functions sqrt(2j+1) P_j,
/// j = 0..j_max. Tridiagonal with zero diagonal.
Eigen::MatrixXd direction_cos_matrix(int j_max);

struct Eigenpair {
  double value = 0.0;
  Eigen::VectorXd vector;
};

/// Largest eigenvalue of a symmetric tridiagonal matrix by Sturm bisection,
/// eigenvector by inverse iteration. The first non-negligible entry of the
/// returned vector is positive.
Eigenpair top_eigenpair_tridiagonal(const Eigen::VectorXd& diag, const Eigen::VectorXd& off);

enum class CodeCarrier {
  kCoherent,  // all amplitude in the top block's highest-weight state
  kZeroM,     // common m = 0 component across integer-j blocks
};

struct DirectionCode {
  CodeCarrier carrier = CodeCarrier::kZeroM;
  SpinJ j_max;
  // A_j over j = 0..j_max for kZeroM; a single 1 for kCoherent
  std::vector<double> amplitudes;
  double fidelity = 0.0;
  int effective_dimension = 0;

  double infidelity() const { return 1.0 - fidelity; }
};

/// Optimal m = 0 direction code over blocks j = 0..j_max (N = 2 j_max spins).
/// Half-integer j_max is rejected with UnsupportedError.
DirectionCode optimal_direction_encoding(SpinJ j_max);
DirectionCode optimal_direction_encoding(int j_max);

/// N = 2j parallel spins: F = (2j+1)/(2j+2).
DirectionCode coherent_direction_code(SpinJ j);

/// Distribution of the angle chi between the true and the estimated
/// direction produced by the covariant direction measurement on a code.
class ChiDensity {
 public:
  explicit ChiDensity(DirectionCode code);

  /// p(chi) on [0, pi].
  double operator()(double chi) const;
  /// Density in x = cos(chi) on [-1, 1].
  double in_cos(double x) const;
  /// E[f(x)] with x = cos chi, integrated exactly for polynomial f up to
  /// degree ~ 2 j_max + 64.
  template <class F>
  double expectation(F&& f) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < nodes_.size(); ++k) acc += weights_[k] * in_cos(nodes_[k]) * f(nodes_[k]);
    return acc;
  }

  const DirectionCode& code() const { return code_; }

 private:
  DirectionCode code_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

ChiDensity chi_density(const DirectionCode& code);

struct D3CoherentError {
  double error = 0.0;      // averaged over the six signal directions
  double asymmetry = 0.0;  // max minus min over the six
};

/// Probability that the nearest-signal decode of a coherent direction
/// measurement on j = N/2 misidentifies a D3 signal, integrated over the
/// quadrature nodes of each Voronoi cell. Needs exact degree >= 4j + 2.
D3CoherentError d3_coherent_error(SpinJ j, const SphereQuadrature& quad);

}  // namespace covmeas
