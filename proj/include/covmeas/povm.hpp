#pragma once

#include <functional>
#include <vector>

#include "covmeas/spin_rep.hpp"
#include "covmeas/types.hpp"

namespace covmeas {

struct PovmElement {
  CMatrix op;
  // group element index, quadrature node index, or decoded symbol
  std::size_t label = 0;
};

struct Povm {
  enum class Kind { kFinite, kQuadrature };
  std::vector<PovmElement> elements;
  Kind kind = Kind::kFinite;

  Eigen::Index dim() const { return elements.empty() ? 0 : elements.front().op.rows(); }
  CMatrix sum() const;
};

struct PovmReport {
  double completeness_deviation = 0.0;  // max |(sum E - 1)_{ab}|
  double min_eigenvalue = 0.0;
  double max_hermiticity_deviation = 0.0;
  bool passed = false;
};

PovmReport validate_povm(const Povm& povm, double tol);

/// Born rule <psi|E|psi>; rounding below zero down to -1e-12 is clamped,
/// anything further outside [0, 1] throws.
double outcome_probability(const PovmElement& element, const StateVector& state);
/// tr(rho E) for a density matrix.
double outcome_probability(const PovmElement& element, const CMatrix& rho);

/// Probabilities of every outcome, in element order.
std::vector<double> outcome_distribution(const Povm& povm, const StateVector& state);

/// E_g = U(g)|B><B|U(g)^dagger, one element per representation matrix.
Povm covariant_povm_finite(const std::vector<CMatrix>& rep, const StateVector& fiducial);

/// Elements w_k (2j+1)/(4 pi) |j,n_k><j,n_k| over the quadrature nodes.
/// Throws DomainError unless the quadrature integrates degree 2j exactly.
Povm covariant_direction_povm(SpinJ j, const SphereQuadrature& quad);
/// Same elements without the degree check; completeness then only holds
/// approximately (used by the self-check to exercise a failing case).
Povm direction_povm_on_nodes(SpinJ j, const SphereQuadrature& quad);

/// Merges raw outcomes that decode to the same symbol: E_s = sum E_h over
/// decode(h) = s. Output elements are ordered by symbol.
Povm coarse_grain_povm(const Povm& povm, const std::function<std::size_t(std::size_t)>& decode);

}  // namespace covmeas
