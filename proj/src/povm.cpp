#include "covmeas/povm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace covmeas {

namespace {

constexpr double kProbabilitySlack = 1e-12;

double clamp_probability(double p) {
  if (p < -kProbabilitySlack || p > 1.0 + kProbabilitySlack) {
    throw DomainError("probability " + std::to_string(p) + " outside [0, 1]");
  }
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace

CMatrix Povm::sum() const {
  CMatrix s = CMatrix::Zero(dim(), dim());
  for (const auto& e : elements) s += e.op;
  return s;
}

PovmReport validate_povm(const Povm& povm, double tol) {
  if (povm.elements.empty()) throw DimensionError("empty POVM");
  const Eigen::Index d = povm.dim();
  PovmReport rep;
  rep.min_eigenvalue = std::numeric_limits<double>::infinity();
  CMatrix s = CMatrix::Zero(d, d);
  for (const auto& e : povm.elements) {
    if (e.op.rows() != d || e.op.cols() != d) throw DimensionError("POVM elements differ in dimension");
    s += e.op;
    rep.max_hermiticity_deviation =
        std::max(rep.max_hermiticity_deviation, (e.op - e.op.adjoint()).cwiseAbs().maxCoeff());
    const CMatrix herm = 0.5 * (e.op + e.op.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
    rep.min_eigenvalue = std::min(rep.min_eigenvalue, es.eigenvalues().minCoeff());
  }
  rep.completeness_deviation = (s - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  rep.passed = rep.completeness_deviation <= tol && rep.min_eigenvalue >= -tol &&
               rep.max_hermiticity_deviation <= tol;
  return rep;
}

double outcome_probability(const PovmElement& element, const StateVector& state) {
  if (element.op.rows() != state.dim()) throw DimensionError("POVM element and state dimensions differ");
  const Complex p = state.amplitudes.dot(element.op * state.amplitudes);
  return clamp_probability(p.real());
}

double outcome_probability(const PovmElement& element, const CMatrix& rho) {
  if (element.op.rows() != rho.rows() || rho.rows() != rho.cols()) {
    throw DimensionError("POVM element and density matrix dimensions differ");
  }
  return clamp_probability((rho * element.op).trace().real());
}

std::vector<double> outcome_distribution(const Povm& povm, const StateVector& state) {
  std::vector<double> p;
  p.reserve(povm.elements.size());
  for (const auto& e : povm.elements) p.push_back(outcome_probability(e, state));
  return p;
}

Povm covariant_povm_finite(const std::vector<CMatrix>& rep, const StateVector& fiducial) {
  Povm povm;
  povm.kind = Povm::Kind::kFinite;
  for (std::size_t g = 0; g < rep.size(); ++g) {
    if (rep[g].rows() != fiducial.dim()) throw DimensionError("fiducial does not match the representation");
    const CVector b = rep[g] * fiducial.amplitudes;
    povm.elements.push_back({b * b.adjoint(), g});
  }
  return povm;
}

Povm covariant_direction_povm(SpinJ j, const SphereQuadrature& quad) {
  if (quad.exact_degree() < j.twice()) {
    throw DomainError("quadrature exact to degree " + std::to_string(quad.exact_degree()) +
                      ", direction POVM for 2j = " + std::to_string(j.twice()) + " needs at least 2j");
  }
  return direction_povm_on_nodes(j, quad);
}

Povm direction_povm_on_nodes(SpinJ j, const SphereQuadrature& quad) {
  Povm povm;
  povm.kind = Povm::Kind::kQuadrature;
  povm.elements.reserve(quad.size());
  const double norm = j.dim() / (4.0 * kPi);
  for (std::size_t k = 0; k < quad.size(); ++k) {
    const CVector v = coherent_state(j, quad.nodes[k]).amplitudes;
    povm.elements.push_back({quad.weights[k] * norm * (v * v.adjoint()), k});
  }
  return povm;
}

Povm coarse_grain_povm(const Povm& povm, const std::function<std::size_t(std::size_t)>& decode) {
  std::map<std::size_t, CMatrix> merged;
  for (const auto& e : povm.elements) {
    auto [it, inserted] = merged.try_emplace(decode(e.label), e.op);
    if (!inserted) it->second += e.op;
  }
  Povm out;
  out.kind = Povm::Kind::kFinite;
  for (auto& [symbol, op] : merged) out.elements.push_back({std::move(op), symbol});
  return out;
}

}  // namespace covmeas
