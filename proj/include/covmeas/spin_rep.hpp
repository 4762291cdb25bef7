#pragma once

#include <compare>
#include <string_view>
#include <vector>

#include "covmeas/rotation.hpp"
#include "covmeas/types.hpp"

namespace covmeas {

/// Angular momentum quantum number, stored as 2j so half-integers are exact.
class SpinJ {
 public:
  constexpr SpinJ() = default;

  static SpinJ from_twice(int twice_j);
  static SpinJ integer(int j) { return from_twice(2 * j); }

  constexpr int twice() const { return twice_j_; }
  constexpr double value() const { return 0.5 * twice_j_; }
  constexpr int dim() const { return twice_j_ + 1; }
  constexpr bool is_integer() const { return twice_j_ % 2 == 0; }

  auto operator<=>(const SpinJ&) const = default;

 private:
  constexpr explicit SpinJ(int twice_j) : twice_j_(twice_j) {}
  int twice_j_ = 0;
};

/// Point on the unit sphere in polar coordinates.
struct Direction {
  double theta = 0.0;  // [0, pi]
  double phi = 0.0;    // [0, 2pi)

  Vec3 unit() const;
  /// Polar angles of a non-zero vector (normalized internally).
  static Direction from_vector(const Vec3& v);
};

/// Angle between two directions, in [0, pi].
double angle_between(const Vec3& a, const Vec3& b);

struct Basis {
  enum class Kind { kQubits, kSpin };
  Kind kind = Kind::kSpin;
  // number of qubits for kQubits, 2j for kSpin
  int param = 0;

  int dim() const;
  bool operator==(const Basis&) const = default;
};

/// Amplitudes over either a product-of-qubits basis or a single |j, m> basis.
///
/// Spin basis ordering is m = j, j-1, ..., -j. Qubit basis ordering is
/// little-endian: qubit k (the k-th symbol of a written ket, counting from the
/// left) is bit k of the index. |0> is spin up.
struct StateVector {
  Basis basis;
  CVector amplitudes;

  static StateVector spin(SpinJ j, CVector amps);
  static StateVector qubits(int num_qubits, CVector amps);
  /// Product basis ket from a string of '0' and '1', e.g. "0100".
  static StateVector ket(std::string_view bits);

  int dim() const { return static_cast<int>(amplitudes.size()); }
  double norm() const { return amplitudes.norm(); }
  Complex inner(const StateVector& other) const;  // <this|other>
  StateVector normalized() const;
};

/// Product-basis index of a written ket such as "001".
std::size_t qubit_index(std::string_view bits);

struct SphereQuadrature {
  int n_theta = 0;
  int n_phi = 0;
  std::vector<Direction> nodes;
  std::vector<Vec3> points;  // unit vectors of `nodes`
  std::vector<double> weights;

  /// Highest spherical-harmonic degree integrated exactly.
  int exact_degree() const { return std::min(2 * n_theta - 1, n_phi - 1); }
  std::size_t size() const { return weights.size(); }

  template <class F>
  double integrate(F&& f) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) acc += weights[k] * f(points[k]);
    return acc;
  }
};

/// Gauss-Legendre nodes and weights on [-1, 1], nodes ascending.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Gauss-Legendre in cos(theta) crossed with a uniform phi grid offset by half
/// a step, so no node sits on the phi = 0 meridian.
SphereQuadrature sphere_quadrature(int n_theta, int n_phi);

/// Wigner small-d element d^j_{m1 m2}(beta); m values passed as 2m.
double wigner_small_d(SpinJ j, int twice_m1, int twice_m2, double beta);
/// Full (2j+1)x(2j+1) small-d matrix in the m = j..-j ordering.
Eigen::MatrixXd wigner_small_d_matrix(SpinJ j, double beta);

struct SpinOperators {
  CMatrix jx, jy, jz;
};
SpinOperators spin_operators(SpinJ j);

/// D^j for the rotation given in the frame Euler convention.
CMatrix spin_rotation(SpinJ j, const EulerAngles& e);
/// D^j = exp(-i angle n.J); the angle range fixes the projective phase.
CMatrix spin_rotation(SpinJ j, const AxisAngle& r);
CMatrix spin_rotation(SpinJ j, const ZyzAngles& a);

StateVector rotate_spin_state(SpinJ j, const StateVector& state, const EulerAngles& e);

/// Spin coherent state |j, n>: the +j eigenvector of n.J, with a real
/// non-negative m = j amplitude.
StateVector coherent_state(SpinJ j, const Direction& dir);

/// |<j,d1|j,d2>|^2 = cos^{4j}(chi/2).
double coherent_overlap_sq(SpinJ j, const Direction& d1, const Direction& d2);

/// Total spin operators and J^2 on num_spins spin-1/2 particles.
SpinOperators total_spin_operators(int num_spins);
CMatrix total_spin_squared(int num_spins);

/// Values of total j reachable with num_spins spin-1/2 particles.
std::vector<SpinJ> attainable_spins(int num_spins);

/// Projector onto the J^2 = j(j+1) eigenspace of num_spins qubits.
CMatrix total_j_projector(int num_spins, SpinJ j);

struct SpinComponent {
  SpinJ j;
  StateVector component;
};

/// Splits a product-basis state into its total-spin components, j descending.
std::vector<SpinComponent> decompose_multispin(const StateVector& state);

/// Legendre polynomial P_l(x) by the three-term recurrence.
double legendre(int l, double x);

/// U(1) (x) ... (x) U(1), one spin-1/2 factor per qubit.
CMatrix tensor_power(const CMatrix& single, int num_qubits);

}  // namespace covmeas
