#include "covmeas/spin_rep.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace covmeas {

namespace {

constexpr int kExplicitSumMaxTwiceJ = 20;

double log_factorial(int n) {
  static const std::array<double, 1024> table = [] {
    std::array<double, 1024> t{};
    for (int i = 0; i < 1024; ++i) t[i] = std::lgamma(i + 1.0);
    return t;
  }();
  if (n < 0) throw DomainError("log_factorial: negative argument");
  return n < 1024 ? table[n] : std::lgamma(n + 1.0);
}

double log_binomial(int n, int k) {
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

// pow with an integer exponent that keeps 0^0 = 1 and handles negative bases
double ipow(double base, int e) {
  double r = 1.0;
  double b = base;
  while (e > 0) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

void check_m(SpinJ j, int twice_m) {
  if (std::abs(twice_m) > j.twice() || (j.twice() - twice_m) % 2 != 0) {
    throw DomainError("invalid m = " + std::to_string(twice_m) + "/2 for j = " +
                      std::to_string(j.twice()) + "/2");
  }
}

double small_d_explicit(int tj, int tm1, int tm2, double beta) {
  const double c = std::cos(0.5 * beta);
  const double s = std::sin(0.5 * beta);
  const int jpm1 = (tj + tm1) / 2, jmm1 = (tj - tm1) / 2;
  const int jpm2 = (tj + tm2) / 2, jmm2 = (tj - tm2) / 2;
  const int m1mm2 = (tm1 - tm2) / 2;
  const double log_pref =
      0.5 * (log_factorial(jpm1) + log_factorial(jmm1) + log_factorial(jpm2) + log_factorial(jmm2));
  const int kmin = std::max(0, -m1mm2);
  const int kmax = std::min(jpm2, jmm1);
  double sum = 0.0;
  for (int k = kmin; k <= kmax; ++k) {
    const double log_den = log_factorial(jpm2 - k) + log_factorial(k) + log_factorial(jmm1 - k) +
                           log_factorial(k + m1mm2);
    const double mag = std::exp(log_pref - log_den);
    const int sign = ((k + m1mm2) % 2 == 0) ? 1 : -1;
    sum += sign * mag * ipow(c, tj - 2 * k - m1mm2) * ipow(s, 2 * k + m1mm2);
  }
  return sum;
}

// Jacobi P_n^{(a,b)}(x) by the forward recurrence in the degree.
double jacobi(int n, int a, int b, double x) {
  if (n == 0) return 1.0;
  double p0 = 1.0;
  double p1 = (a + 1) + 0.5 * (a + b + 2) * (x - 1.0);
  for (int k = 2; k <= n; ++k) {
    const double ab = a + b;
    const double c0 = 2.0 * k * (k + ab) * (2.0 * k + ab - 2.0);
    const double c1 = (2.0 * k + ab - 1.0) * ((2.0 * k + ab) * (2.0 * k + ab - 2.0) * x + a * a - b * b);
    const double c2 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * (2.0 * k + ab);
    const double p2 = (c1 * p1 - c2 * p0) / c0;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double small_d_jacobi(int tj, int tm1, int tm2, double beta) {
  const int jpm1 = (tj + tm1) / 2, jmm1 = (tj - tm1) / 2;
  const int jpm2 = (tj + tm2) / 2, jmm2 = (tj - tm2) / 2;
  const int k = std::min({jpm2, jmm2, jpm1, jmm1});
  const int m1mm2 = (tm1 - tm2) / 2;
  int a = 0, lambda = 0;
  if (k == jpm2) {
    a = m1mm2;
    lambda = m1mm2;
  } else if (k == jmm2) {
    a = -m1mm2;
  } else if (k == jpm1) {
    a = -m1mm2;
  } else {
    a = m1mm2;
    lambda = m1mm2;
  }
  const int b = tj - 2 * k - a;
  const double pref = std::exp(0.5 * (log_binomial(tj - k, k + a) - log_binomial(k + b, b)));
  const double sign = (lambda % 2 == 0) ? 1.0 : -1.0;
  return sign * pref * ipow(std::sin(0.5 * beta), a) * ipow(std::cos(0.5 * beta), b) *
         jacobi(k, a, b, std::cos(beta));
}

}  // namespace

SpinJ SpinJ::from_twice(int twice_j) {
  if (twice_j < 0) throw DomainError("spin must be non-negative");
  return SpinJ(twice_j);
}

Vec3 Direction::unit() const {
  const double st = std::sin(theta);
  return {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
}

Direction Direction::from_vector(const Vec3& v) {
  const double n = v.norm();
  if (!(n > 0.0)) throw DegenerateInputError("direction of a zero vector");
  const Vec3 u = v / n;
  return {std::atan2(std::hypot(u.x(), u.y()), u.z()), wrap_angle_positive(std::atan2(u.y(), u.x()))};
}

double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

int Basis::dim() const { return kind == Kind::kQubits ? (1 << param) : param + 1; }

StateVector StateVector::spin(SpinJ j, CVector amps) {
  if (amps.size() != j.dim()) throw DimensionError("spin state dimension must be 2j+1");
  return {{Basis::Kind::kSpin, j.twice()}, std::move(amps)};
}

StateVector StateVector::qubits(int num_qubits, CVector amps) {
  if (num_qubits < 0 || num_qubits > 24) throw DomainError("unsupported number of qubits");
  if (amps.size() != (Eigen::Index{1} << num_qubits)) throw DimensionError("qubit state dimension must be 2^N");
  return {{Basis::Kind::kQubits, num_qubits}, std::move(amps)};
}

std::size_t qubit_index(std::string_view bits) {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < bits.size(); ++k) {
    if (bits[k] == '1') {
      idx |= std::size_t{1} << k;
    } else if (bits[k] != '0') {
      throw DomainError("ket label must contain only 0 and 1");
    }
  }
  return idx;
}

StateVector StateVector::ket(std::string_view bits) {
  const int n = static_cast<int>(bits.size());
  CVector v = CVector::Zero(Eigen::Index{1} << n);
  v(static_cast<Eigen::Index>(qubit_index(bits))) = 1.0;
  return qubits(n, std::move(v));
}

Complex StateVector::inner(const StateVector& other) const {
  if (!(basis == other.basis)) throw DimensionError("inner product across different bases");
  return amplitudes.dot(other.amplitudes);  // conjugates the left operand
}

StateVector StateVector::normalized() const {
  const double n = norm();
  if (!(n > 0.0)) throw DomainError("cannot normalize a zero state");
  return {basis, amplitudes / n};
}

double wigner_small_d(SpinJ j, int twice_m1, int twice_m2, double beta) {
  check_m(j, twice_m1);
  check_m(j, twice_m2);
  if (j.twice() <= kExplicitSumMaxTwiceJ) return small_d_explicit(j.twice(), twice_m1, twice_m2, beta);
  return small_d_jacobi(j.twice(), twice_m1, twice_m2, beta);
}

Eigen::MatrixXd wigner_small_d_matrix(SpinJ j, double beta) {
  const int n = j.dim();
  Eigen::MatrixXd d(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) d(r, c) = wigner_small_d(j, j.twice() - 2 * r, j.twice() - 2 * c, beta);
  return d;
}

SpinOperators spin_operators(SpinJ j) {
  const int n = j.dim();
  const double jv = j.value();
  CMatrix jp = CMatrix::Zero(n, n);
  CMatrix jz = CMatrix::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double m = jv - k;
    jz(k, k) = m;
    if (k > 0) jp(k - 1, k) = std::sqrt(jv * (jv + 1) - m * (m + 1));
  }
  const CMatrix jm = jp.adjoint();
  const Complex i(0, 1);
  return {(jp + jm) / 2.0, (jp - jm) / (2.0 * i), jz};
}

CMatrix spin_rotation(SpinJ j, const ZyzAngles& a) {
  const int n = j.dim();
  const Eigen::MatrixXd d = wigner_small_d_matrix(j, a.beta);
  CMatrix out(n, n);
  for (int r = 0; r < n; ++r) {
    const double m1 = j.value() - r;
    for (int c = 0; c < n; ++c) {
      const double m2 = j.value() - c;
      out(r, c) = std::polar(d(r, c), -m1 * a.alpha - m2 * a.gamma);
    }
  }
  return out;
}

CMatrix spin_rotation(SpinJ j, const EulerAngles& e) { return spin_rotation(j, zyz_angles(e)); }

CMatrix spin_rotation(SpinJ j, const AxisAngle& r) {
  const Vec3 n = r.axis.normalized();
  const Complex i(0, 1);
  if (j.twice() == 1) {
    const double c = std::cos(0.5 * r.angle), s = std::sin(0.5 * r.angle);
    CMatrix u(2, 2);
    u << Complex(c, -s * n.z()), -i * s * Complex(n.x(), -n.y()),
        -i * s * Complex(n.x(), n.y()), Complex(c, s * n.z());
    return u;
  }
  const SpinOperators ops = spin_operators(j);
  const CMatrix nj = n.x() * ops.jx + n.y() * ops.jy + n.z() * ops.jz;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(nj);
  CVector phases(j.dim());
  for (int k = 0; k < j.dim(); ++k) phases(k) = std::exp(-i * r.angle * es.eigenvalues()(k));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

StateVector rotate_spin_state(SpinJ j, const StateVector& state, const EulerAngles& e) {
  if (state.basis.kind != Basis::Kind::kSpin || state.dim() != j.dim()) {
    throw DimensionError("rotate_spin_state: state is not a spin-j vector");
  }
  return StateVector::spin(j, spin_rotation(j, e) * state.amplitudes);
}

StateVector coherent_state(SpinJ j, const Direction& dir) {
  const int tj = j.twice();
  const double c = std::cos(0.5 * dir.theta), s = std::sin(0.5 * dir.theta);
  CVector amps(j.dim());
  for (int k = 0; k <= tj; ++k) {
    const double mag = std::exp(0.5 * log_binomial(tj, k)) * ipow(c, tj - k) * ipow(s, k);
    amps(k) = std::polar(mag, k * dir.phi);
  }
  return StateVector::spin(j, std::move(amps));
}

double coherent_overlap_sq(SpinJ j, const Direction& d1, const Direction& d2) {
  const double half_cos = 0.5 * (1.0 + d1.unit().dot(d2.unit()));
  return ipow(std::clamp(half_cos, 0.0, 1.0), j.twice());
}

SpinOperators total_spin_operators(int num_spins) {
  if (num_spins < 1 || num_spins > 12) throw DomainError("num_spins must be in [1, 12]");
  const Eigen::Index dim = Eigen::Index{1} << num_spins;
  CMatrix jp = CMatrix::Zero(dim, dim);
  CMatrix jz = CMatrix::Zero(dim, dim);
  for (Eigen::Index idx = 0; idx < dim; ++idx) {
    double m = 0.0;
    for (int k = 0; k < num_spins; ++k) {
      const bool down = (idx >> k) & 1;
      m += down ? -0.5 : 0.5;
      if (down) jp(idx & ~(Eigen::Index{1} << k), idx) += 1.0;
    }
    jz(idx, idx) = m;
  }
  const CMatrix jm = jp.adjoint();
  const Complex i(0, 1);
  return {(jp + jm) / 2.0, (jp - jm) / (2.0 * i), jz};
}

CMatrix total_spin_squared(int num_spins) {
  const SpinOperators j = total_spin_operators(num_spins);
  return j.jx * j.jx + j.jy * j.jy + j.jz * j.jz;
}

std::vector<SpinJ> attainable_spins(int num_spins) {
  std::vector<SpinJ> out;
  for (int tj = num_spins; tj >= 0; tj -= 2) out.push_back(SpinJ::from_twice(tj));
  return out;
}

CMatrix total_j_projector(int num_spins, SpinJ j) {
  const auto spins = attainable_spins(num_spins);
  if (std::find(spins.begin(), spins.end(), j) == spins.end()) {
    throw DomainError("j = " + std::to_string(j.twice()) + "/2 is not attainable with " +
                      std::to_string(num_spins) + " spins");
  }
  const CMatrix j2 = total_spin_squared(num_spins);
  const Eigen::Index dim = j2.rows();
  const CMatrix id = CMatrix::Identity(dim, dim);
  const double target = j.value() * (j.value() + 1);
  CMatrix p = id;
  for (SpinJ k : spins) {
    if (k == j) continue;
    const double ev = k.value() * (k.value() + 1);
    p = p * (j2 - ev * id) / (target - ev);
  }
  return p;
}

std::vector<SpinComponent> decompose_multispin(const StateVector& state) {
  if (state.basis.kind != Basis::Kind::kQubits) {
    throw DimensionError("decompose_multispin needs a product-basis state");
  }
  const int n = state.basis.param;
  std::vector<SpinComponent> out;
  for (SpinJ j : attainable_spins(n)) {
    out.push_back({j, StateVector::qubits(n, total_j_projector(n, j) * state.amplitudes)});
  }
  return out;
}

double legendre(int l, double x) {
  if (l < 0) throw DomainError("legendre: negative degree");
  if (l == 0) return 1.0;
  double p0 = 1.0, p1 = x;
  for (int n = 1; n < l; ++n) {
    const double p2 = ((2.0 * n + 1.0) * x * p1 - n * p0) / (n + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

CMatrix tensor_power(const CMatrix& single, int num_qubits) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (int q = 0; q < num_qubits; ++q) {
    CMatrix next(out.rows() * single.rows(), out.cols() * single.cols());
    for (Eigen::Index r = 0; r < single.rows(); ++r)
      for (Eigen::Index c = 0; c < single.cols(); ++c)
        next.block(r * out.rows(), c * out.cols(), out.rows(), out.cols()) = single(r, c) * out;
    out = std::move(next);
  }
  return out;
}

}  // namespace covmeas
