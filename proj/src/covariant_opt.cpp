#include "covmeas/covariant_opt.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace covmeas {

namespace {

// Number of eigenvalues of T strictly below x (Sturm sequence count).
int sturm_count(const Eigen::VectorXd& diag, const Eigen::VectorXd& off, double x) {
  int count = 0;
  double q = 1.0;
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    const double e2 = i > 0 ? off(i - 1) * off(i - 1) : 0.0;
    q = diag(i) - x - (i > 0 ? e2 / q : 0.0);
    if (q == 0.0) q = -1e-300;
    if (q < 0) ++count;
  }
  return count;
}

// Solves (T - shift) x = rhs with Gaussian elimination and partial pivoting
// on the tridiagonal band.
Eigen::VectorXd solve_shifted_tridiagonal(const Eigen::VectorXd& diag, const Eigen::VectorXd& off, double shift,
                                          Eigen::VectorXd rhs) {
  const Eigen::Index n = diag.size();
  Eigen::VectorXd u0 = diag.array() - shift;
  Eigen::VectorXd u1 = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd u2 = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd l = Eigen::VectorXd::Zero(n);
  std::vector<bool> swapped(n, false);
  const double tiny = 1e-300 + 1e-15 * (diag.cwiseAbs().maxCoeff() + (n > 1 ? off.cwiseAbs().maxCoeff() : 0.0));
  for (Eigen::Index i = 0; i + 1 < n; ++i) u1(i) = off(i);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    double top[3] = {u0(i), u1(i), 0.0};
    double bot[3] = {off(i), u0(i + 1), i + 2 < n ? u1(i + 1) : 0.0};
    if (std::abs(bot[0]) > std::abs(top[0])) {
      std::swap(top, bot);
      swapped[i] = true;
    }
    if (top[0] == 0.0) top[0] = tiny;
    const double m = bot[0] / top[0];
    u0(i) = top[0];
    u1(i) = top[1];
    u2(i) = top[2];
    l(i) = m;
    u0(i + 1) = bot[1] - m * top[1];
    if (i + 2 < n) u1(i + 1) = bot[2] - m * top[2];
  }
  if (u0(n - 1) == 0.0) u0(n - 1) = tiny;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    if (swapped[i]) std::swap(rhs(i), rhs(i + 1));
    rhs(i + 1) -= l(i) * rhs(i);
  }
  Eigen::VectorXd x(n);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    double acc = rhs(i);
    if (i + 1 < n) acc -= u1(i) * x(i + 1);
    if (i + 2 < n) acc -= u2(i) * x(i + 2);
    x(i) = acc / u0(i);
  }
  return x;
}

}  // namespace

CovariantOptimum finite_group_optimum(const SignalFamily& family) {
  if (!family.multiplicity_free())
    throw UnsupportedError("finite_group_optimum: repeated equivalent irreps are not supported");
  const double order = static_cast<double>(family.group.order());
  double total_dim = 0.0;
  for (const auto& b : family.blocks) total_dim += b.dim();

  // Cauchy-Schwarz: |<B|A>| <= sum_b sqrt(d_b/|G|) |a_b|, maximal for
  // |a_b| proportional to sqrt(d_b) with B aligned to A in every block.
  CovariantOptimum opt;
  opt.score_rule = ScoreRule::kZeroOne;
  std::vector<CVector> directions;
  CVector a = CVector::Zero(family.fiducial.dim());
  for (std::size_t k = 0; k < family.blocks.size(); ++k) {
    const auto& blk = family.blocks[k];
    CVector u = family.block_coordinates(family.fiducial, k);
    if (u.norm() < 1e-12) {
      u = CVector::Zero(blk.dim());
      u(0) = 1.0;
    }
    u.normalize();
    const double coeff = std::sqrt(blk.dim() / total_dim);
    opt.coefficients.push_back(coeff);
    opt.fiducial_norms.push_back(std::sqrt(blk.dim() / order));
    a += coeff * (blk.basis * u);
    directions.push_back(std::move(u));
  }
  opt.signal = {family.fiducial.basis, a};
  opt.fiducial = schur_fiducial(family, directions);
  opt.fidelity = std::norm(opt.fiducial.inner(opt.signal));
  return opt;
}

Eigen::MatrixXd direction_cos_matrix(int j_max) {
  if (j_max < 0) throw DomainError("j_max must be non-negative");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(j_max + 1, j_max + 1);
  for (int j = 0; j < j_max; ++j) {
    const double v = (j + 1.0) / std::sqrt((2.0 * j + 1.0) * (2.0 * j + 3.0));
    m(j, j + 1) = v;
    m(j + 1, j) = v;
  }
  return m;
}

Eigenpair top_eigenpair_tridiagonal(const Eigen::VectorXd& diag, const Eigen::VectorXd& off) {
  const Eigen::Index n = diag.size();
  if (n == 0 || off.size() != n - 1) throw DimensionError("tridiagonal: off-diagonal must have n-1 entries");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::abs(off(i - 1)) : 0.0) + (i + 1 < n ? std::abs(off(i)) : 0.0);
    lo = std::min(lo, diag(i) - r);
    hi = std::max(hi, diag(i) + r);
  }
  // invariant: count(lo) <= n-1 and count(hi) == n
  lo -= 1e-12 * (1.0 + std::abs(lo));
  hi += 1e-12 * (1.0 + std::abs(hi));
  for (int it = 0; it < 200 && hi - lo > 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(hi));
       ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(diag, off, mid) == n)
      hi = mid;
    else
      lo = mid;
  }
  Eigenpair out;
  out.value = 0.5 * (lo + hi);
  Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
  for (int it = 0; it < 4; ++it) {
    v = solve_shifted_tridiagonal(diag, off, out.value, v);
    v.normalize();
  }
  const double scale = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(v(i)) > 1e-12 * scale) {
      if (v(i) < 0) v = -v;
      break;
    }
  }
  out.vector = std::move(v);
  return out;
}

DirectionCode optimal_direction_encoding(SpinJ j_max) {
  if (!j_max.is_integer())
    throw UnsupportedError("direction codes need an even number of spins (integer j_max); odd N would need an "
                           "m = 1/2 carrier");
  const int jm = j_max.twice() / 2;
  const Eigen::MatrixXd t = direction_cos_matrix(jm);
  const Eigen::VectorXd diag = t.diagonal();
  const Eigen::VectorXd off = jm > 0 ? Eigen::VectorXd(t.diagonal(1)) : Eigen::VectorXd(0);
  const Eigenpair top = top_eigenpair_tridiagonal(diag, off);
  DirectionCode code;
  code.carrier = CodeCarrier::kZeroM;
  code.j_max = j_max;
  code.amplitudes.assign(top.vector.data(), top.vector.data() + top.vector.size());
  code.fidelity = 0.5 * (1.0 + top.value);
  code.effective_dimension = (jm + 1) * (jm + 1);
  return code;
}

DirectionCode optimal_direction_encoding(int j_max) {
  if (j_max < 0) throw DomainError("j_max must be non-negative");
  return optimal_direction_encoding(SpinJ::integer(j_max));
}

DirectionCode coherent_direction_code(SpinJ j) {
  DirectionCode code;
  code.carrier = CodeCarrier::kCoherent;
  code.j_max = j;
  code.amplitudes = {1.0};
  code.fidelity = (j.twice() + 1.0) / (j.twice() + 2.0);
  code.effective_dimension = j.dim();
  return code;
}

ChiDensity::ChiDensity(DirectionCode code) : code_(std::move(code)) {
  double norm2 = 0.0;
  for (double a : code_.amplitudes) norm2 += a * a;
  if (std::abs(norm2 - 1.0) > 1e-9) throw DomainError("direction code amplitudes are not normalized");
  gauss_legendre(code_.j_max.twice() + 48, nodes_, weights_);
}

double ChiDensity::in_cos(double x) const {
  if (code_.carrier == CodeCarrier::kCoherent) {
    const int tj = code_.j_max.twice();
    return 0.5 * (tj + 1) * std::pow(0.5 * (1.0 + x), tj);
  }
  double amp = 0.0;
  double p0 = 1.0, p1 = x;
  for (std::size_t j = 0; j < code_.amplitudes.size(); ++j) {
    double pj;
    if (j == 0) {
      pj = p0;
    } else if (j == 1) {
      pj = p1;
    } else {
      pj = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / static_cast<double>(j);
      p0 = p1;
      p1 = pj;
    }
    amp += std::sqrt((2.0 * j + 1.0) / (4.0 * kPi)) * code_.amplitudes[j] * pj;
  }
  return kTwoPi * amp * amp;
}

double ChiDensity::operator()(double chi) const { return in_cos(std::cos(chi)) * std::sin(chi); }

ChiDensity chi_density(const DirectionCode& code) { return ChiDensity(code); }

D3CoherentError d3_coherent_error(SpinJ j, const SphereQuadrature& quad) {
  const int needed = 2 * j.twice() + 2;
  if (quad.exact_degree() < needed)
    throw DomainError("quadrature exact to degree " + std::to_string(quad.exact_degree()) + ", need " +
                      std::to_string(needed) + " for j = " + std::to_string(j.twice()) + "/2");
  const std::vector<Vec3> signals = d3_signal_directions();
  std::vector<double> correct(signals.size(), 0.0);
  const double norm = j.dim() / (4.0 * kPi);
  for (std::size_t k = 0; k < quad.size(); ++k) {
    const std::size_t cell = nearest_direction(quad.points[k], signals);
    const double c = 0.5 * (1.0 + quad.points[k].dot(signals[cell]));
    correct[cell] += quad.weights[k] * norm * std::pow(std::max(c, 0.0), j.twice());
  }
  D3CoherentError out;
  const auto [mn, mx] = std::minmax_element(correct.begin(), correct.end());
  out.asymmetry = *mx - *mn;
  double mean = 0.0;
  for (double c : correct) mean += c;
  mean /= static_cast<double>(correct.size());
  out.error = 1.0 - mean;
  return out;
}

}  // namespace covmeas
