#include "covmeas/frame_fit.hpp"

#include <algorithm>
#include <cmath>

namespace covmeas {

namespace {

constexpr double kOrthonormalTol = 1e-8;
constexpr double kGimbalTol = 1e-9;

}  // namespace

Mat3 Frame::matrix() const {
  Mat3 m;
  m.col(0) = x_axis;
  m.col(1) = y_axis;
  m.col(2) = z_axis;
  return m;
}

Frame Frame::from_matrix(const Mat3& m) { return {m.col(2), m.col(0), m.col(1)}; }

double Frame::orthonormality_defect() const {
  const Mat3 m = matrix();
  const double ortho = (m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff();
  return std::max(ortho, std::abs(x_axis.cross(y_axis).dot(z_axis) - 1.0));
}

AxesFromEuler euler_to_axes(const EulerAngles& e) {
  const Frame f = Frame::from_matrix(rotation_matrix(e));
  return {{Direction::from_vector(f.z_axis), Direction::from_vector(f.x_axis)}, f};
}

NaiveEstimate naive_euler_estimate(const AxisPairEstimate& est) {
  const double sz = std::sin(est.z_dir.theta);
  if (std::abs(sz) < 1e-12) throw DegenerateInputError("naive Euler inversion: z estimate at a pole");
  NaiveEstimate out;
  out.angles.theta = est.z_dir.theta;
  out.angles.psi = wrap_angle(kPi / 2 - est.z_dir.phi);
  out.sin_phi = std::cos(est.x_dir.theta) / sz;
  out.out_of_range = std::abs(out.sin_phi) > 1.0;
  const double s = std::clamp(out.sin_phi, -1.0, 1.0);

  // asin leaves the sign of cos(phi) open; keep the branch whose predicted
  // in-plane x components match the estimate.
  const Vec3 x_obs = est.x_dir.unit();
  const double cp = std::cos(out.angles.psi), sp = std::sin(out.angles.psi), ct = std::cos(out.angles.theta);
  auto residual = [&](double phi) {
    const double r0 = cp * std::cos(phi) - sp * ct * std::sin(phi) - x_obs.x();
    const double r1 = -sp * std::cos(phi) - cp * ct * std::sin(phi) - x_obs.y();
    return r0 * r0 + r1 * r1;
  };
  const double phi1 = std::asin(s);
  const double phi2 = kPi - phi1;
  out.angles.phi = wrap_angle(residual(phi2) < residual(phi1) ? phi2 : phi1);
  return out;
}

FittedFrame best_fit_frame(const AxisPairEstimate& est) {
  const Vec3 z = est.z_dir.unit();
  const Vec3 x = est.x_dir.unit();
  const Vec3 n = z.cross(x);
  if (n.norm() <= 1e-8) throw DegenerateInputError("best_fit_frame: z and x estimates are (anti)parallel");
  const Vec3 bisector = (z + x).normalized();
  const Vec3 across = (z - x).normalized();
  FittedFrame out;
  out.frame.z_axis = (bisector + across) / std::sqrt(2.0);
  out.frame.x_axis = (bisector - across) / std::sqrt(2.0);
  out.frame.y_axis = out.frame.z_axis.cross(out.frame.x_axis);
  out.angles = axes_to_euler(out.frame);
  return out;
}

EulerAngles axes_to_euler(const Frame& frame) {
  if (frame.orthonormality_defect() > kOrthonormalTol)
    throw DomainError("axes_to_euler: frame is not orthonormal and right-handed");
  const Mat3 r = frame.matrix();
  EulerAngles e;
  const double st = std::hypot(r(2, 0), r(2, 1));
  e.theta = std::atan2(st, r(2, 2));
  if (st >= kGimbalTol) {
    e.psi = std::atan2(r(0, 2), r(1, 2));
    e.phi = std::atan2(r(2, 0), -r(2, 1));
  } else if (r(2, 2) > 0) {
    e.theta = 0.0;
    e.psi = std::atan2(r(0, 1), r(0, 0));
  } else {
    e.theta = kPi;
    e.psi = std::atan2(-r(0, 1), r(0, 0));
  }
  e.phi = wrap_angle(e.phi);
  e.psi = wrap_angle(e.psi);
  return e;
}

double axis_infidelity(const Vec3& truth, const Vec3& estimate) {
  return std::clamp(0.5 * (1.0 - truth.dot(estimate)), 0.0, 1.0);
}

double frame_infidelity(const Frame& truth, const Frame& estimate) {
  return axis_infidelity(truth.x_axis, estimate.x_axis) + axis_infidelity(truth.y_axis, estimate.y_axis) +
         axis_infidelity(truth.z_axis, estimate.z_axis);
}

}  // namespace covmeas
