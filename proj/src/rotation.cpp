#include "covmeas/rotation.hpp"

#include <cmath>

namespace covmeas {

namespace {

Mat3 rot_z(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 m;
  m << c, -s, 0, s, c, 0, 0, 0, 1;
  return m;
}

Mat3 rot_y(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 m;
  m << c, 0, s, 0, 1, 0, -s, 0, c;
  return m;
}

}  // namespace

double wrap_angle(double a) {
  double r = std::fmod(a + kPi, kTwoPi);
  if (r < 0) r += kTwoPi;
  r -= kPi;
  // fmod can land exactly on +pi after the shift for inputs like -pi - eps
  if (r >= kPi) r -= kTwoPi;
  return r;
}

double wrap_angle_positive(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

Mat3 rotation_matrix(const EulerAngles& e) {
  const double cf = std::cos(e.phi), sf = std::sin(e.phi);
  const double ct = std::cos(e.theta), st = std::sin(e.theta);
  const double cp = std::cos(e.psi), sp = std::sin(e.psi);
  Mat3 m;
  // columns: images of x, y, z
  m << cp * cf - ct * sf * sp, cp * sf + ct * cf * sp, sp * st,
      -sp * cf - ct * sf * cp, -sp * sf + ct * cf * cp, cp * st,
      st * sf, -st * cf, ct;
  return m;
}

Mat3 rotation_matrix(const AxisAngle& r) {
  return Eigen::AngleAxisd(r.angle, r.axis.normalized()).toRotationMatrix();
}

Mat3 rotation_matrix(const ZyzAngles& a) {
  return rot_z(a.alpha) * rot_y(a.beta) * rot_z(a.gamma);
}

AxisAngle axis_angle(const Mat3& r) {
  Eigen::AngleAxisd aa(r);
  return {aa.axis(), aa.angle()};
}

ZyzAngles zyz_angles(const EulerAngles& e) {
  // Rz(-psi) Rx(-theta) Rz(-phi) with Rx(b) = Rz(-pi/2) Ry(b) Rz(pi/2)
  return {-e.psi - kPi / 2, -e.theta, kPi / 2 - e.phi};
}

ZyzAngles zyz_angles(const Mat3& r) {
  const double sb = std::hypot(r(2, 0), r(2, 1));
  ZyzAngles a;
  if (sb > 1e-12) {
    a.alpha = std::atan2(r(1, 2), r(0, 2));
    a.gamma = std::atan2(r(2, 1), -r(2, 0));
    a.beta = std::atan2(sb, r(2, 2));
  } else if (r(2, 2) > 0) {
    a.alpha = std::atan2(r(1, 0), r(0, 0));
  } else {
    a.beta = kPi;
    a.alpha = std::atan2(-r(0, 1), r(1, 1));
  }
  return a;
}

}  // namespace covmeas
