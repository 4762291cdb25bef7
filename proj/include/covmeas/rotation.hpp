#pragma once

#include "covmeas/types.hpp"

namespace covmeas {

/// Euler angles in the z-x-z convention whose rotation matrix has columns
///   z' = (sin psi sin theta, cos psi sin theta, cos theta)
///   x' = (cos psi cos phi - sin psi cos theta sin phi,
///         -sin psi cos phi - cos psi cos theta sin phi,
///         sin theta sin phi)
/// i.e. the images of Alice's z and x axes expressed in Bob's frame.
struct EulerAngles {
  double phi = 0.0;
  double theta = 0.0;
  double psi = 0.0;
};

/// Rotation by `angle` (radians, kept in [0, 2pi)) about a unit `axis`.
/// The angle range pins the SU(2) lift of the rotation.
struct AxisAngle {
  Vec3 axis = Vec3::UnitZ();
  double angle = 0.0;
};

/// Reduces an angle to [-pi, pi).
double wrap_angle(double a);
/// Reduces an angle to [0, 2pi).
double wrap_angle_positive(double a);

Mat3 rotation_matrix(const EulerAngles& e);
Mat3 rotation_matrix(const AxisAngle& r);

/// Axis-angle form of a proper rotation matrix, angle in [0, pi].
AxisAngle axis_angle(const Mat3& r);

/// Angles (alpha, beta, gamma) with R = Rz(alpha) Ry(beta) Rz(gamma).
struct ZyzAngles {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

ZyzAngles zyz_angles(const EulerAngles& e);
ZyzAngles zyz_angles(const Mat3& r);
Mat3 rotation_matrix(const ZyzAngles& a);

}  // namespace covmeas
