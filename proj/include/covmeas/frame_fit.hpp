#pragma once

#include "covmeas/rotation.hpp"
#include "covmeas/spin_rep.hpp"

namespace covmeas {

/// Orthonormal right-handed triad: Alice's axes as seen in Bob's frame.
struct Frame {
  Vec3 z_axis = Vec3::UnitZ();
  Vec3 x_axis = Vec3::UnitX();
  Vec3 y_axis = Vec3::UnitY();

  /// Columns x, y, z.
  Mat3 matrix() const;
  static Frame from_matrix(const Mat3& m);
  /// Largest deviation from orthonormality and right-handedness.
  double orthonormality_defect() const;
};

/// Bob's raw estimates of Alice's z and x axes; not necessarily orthogonal.
struct AxisPairEstimate {
  Direction z_dir;
  Direction x_dir;
};

struct AxesFromEuler {
  AxisPairEstimate pair;
  Frame frame;
};

AxesFromEuler euler_to_axes(const EulerAngles& e);

struct NaiveEstimate {
  EulerAngles angles;
  // |cos theta_x / sin theta_z| > 1: the ratio was clipped to +-1
  bool out_of_range = false;
  double sin_phi = 0.0;  // the unclipped ratio
};

/// Inverts the z-axis equations for theta and psi and one component of the
/// x-axis equations for phi, ignoring the fourth equation. Throws
/// DegenerateInputError when the z estimate sits on a pole.
NaiveEstimate naive_euler_estimate(const AxisPairEstimate& est);

struct FittedFrame {
  Frame frame;
  EulerAngles angles;
};

/// y along z x x; the z and x estimates are then opened symmetrically about
/// their bisector until they are perpendicular. Throws DegenerateInputError
/// for (anti)parallel inputs.
FittedFrame best_fit_frame(const AxisPairEstimate& est);

/// Euler angles of an orthonormal frame. With sin(theta) < 1e-9 the angle
/// phi is set to 0 and the whole azimuthal rotation is carried by psi.
EulerAngles axes_to_euler(const Frame& frame);

/// Sum over the three axes of sin^2(chi_i / 2), in [0, 3].
double frame_infidelity(const Frame& truth, const Frame& estimate);

/// sin^2(chi/2) between two unit vectors.
double axis_infidelity(const Vec3& truth, const Vec3& estimate);

}  // namespace covmeas
