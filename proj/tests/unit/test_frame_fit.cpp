#include <doctest.h>

#include <cmath>
#include <random>

#include "covmeas/frame_fit.hpp"
#include "support.hpp"

using namespace covmeas;

namespace {

EulerAngles random_euler(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(-M_PI, M_PI);
  return {u(gen), std::acos(std::uniform_real_distribution<double>(-1, 1)(gen)), u(gen)};
}

double pair_cost(const Frame& f, const Vec3& z, const Vec3& x) {
  return axis_infidelity(z, f.z_axis) + axis_infidelity(x, f.x_axis);
}

// Orthonormal frame closest to the two observations: the rotation R
// maximizing z.Rz0 + x.Rx0, from the SVD of the attitude profile matrix.
Frame procrustes(const Vec3& z, const Vec3& x) {
  const Mat3 b = z * Vec3::UnitZ().transpose() + x * Vec3::UnitX().transpose();
  Eigen::JacobiSVD<Mat3> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 d = Mat3::Identity();
  d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant();
  return Frame::from_matrix(svd.matrixU() * d * svd.matrixV().transpose());
}

}  // namespace

TEST_CASE("forward Euler map") {
  const AxesFromEuler zero = euler_to_axes({0, 0, 0});
  CHECK((zero.frame.z_axis - Vec3::UnitZ()).norm() < 1e-15);
  CHECK((zero.frame.x_axis - Vec3::UnitX()).norm() < 1e-15);
  CHECK((zero.frame.y_axis - Vec3::UnitY()).norm() < 1e-15);

  const AxesFromEuler tilt = euler_to_axes({0.0, 0.3, M_PI / 2});
  CHECK((tilt.frame.z_axis - Vec3(std::sin(0.3), 0, std::cos(0.3))).norm() < 1e-15);
  CHECK((tilt.pair.z_dir.unit() - tilt.frame.z_axis).norm() < 1e-15);

  std::mt19937_64 gen(41);
  for (int k = 0; k < 1000; ++k) {
    const EulerAngles e = random_euler(gen);
    const AxesFromEuler a = euler_to_axes(e);
    const Mat3 r = rotation_matrix(e);
    CHECK((a.frame.matrix() - r).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(a.frame.orthonormality_defect() < 1e-14);
    CHECK((a.frame.z_axis.cross(a.frame.x_axis) - a.frame.y_axis).norm() < 1e-14);
    const EulerAngles back = axes_to_euler(a.frame);
    CHECK((euler_to_axes(back).frame.matrix() - r).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(back.theta - e.theta) < 1e-9);
    CHECK(std::abs(wrap_angle(back.phi - e.phi)) < 1e-9);
    CHECK(std::abs(wrap_angle(back.psi - e.psi)) < 1e-9);
  }
}

TEST_CASE("Euler extraction") {
  CHECK(axes_to_euler(Frame{}).phi == 0.0);
  CHECK(axes_to_euler(Frame{}).theta == 0.0);
  CHECK(axes_to_euler(Frame{}).psi == 0.0);

  // theta = 0: the azimuthal rotation is carried by psi alone
  for (double a : {0.4, -2.0, 3.0}) {
    const Frame f = Frame::from_matrix(Eigen::AngleAxisd(a, Vec3::UnitZ()).toRotationMatrix());
    const EulerAngles e = axes_to_euler(f);
    CHECK(e.phi == 0.0);
    CHECK(e.theta == 0.0);
    CHECK((euler_to_axes(e).frame.matrix() - f.matrix()).cwiseAbs().maxCoeff() < 1e-12);
  }
  // theta = pi
  const Frame flip = euler_to_axes({0.0, M_PI, 0.7}).frame;
  CHECK((euler_to_axes(axes_to_euler(flip)).frame.matrix() - flip.matrix()).cwiseAbs().maxCoeff() < 1e-12);

  Frame skew;
  skew.x_axis = Vec3(1, 0.01, 0).normalized();
  CHECK_THROWS_AS(axes_to_euler(skew), DomainError);
}

TEST_CASE("naive inversion") {
  std::mt19937_64 gen(42);
  SUBCASE("exact data") {
    for (int k = 0; k < 1000; ++k) {
      const EulerAngles e = random_euler(gen);
      if (std::sin(e.theta) < 1e-3) continue;
      const NaiveEstimate n = naive_euler_estimate(euler_to_axes(e).pair);
      CHECK_FALSE(n.out_of_range);
      CHECK(std::abs(n.angles.theta - e.theta) < 1e-10);
      CHECK(std::abs(wrap_angle(n.angles.phi - e.phi)) < 1e-10);
      CHECK(std::abs(wrap_angle(n.angles.psi - e.psi)) < 1e-10);
    }
  }
  SUBCASE("ratio above one") {
    const AxisPairEstimate est{{M_PI / 2 - 0.1, 0.4}, {0.0, 0.0}};
    const NaiveEstimate n = naive_euler_estimate(est);
    CHECK(n.out_of_range);
    CHECK(std::abs(std::abs(n.sin_phi) - 1 / std::cos(0.1)) < 1e-12);
    CHECK(std::abs(std::abs(std::sin(n.angles.phi)) - 1.0) < 1e-12);
    // the clipped angles still describe a proper frame
    CHECK(euler_to_axes(n.angles).frame.orthonormality_defect() < 1e-12);
  }
  SUBCASE("planar case") {
    const AxisPairEstimate est{{M_PI / 2, 0.0}, {M_PI / 2, 3 * M_PI / 2}};
    const NaiveEstimate n = naive_euler_estimate(est);
    CHECK_FALSE(n.out_of_range);
    CHECK(std::abs(n.angles.phi) < 1e-12);
    CHECK(std::abs(n.angles.psi - M_PI / 2) < 1e-12);
  }
  SUBCASE("flag fires only when the ratio exceeds one") {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 2000; ++k) {
      const Direction z = testing_support::random_direction(gen);
      const Direction x = testing_support::random_direction(gen);
      if (std::sin(z.theta) < 1e-6) continue;
      const bool over = std::abs(std::cos(x.theta)) > std::sin(z.theta);
      CHECK(naive_euler_estimate({z, x}).out_of_range == over);
    }
  }
  CHECK_THROWS_AS(naive_euler_estimate({{0.0, 0.0}, {M_PI / 2, 0.0}}), DegenerateInputError);
}

TEST_CASE("best fit frame") {
  std::mt19937_64 gen(43);
  SUBCASE("orthogonal inputs are kept") {
    for (int k = 0; k < 100; ++k) {
      const AxesFromEuler a = euler_to_axes(random_euler(gen));
      const FittedFrame f = best_fit_frame(a.pair);
      CHECK((f.frame.matrix() - a.frame.matrix()).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SUBCASE("in-plane defect matches brute-force minimization") {
    for (double delta : {0.01, 0.05, 0.1, 0.2, -0.15}) {
      const Vec3 z = Vec3::UnitZ(), x(std::cos(delta), 0, std::sin(delta));
      const FittedFrame f = best_fit_frame({Direction::from_vector(z), Direction::from_vector(x)});
      // frames in the xz-plane with y = +y, parameterized by a tilt angle
      double best_a = 0.0, best_c = 1e9;
      for (int k = -20000; k <= 20000; ++k) {
        const double a = 0.5 * k / 20000.0;
        Frame g;
        g.z_axis = Vec3(std::sin(a), 0, std::cos(a));
        g.x_axis = Vec3(std::cos(a), 0, -std::sin(a));
        const double c = pair_cost(g, z, x);
        if (c < best_c) {
          best_c = c;
          best_a = a;
        }
      }
      Frame g;
      g.z_axis = Vec3(std::sin(best_a), 0, std::cos(best_a));
      g.x_axis = Vec3(std::cos(best_a), 0, -std::sin(best_a));
      CHECK((f.frame.z_axis - g.z_axis).norm() < 1e-6);
      CHECK((f.frame.x_axis - g.x_axis).norm() < 1e-6);
      CHECK(std::abs(angle_between(f.frame.z_axis, z) - std::abs(delta) / 2) < 1e-12);
      CHECK(std::abs(angle_between(f.frame.x_axis, x) - std::abs(delta) / 2) < 1e-12);
    }
  }
  SUBCASE("random inputs give proper frames no worse than the SVD fit or random frames") {
    std::normal_distribution<double> n(0.0, 1.0);
    for (int k = 0; k < 100000; ++k) {
      const Vec3 z = Vec3(n(gen), n(gen), n(gen)).normalized();
      const Vec3 x = Vec3(n(gen), n(gen), n(gen)).normalized();
      if (z.cross(x).norm() < 1e-6) continue;
      const FittedFrame f = best_fit_frame({Direction::from_vector(z), Direction::from_vector(x)});
      CHECK(f.frame.orthonormality_defect() < 1e-10);
      if (k < 2000) {
        const double c = pair_cost(f.frame, z, x);
        CHECK(c <= pair_cost(procrustes(z, x), z, x) + 1e-9);
        if (k < 20) {
          for (int t = 0; t < 1000; ++t) {
            const Eigen::Quaterniond q(n(gen), n(gen), n(gen), n(gen));
            CHECK(c <= pair_cost(Frame::from_matrix(q.normalized().toRotationMatrix()), z, x) + 1e-6);
          }
        }
      }
    }
  }
  CHECK_THROWS_AS(best_fit_frame({{0.5, 0.2}, {0.5, 0.2}}), DegenerateInputError);
  CHECK_THROWS_AS(best_fit_frame({{0.5, 0.2}, {M_PI - 0.5, 0.2 + M_PI}}), DegenerateInputError);
}

TEST_CASE("frame infidelity") {
  const Frame id;
  CHECK(frame_infidelity(id, id) == 0.0);
  const Frame half_turn = Frame::from_matrix(Eigen::AngleAxisd(M_PI, Vec3::UnitZ()).toRotationMatrix());
  CHECK(std::abs(frame_infidelity(id, half_turn) - 2.0) < 1e-15);

  std::mt19937_64 gen(44);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const Mat3 a = Eigen::Quaterniond(n(gen), n(gen), n(gen), n(gen)).normalized().toRotationMatrix();
    const Mat3 b = Eigen::Quaterniond(n(gen), n(gen), n(gen), n(gen)).normalized().toRotationMatrix();
    const Mat3 g = Eigen::Quaterniond(n(gen), n(gen), n(gen), n(gen)).normalized().toRotationMatrix();
    const double v = frame_infidelity(Frame::from_matrix(a), Frame::from_matrix(b));
    CHECK(std::abs(frame_infidelity(Frame::from_matrix(g * a), Frame::from_matrix(g * b)) - v) < 1e-12);
    CHECK(v >= 0.0);
    CHECK(v <= 3.0);
    // rotation by eps about unit axis u: each axis r moves by eps |u x r|, so the
    // sum of sin^2(chi/2) is eps^2/4 * sum |u x r|^2 = eps^2/2
    const Vec3 u = Vec3(n(gen), n(gen), n(gen)).normalized();
    for (double eps : {0.01, 0.05}) {
      const Mat3 small = Eigen::AngleAxisd(eps, u).toRotationMatrix();
      const double got = frame_infidelity(Frame::from_matrix(a), Frame::from_matrix(small * a));
      CHECK(std::abs(got / (eps * eps / 2) - 1.0) < 0.05);
    }
  }
}
