#include <doctest.h>

#include <cmath>
#include <random>

#include "covmeas/group_rep.hpp"
#include "covmeas/povm.hpp"
#include "support.hpp"

using namespace covmeas;
using testing_support::random_direction;

namespace {

CMatrix pauli_dot(const Vec3& m) {
  CMatrix s(2, 2);
  s << m.z(), Complex(m.x(), -m.y()), Complex(m.x(), m.y()), -m.z();
  return s;
}

// (1 + m.sigma)/6 over the six signal directions, built directly.
Povm six_direction_povm() {
  Povm p;
  const auto dirs = d3_signal_directions();
  for (std::size_t k = 0; k < dirs.size(); ++k)
    p.elements.push_back({(CMatrix::Identity(2, 2) + pauli_dot(dirs[k])) / 6.0, k});
  return p;
}

StateVector random_state(int dim, std::mt19937_64& gen) {
  std::normal_distribution<double> n(0.0, 1.0);
  CVector v(dim);
  for (int k = 0; k < dim; ++k) v(k) = Complex(n(gen), n(gen));
  return StateVector::spin(SpinJ::from_twice(dim - 1), v.normalized());
}

}  // namespace

TEST_CASE("six-direction POVM") {
  const Povm p = six_direction_povm();
  const PovmReport r = validate_povm(p, 1e-12);
  CHECK(r.passed);
  CHECK(r.completeness_deviation < 1e-12);
  CHECK(r.min_eigenvalue > -1e-12);

  const auto dirs = d3_signal_directions();
  const SpinJ half = SpinJ::from_twice(1);
  for (std::size_t g = 0; g < 6; ++g) {
    const StateVector s = coherent_state(half, Direction::from_vector(dirs[g]));
    for (std::size_t h = 0; h < 6; ++h) {
      const double expect = (1.0 + dirs[g].dot(dirs[h])) / 6.0;
      CHECK(std::abs(outcome_probability(p.elements[h], s) - expect) < 1e-14);
      const CMatrix rho = (CMatrix::Identity(2, 2) + pauli_dot(dirs[g])) / 2.0;
      CHECK(std::abs(outcome_probability(p.elements[h], rho) - expect) < 1e-14);
    }
    CHECK(std::abs(outcome_probability(p.elements[g], s) - 1.0 / 3.0) < 1e-14);
  }
}

TEST_CASE("validation failures") {
  Povm p = six_direction_povm();
  p.elements[2].op *= 1.01;
  const PovmReport r = validate_povm(p, 1e-10);
  CHECK_FALSE(r.passed);
  CHECK(r.completeness_deviation > 1e-3);

  Povm neg = six_direction_povm();
  neg.elements[0].op = (CMatrix::Identity(2, 2) - 2.0 * pauli_dot(Vec3::UnitZ())) / 6.0;
  CHECK(validate_povm(neg, 1e-10).min_eigenvalue < -0.1);
  CHECK_FALSE(validate_povm(neg, 1e-10).passed);

  Povm mixed = six_direction_povm();
  mixed.elements.push_back({CMatrix::Identity(3, 3), 9});
  CHECK_THROWS_AS(validate_povm(mixed, 1e-10), DimensionError);
}

TEST_CASE("outcome probability edge cases") {
  const PovmElement id{CMatrix::Identity(3, 3), 0};
  std::mt19937_64 gen(7);
  CHECK(outcome_probability(id, random_state(3, gen)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(outcome_probability(id, random_state(2, gen)), DimensionError);
  const PovmElement big{2.0 * CMatrix::Identity(2, 2), 0};
  CHECK_THROWS_AS(outcome_probability(big, random_state(2, gen)), DomainError);
  const PovmElement tiny_negative{-1e-14 * CMatrix::Identity(2, 2), 0};
  CHECK(outcome_probability(tiny_negative, random_state(2, gen)) == 0.0);
}

TEST_CASE("direction POVM from quadrature") {
  SUBCASE("spin one half, modest grid") {
    const Povm p = covariant_direction_povm(SpinJ::from_twice(1), sphere_quadrature(2, 3));
    CHECK(validate_povm(p, 1e-10).passed);
  }
  SUBCASE("spin ten, degree 40 grid") {
    const Povm p = covariant_direction_povm(SpinJ::integer(10), sphere_quadrature(21, 41));
    CHECK(validate_povm(p, 1e-8).passed);
  }
  SUBCASE("probabilities follow the overlap law") {
    const SpinJ j = SpinJ::from_twice(5);
    const SphereQuadrature q = sphere_quadrature(5, 9);
    const Povm p = covariant_direction_povm(j, q);
    const Direction signal{0.8, 2.0};
    const StateVector s = coherent_state(j, signal);
    double total = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
      const double c = std::cos(angle_between(signal.unit(), q.points[k]) / 2);
      const double expect = std::pow(c, 4 * j.value()) * j.dim() / (4 * M_PI) * q.weights[k];
      const double got = outcome_probability(p.elements[k], s);
      CHECK(std::abs(got - expect) < 1e-14);
      total += got;
    }
    CHECK(std::abs(total - 1.0) < 1e-12);
  }
  SUBCASE("insufficient degree") {
    CHECK_THROWS_AS(covariant_direction_povm(SpinJ::integer(4), sphere_quadrature(3, 5)), DomainError);
    const Povm broken = direction_povm_on_nodes(SpinJ::integer(4), sphere_quadrature(3, 5));
    CHECK_FALSE(validate_povm(broken, 1e-8).passed);
  }
}

TEST_CASE("probabilities over any POVM sum to one") {
  std::mt19937_64 gen(8);
  const Povm p = covariant_direction_povm(SpinJ::integer(3), sphere_quadrature(6, 10));
  for (int k = 0; k < 20; ++k) {
    const auto probs = outcome_distribution(p, random_state(7, gen));
    double s = 0.0;
    for (double v : probs) s += v;
    CHECK(std::abs(s - 1.0) < 1e-9);
  }
}

TEST_CASE("coarse graining") {
  const SpinJ j = SpinJ::integer(2);
  const SphereQuadrature q = sphere_quadrature(10, 18);
  const Povm raw = covariant_direction_povm(j, q);
  std::mt19937_64 gen(9);

  SUBCASE("identity decode") {
    const Povm same = coarse_grain_povm(raw, [](std::size_t k) { return k; });
    REQUIRE(same.elements.size() == raw.elements.size());
    for (std::size_t k = 0; k < raw.elements.size(); ++k)
      CHECK((same.elements[k].op - raw.elements[k].op).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("nearest of six directions") {
    const auto dirs = d3_signal_directions();
    auto decode = [&](std::size_t k) { return nearest_direction(q.points[k], dirs); };
    const Povm six = coarse_grain_povm(raw, decode);
    REQUIRE(six.elements.size() == 6);
    CHECK(validate_povm(six, 1e-10).passed);
    for (int t = 0; t < 10; ++t) {
      const StateVector s = random_state(5, gen);
      const auto fine = outcome_distribution(raw, s);
      std::vector<double> summed(6, 0.0);
      for (std::size_t k = 0; k < fine.size(); ++k) summed[decode(k)] += fine[k];
      for (std::size_t g = 0; g < 6; ++g) CHECK(std::abs(outcome_probability(six.elements[g], s) - summed[g]) < 1e-12);
    }
    // the merged elements are no longer rank one
    Eigen::SelfAdjointEigenSolver<CMatrix> es(six.elements[0].op);
    CHECK(es.eigenvalues()(3) > 1e-6);
  }
  SUBCASE("single symbol") {
    const Povm one = coarse_grain_povm(raw, [](std::size_t) { return std::size_t{0}; });
    REQUIRE(one.elements.size() == 1);
    CHECK((one.elements[0].op - CMatrix::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-12);
  }
}
