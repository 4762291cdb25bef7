#include <doctest.h>

#include <cmath>
#include <random>

#include "covmeas/group_rep.hpp"
#include "covmeas/povm.hpp"
#include "support.hpp"

using namespace covmeas;
using testing_support::phase_distance;

TEST_CASE("dihedral group structure") {
  const GroupWithIrreps d3 = dihedral_d3();
  const FiniteGroup& g = d3.group;
  CHECK(g.order() == 6);
  CHECK_NOTHROW(check_group_axioms(g));
  REQUIRE(g.classes.size() == 3);
  CHECK(g.classes[0] == std::vector<std::size_t>{g.index_of("E")});
  CHECK(g.classes[1] == std::vector<std::size_t>{g.index_of("D"), g.index_of("F")});
  CHECK(g.classes[2] == std::vector<std::size_t>{g.index_of("A"), g.index_of("B"), g.index_of("C")});
  for (std::size_t a = 0; a < 6; ++a) {
    CHECK(g.mult_table[a][g.inverse[a]] == 0);
    for (std::size_t b = 0; b < 6; ++b) {
      const Mat3 prod = rotation_matrix(g.element_rotations[a]) * rotation_matrix(g.element_rotations[b]);
      CHECK((prod - rotation_matrix(g.element_rotations[g.mult_table[a][b]])).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  CHECK_THROWS(g.index_of("Q"));
}

TEST_CASE("character table and irreps") {
  const GroupWithIrreps d3 = dihedral_d3();
  const IrrepData& ir = d3.irreps;
  const double expect[3][3] = {{1, 1, 1}, {1, 1, -1}, {2, -1, 0}};
  for (int i = 0; i < 3; ++i)
    for (int c = 0; c < 3; ++c) CHECK(std::abs(ir.characters(i, c) - Complex(expect[i][c], 0)) < 1e-12);
  int dim_sq = 0;
  for (int d : ir.dims) dim_sq += d * d;
  CHECK(dim_sq == 6);
  const FiniteGroup& g = d3.group;
  // orthogonality over elements
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t k = 0; k < 3; ++k) {
      Complex s = 0;
      for (std::size_t e = 0; e < 6; ++e) s += std::conj(ir.character(i, g, e)) * ir.character(k, g, e);
      CHECK(std::abs(s - Complex(i == k ? 6.0 : 0.0, 0)) < 1e-10);
    }
  // matrices form representations with the tabulated characters
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t a = 0; a < 6; ++a) {
      CHECK(std::abs(ir.matrices[i][a].trace() - ir.character(i, g, a)) < 1e-12);
      for (std::size_t b = 0; b < 6; ++b)
        CHECK((ir.matrices[i][a] * ir.matrices[i][b] - ir.matrices[i][g.mult_table[a][b]]).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("vector characters and irrep content") {
  const GroupWithIrreps d3 = dihedral_d3();
  const FiniteGroup& g = d3.group;
  const auto chi = rotation_characters(g);
  CHECK(chi[g.index_of("E")] == doctest::Approx(3.0));
  for (const char* n : {"A", "B", "C"}) CHECK(chi[g.index_of(n)] == doctest::Approx(-1.0));
  for (const char* n : {"D", "F"}) CHECK(std::abs(chi[g.index_of(n)]) < 1e-12);

  CHECK(irrep_content(chi, g, d3.irreps) == std::vector<int>{0, 1, 1});
  std::vector<double> two_spin(6);
  for (std::size_t e = 0; e < 6; ++e) two_spin[e] = 1.0 + chi[e];
  CHECK(irrep_content(two_spin, g, d3.irreps) == std::vector<int>{1, 1, 1});
  CHECK(irrep_content(std::vector<double>(6, 1.0), g, d3.irreps) == std::vector<int>{1, 0, 0});

  std::vector<double> broken = chi;
  broken[g.index_of("D")] = 0.5;
  CHECK_THROWS_AS(irrep_content(broken, g, d3.irreps), DomainError);
  std::vector<double> fractional(6, 0.5);
  CHECK_THROWS_AS(irrep_content(fractional, g, d3.irreps), DomainError);

  FiniteGroup bare = g;
  bare.element_rotations.clear();
  CHECK_THROWS(rotation_characters(bare));
}

TEST_CASE("one-spin signal family") {
  const GroupWithIrreps d3 = dihedral_d3();
  const StateVector fid = coherent_state(SpinJ::from_twice(1), {M_PI / 4, 0.0});
  const SignalFamily fam = build_signal_family(d3.group, 1, StateVector::qubits(1, fid.amplitudes), d3.irreps);
  const auto orbit = fam.orbit();
  const auto dirs = d3_signal_directions();
  REQUIRE(orbit.size() == 6);
  for (std::size_t g = 0; g < 6; ++g) {
    const StateVector expect = coherent_state(SpinJ::from_twice(1), Direction::from_vector(dirs[g]));
    CHECK(phase_distance(orbit[g].amplitudes, expect.amplitudes) < 1e-12);
  }
  // polar angles 45 or 135 degrees, azimuths 0 or +-120 degrees
  for (const Vec3& d : dirs) {
    const Direction p = Direction::from_vector(d);
    CHECK((std::abs(p.theta - M_PI / 4) < 1e-12 || std::abs(p.theta - 3 * M_PI / 4) < 1e-12));
    const double az = std::fmod(p.phi + 1e-9, 2 * M_PI / 3);
    CHECK(az < 1e-8);
  }
  REQUIRE(fam.blocks.size() == 1);
  CHECK(fam.blocks[0].dim() == 2);

  const StateVector b = schur_fiducial(fam, {fam.block_coordinates(fam.fiducial, 0).normalized()});
  CHECK(phase_distance(b.amplitudes, fid.amplitudes / std::sqrt(3.0)) < 1e-12);
  CHECK(std::abs(b.norm() - 1 / std::sqrt(3.0)) < 1e-14);
  const Povm p = covariant_povm_finite(fam.rep_matrices, b);
  CHECK(validate_povm(p, 1e-10).passed);
  for (const auto& e : p.elements) CHECK(std::abs(e.op.trace().real() - 1.0 / 3.0) < 1e-14);
}

TEST_CASE("two-spin signal family") {
  const GroupWithIrreps d3 = dihedral_d3();
  const SignalFamily fam = build_signal_family(d3.group, 2, StateVector::ket("01"), d3.irreps);
  REQUIRE(fam.blocks.size() == 3);
  CHECK(fam.multiplicity_free());
  CHECK(fam.blocks[0].dim() == 1);
  CHECK(fam.blocks[1].dim() == 1);
  CHECK(fam.blocks[2].dim() == 2);
  CHECK(fam.blocks[0].irrep == std::optional<std::size_t>(0));
  CHECK(fam.blocks[1].irrep == std::optional<std::size_t>(1));
  CHECK(fam.blocks[2].irrep == std::optional<std::size_t>(2));

  // trivial block is the singlet, the alternating one the m = 0 triplet,
  // and the two-dim block the span of |00> and |11>
  const CVector singlet = (StateVector::ket("01").amplitudes - StateVector::ket("10").amplitudes) / std::sqrt(2.0);
  const CVector t0 = (StateVector::ket("01").amplitudes + StateVector::ket("10").amplitudes) / std::sqrt(2.0);
  CHECK((fam.blocks[0].projector() - singlet * singlet.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((fam.blocks[1].projector() - t0 * t0.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
  CMatrix p2 = CMatrix::Zero(4, 4);
  p2(0, 0) = p2(3, 3) = 1.0;
  CHECK((fam.blocks[2].projector() - p2).cwiseAbs().maxCoeff() < 1e-10);

  // blocks are invariant and mutually orthogonal
  for (const auto& u : fam.rep_matrices)
    for (const auto& blk : fam.blocks)
      CHECK((u * blk.projector() - blk.projector() * u).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((fam.blocks[0].basis.adjoint() * fam.blocks[2].basis).cwiseAbs().maxCoeff() < 1e-10);

  std::vector<CVector> dirs;
  for (const auto& blk : fam.blocks) dirs.push_back(CVector::Unit(blk.dim(), 0));
  const StateVector b = schur_fiducial(fam, dirs);
  const double norms[] = {std::sqrt(1.0 / 6), std::sqrt(1.0 / 6), std::sqrt(1.0 / 3)};
  for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(fam.block_coordinates(b, k).norm() - norms[k]) < 1e-12);
  CHECK(validate_povm(covariant_povm_finite(fam.rep_matrices, b), 1e-10).passed);

  // rescaling one block breaks completeness
  const CVector bumped = b.amplitudes + 0.1 * fam.blocks[0].basis.col(0) * fam.block_coordinates(b, 0)(0);
  CHECK_FALSE(validate_povm(covariant_povm_finite(fam.rep_matrices, {b.basis, bumped}), 1e-10).passed);

  CHECK_THROWS_AS(schur_fiducial(fam, {dirs[0], dirs[1]}), DomainError);
}

TEST_CASE("orbit of a fiducial inside one block stays there") {
  const GroupWithIrreps d3 = dihedral_d3();
  const SignalFamily probe = build_signal_family(d3.group, 2, StateVector::ket("00"), d3.irreps);
  for (const auto& s : probe.orbit()) CHECK((probe.blocks[2].projector() * s.amplitudes - s.amplitudes).norm() < 1e-10);
}

TEST_CASE("lifted representation is projective with unit phases") {
  const GroupWithIrreps d3 = dihedral_d3();
  const FiniteGroup& g = d3.group;
  for (int n = 1; n <= 3; ++n) {
    const auto u = lifted_representation(g, n);
    for (std::size_t a = 0; a < 6; ++a)
      for (std::size_t b = 0; b < 6; ++b) {
        const CMatrix lhs = u[a] * u[b];
        const CMatrix rhs = u[g.mult_table[a][b]];
        const Complex phase = (rhs.adjoint() * lhs).trace() / static_cast<double>(lhs.rows());
        CHECK(std::abs(std::abs(phase) - 1.0) < 1e-12);
        CHECK((lhs - phase * rhs).cwiseAbs().maxCoeff() < 1e-12);
        if (n % 2 == 0) CHECK(std::abs(phase - Complex(1, 0)) < 1e-12);
      }
  }
}

TEST_CASE("POVM probabilities ignore representation phases") {
  const GroupWithIrreps d3 = dihedral_d3();
  const SignalFamily fam = build_signal_family(d3.group, 2, StateVector::ket("01"), d3.irreps);
  std::vector<CVector> dirs;
  for (const auto& blk : fam.blocks) dirs.push_back(CVector::Unit(blk.dim(), 0));
  const StateVector b = schur_fiducial(fam, dirs);
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> ang(0.0, 2 * M_PI);
  auto phased = fam.rep_matrices;
  for (auto& u : phased) u *= std::exp(Complex(0, ang(gen)));
  const Povm p1 = covariant_povm_finite(fam.rep_matrices, b);
  const Povm p2 = covariant_povm_finite(phased, b);
  const StateVector s = StateVector::ket("01");
  for (std::size_t h = 0; h < 6; ++h) {
    const StateVector sig1{s.basis, fam.rep_matrices[h] * s.amplitudes};
    const StateVector sig2{s.basis, phased[h] * s.amplitudes};
    for (std::size_t k = 0; k < 6; ++k)
      CHECK(std::abs(outcome_probability(p1.elements[k], sig1) - outcome_probability(p2.elements[k], sig2)) < 1e-14);
  }
}

TEST_CASE("block counts match character multiplicities") {
  const GroupWithIrreps d3 = dihedral_d3();
  for (int n = 1; n <= 3; ++n) {
    const SignalFamily fam = build_signal_family(d3.group, n, StateVector::ket(std::string(n, '0')), d3.irreps);
    // sum of squared multiplicities = (1/|G|) sum |chi|^2, phase independent
    std::vector<Complex> chi(6);
    for (std::size_t e = 0; e < 6; ++e) chi[e] = fam.rep_matrices[e].trace();
    double norm2 = 0.0;
    for (const auto& c : chi) norm2 += std::norm(c) / 6.0;
    int dim = 0;
    for (const auto& blk : fam.blocks) dim += blk.dim();
    CHECK(dim == (1 << n));
    std::size_t sq = 0;
    for (const auto& cls : fam.equivalence_classes()) sq += cls.size() * cls.size();
    CHECK(static_cast<double>(sq) == doctest::Approx(norm2));
    if (n == 2) {
      std::vector<Complex> chars(chi.begin(), chi.end());
      CHECK(irrep_content(chars, d3.group, d3.irreps) == std::vector<int>{1, 1, 1});
    }
  }
  // three spins: three equivalent doublets, so not multiplicity free
  const SignalFamily three = build_signal_family(d3.group, 3, StateVector::ket("000"), d3.irreps);
  CHECK_FALSE(three.multiplicity_free());
}

TEST_CASE("nearest direction") {
  const auto dirs = d3_signal_directions();
  for (std::size_t g = 0; g < 6; ++g) CHECK(nearest_direction(dirs[g], dirs) == g);
  const Vec3 v = Vec3(0.3, -0.2, 0.9).normalized();
  CHECK(nearest_direction(v, {-v, v, v}) == 1);
}

TEST_CASE("group files") {
  const GroupWithIrreps d3 = dihedral_d3();
  const std::string text = format_group(d3.group);
  const FiniteGroup back = parse_group(text);
  CHECK(back.names == d3.group.names);
  CHECK(back.mult_table == d3.group.mult_table);
  CHECK(back.classes == d3.group.classes);
  for (std::size_t e = 0; e < 6; ++e)
    CHECK((rotation_matrix(back.element_rotations[e]) - rotation_matrix(d3.group.element_rotations[e]))
              .cwiseAbs()
              .maxCoeff() < 1e-14);

  const FiniteGroup z3 = parse_group(
      "# cyclic group from rotations only\n"
      "elements e r s\n"
      "rotation r 0 0 1 120\n"
      "rotation s 0 0 1 240\n");
  CHECK(z3.order() == 3);
  CHECK(z3.mult_table[1][1] == 2);
  CHECK(z3.classes.size() == 3);

  CHECK_THROWS_AS(parse_group("elements e a\ntable\ne a\na a\n"), DomainError);
  CHECK_THROWS_AS(parse_group("order 3\nelements e a\ntable\ne a\na e\n"), DomainError);
  CHECK_THROWS_AS(parse_group("bogus\n"), DomainError);
  CHECK_THROWS_AS(load_group("/nonexistent/group.txt"), IoError);
}
