#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "covmeas/rotation.hpp"
#include "covmeas/spin_rep.hpp"
#include "covmeas/types.hpp"

namespace covmeas {

/// A finite group given by its multiplication table. Element 0 is the
/// identity and mult_table[a][b] is the index of a*b (b acts first).
struct FiniteGroup {
  std::vector<std::string> names;
  std::vector<std::vector<std::size_t>> mult_table;
  std::vector<std::size_t> inverse;
  // conjugacy classes ordered by (size, smallest member)
  std::vector<std::vector<std::size_t>> classes;
  // empty when the group carries no SO(3) embedding
  std::vector<AxisAngle> element_rotations;

  std::size_t order() const { return mult_table.size(); }
  std::size_t class_of(std::size_t g) const;
  std::size_t index_of(std::string_view name) const;
};

/// Builds a group from a table, deriving inverses and classes. Throws
/// DomainError if the table violates the group axioms.
FiniteGroup make_group(std::vector<std::string> names, std::vector<std::vector<std::size_t>> table,
                       std::vector<AxisAngle> rotations = {});

/// Builds the table by closing the given rotations under composition order.
FiniteGroup group_from_rotations(std::vector<std::string> names, std::vector<AxisAngle> rotations);

void check_group_axioms(const FiniteGroup& g);

struct IrrepData {
  std::vector<std::string> names;
  std::vector<int> dims;
  // characters(irrep, class)
  CMatrix characters;
  // matrices[irrep][element]
  std::vector<std::vector<CMatrix>> matrices;

  Complex character(std::size_t irrep, const FiniteGroup& g, std::size_t element) const {
    return characters(static_cast<Eigen::Index>(irrep), static_cast<Eigen::Index>(g.class_of(element)));
  }
};

struct GroupWithIrreps {
  FiniteGroup group;
  IrrepData irreps;
};

/// D3 in Wigner's labelling: E; A, B, C = pi about the in-plane axes at
/// phi = 0, 120, 240 degrees; D, F = 120 and 240 degrees about z.
/// Irreps: trivial, alternating, two-dimensional.
GroupWithIrreps dihedral_d3();

/// 1 + 2 cos(angle) per element (the vector representation's character).
std::vector<double> rotation_characters(const FiniteGroup& g);

/// Multiplicities of each irrep in a representation with the given
/// per-element characters.
std::vector<int> irrep_content(const std::vector<Complex>& characters, const FiniteGroup& g,
                               const IrrepData& irreps);
std::vector<int> irrep_content(const std::vector<double>& characters, const FiniteGroup& g,
                               const IrrepData& irreps);

struct InvariantBlock {
  CMatrix basis;  // orthonormal columns spanning the block
  std::vector<Complex> character;  // tr over the block of U(g)
  std::optional<std::size_t> irrep;  // matching linear irrep, if any

  int dim() const { return static_cast<int>(basis.cols()); }
  CMatrix projector() const { return basis * basis.adjoint(); }
};

/// Orbit of a fiducial state under a group acting on num_spins qubits, with
/// the irreducible invariant blocks of the action.
struct SignalFamily {
  FiniteGroup group;
  int num_spins = 0;
  std::vector<CMatrix> rep_matrices;
  StateVector fiducial;
  std::vector<InvariantBlock> blocks;

  std::vector<StateVector> orbit() const;
  /// Groups block indices by equivalence (identical characters).
  std::vector<std::vector<std::size_t>> equivalence_classes() const;
  bool multiplicity_free() const;
  /// Coordinates of a state inside block b.
  CVector block_coordinates(const StateVector& state, std::size_t b) const;
};

/// Rotation of each element lifted to SU(2) and tensored over the spins.
std::vector<CMatrix> lifted_representation(const FiniteGroup& g, int num_spins);

SignalFamily build_signal_family(const FiniteGroup& g, int num_spins, const StateVector& fiducial);
/// As above, tagging blocks with matching irreps where the lift is linear.
SignalFamily build_signal_family(const FiniteGroup& g, int num_spins, const StateVector& fiducial,
                                 const IrrepData& irreps);

/// Fiducial with norm sqrt(d_b / |G|) in each block, pointing along the
/// given unit coordinate vectors (one per block).
StateVector schur_fiducial(const SignalFamily& family, const std::vector<CVector>& block_directions);

/// Orbit of the direction (theta = 45 deg, phi = 0) under the rotations of
/// D3, indexed by group element.
std::vector<Vec3> d3_signal_directions();

/// Index of the candidate closest to v; ties go to the lowest index.
std::size_t nearest_direction(const Vec3& v, const std::vector<Vec3>& candidates);

/// Plain-text group definitions (see README for the format).
FiniteGroup parse_group(std::string_view text);
FiniteGroup load_group(const std::string& path);
std::string format_group(const FiniteGroup& g);

}  // namespace covmeas
