#include "covmeas/group_rep.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>

namespace covmeas {

namespace {

constexpr double kClusterTol = 1e-8;
constexpr double kCharacterTol = 1e-8;

std::vector<std::vector<std::size_t>> conjugacy_classes(const std::vector<std::vector<std::size_t>>& t,
                                                        const std::vector<std::size_t>& inv) {
  const std::size_t n = t.size();
  std::vector<bool> seen(n, false);
  std::vector<std::vector<std::size_t>> classes;
  for (std::size_t g = 0; g < n; ++g) {
    if (seen[g]) continue;
    std::vector<std::size_t> cls;
    for (std::size_t h = 0; h < n; ++h) {
      const std::size_t c = t[t[h][g]][inv[h]];
      if (!seen[c]) {
        seen[c] = true;
        cls.push_back(c);
      }
    }
    std::sort(cls.begin(), cls.end());
    classes.push_back(std::move(cls));
  }
  std::stable_sort(classes.begin(), classes.end(),
                   [](const auto& a, const auto& b) { return a.size() < b.size(); });
  return classes;
}

// Fixed generic Hermitian matrix; the Mersenne Twister output sequence is
// pinned by the standard so blocks come out identically everywhere.
CMatrix generic_hermitian(Eigen::Index dim) {
  std::mt19937_64 gen(0x5eedc0de2024ULL);
  auto uniform = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5; };
  CMatrix h(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    h(r, r) = uniform();
    for (Eigen::Index c = r + 1; c < dim; ++c) {
      h(r, c) = Complex(uniform(), uniform());
      h(c, r) = std::conj(h(r, c));
    }
  }
  return h;
}

void fix_column_phases(CMatrix& v) {
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    Eigen::Index best = 0;
    v.col(c).cwiseAbs().maxCoeff(&best);
    const Complex p = v(best, c);
    v.col(c) *= std::conj(p) / std::abs(p);
  }
}

bool same_characters(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  for (std::size_t g = 0; g < a.size(); ++g)
    if (std::abs(a[g] - b[g]) > kCharacterTol) return false;
  return true;
}

std::vector<std::string> split_words(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

}  // namespace

std::size_t FiniteGroup::class_of(std::size_t g) const {
  for (std::size_t c = 0; c < classes.size(); ++c)
    if (std::find(classes[c].begin(), classes[c].end(), g) != classes[c].end()) return c;
  throw DomainError("element index out of range");
}

std::size_t FiniteGroup::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return i;
  throw DomainError("unknown group element '" + std::string(name) + "'");
}

void check_group_axioms(const FiniteGroup& g) {
  const std::size_t n = g.order();
  if (n == 0) throw DomainError("group has no elements");
  for (const auto& row : g.mult_table) {
    if (row.size() != n) throw DomainError("multiplication table is not square");
    for (std::size_t x : row)
      if (x >= n) throw DomainError("multiplication table entry out of range");
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (g.mult_table[0][a] != a || g.mult_table[a][0] != a) throw DomainError("element 0 is not the identity");
    std::vector<bool> hit(n, false);
    for (std::size_t b = 0; b < n; ++b) hit[g.mult_table[a][b]] = true;
    if (std::find(hit.begin(), hit.end(), false) != hit.end()) throw DomainError("table row is not a permutation");
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (g.mult_table[g.mult_table[a][b]][c] != g.mult_table[a][g.mult_table[b][c]])
          throw DomainError("multiplication table is not associative");
  if (g.inverse.size() == n) {
    for (std::size_t a = 0; a < n; ++a)
      if (g.mult_table[a][g.inverse[a]] != 0) throw DomainError("inverse table is wrong");
  }
}

FiniteGroup make_group(std::vector<std::string> names, std::vector<std::vector<std::size_t>> table,
                       std::vector<AxisAngle> rotations) {
  FiniteGroup g;
  g.names = std::move(names);
  g.mult_table = std::move(table);
  if (g.names.size() != g.mult_table.size()) throw DomainError("element names do not match the table size");
  check_group_axioms(g);
  const std::size_t n = g.order();
  g.inverse.assign(n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (g.mult_table[a][b] == 0) g.inverse[a] = b;
  g.classes = conjugacy_classes(g.mult_table, g.inverse);
  if (!rotations.empty()) {
    if (rotations.size() != n) throw DomainError("need one rotation per element");
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        const Mat3 lhs = rotation_matrix(rotations[a]) * rotation_matrix(rotations[b]);
        if ((lhs - rotation_matrix(rotations[g.mult_table[a][b]])).cwiseAbs().maxCoeff() > 1e-9)
          throw DomainError("rotations do not follow the multiplication table");
      }
    g.element_rotations = std::move(rotations);
  }
  return g;
}

FiniteGroup group_from_rotations(std::vector<std::string> names, std::vector<AxisAngle> rotations) {
  const std::size_t n = rotations.size();
  std::vector<Mat3> mats;
  for (const auto& r : rotations) mats.push_back(rotation_matrix(r));
  std::vector<std::vector<std::size_t>> table(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const Mat3 prod = mats[a] * mats[b];
      std::size_t found = n;
      for (std::size_t c = 0; c < n; ++c)
        if ((prod - mats[c]).cwiseAbs().maxCoeff() < 1e-9) found = c;
      if (found == n) throw DomainError("rotations are not closed under composition");
      table[a][b] = found;
    }
  return make_group(std::move(names), std::move(table), std::move(rotations));
}

GroupWithIrreps dihedral_d3() {
  const double third = kTwoPi / 3;
  std::vector<AxisAngle> rot = {
      {Vec3::UnitZ(), 0.0},
      {Vec3::UnitX(), kPi},
      {Vec3(std::cos(third), std::sin(third), 0), kPi},
      {Vec3(std::cos(2 * third), std::sin(2 * third), 0), kPi},
      {Vec3::UnitZ(), third},
      {Vec3::UnitZ(), 2 * third},
  };
  FiniteGroup g = group_from_rotations({"E", "A", "B", "C", "D", "F"}, std::move(rot));

  IrrepData ir;
  ir.names = {"trivial", "alternating", "two-dim"};
  ir.dims = {1, 1, 2};
  ir.matrices.assign(3, {});
  for (std::size_t e = 0; e < g.order(); ++e) {
    const Mat3 r = rotation_matrix(g.element_rotations[e]);
    ir.matrices[0].push_back(CMatrix::Identity(1, 1));
    // pi rotations about in-plane axes flip z
    ir.matrices[1].push_back(CMatrix::Constant(1, 1, r(2, 2)));
    ir.matrices[2].push_back(r.topLeftCorner<2, 2>().cast<Complex>());
  }
  ir.characters = CMatrix(3, static_cast<Eigen::Index>(g.classes.size()));
  for (Eigen::Index i = 0; i < 3; ++i)
    for (std::size_t c = 0; c < g.classes.size(); ++c)
      ir.characters(i, static_cast<Eigen::Index>(c)) = ir.matrices[i][g.classes[c].front()].trace();
  return {std::move(g), std::move(ir)};
}

std::vector<double> rotation_characters(const FiniteGroup& g) {
  if (g.element_rotations.size() != g.order()) throw DomainError("group has no rotation embedding");
  std::vector<double> chi;
  for (const auto& r : g.element_rotations) chi.push_back(1.0 + 2.0 * std::cos(r.angle));
  return chi;
}

std::vector<int> irrep_content(const std::vector<Complex>& characters, const FiniteGroup& g,
                               const IrrepData& irreps) {
  if (characters.size() != g.order()) throw DimensionError("need one character per element");
  for (const auto& cls : g.classes)
    for (std::size_t e : cls)
      if (std::abs(characters[e] - characters[cls.front()]) > 1e-9)
        throw DomainError("character is not a class function");
  std::vector<int> mult;
  for (std::size_t i = 0; i < irreps.dims.size(); ++i) {
    Complex acc = 0.0;
    for (std::size_t e = 0; e < g.order(); ++e) acc += std::conj(irreps.character(i, g, e)) * characters[e];
    acc /= static_cast<double>(g.order());
    const double rounded = std::round(acc.real());
    if (std::abs(acc - rounded) > 1e-6 || rounded < 0)
      throw DomainError("non-integer irrep multiplicity " + std::to_string(acc.real()));
    mult.push_back(static_cast<int>(rounded));
  }
  return mult;
}

std::vector<int> irrep_content(const std::vector<double>& characters, const FiniteGroup& g,
                               const IrrepData& irreps) {
  return irrep_content(std::vector<Complex>(characters.begin(), characters.end()), g, irreps);
}

std::vector<CMatrix> lifted_representation(const FiniteGroup& g, int num_spins) {
  if (g.element_rotations.size() != g.order()) throw DomainError("group has no rotation embedding");
  std::vector<CMatrix> rep;
  const SpinJ half = SpinJ::from_twice(1);
  for (const auto& r : g.element_rotations) rep.push_back(tensor_power(spin_rotation(half, r), num_spins));
  return rep;
}

std::vector<StateVector> SignalFamily::orbit() const {
  std::vector<StateVector> out;
  for (const auto& u : rep_matrices) out.push_back({fiducial.basis, u * fiducial.amplitudes});
  return out;
}

std::vector<std::vector<std::size_t>> SignalFamily::equivalence_classes() const {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    bool placed = false;
    for (auto& cls : out) {
      const auto& ref = blocks[cls.front()];
      if (ref.dim() == blocks[b].dim() && same_characters(ref.character, blocks[b].character)) {
        cls.push_back(b);
        placed = true;
        break;
      }
    }
    if (!placed) out.push_back({b});
  }
  return out;
}

bool SignalFamily::multiplicity_free() const { return equivalence_classes().size() == blocks.size(); }

CVector SignalFamily::block_coordinates(const StateVector& state, std::size_t b) const {
  if (state.dim() != blocks.at(b).basis.rows()) throw DimensionError("state does not live on the signal space");
  return blocks[b].basis.adjoint() * state.amplitudes;
}

SignalFamily build_signal_family(const FiniteGroup& g, int num_spins, const StateVector& fiducial) {
  if (fiducial.basis.kind != Basis::Kind::kQubits || fiducial.basis.param != num_spins)
    throw DimensionError("fiducial must be a state of num_spins qubits");
  SignalFamily fam;
  fam.group = g;
  fam.num_spins = num_spins;
  fam.fiducial = fiducial;
  fam.rep_matrices = lifted_representation(g, num_spins);

  // A group average of a generic Hermitian matrix lies in the commutant of
  // the action; its eigenspaces are irreducible invariant subspaces. The
  // average is insensitive to the projective phases of the lift.
  const Eigen::Index dim = fiducial.dim();
  const CMatrix h = generic_hermitian(dim);
  CMatrix avg = CMatrix::Zero(dim, dim);
  for (const auto& u : fam.rep_matrices) avg += u * h * u.adjoint();
  avg /= static_cast<double>(g.order());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (avg + avg.adjoint()));
  const auto& ev = es.eigenvalues();
  Eigen::Index start = 0;
  for (Eigen::Index k = 1; k <= dim; ++k) {
    if (k == dim || ev(k) - ev(k - 1) > kClusterTol) {
      InvariantBlock blk;
      blk.basis = es.eigenvectors().middleCols(start, k - start);
      fix_column_phases(blk.basis);
      for (const auto& u : fam.rep_matrices) blk.character.push_back((blk.basis.adjoint() * u * blk.basis).trace());
      fam.blocks.push_back(std::move(blk));
      start = k;
    }
  }
  return fam;
}

SignalFamily build_signal_family(const FiniteGroup& g, int num_spins, const StateVector& fiducial,
                                 const IrrepData& irreps) {
  SignalFamily fam = build_signal_family(g, num_spins, fiducial);
  for (auto& blk : fam.blocks) {
    for (std::size_t i = 0; i < irreps.dims.size(); ++i) {
      if (irreps.dims[i] != blk.dim()) continue;
      bool match = true;
      for (std::size_t e = 0; e < g.order() && match; ++e)
        match = std::abs(blk.character[e] - irreps.character(i, g, e)) < kCharacterTol;
      if (match) {
        blk.irrep = i;
        break;
      }
    }
  }
  std::stable_sort(fam.blocks.begin(), fam.blocks.end(), [](const InvariantBlock& a, const InvariantBlock& b) {
    const std::size_t ka = a.irrep.value_or(std::numeric_limits<std::size_t>::max());
    const std::size_t kb = b.irrep.value_or(std::numeric_limits<std::size_t>::max());
    if (ka != kb) return ka < kb;
    return a.dim() < b.dim();
  });
  return fam;
}

StateVector schur_fiducial(const SignalFamily& family, const std::vector<CVector>& block_directions) {
  if (block_directions.size() != family.blocks.size())
    throw DomainError("schur_fiducial: need exactly one direction per block");
  const double order = static_cast<double>(family.group.order());
  CVector b = CVector::Zero(family.fiducial.dim());
  for (std::size_t k = 0; k < family.blocks.size(); ++k) {
    const auto& blk = family.blocks[k];
    const CVector& u = block_directions[k];
    if (u.size() != blk.dim()) throw DimensionError("block direction has the wrong dimension");
    if (std::abs(u.norm() - 1.0) > 1e-9) throw DomainError("block direction must be a unit vector");
    b += std::sqrt(blk.dim() / order) * (blk.basis * u);
  }
  return {family.fiducial.basis, b};
}

std::vector<Vec3> d3_signal_directions() {
  const FiniteGroup g = dihedral_d3().group;
  const Vec3 base = Direction{kPi / 4, 0.0}.unit();
  std::vector<Vec3> out;
  for (const auto& r : g.element_rotations) out.push_back(rotation_matrix(r) * base);
  return out;
}

std::size_t nearest_direction(const Vec3& v, const std::vector<Vec3>& candidates) {
  std::size_t best = 0;
  double best_dot = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const double d = v.dot(candidates[k]);
    if (d > best_dot) {
      best_dot = d;
      best = k;
    }
  }
  return best;
}

FiniteGroup parse_group(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<std::string> names;
  std::vector<std::pair<std::string, AxisAngle>> rots;
  std::vector<std::vector<std::string>> rows;
  std::optional<std::size_t> declared_order;
  bool in_table = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto words = split_words(line);
    if (words.empty()) continue;
    auto fail = [&](const std::string& msg) {
      throw DomainError("group file line " + std::to_string(line_no) + ": " + msg);
    };
    if (in_table) {
      rows.push_back(words);
      continue;
    }
    if (words[0] == "order") {
      if (words.size() != 2) fail("expected 'order <n>'");
      declared_order = std::stoul(words[1]);
    } else if (words[0] == "elements") {
      names.assign(words.begin() + 1, words.end());
    } else if (words[0] == "rotation") {
      if (words.size() != 6) fail("expected 'rotation <name> <ax> <ay> <az> <degrees>'");
      const Vec3 axis(std::stod(words[2]), std::stod(words[3]), std::stod(words[4]));
      if (axis.norm() == 0.0) fail("zero rotation axis");
      rots.push_back({words[1], {axis.normalized(), wrap_angle_positive(std::stod(words[5]) * kPi / 180.0)}});
    } else if (words[0] == "table") {
      in_table = true;
    } else {
      fail("unknown keyword '" + words[0] + "'");
    }
  }
  if (names.empty()) throw DomainError("group file has no 'elements' line");
  if (declared_order && *declared_order != names.size()) throw DomainError("declared order does not match elements");

  FiniteGroup proto;
  proto.names = names;
  std::vector<AxisAngle> rotations;
  if (!rots.empty()) {
    rotations.assign(names.size(), AxisAngle{});
    std::vector<bool> given(names.size(), false);
    for (const auto& [name, r] : rots) {
      const std::size_t idx = proto.index_of(name);
      rotations[idx] = r;
      given[idx] = true;
    }
    for (std::size_t i = 1; i < names.size(); ++i)
      if (!given[i]) throw DomainError("element '" + names[i] + "' has no rotation");
  }
  if (rows.empty()) {
    if (rotations.empty()) throw DomainError("group file needs a table or rotations");
    return group_from_rotations(names, rotations);
  }
  if (rows.size() != names.size()) throw DomainError("table must have one row per element");
  std::vector<std::vector<std::size_t>> table;
  for (const auto& row : rows) {
    if (row.size() != names.size()) throw DomainError("table row has the wrong length");
    std::vector<std::size_t> r;
    for (const auto& w : row) r.push_back(proto.index_of(w));
    table.push_back(std::move(r));
  }
  return make_group(names, std::move(table), std::move(rotations));
}

FiniteGroup load_group(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open group file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_group(ss.str());
}

std::string format_group(const FiniteGroup& g) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "order " << g.order() << "\n";
  os << "elements";
  for (const auto& n : g.names) os << ' ' << n;
  os << "\n";
  for (std::size_t i = 0; i < g.element_rotations.size(); ++i) {
    const auto& r = g.element_rotations[i];
    os << "rotation " << g.names[i] << ' ' << r.axis.x() << ' ' << r.axis.y() << ' ' << r.axis.z() << ' '
       << r.angle * 180.0 / kPi << "\n";
  }
  os << "table\n";
  for (const auto& row : g.mult_table) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? " " : "") << g.names[row[c]];
    os << "\n";
  }
  return os.str();
}

}  // namespace covmeas
