#include "covmeas/protocols.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace covmeas {

namespace {

template <class E, std::size_t N>
E parse_enum(std::string_view s, const std::array<std::pair<std::string_view, E>, N>& table, const char* what) {
  for (const auto& [name, value] : table)
    if (name == s) return value;
  throw DomainError(std::string("unknown ") + what + " '" + std::string(s) + "'");
}

constexpr std::array<std::pair<std::string_view, ProtocolKind>, 5> kKinds{{
    {"d3-single", ProtocolKind::kD3Single},
    {"d3-repeated", ProtocolKind::kD3Repeated},
    {"d3-covariant", ProtocolKind::kD3Covariant},
    {"d3-coherent", ProtocolKind::kD3Coherent},
    {"frame-two-axis", ProtocolKind::kFrameTwoAxis},
}};
constexpr std::array<std::pair<std::string_view, Encoding>, 2> kEncodings{{
    {"coherent", Encoding::kCoherent},
    {"optimal", Encoding::kOptimal},
}};
constexpr std::array<std::pair<std::string_view, Decoder>, 4> kDecoders{{
    {"covariant", Decoder::kCovariant},
    {"nearest-direction", Decoder::kNearestDirection},
    {"naive-euler", Decoder::kNaiveEuler},
    {"best-fit", Decoder::kBestFit},
}};
constexpr std::array<std::pair<std::string_view, TieBreak>, 2> kTieBreaks{{
    {"random", TieBreak::kRandom},
    {"lowest-index", TieBreak::kLowestIndex},
}};

template <class E, std::size_t N>
std::string_view name_of(E v, const std::array<std::pair<std::string_view, E>, N>& table) {
  for (const auto& [name, value] : table)
    if (value == v) return name;
  return "?";
}

ProtocolScore exact_score(double f) {
  ProtocolScore s;
  s.fidelity = f;
  s.infidelity = 1.0 - f;
  s.method = ScoreMethod::kExact;
  return s;
}

double mean_correct(const Eigen::MatrixXd& table) { return table.diagonal().mean(); }

Eigen::MatrixXd probability_table(const Povm& povm, const std::vector<StateVector>& signals) {
  Eigen::MatrixXd t(signals.size(), povm.elements.size());
  for (std::size_t g = 0; g < signals.size(); ++g)
    for (std::size_t h = 0; h < povm.elements.size(); ++h)
      t(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(h)) = outcome_probability(povm.elements[h], signals[g]);
  return t;
}

// Visits every way of distributing n outcomes over `bins` bins.
template <class F>
void for_each_composition(int n, int bins, std::vector<int>& counts, int bin, F&& f) {
  if (bin == bins - 1) {
    counts[bin] = n;
    f(counts);
    return;
  }
  for (int c = 0; c <= n; ++c) {
    counts[bin] = c;
    for_each_composition(n - c, bins, counts, bin + 1, f);
  }
}

}  // namespace

std::string_view to_string(ProtocolKind k) { return name_of(k, kKinds); }
std::string_view to_string(Encoding e) { return name_of(e, kEncodings); }
std::string_view to_string(Decoder d) { return name_of(d, kDecoders); }
std::string_view to_string(TieBreak t) { return name_of(t, kTieBreaks); }
ProtocolKind parse_protocol_kind(std::string_view s) { return parse_enum(s, kKinds, "protocol"); }
Encoding parse_encoding(std::string_view s) { return parse_enum(s, kEncodings, "encoding"); }
Decoder parse_decoder(std::string_view s) { return parse_enum(s, kDecoders, "decoder"); }

Decoder default_decoder(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::kD3Coherent: return Decoder::kNearestDirection;
    case ProtocolKind::kFrameTwoAxis: return Decoder::kBestFit;
    default: return Decoder::kCovariant;
  }
}
TieBreak parse_tie_break(std::string_view s) { return parse_enum(s, kTieBreaks, "tie-break"); }

std::string_view to_string(ScoreMethod m) {
  switch (m) {
    case ScoreMethod::kExact: return "exact";
    case ScoreMethod::kQuadrature: return "quadrature";
    case ScoreMethod::kMonteCarlo: return "monte-carlo";
  }
  return "?";
}

void ProtocolSpec::validate() const {
  auto fail = [this](const std::string& msg) {
    throw DomainError(std::string(to_string(kind)) + ": " + msg);
  };
  switch (kind) {
    case ProtocolKind::kD3Single:
      if (num_spins != 1) fail("uses exactly one spin");
      if (decoder != Decoder::kCovariant) fail("decoder must be covariant");
      break;
    case ProtocolKind::kD3Repeated:
      if (num_spins < 1) fail("needs at least one spin");
      if (decoder != Decoder::kCovariant) fail("decoder must be covariant");
      break;
    case ProtocolKind::kD3Covariant:
      if (num_spins != 2) fail("uses exactly two spins");
      if (decoder != Decoder::kCovariant) fail("decoder must be covariant");
      break;
    case ProtocolKind::kD3Coherent:
      if (num_spins < 1) fail("needs at least one spin");
      if (decoder != Decoder::kNearestDirection) fail("decoder must be nearest-direction");
      break;
    case ProtocolKind::kFrameTwoAxis:
      if (num_spins < 2 || num_spins % 2 != 0) fail("num_spins must be even (half per axis)");
      if (encoding == Encoding::kOptimal && (num_spins / 2) % 2 != 0)
        fail("optimal encoding needs an even number of spins per axis");
      if (decoder != Decoder::kNaiveEuler && decoder != Decoder::kBestFit)
        fail("decoder must be naive-euler or best-fit");
      break;
  }
}

D3SingleSpin d3_single_spin_setup() {
  const GroupWithIrreps d3 = dihedral_d3();
  const SpinJ half = SpinJ::from_twice(1);
  const StateVector base = coherent_state(half, {kPi / 4, 0.0});
  D3SingleSpin s;
  s.family = build_signal_family(d3.group, 1, StateVector::qubits(1, base.amplitudes), d3.irreps);
  s.signals = s.family.orbit();
  std::vector<CVector> dirs;
  for (std::size_t b = 0; b < s.family.blocks.size(); ++b)
    dirs.push_back(s.family.block_coordinates(s.family.fiducial, b).normalized());
  s.povm = covariant_povm_finite(s.family.rep_matrices, schur_fiducial(s.family, dirs));
  s.table = probability_table(s.povm, s.signals);
  return s;
}

ProtocolScore d3_single_spin_score() { return exact_score(mean_correct(d3_single_spin_setup().table)); }

ProtocolScore d3_repeated_single_score(int n, TieBreak tie_break) {
  if (n < 1) throw DomainError("need at least one measurement");
  if (n > 9) throw DomainError("exact enumeration limited to n <= 9; use the Monte Carlo harness");
  const Eigen::MatrixXd table = d3_single_spin_setup().table;
  const int bins = static_cast<int>(table.cols());
  std::vector<double> log_fact(n + 1, 0.0);
  for (int k = 1; k <= n; ++k) log_fact[k] = log_fact[k - 1] + std::log(static_cast<double>(k));

  double total = 0.0;
  std::vector<int> counts(bins, 0);
  for (Eigen::Index g = 0; g < table.rows(); ++g) {
    double correct = 0.0;
    for_each_composition(n, bins, counts, 0, [&](const std::vector<int>& c) {
      double logp = log_fact[n];
      for (int h = 0; h < bins; ++h) {
        if (c[h] == 0) continue;
        const double p = table(g, h);
        if (p <= 0.0) return;
        logp += c[h] * std::log(p) - log_fact[c[h]];
      }
      const int top = *std::max_element(c.begin(), c.end());
      if (c[g] != top) return;
      int tied = 0, first = -1;
      for (int h = 0; h < bins; ++h)
        if (c[h] == top) {
          ++tied;
          if (first < 0) first = h;
        }
      const double credit = tie_break == TieBreak::kRandom ? 1.0 / tied : (first == g ? 1.0 : 0.0);
      correct += credit * std::exp(logp);
    });
    total += correct;
  }
  return exact_score(total / static_cast<double>(table.rows()));
}

D3TwoSpinCovariant d3_two_spin_covariant_setup() {
  const GroupWithIrreps d3 = dihedral_d3();
  const SpinJ half = SpinJ::from_twice(1);
  const CVector one = coherent_state(half, {kPi / 4, 0.0}).amplitudes;
  // two spins along the fiducial direction: every block gets a component
  CVector two(4);
  for (int i = 0; i < 4; ++i) two(i) = one(i & 1) * one((i >> 1) & 1);
  D3TwoSpinCovariant s;
  s.family = build_signal_family(d3.group, 2, StateVector::qubits(2, two), d3.irreps);
  s.optimum = finite_group_optimum(s.family);
  s.povm = covariant_povm_finite(s.family.rep_matrices, s.optimum.fiducial);
  s.report = validate_povm(s.povm, 1e-10);
  for (const auto& u : s.family.rep_matrices) s.signals.push_back({s.optimum.signal.basis, u * s.optimum.signal.amplitudes});
  s.table = probability_table(s.povm, s.signals);
  return s;
}

ProtocolScore d3_covariant_two_spin_score() { return exact_score(mean_correct(d3_two_spin_covariant_setup().table)); }

SphereQuadrature default_d3_quadrature() { return sphere_quadrature(300, 600); }

ProtocolScore d3_coherent_score(int num_spins, const SphereQuadrature& quad) {
  if (num_spins < 1) throw DomainError("need at least one spin");
  const D3CoherentError err = d3_coherent_error(SpinJ::from_twice(num_spins), quad);
  ProtocolScore s;
  s.infidelity = err.error;
  s.fidelity = 1.0 - err.error;
  s.method = ScoreMethod::kQuadrature;
  return s;
}

ProtocolScore d3_coherent_score(int num_spins) { return d3_coherent_score(num_spins, default_d3_quadrature()); }

std::optional<int> d3_coherent_crossover(int max_spins, const SphereQuadrature& quad) {
  const double covariant = d3_covariant_two_spin_score().fidelity;
  std::optional<int> start;
  for (int n = 1; n <= max_spins; ++n) {
    if (d3_coherent_score(n, quad).fidelity > covariant) {
      if (!start) start = n;
    } else {
      start.reset();
    }
  }
  return start;
}

ProtocolScore FrameProtocol::axis_score() const {
  ProtocolScore s;
  s.infidelity = expected_axis_infidelity;
  s.fidelity = 1.0 - expected_axis_infidelity;
  s.per_axis = {expected_axis_infidelity, expected_axis_infidelity};
  s.method = encoding == Encoding::kCoherent ? ScoreMethod::kExact : ScoreMethod::kQuadrature;
  return s;
}

FrameProtocol frame_two_axis_score(int num_spins, Encoding encoding, Decoder fitter) {
  ProtocolSpec spec{ProtocolKind::kFrameTwoAxis, num_spins, encoding, fitter, TieBreak::kRandom};
  spec.validate();
  const int per_axis = num_spins / 2;
  DirectionCode code = encoding == Encoding::kCoherent ? coherent_direction_code(SpinJ::from_twice(per_axis))
                                                       : optimal_direction_encoding(SpinJ::from_twice(per_axis));
  ChiDensity density(code);
  const double expected = code.infidelity();
  return FrameProtocol{num_spins, encoding, fitter, std::move(code), std::move(density), expected};
}

}  // namespace covmeas
