#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "covmeas/covariant_opt.hpp"
#include "covmeas/group_rep.hpp"
#include "covmeas/povm.hpp"

namespace covmeas {

enum class ProtocolKind { kD3Single, kD3Repeated, kD3Covariant, kD3Coherent, kFrameTwoAxis };
enum class Encoding { kCoherent, kOptimal };
enum class Decoder { kCovariant, kNearestDirection, kNaiveEuler, kBestFit };
enum class TieBreak { kRandom, kLowestIndex };

std::string_view to_string(ProtocolKind k);
std::string_view to_string(Encoding e);
std::string_view to_string(Decoder d);
std::string_view to_string(TieBreak t);
ProtocolKind parse_protocol_kind(std::string_view s);
Encoding parse_encoding(std::string_view s);
Decoder parse_decoder(std::string_view s);
/// covariant for the d3 kinds that use it, nearest-direction for d3-coherent,
/// best-fit for frame-two-axis.
Decoder default_decoder(ProtocolKind kind);
TieBreak parse_tie_break(std::string_view s);

struct ProtocolSpec {
  ProtocolKind kind = ProtocolKind::kD3Single;
  int num_spins = 1;
  Encoding encoding = Encoding::kCoherent;
  Decoder decoder = Decoder::kCovariant;
  TieBreak tie_break = TieBreak::kRandom;

  /// Throws DomainError when num_spins, encoding or decoder do not fit the kind.
  void validate() const;
  bool operator==(const ProtocolSpec&) const = default;
};

enum class ScoreMethod { kExact, kQuadrature, kMonteCarlo };
std::string_view to_string(ScoreMethod m);

struct ProtocolScore {
  double fidelity = 0.0;
  double infidelity = 0.0;
  std::vector<double> per_axis;
  ScoreMethod method = ScoreMethod::kExact;
  std::optional<double> std_error;  // present iff monte-carlo
};

/// The one-spin D3 covariant measurement: signals |2_g>, POVM elements
/// U(g)|B><B|U(g)^dagger with |B> = |2_E>/sqrt(3).
struct D3SingleSpin {
  SignalFamily family;
  Povm povm;
  std::vector<StateVector> signals;
  Eigen::MatrixXd table;  // table(g, h) = P(h | g)
};
D3SingleSpin d3_single_spin_setup();

/// Exactly 1/3 under zero-one scoring.
ProtocolScore d3_single_spin_score();

/// n independent single-spin measurements decoded by plurality vote; sums
/// the multinomial distribution of outcome counts, which is the 6^n outcome
/// enumeration grouped by counts. Refuses n > 9.
ProtocolScore d3_repeated_single_score(int n, TieBreak tie_break);

/// Optimal covariant measurement on two spins, realized as a POVM on the
/// four-dimensional two-spin space.
struct D3TwoSpinCovariant {
  SignalFamily family;
  CovariantOptimum optimum;
  Povm povm;
  PovmReport report;
  std::vector<StateVector> signals;
  Eigen::MatrixXd table;  // table(g, h) = P(h | g)
};
D3TwoSpinCovariant d3_two_spin_covariant_setup();

/// 2/3 under zero-one scoring.
ProtocolScore d3_covariant_two_spin_score();

/// Grid used when no quadrature is supplied; resolves j well beyond 100.
SphereQuadrature default_d3_quadrature();

/// N spins along the signal direction, coherent-state measurement, nearest
/// signal decode.
ProtocolScore d3_coherent_score(int num_spins, const SphereQuadrature& quad);
ProtocolScore d3_coherent_score(int num_spins);

/// Smallest N such that the coherent scheme beats the two-spin covariant
/// optimum for every N' in [N, max_spins]; nullopt if it never does.
std::optional<int> d3_coherent_crossover(int max_spins, const SphereQuadrature& quad);

/// Half of the spins point along Alice's z axis, half along her x axis; each
/// half is measured with the covariant direction measurement and the two raw
/// axes are combined by the chosen fitter.
struct FrameProtocol {
  int num_spins = 0;
  Encoding encoding = Encoding::kOptimal;
  Decoder fitter = Decoder::kBestFit;
  DirectionCode axis_code;
  ChiDensity density;
  double expected_axis_infidelity = 0.0;

  /// Deterministic per-axis score of the raw (unfitted) axis estimates.
  ProtocolScore axis_score() const;
};

FrameProtocol frame_two_axis_score(int num_spins, Encoding encoding, Decoder fitter);

}  // namespace covmeas
