#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "covmeas/frame_fit.hpp"
#include "covmeas/protocols.hpp"
#include "covmeas/rng.hpp"

namespace covmeas {

/// theta from a uniform cos(theta), phi uniform on [0, 2pi).
Direction sample_haar_direction(TrialRng& rng);
/// Unit quaternion from four standard normals.
Mat3 sample_haar_rotation_matrix(TrialRng& rng);
EulerAngles sample_haar_rotation(TrialRng& rng);

/// Inverse-CDF sampler for chi on a cumulative grid in cos(chi), linear
/// interpolation inside each cell.
class ChiSampler {
 public:
  explicit ChiSampler(const ChiDensity& density, int grid_points = 2048);

  double sample(TrialRng& rng) const;
  /// P(cos chi <= x) as tabulated.
  double cdf_in_cos(double x) const;

 private:
  std::vector<double> x_;
  std::vector<double> cdf_;
};

double sample_chi(const ChiSampler& sampler, TrialRng& rng);

/// Direction at angle chi from true_dir, azimuth measured from e1 toward
/// e2 = n x e1 where e1 is n crossed into its smallest-component axis.
Vec3 perturb_direction(const Vec3& true_dir, double chi, double azimuth);
Direction perturb_direction(const Direction& true_dir, double chi, double azimuth);

struct RunConfig {
  ProtocolSpec protocol;
  std::int64_t trials = 100000;
  std::uint64_t seed = 1;
  int n_theta = 300;  // quadrature for the d3-coherent reference value
  int n_phi = 600;
  int threads = 0;  // 0: hardware concurrency
  std::string output;

  /// Throws DomainError on any inconsistency.
  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

struct Estimate {
  std::string name;
  double mean = 0.0;
  double std_error = 0.0;
  bool operator==(const Estimate&) const = default;
};

struct RunResult {
  RunConfig config;
  std::vector<Estimate> estimates;
  std::int64_t trials = 0;
  double wall_seconds = 0.0;
  // deterministic value the "fidelity" estimate should reproduce, if any
  std::optional<double> reference_fidelity;
  // deterministic raw per-axis infidelity (frame protocols)
  std::optional<double> reference_per_axis_infidelity;

  const Estimate& estimate(const std::string& name) const;
  const Estimate* find(const std::string& name) const;
};

/// Trials run in fixed blocks of this size; block statistics are merged in
/// a fixed tree, so results do not depend on the thread count.
inline constexpr std::int64_t kTrialBlock = 4096;

RunResult run_experiment(const RunConfig& config);

/// Pairwise (cascade) summation.
double pairwise_sum(const double* data, std::size_t n);

}  // namespace covmeas
