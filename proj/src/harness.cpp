#include "covmeas/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <memory>
#include <thread>

#include "covmeas/group_rep.hpp"

namespace covmeas {

Direction sample_haar_direction(TrialRng& rng) {
  const double c = 2.0 * rng.uniform() - 1.0;
  const double phi = kTwoPi * rng.uniform();
  return {std::acos(std::clamp(c, -1.0, 1.0)), phi};
}

Mat3 sample_haar_rotation_matrix(TrialRng& rng) {
  double w = 0, x = 0, y = 0, z = 0, n2 = 0;
  do {
    w = rng.normal();
    x = rng.normal();
    y = rng.normal();
    z = rng.normal();
    n2 = w * w + x * x + y * y + z * z;
  } while (n2 < 1e-300);
  return Eigen::Quaterniond(w, x, y, z).normalized().toRotationMatrix();
}

EulerAngles sample_haar_rotation(TrialRng& rng) {
  return axes_to_euler(Frame::from_matrix(sample_haar_rotation_matrix(rng)));
}

ChiSampler::ChiSampler(const ChiDensity& density, int grid_points) {
  if (grid_points < 2) throw DomainError("chi grid needs at least two points");
  std::vector<double> gl_x, gl_w;
  gauss_legendre(8, gl_x, gl_w);
  x_.resize(grid_points);
  cdf_.assign(grid_points, 0.0);
  for (int k = 0; k < grid_points; ++k) x_[k] = -1.0 + 2.0 * k / (grid_points - 1);
  x_.back() = 1.0;
  for (int k = 1; k < grid_points; ++k) {
    const double a = x_[k - 1], b = x_[k];
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double cell = 0.0;
    for (std::size_t i = 0; i < gl_x.size(); ++i) cell += gl_w[i] * std::max(0.0, density.in_cos(mid + half * gl_x[i]));
    cdf_[k] = cdf_[k - 1] + half * cell;
  }
  const double total = cdf_.back();
  if (!(total > 0.0)) throw DomainError("chi density has no mass");
  for (double& c : cdf_) c /= total;
  cdf_.back() = 1.0;
}

double ChiSampler::sample(TrialRng& rng) const {
  const double u = rng.uniform();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  std::size_t k = static_cast<std::size_t>(it - cdf_.begin());
  k = std::clamp<std::size_t>(k, 1, cdf_.size() - 1);
  const double c0 = cdf_[k - 1], c1 = cdf_[k];
  const double t = c1 > c0 ? (u - c0) / (c1 - c0) : 0.5;
  const double x = x_[k - 1] + t * (x_[k] - x_[k - 1]);
  return std::acos(std::clamp(x, -1.0, 1.0));
}

double ChiSampler::cdf_in_cos(double x) const {
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return 1.0;
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const std::size_t k = static_cast<std::size_t>(it - x_.begin());
  const double t = (x - x_[k - 1]) / (x_[k] - x_[k - 1]);
  return cdf_[k - 1] + t * (cdf_[k] - cdf_[k - 1]);
}

double sample_chi(const ChiSampler& sampler, TrialRng& rng) { return sampler.sample(rng); }

Vec3 perturb_direction(const Vec3& true_dir, double chi, double azimuth) {
  const Vec3 n = true_dir.normalized();
  Eigen::Index axis = 0;
  n.cwiseAbs().minCoeff(&axis);
  const Vec3 e1 = n.cross(Vec3::Unit(axis)).normalized();
  const Vec3 e2 = n.cross(e1);
  return std::cos(chi) * n + std::sin(chi) * (std::cos(azimuth) * e1 + std::sin(azimuth) * e2);
}

Direction perturb_direction(const Direction& true_dir, double chi, double azimuth) {
  return Direction::from_vector(perturb_direction(true_dir.unit(), chi, azimuth));
}

void RunConfig::validate() const {
  if (trials < 1) throw DomainError("trials must be >= 1");
  if (n_theta < 1 || n_phi < 1) throw DomainError("quadrature sizes must be positive");
  if (threads < 0) throw DomainError("threads must be >= 0");
  protocol.validate();
  if (protocol.kind == ProtocolKind::kD3Coherent) {
    const int kernel = 2 * protocol.num_spins + 2;
    const int degree = std::min(2 * n_theta - 1, n_phi - 1);
    if (degree < kernel)
      throw DomainError("quadrature degree " + std::to_string(degree) + " below kernel degree " +
                        std::to_string(kernel));
  }
}

const Estimate* RunResult::find(const std::string& name) const {
  for (const auto& e : estimates)
    if (e.name == name) return &e;
  return nullptr;
}

const Estimate& RunResult::estimate(const std::string& name) const {
  if (const Estimate* e = find(name)) return *e;
  throw DomainError("no estimate named '" + name + "'");
}

double pairwise_sum(const double* data, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += data[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

namespace {

struct Moments {
  double n = 0.0;
  double mean = 0.0;
  double m2 = 0.0;
};

Moments merge(const Moments& a, const Moments& b) {
  if (a.n == 0.0) return b;
  if (b.n == 0.0) return a;
  Moments r;
  r.n = a.n + b.n;
  const double delta = b.mean - a.mean;
  r.mean = a.mean + delta * (b.n / r.n);
  r.m2 = a.m2 + b.m2 + delta * delta * (a.n * b.n / r.n);
  return r;
}

Moments merge_range(const std::vector<Moments>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return v[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return merge(merge_range(v, lo, mid), merge_range(v, mid, hi));
}

Moments block_moments(const std::vector<double>& values) {
  Moments m;
  m.n = static_cast<double>(values.size());
  m.mean = pairwise_sum(values.data(), values.size()) / m.n;
  std::vector<double> dev(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) dev[i] = (values[i] - m.mean) * (values[i] - m.mean);
  m.m2 = pairwise_sum(dev.data(), dev.size());
  return m;
}

// One trial writes one value per metric.
using TrialFn = std::function<void(TrialRng&, double*)>;

struct Experiment {
  std::vector<std::string> metrics;
  TrialFn trial;
  std::optional<double> reference_fidelity;
  std::optional<double> reference_per_axis;
};

std::size_t sample_row(const Eigen::MatrixXd& table, Eigen::Index row, TrialRng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  const Eigen::Index last = table.cols() - 1;
  for (Eigen::Index h = 0; h < last; ++h) {
    acc += table(row, h);
    if (u < acc) return static_cast<std::size_t>(h);
  }
  return static_cast<std::size_t>(last);
}

std::size_t plurality(const std::vector<int>& counts, TieBreak rule, TrialRng& rng) {
  const int top = *std::max_element(counts.begin(), counts.end());
  std::vector<std::size_t> tied;
  for (std::size_t h = 0; h < counts.size(); ++h)
    if (counts[h] == top) tied.push_back(h);
  if (tied.size() == 1 || rule == TieBreak::kLowestIndex) return tied.front();
  return tied[rng.index(tied.size())];
}

Experiment table_experiment(Eigen::MatrixXd table, int draws, TieBreak rule, std::optional<double> reference) {
  Experiment ex;
  ex.metrics = {"fidelity"};
  ex.reference_fidelity = reference;
  ex.trial = [table = std::move(table), draws, rule](TrialRng& rng, double* out) {
    const auto g = static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(table.rows())));
    std::size_t guess = 0;
    if (draws == 1) {
      guess = sample_row(table, g, rng);
    } else {
      std::vector<int> counts(static_cast<std::size_t>(table.cols()), 0);
      for (int k = 0; k < draws; ++k) ++counts[sample_row(table, g, rng)];
      guess = plurality(counts, rule, rng);
    }
    out[0] = guess == static_cast<std::size_t>(g) ? 1.0 : 0.0;
  };
  return ex;
}

Experiment d3_coherent_experiment(const RunConfig& cfg) {
  const SpinJ j = SpinJ::from_twice(cfg.protocol.num_spins);
  auto sampler = std::make_shared<ChiSampler>(ChiDensity(coherent_direction_code(j)));
  const std::vector<Vec3> dirs = d3_signal_directions();
  Experiment ex;
  ex.metrics = {"fidelity"};
  ex.reference_fidelity = d3_coherent_score(cfg.protocol.num_spins, sphere_quadrature(cfg.n_theta, cfg.n_phi)).fidelity;
  ex.trial = [sampler, dirs](TrialRng& rng, double* out) {
    const std::size_t g = rng.index(dirs.size());
    const double chi = sampler->sample(rng);
    const double az = kTwoPi * rng.uniform();
    const Vec3 raw = perturb_direction(dirs[g], chi, az);
    out[0] = nearest_direction(raw, dirs) == g ? 1.0 : 0.0;
  };
  return ex;
}

Experiment frame_experiment(const RunConfig& cfg) {
  const FrameProtocol proto = frame_two_axis_score(cfg.protocol.num_spins, cfg.protocol.encoding, cfg.protocol.decoder);
  auto sampler = std::make_shared<ChiSampler>(proto.density);
  const bool best = proto.fitter == Decoder::kBestFit;
  Experiment ex;
  ex.metrics = {"fidelity",         "frame_infidelity", "frame_infidelity_naive", "frame_infidelity_best_fit",
                "fit_gain",         "per_axis_infidelity", "axis_z_raw",        "axis_x_raw",
                "axis_x_fit",       "axis_y_fit",       "axis_z_fit",             "naive_out_of_range"};
  ex.reference_per_axis = proto.expected_axis_infidelity;
  ex.trial = [sampler, best](TrialRng& rng, double* out) {
    const Frame truth = Frame::from_matrix(sample_haar_rotation_matrix(rng));
    AxisPairEstimate est;
    {
      const double chi = sampler->sample(rng);
      est.z_dir = Direction::from_vector(perturb_direction(truth.z_axis, chi, kTwoPi * rng.uniform()));
    }
    {
      const double chi = sampler->sample(rng);
      est.x_dir = Direction::from_vector(perturb_direction(truth.x_axis, chi, kTwoPi * rng.uniform()));
    }
    const NaiveEstimate naive = naive_euler_estimate(est);
    const Frame naive_frame = euler_to_axes(naive.angles).frame;
    const Frame fit_frame = best_fit_frame(est).frame;
    const Frame& chosen = best ? fit_frame : naive_frame;
    const double naive_total = frame_infidelity(truth, naive_frame);
    const double fit_total = frame_infidelity(truth, fit_frame);
    const double total = best ? fit_total : naive_total;
    const double raw_z = axis_infidelity(truth.z_axis, est.z_dir.unit());
    const double raw_x = axis_infidelity(truth.x_axis, est.x_dir.unit());
    out[0] = 1.0 - total / 3.0;
    out[1] = total;
    out[2] = naive_total;
    out[3] = fit_total;
    out[4] = naive_total - fit_total;
    out[5] = 0.5 * (raw_z + raw_x);
    out[6] = raw_z;
    out[7] = raw_x;
    out[8] = axis_infidelity(truth.x_axis, chosen.x_axis);
    out[9] = axis_infidelity(truth.y_axis, chosen.y_axis);
    out[10] = axis_infidelity(truth.z_axis, chosen.z_axis);
    out[11] = naive.out_of_range ? 1.0 : 0.0;
  };
  return ex;
}

Experiment make_experiment(const RunConfig& cfg) {
  const ProtocolSpec& p = cfg.protocol;
  switch (p.kind) {
    case ProtocolKind::kD3Single:
      return table_experiment(d3_single_spin_setup().table, 1, p.tie_break, d3_single_spin_score().fidelity);
    case ProtocolKind::kD3Repeated: {
      std::optional<double> ref;
      if (p.num_spins <= 9) ref = d3_repeated_single_score(p.num_spins, p.tie_break).fidelity;
      return table_experiment(d3_single_spin_setup().table, p.num_spins, p.tie_break, ref);
    }
    case ProtocolKind::kD3Covariant: {
      const D3TwoSpinCovariant s = d3_two_spin_covariant_setup();
      return table_experiment(s.table, 1, p.tie_break, s.table.diagonal().mean());
    }
    case ProtocolKind::kD3Coherent:
      return d3_coherent_experiment(cfg);
    case ProtocolKind::kFrameTwoAxis:
      return frame_experiment(cfg);
  }
  throw DomainError("unknown protocol");
}

}  // namespace

RunResult run_experiment(const RunConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const Experiment ex = make_experiment(config);
  const std::size_t n_metrics = ex.metrics.size();
  const auto n_blocks = static_cast<std::size_t>((config.trials + kTrialBlock - 1) / kTrialBlock);

  // block_stats[b * n_metrics + m]
  std::vector<Moments> block_stats(n_blocks * n_metrics);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    std::vector<double> out(n_metrics);
    std::vector<std::vector<double>> values(n_metrics);
    for (std::size_t b = next.fetch_add(1); b < n_blocks; b = next.fetch_add(1)) {
      const std::int64_t lo = static_cast<std::int64_t>(b) * kTrialBlock;
      const std::int64_t hi = std::min(config.trials, lo + kTrialBlock);
      for (auto& v : values) v.clear();
      for (std::int64_t t = lo; t < hi; ++t) {
        TrialRng rng(config.seed, static_cast<std::uint64_t>(t));
        ex.trial(rng, out.data());
        for (std::size_t m = 0; m < n_metrics; ++m) values[m].push_back(out[m]);
      }
      for (std::size_t m = 0; m < n_metrics; ++m) block_stats[b * n_metrics + m] = block_moments(values[m]);
    }
  };

  unsigned threads = config.threads > 0 ? static_cast<unsigned>(config.threads) : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n_blocks)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  RunResult result;
  result.config = config;
  result.trials = config.trials;
  result.reference_fidelity = ex.reference_fidelity;
  result.reference_per_axis_infidelity = ex.reference_per_axis;
  for (std::size_t m = 0; m < n_metrics; ++m) {
    std::vector<Moments> per_block(n_blocks);
    for (std::size_t b = 0; b < n_blocks; ++b) per_block[b] = block_stats[b * n_metrics + m];
    const Moments total = merge_range(per_block, 0, n_blocks);
    const double var = total.n > 1.0 ? total.m2 / (total.n - 1.0) : 0.0;
    result.estimates.push_back({ex.metrics[m], total.mean, std::sqrt(var / total.n)});
  }
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace covmeas
