#include "covmeas/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "covmeas/config.hpp"
#include "covmeas/covariant_opt.hpp"
#include "covmeas/frame_fit.hpp"
#include "covmeas/group_rep.hpp"
#include "covmeas/povm.hpp"
#include "covmeas/protocols.hpp"
#include "covmeas/record.hpp"

namespace covmeas {

namespace {

constexpr double kCheckTol = 1e-10;

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

struct Check {
  std::string name;
  double value = 0.0;
  bool passed = false;
};

Check povm_check(const std::string& name, const Povm& povm) {
  const PovmReport r = validate_povm(povm, kCheckTol);
  return {name + " ||sum E - 1||", r.completeness_deviation, r.passed};
}

// Sphere grid integrating exactly up to the given degree.
SphereQuadrature quadrature_of_degree(int degree) { return sphere_quadrature(degree / 2 + 1, degree + 1); }

std::vector<Check> self_checks(int forced_degree) {
  std::vector<Check> checks;
  const GroupWithIrreps d3 = dihedral_d3();
  try {
    check_group_axioms(d3.group);
    checks.push_back({"group axioms (D3)", 0.0, true});
  } catch (const std::exception&) {
    checks.push_back({"group axioms (D3)", 1.0, false});
  }

  checks.push_back(povm_check("POVM d3 single-spin", d3_single_spin_setup().povm));
  checks.push_back(povm_check("POVM d3 two-spin optimal", d3_two_spin_covariant_setup().povm));

  for (int twice_j : {1, 2, 3, 4, 6}) {
    const SpinJ j = SpinJ::from_twice(twice_j);
    const int degree = forced_degree >= 0 ? forced_degree : twice_j + 1;
    const Povm povm = direction_povm_on_nodes(j, quadrature_of_degree(degree));
    checks.push_back(povm_check("POVM direction 2j=" + std::to_string(twice_j), povm));
  }
  {
    const SpinJ j = SpinJ::integer(2);
    const SphereQuadrature quad = quadrature_of_degree(forced_degree >= 0 ? forced_degree : 8);
    const std::vector<Vec3> dirs = d3_signal_directions();
    const Povm coarse = coarse_grain_povm(direction_povm_on_nodes(j, quad),
                                          [&](std::size_t k) { return nearest_direction(quad.points[k], dirs); });
    checks.push_back(povm_check("POVM d3 Voronoi coarse-grain j=2", coarse));
  }

  for (int n = 1; n <= 6; ++n) {
    double worst = 0.0;
    CMatrix total = CMatrix::Zero(1 << n, 1 << n);
    for (SpinJ j : attainable_spins(n)) {
      const CMatrix p = total_j_projector(n, j);
      worst = std::max(worst, (p * p - p).cwiseAbs().maxCoeff());
      worst = std::max(worst, (p - p.adjoint()).cwiseAbs().maxCoeff());
      total += p;
    }
    worst = std::max(worst, (total - CMatrix::Identity(1 << n, 1 << n)).cwiseAbs().maxCoeff());
    checks.push_back({"projectors N=" + std::to_string(n), worst, worst < kCheckTol});
  }

  double euler = 0.0;
  for (int k = 0; k < 64; ++k) {
    const EulerAngles e{-3.0 + 0.09 * k, 0.05 + 0.047 * k, 2.9 - 0.083 * k};
    const Mat3 r = rotation_matrix(e);
    const Mat3 back = rotation_matrix(axes_to_euler(Frame::from_matrix(r)));
    euler = std::max(euler, (r - back).cwiseAbs().maxCoeff());
  }
  checks.push_back({"Euler round trip", euler, euler < 1e-9});

  {
    const Eigen::MatrixXd m = direction_cos_matrix(10);
    const Eigenpair tri = top_eigenpair_tridiagonal(m.diagonal(), m.diagonal(1));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> dense(m);
    const double diff = std::abs(tri.value - dense.eigenvalues().maxCoeff());
    checks.push_back({"tridiagonal vs dense eigenvalue", diff, diff < kCheckTol});
  }
  return checks;
}

int cmd_validate(int forced_degree, std::ostream& out, std::ostream& err) {
  const std::vector<Check> checks = self_checks(forced_degree);
  bool ok = true;
  char line[160];
  for (const auto& c : checks) {
    std::snprintf(line, sizeof line, "%-48s %12s  %s\n", c.name.c_str(), sci(c.value).c_str(), c.passed ? "PASS" : "FAIL");
    out << line;
    if (!c.passed) {
      ok = false;
      err << "check failed: " << c.name << '\n';
    }
  }
  out << (ok ? "all checks passed\n" : "self-check FAILED\n");
  return ok ? kExitOk : kExitFailure;
}

std::string amplitude_summary(const DirectionCode& code) {
  std::size_t peak = 0;
  for (std::size_t k = 0; k < code.amplitudes.size(); ++k)
    if (code.amplitudes[k] > code.amplitudes[peak]) peak = k;
  return "A_0=" + format_number(code.amplitudes.front()) + " peak j=" + std::to_string(peak) + " (" +
         format_number(code.amplitudes[peak]) + ") A_jmax=" + format_number(code.amplitudes.back());
}

int cmd_optimize_direction(const std::vector<int>& sizes, const std::string& output, std::ostream& out) {
  for (int n : sizes) {
    if (n < 2 || n % 2 != 0)
      throw DomainError("direction codes put N = 2 j_max spins into blocks j = 0..j_max; N must be even and >= 2, got " +
                        std::to_string(n));
  }
  std::ostringstream csv;
  csv << "N,j_max,fidelity,infidelity,n_sq_infidelity,amplitudes\n";
  char line[256];
  std::snprintf(line, sizeof line, "%5s %6s %16s %16s %14s  %s\n", "N", "j_max", "F", "1-F", "N^2(1-F)", "A_j");
  out << line;
  for (int n : sizes) {
    const DirectionCode code = optimal_direction_encoding(n / 2);
    const double inf = code.infidelity();
    std::snprintf(line, sizeof line, "%5d %6d %16.12f %16.12f %14.8f  ", n, n / 2, code.fidelity, inf,
                  double(n) * n * inf);
    out << line << amplitude_summary(code) << '\n';
    csv << n << ',' << n / 2 << ',' << format_number(code.fidelity) << ',' << format_number(inf) << ','
        << format_number(double(n) * n * inf) << ',';
    for (std::size_t k = 0; k < code.amplitudes.size(); ++k)
      csv << (k ? ";" : "") << format_number(code.amplitudes[k]);
    csv << '\n';
  }
  if (!output.empty()) {
    std::ofstream f(output, std::ios::binary);
    if (!f || !(f << csv.str())) throw IoError("cannot write '" + output + "'");
  }
  return kExitOk;
}

int cmd_optimize_dihedral(int spins, const std::string& output, std::ostream& out) {
  if (spins < 1 || spins > 8) throw DomainError("dihedral optimization supports 1..8 spins");
  const GroupWithIrreps d3 = dihedral_d3();
  const SignalFamily family =
      build_signal_family(d3.group, spins, StateVector::ket(std::string(static_cast<std::size_t>(spins), '0')), d3.irreps);
  const CovariantOptimum opt = finite_group_optimum(family);
  std::ostringstream csv;
  csv << "block,dim,irrep,coefficient,fiducial_norm\n";
  out << "F = " << format_number(opt.fidelity) << "  (|G| = " << family.group.order() << ", N = " << spins << ")\n";
  char line[160];
  for (std::size_t b = 0; b < family.blocks.size(); ++b) {
    const auto& blk = family.blocks[b];
    const std::string irrep = blk.irrep ? d3.irreps.names[*blk.irrep] : "-";
    std::snprintf(line, sizeof line, "  block %zu  dim %d  irrep %-12s  a = %.12f  |B_b| = %.12f\n", b, blk.dim(),
                  irrep.c_str(), opt.coefficients[b], opt.fiducial_norms[b]);
    out << line;
    csv << b << ',' << blk.dim() << ',' << irrep << ',' << format_number(opt.coefficients[b]) << ','
        << format_number(opt.fiducial_norms[b]) << '\n';
  }
  if (spins == 2) {
    const auto cross = d3_coherent_crossover(24, default_d3_quadrature());
    if (cross)
      out << "coherent spins with nearest-direction decoding beat this from N = " << *cross << " (checked to N = 24)\n";
  }
  if (!output.empty()) {
    std::ofstream f(output, std::ios::binary);
    if (!f || !(f << "fidelity," << format_number(opt.fidelity) << '\n' << csv.str()))
      throw IoError("cannot write '" + output + "'");
  }
  return kExitOk;
}

std::string default_record_path(const RunConfig& c) {
  std::string dir = ".";
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) dir = env;
  return dir + "/" + std::string(to_string(c.protocol.kind)) + "-N" + std::to_string(c.protocol.num_spins) + "-" +
         std::string(to_string(c.protocol.decoder)) + "-seed" + std::to_string(c.seed) + ".json";
}

std::string summary_line(const RunResult& r, const std::string& path) {
  const ProtocolSpec& p = r.config.protocol;
  const Estimate& f = r.estimate("fidelity");
  std::ostringstream os;
  os << to_string(p.kind) << " N=" << p.num_spins << " encoding=" << to_string(p.encoding)
     << " decoder=" << to_string(p.decoder) << " trials=" << r.trials << " seed=" << r.config.seed
     << " fidelity=" << format_number(f.mean) << " stderr=" << format_number(f.std_error);
  if (r.reference_fidelity) os << " reference=" << format_number(*r.reference_fidelity);
  if (const Estimate* a = r.find("per_axis_infidelity")) {
    os << " per_axis_infidelity=" << format_number(a->mean);
    if (r.reference_per_axis_infidelity) os << " reference_per_axis=" << format_number(*r.reference_per_axis_infidelity);
  }
  if (const Estimate* n = r.find("naive_out_of_range")) os << " naive_out_of_range=" << format_number(n->mean);
  os << " -> " << path;
  return os.str();
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Covariant and measure-then-fit protocols for transmitting directions and frames with spins"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto* validate = app.add_subcommand("validate", "Run the self-check suite");
  int forced_degree = -1;
  validate->add_option("--quadrature-degree", forced_degree,
                       "Force the exact degree of every sphere quadrature (values below 2j break completeness)")
      ->check(CLI::NonNegativeNumber);

  auto* optimize = app.add_subcommand("optimize", "Optimal covariant fidelities");
  std::string target;
  std::vector<int> sizes;
  int n_min = 0, n_max = 0, n_step = 2, spins = 2;
  std::string opt_output;
  optimize->add_option("--target", target, "direction | dihedral")->required()->check(CLI::IsMember({"direction", "dihedral"}));
  optimize->add_option("--n", sizes, "Spin counts for the direction table")->check(CLI::PositiveNumber);
  optimize->add_option("--n-min", n_min, "Sweep start")->check(CLI::PositiveNumber);
  optimize->add_option("--n-max", n_max, "Sweep end (inclusive)")->check(CLI::PositiveNumber);
  optimize->add_option("--n-step", n_step, "Sweep step")->check(CLI::PositiveNumber);
  optimize->add_option("--spins", spins, "Spins for the dihedral problem")->check(CLI::Range(1, 8));
  optimize->add_option("--output", opt_output, "Also write the table as CSV");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo run, persisted as a result record");
  std::string config_path, sim_output, kind, encoding, decoder, tie_break;
  int sim_spins = 0, n_theta = 0, n_phi = 0, threads = -1;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  simulate->add_option("--config", config_path, "key = value or JSON config file");
  auto* o_kind = simulate->add_option("--protocol", kind, "d3-single | d3-repeated | d3-covariant | d3-coherent | frame-two-axis");
  auto* o_spins = simulate->add_option("--spins", sim_spins, "Number of spins N")->check(CLI::PositiveNumber);
  auto* o_enc = simulate->add_option("--encoding", encoding, "coherent | optimal");
  auto* o_dec = simulate->add_option("--decoder", decoder, "covariant | nearest-direction | naive-euler | best-fit");
  auto* o_tie = simulate->add_option("--tie-break", tie_break, "random | lowest-index");
  auto* o_trials = simulate->add_option("--trials", trials, "Trial count")->check(CLI::PositiveNumber);
  auto* o_seed = simulate->add_option("--seed", seed, "64-bit seed");
  auto* o_nt = simulate->add_option("--n-theta", n_theta, "Reference quadrature polar nodes")->check(CLI::PositiveNumber);
  auto* o_np = simulate->add_option("--n-phi", n_phi, "Reference quadrature azimuthal nodes")->check(CLI::PositiveNumber);
  auto* o_thr = simulate->add_option("--threads", threads, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  auto* o_out = simulate->add_option("--output", sim_output, "Record path");

  auto* report = app.add_subcommand("report", "Tabulate result records");
  std::vector<std::string> inputs;
  std::string format = "csv", rep_output;
  report->add_option("inputs", inputs, "Record files");
  report->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  report->add_option("--output", rep_output, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitFailure;
  }

  try {
    if (*validate) return cmd_validate(forced_degree, out, err);

    if (*optimize) {
      if (target == "dihedral") return cmd_optimize_dihedral(spins, opt_output, out);
      if (n_min > 0 || n_max > 0) {
        if (n_min <= 0 || n_max < n_min) throw DomainError("--n-min/--n-max must give a non-empty range");
        for (int n = n_min; n <= n_max; n += n_step) sizes.push_back(n);
      }
      if (sizes.empty()) throw DomainError("give --n or --n-min/--n-max");
      return cmd_optimize_direction(sizes, opt_output, out);
    }

    if (*simulate) {
      RunConfig cfg = config_path.empty() ? RunConfig{} : load_run_config(config_path);
      if (*o_kind) {
        cfg.protocol.kind = parse_protocol_kind(kind);
        if (!*o_dec) cfg.protocol.decoder = default_decoder(cfg.protocol.kind);
      }
      if (*o_spins) cfg.protocol.num_spins = sim_spins;
      if (*o_enc) cfg.protocol.encoding = parse_encoding(encoding);
      if (*o_dec) cfg.protocol.decoder = parse_decoder(decoder);
      if (*o_tie) cfg.protocol.tie_break = parse_tie_break(tie_break);
      if (*o_trials) cfg.trials = trials;
      if (*o_seed) cfg.seed = seed;
      if (*o_nt) cfg.n_theta = n_theta;
      if (*o_np) cfg.n_phi = n_phi;
      if (*o_thr) cfg.threads = threads;
      if (*o_out) cfg.output = sim_output;
      if (config_path.empty() && !*o_kind) throw DomainError("give --config or --protocol");
      cfg.validate();
      const std::string path = cfg.output.empty() ? default_record_path(cfg) : cfg.output;
      const RunResult result = run_experiment(cfg);
      write_record(path, make_record(result));
      out << summary_line(result, path) << '\n';
      return kExitOk;
    }

    if (*report) {
      if (inputs.empty()) throw DomainError("report needs at least one record");
      std::vector<ResultRecord> records;
      for (const auto& p : inputs) records.push_back(parse_record(read_text(p)));
      const std::string text = format == "csv" ? records_to_csv(records) : records_to_json(records);
      if (rep_output.empty()) {
        out << text;
      } else {
        std::ofstream f(rep_output, std::ios::binary);
        if (!f || !(f << text)) throw IoError("cannot write '" + rep_output + "'");
      }
      return kExitOk;
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace covmeas
