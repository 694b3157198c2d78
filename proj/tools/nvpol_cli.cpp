// nvpol_cli.cpp - command line front end.
//
// Subcommands: fig4, sweep, qwp, spectrum, mc, fit. Physical parameters
// come from an optional key=value config file (--config or the
// NV_POLARIMETRY_CONFIG environment variable) with per-flag overrides;
// flags win. Exit codes: 0 success, 2 usage, 3 bad or degenerate data,
// 4 file I/O failure.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <nvpol/nvpol.hpp>

namespace {

struct CommonOpts {
  std::string config_path;
  std::uint64_t seed = 1;
  std::optional<double> delta_ghz;
  std::optional<double> tau_ns;
  std::optional<double> temperature_k;
  std::optional<double> gamma_per_ns;
  std::optional<double> gamma_inv_ns;
  std::optional<double> dipole_x_deg;
  std::optional<double> linewidth_mhz;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--config", c.config_path,
                  "key=value config file (default: $NV_POLARIMETRY_CONFIG)");
  cmd->add_option("--seed", c.seed, "seed for every random stream")->capture_default_str();
  cmd->add_option("--delta", c.delta_ghz, "branch splitting, GHz");
  cmd->add_option("--tau", c.tau_ns, "radiative lifetime, ns");
  cmd->add_option("--temperature", c.temperature_k, "bath temperature, K");
  auto* g = cmd->add_option("--gamma", c.gamma_per_ns, "branch flip rate, 1/ns");
  cmd->add_option("--gamma-inv", c.gamma_inv_ns, "hopping time 1/gamma, ns")
      ->check(CLI::PositiveNumber)
      ->excludes(g);
  cmd->add_option("--dipole-x", c.dipole_x_deg, "X dipole angle, degrees");
  cmd->add_option("--linewidth", c.linewidth_mhz, "per-line FWHM, MHz");
}

nvpol::PhysicalParams resolve_params(const CommonOpts& c) {
  std::string path = c.config_path;
  if (path.empty()) {
    const char* env = std::getenv("NV_POLARIMETRY_CONFIG");
    if (env && *env) path = env;
  }
  nvpol::ConfigMap cfg;
  if (!path.empty()) cfg = nvpol::load_config(path);
  nvpol::PhysicalParams p = nvpol::params_from_config(cfg);

  if (c.delta_ghz) p.model.delta_ghz = *c.delta_ghz;
  if (c.tau_ns) {
    p.model.tau_ns = *c.tau_ns;
    // keep the natural-linewidth default tied to the effective lifetime
    if (!c.linewidth_mhz && !cfg.count("linewidth_mhz"))
      p.model.linewidth_mhz = nvpol::natural_linewidth_mhz(*c.tau_ns);
  }
  if (c.temperature_k) p.temperature_k = *c.temperature_k;
  if (c.gamma_per_ns) p.gamma_per_ns = *c.gamma_per_ns;
  if (c.gamma_inv_ns) p.gamma_per_ns = 1.0 / *c.gamma_inv_ns;
  if (c.dipole_x_deg) p.model.dipole_x_angle_deg = *c.dipole_x_deg;
  if (c.linewidth_mhz) p.model.linewidth_mhz = *c.linewidth_mhz;
  p.validate();
  return p;
}

std::vector<double> angle_grid(double start, double stop, double step) {
  if (!(step > 0.0) || !(stop > start))
    throw nvpol::UsageError("angle grid: need start < stop and step > 0");
  std::vector<double> out;
  for (int k = 0;; ++k) {
    const double a = start + step * k;
    if (a >= stop - 1e-9) break;
    out.push_back(a);
  }
  return out;
}

nvpol::Branch branch_from_name(const std::string& name) {
  if (name == "x" || name == "X") return nvpol::Branch::X;
  if (name == "y" || name == "Y") return nvpol::Branch::Y;
  throw nvpol::UsageError("unknown branch '" + name + "' (expected x or y)");
}

// ---------------------------------------------------------------- fig4

struct Fig4Opts {
  CommonOpts common;
  double lo = 1.0;
  double hi = 1000.0;
  int points = 200;
  std::string out = "fig4.csv";
};

void run_fig4(const Fig4Opts& o) {
  if (!(o.lo > 0.0) || !(o.hi >= o.lo))
    throw nvpol::UsageError("fig4: need 0 < min <= max");
  const auto p = resolve_params(o.common);
  const auto grid = nvpol::log_grid(o.lo, o.hi, o.points);
  const auto rows = nvpol::contrast_table(p.model.tau_ns, grid);
  nvpol::io::write_contrast_table(o.out, rows);
  std::cout << "wrote " << rows.size() << " rows to " << o.out << "\n";
}

// --------------------------------------------------------------- sweep

struct SweepOpts {
  CommonOpts common;
  std::string mode = "emission";
  double a_start = 0.0, a_stop = 180.0, a_step = 5.0;
  bool use_mc = false;
  long long photons = 100000;
  std::string averaging = "lifetime";
  std::string weighting = "squared";
  std::optional<double> qwp_deg;
  std::string line = "y";
  double halfwidth_ghz = 1.0;
  int f_points = 801;
  double noise = 0.0;
  std::string out = "sweep.csv";
};

void run_sweep(const SweepOpts& o) {
  const auto p = resolve_params(o.common);
  const auto angles = angle_grid(o.a_start, o.a_stop, o.a_step);
  std::vector<nvpol::AngleIntensity> points;

  if (o.mode == "emission") {
    if (o.use_mc) {
      nvpol::mc::McConfig cfg;
      cfg.n_trajectories = o.photons;
      cfg.seed = o.common.seed;
      cfg.rates = nvpol::symmetric_rates(p.gamma_per_ns);
      cfg.tau_ns = p.model.tau_ns;
      const auto samples = nvpol::mc::simulate(cfg);
      points = nvpol::mc::empirical_polarizer_sweep(samples, p.model.dipole_x_angle_deg,
                                                    angles, o.common.seed);
    } else {
      const auto avg = o.averaging == "exponential"
                           ? nvpol::exp_weighted_averages(p.gamma_per_ns, p.model.tau_ns,
                                                          nvpol::Branch::X)
                           : nvpol::branch_averages(p.gamma_per_ns, p.model.tau_ns,
                                                    nvpol::Branch::X);
      const auto weighting = o.weighting == "linear" ? nvpol::PopulationWeighting::Linear
                                                     : nvpol::PopulationWeighting::Squared;
      const auto stokes = nvpol::mixture_to_stokes(nvpol::emission_mixture(avg, p.model, weighting));
      points = nvpol::polarizer_sweep(stokes, o.qwp_deg, angles);
    }
  } else {  // excitation: integrate accumulation rows over the starred line
    const auto lines = nvpol::build_lines(p.model);
    const auto& line = nvpol::starred_line(lines, branch_from_name(o.line));
    nvpol::SweepPlan plan;
    plan.f_start_ghz = line.center_ghz - o.halfwidth_ghz;
    plan.f_stop_ghz = line.center_ghz + o.halfwidth_ghz;
    plan.n_points = o.f_points;
    plan.noise = o.noise;
    const auto acc = nvpol::polarization_accumulation(plan, angles, line, p.model, o.common.seed);
    const auto integrals = nvpol::row_integrals(acc);
    points.reserve(angles.size());
    for (std::size_t k = 0; k < angles.size(); ++k)
      points.push_back({angles[k], integrals[k]});
  }

  nvpol::io::write_sweep(o.out, points);
  std::cout << "wrote " << points.size() << " angles to " << o.out << "\n";
}

// ----------------------------------------------------------------- qwp

struct QwpOpts {
  CommonOpts common;
  double start = 0.0, stop = 180.0, step = 1.0;
  std::string hypothesis = "mixture";
  std::string out = "qwp.csv";
};

void run_qwp(const QwpOpts& o) {
  const auto p = resolve_params(o.common);
  const auto avg = nvpol::branch_averages(p.gamma_per_ns, p.model.tau_ns, nvpol::Branch::X);
  const auto mixture = nvpol::mixture_to_stokes(nvpol::emission_mixture(avg, p.model));

  nvpol::StokesVector source = mixture;
  if (o.hypothesis == "elliptical") {
    // Coherent alternative with the same linear component but unit
    // degree of polarization: the missing fraction shows up as V.
    const double lin = mixture.linear_polarization();
    source.v = std::sqrt(std::max(0.0, 1.0 - lin * lin));
  }

  const auto grid = angle_grid(o.start, o.stop + o.step, o.step);  // inclusive stop
  const auto scan = nvpol::qwp_contrast_scan(source, grid);
  nvpol::io::write_qwp_scan(o.out, scan);

  double best = 0.0, best_angle = 0.0;
  for (const auto& s : scan)
    if (s.contrast > best) {
      best = s.contrast;
      best_angle = s.qwp_deg;
    }
  std::cout << "best contrast " << nvpol::io::num(best) << " at plate angle "
            << nvpol::io::num(best_angle) << " deg (source DOP "
            << nvpol::io::num(source.degree_of_polarization()) << "); wrote " << scan.size()
            << " points to " << o.out << "\n";
}

// ------------------------------------------------------------ spectrum

struct SpectrumOpts {
  CommonOpts common;
  std::optional<double> f_start, f_stop;
  int points = 2001;
  double laser_deg = 45.0;
  double noise = 0.0;
  double drift_mhz = 0.0;
  bool accumulate = false;
  std::string line = "y";
  double a_start = 0.0, a_stop = 180.0, a_step = 10.0;
  std::string out = "spectrum.csv";
};

void run_spectrum(const SpectrumOpts& o) {
  const auto p = resolve_params(o.common);
  const auto lines = nvpol::build_lines(p.model);

  if (!o.accumulate) {
    double lo = lines.front().center_ghz, hi = lines.front().center_ghz;
    for (const auto& l : lines) {
      lo = std::min(lo, l.center_ghz);
      hi = std::max(hi, l.center_ghz);
    }
    nvpol::SweepPlan plan;
    plan.f_start_ghz = o.f_start.value_or(lo - 1.0);
    plan.f_stop_ghz = o.f_stop.value_or(hi + 1.0);
    plan.n_points = o.points;
    plan.laser_angle_deg = o.laser_deg;
    plan.noise = o.noise;
    plan.drift_mhz_per_sweep = o.drift_mhz;
    const auto spec = nvpol::spectrum(plan, lines, p.model, o.common.seed);
    nvpol::io::write_spectrum(o.out, spec);
    std::cout << "wrote " << spec.size() << " bins to " << o.out << "\n";
    return;
  }

  const auto& line = nvpol::starred_line(lines, branch_from_name(o.line));
  nvpol::SweepPlan plan;
  plan.f_start_ghz = o.f_start.value_or(line.center_ghz - 1.0);
  plan.f_stop_ghz = o.f_stop.value_or(line.center_ghz + 1.0);
  plan.n_points = o.points;
  plan.noise = o.noise;
  plan.drift_mhz_per_sweep = o.drift_mhz;
  const auto angles = angle_grid(o.a_start, o.a_stop, o.a_step);
  const auto acc = nvpol::polarization_accumulation(plan, angles, line, p.model, o.common.seed);
  nvpol::io::write_accumulation(o.out, acc);
  std::cout << "wrote " << acc.angles_deg.size() << " x " << acc.freqs_ghz.size()
            << " cells to " << o.out << "\n";
}

// ------------------------------------------------------------------ mc

struct McOpts {
  CommonOpts common;
  long long photons = 100000;
  bool asymmetric = false;
  std::string initial = "x";
  std::string out = "samples.csv";
  bool occupation = false;
  double t_start = 0.0, t_stop = 60.0;
  int t_points = 121;
  std::string occ_out = "occupation.csv";
};

void run_mc(const McOpts& o) {
  const auto p = resolve_params(o.common);
  nvpol::mc::McConfig cfg;
  cfg.n_trajectories = o.photons;
  cfg.seed = o.common.seed;
  cfg.tau_ns = p.model.tau_ns;
  cfg.initial_branch = branch_from_name(o.initial);
  cfg.rates = o.asymmetric
                  ? nvpol::rates_from_detailed_balance(p.gamma_per_ns, p.model.delta_ghz,
                                                       nvpol::ThermalBath(p.temperature_k))
                  : nvpol::symmetric_rates(p.gamma_per_ns);

  const auto samples = nvpol::mc::simulate(cfg);
  nvpol::io::write_samples(o.out, samples);
  long long in_x = 0;
  for (const auto& s : samples) in_x += s.branch_at_emission == nvpol::Branch::X;
  std::cout << "wrote " << samples.size() << " trajectories to " << o.out << " (fraction X at emission "
            << nvpol::io::num(samples.empty() ? 0.0
                                              : static_cast<double>(in_x) /
                                                    static_cast<double>(samples.size()))
            << ")\n";

  if (o.occupation) {
    if (!(o.t_stop > o.t_start) || o.t_points < 2)
      throw nvpol::UsageError("mc: occupation grid needs t-stop > t-start and >= 2 points");
    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(o.t_points));
    for (int k = 0; k < o.t_points; ++k)
      times.push_back(o.t_start + (o.t_stop - o.t_start) * k / (o.t_points - 1));
    const auto occ = nvpol::mc::occupation_curve(cfg, times);
    nvpol::io::write_occupation(o.occ_out, occ);
    std::cout << "wrote " << occ.size() << " occupation points to " << o.occ_out << "\n";
  }
}

// ----------------------------------------------------------------- fit

struct FitOpts {
  CommonOpts common;
  std::string input;
  std::string out = "report.csv";
  std::string id;
};

int run_fit(const FitOpts& o) {
  const auto p = resolve_params(o.common);
  const auto data = nvpol::io::read_sweep(o.input);
  std::vector<nvpol::BatchItem> items;
  items.push_back({o.id.empty() ? o.input : o.id, data});
  const auto rows = nvpol::batch_report(items, p.model.tau_ns);
  nvpol::io::write_report(o.out, rows);

  const auto& r = rows.front();
  std::cout << "dataset " << r.id << ": contrast = " << nvpol::io::num(r.contrast) << " +/- "
            << nvpol::io::num(r.contrast_sigma) << "\n";
  if (r.flag == "ok") {
    std::cout << "  hopping time 1/gamma = " << nvpol::io::num(r.gamma_inv_ns) << " ns  (95% CI ["
              << nvpol::io::num(r.ci_low_ns) << ", " << nvpol::io::num(r.ci_high_ns) << "])\n";
  } else if (r.flag == "fully_unpolarized") {
    std::cout << "  fully unpolarized: hopping time below the ~3 ns sensitivity floor\n";
  } else {
    std::cout << "  " << r.flag << "\n";
  }
  std::cout << "wrote report to " << o.out << "\n";
  return r.flag.rfind("error", 0) == 0 ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polarization dynamics and polarimetry toolkit for two-branch quantum emitters"};
  app.require_subcommand(1);

  Fig4Opts fig4;
  auto* cmd_fig4 = app.add_subcommand(
      "fig4", "contrast and population ratio versus hopping time, as CSV");
  add_common(cmd_fig4, fig4.common);
  cmd_fig4->add_option("--min", fig4.lo, "smallest hopping time, ns")->capture_default_str();
  cmd_fig4->add_option("--max", fig4.hi, "largest hopping time, ns")->capture_default_str();
  cmd_fig4->add_option("--points", fig4.points, "grid size")
      ->check(CLI::Range(1, 10000000))
      ->capture_default_str();
  cmd_fig4->add_option("--out", fig4.out, "output CSV path")->capture_default_str();

  SweepOpts sweep;
  auto* cmd_sweep = app.add_subcommand("sweep", "polarizer sweep, as angle/intensity CSV");
  add_common(cmd_sweep, sweep.common);
  cmd_sweep->add_option("--mode", sweep.mode, "emission: analytic mixture (or --mc); excitation: integrated line scan")
      ->check(CLI::IsMember({"emission", "excitation"}))
      ->capture_default_str();
  cmd_sweep->add_option("--angle-start", sweep.a_start, "first angle, deg")->capture_default_str();
  cmd_sweep->add_option("--angle-stop", sweep.a_stop, "end of angle range (exclusive), deg")
      ->capture_default_str();
  cmd_sweep->add_option("--angle-step", sweep.a_step, "angle step, deg")->capture_default_str();
  auto* mc_flag = cmd_sweep->add_flag("--mc", sweep.use_mc,
                                      "photon-counting trajectory simulation instead of the analytic mixture");
  cmd_sweep->add_option("--photons", sweep.photons, "trajectories for --mc")
      ->check(CLI::Range(1LL, 1000000000LL))
      ->capture_default_str();
  cmd_sweep->add_option("--averaging", sweep.averaging,
                        "population averaging: lifetime (canonical) or exponential")
      ->check(CLI::IsMember({"lifetime", "exponential"}))
      ->capture_default_str();
  cmd_sweep->add_option("--weighting", sweep.weighting,
                        "intensity weights: squared (emission law) or linear")
      ->check(CLI::IsMember({"squared", "linear"}))
      ->capture_default_str();
  cmd_sweep->add_option("--qwp", sweep.qwp_deg, "fixed quarter-wave plate angle, deg")
      ->excludes(mc_flag);
  cmd_sweep->add_option("--line", sweep.line, "branch of the starred line (excitation mode)")
      ->check(CLI::IsMember({"x", "y", "X", "Y"}))
      ->capture_default_str();
  cmd_sweep->add_option("--halfwidth", sweep.halfwidth_ghz,
                        "scan half-window around the line, GHz (excitation mode)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_sweep->add_option("--f-points", sweep.f_points, "frequency bins per scan (excitation mode)")
      ->check(CLI::Range(2, 10000000))
      ->capture_default_str();
  cmd_sweep->add_option("--noise", sweep.noise, "expected counts per unit intensity; 0 = noiseless")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd_sweep->add_option("--out", sweep.out, "output CSV path")->capture_default_str();

  QwpOpts qwp;
  auto* cmd_qwp = app.add_subcommand("qwp", "fitted sweep contrast versus quarter-wave plate angle");
  add_common(cmd_qwp, qwp.common);
  cmd_qwp->add_option("--start", qwp.start, "first plate angle, deg")->capture_default_str();
  cmd_qwp->add_option("--stop", qwp.stop, "last plate angle (inclusive), deg")->capture_default_str();
  cmd_qwp->add_option("--step", qwp.step, "plate angle step, deg")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_qwp->add_option("--hypothesis", qwp.hypothesis,
                      "source model: incoherent mixture or coherent elliptical")
      ->check(CLI::IsMember({"mixture", "elliptical"}))
      ->capture_default_str();
  cmd_qwp->add_option("--out", qwp.out, "output CSV path")->capture_default_str();

  SpectrumOpts spectrum;
  auto* cmd_spectrum = app.add_subcommand("spectrum", "excitation spectrum (or accumulated angle scan)");
  add_common(cmd_spectrum, spectrum.common);
  cmd_spectrum->add_option("--f-start", spectrum.f_start, "scan start, GHz (default: around the lines)");
  cmd_spectrum->add_option("--f-stop", spectrum.f_stop, "scan stop, GHz");
  cmd_spectrum->add_option("--points", spectrum.points, "frequency bins")
      ->check(CLI::Range(2, 10000000))
      ->capture_default_str();
  cmd_spectrum->add_option("--laser-angle", spectrum.laser_deg, "excitation polarization, deg")
      ->capture_default_str();
  cmd_spectrum->add_option("--noise", spectrum.noise,
                           "expected counts per unit intensity; 0 = noiseless")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd_spectrum->add_option("--drift", spectrum.drift_mhz, "spectral drift per sweep, MHz")
      ->capture_default_str();
  cmd_spectrum->add_flag("--accumulate", spectrum.accumulate,
                         "scan the starred line once per polarizer angle (long-form CSV)");
  cmd_spectrum->add_option("--line", spectrum.line, "branch of the starred line (--accumulate)")
      ->check(CLI::IsMember({"x", "y", "X", "Y"}))
      ->capture_default_str();
  cmd_spectrum->add_option("--angle-start", spectrum.a_start, "first angle, deg (--accumulate)")
      ->capture_default_str();
  cmd_spectrum->add_option("--angle-stop", spectrum.a_stop, "end of angle range, deg (--accumulate)")
      ->capture_default_str();
  cmd_spectrum->add_option("--angle-step", spectrum.a_step, "angle step, deg (--accumulate)")
      ->capture_default_str();
  cmd_spectrum->add_option("--out", spectrum.out, "output CSV path")->capture_default_str();

  McOpts mc;
  auto* cmd_mc = app.add_subcommand("mc", "trajectory samples (and optional occupation curve)");
  add_common(cmd_mc, mc.common);
  cmd_mc->add_option("--photons", mc.photons, "number of trajectories")
      ->check(CLI::Range(1LL, 1000000000LL))
      ->capture_default_str();
  cmd_mc->add_flag("--asymmetric", mc.asymmetric,
                   "use detailed-balance rates from --delta and --temperature");
  cmd_mc->add_option("--initial", mc.initial, "pumped branch")
      ->check(CLI::IsMember({"x", "y", "X", "Y"}))
      ->capture_default_str();
  cmd_mc->add_option("--out", mc.out, "samples CSV path")->capture_default_str();
  cmd_mc->add_flag("--occupation", mc.occupation, "also write the censored occupation curve");
  cmd_mc->add_option("--t-start", mc.t_start, "occupation grid start, ns")->capture_default_str();
  cmd_mc->add_option("--t-stop", mc.t_stop, "occupation grid stop, ns")->capture_default_str();
  cmd_mc->add_option("--t-points", mc.t_points, "occupation grid size")->capture_default_str();
  cmd_mc->add_option("--occ-out", mc.occ_out, "occupation CSV path")->capture_default_str();

  FitOpts fit;
  auto* cmd_fit = app.add_subcommand("fit", "fit a sweep CSV and invert the contrast");
  add_common(cmd_fit, fit.common);
  cmd_fit->add_option("input", fit.input, "sweep CSV (angle_deg,intensity)")->required();
  cmd_fit->add_option("--out", fit.out, "report CSV path")->capture_default_str();
  cmd_fit->add_option("--id", fit.id, "dataset label in the report (default: input path)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_fig4->parsed()) run_fig4(fig4);
    if (cmd_sweep->parsed()) run_sweep(sweep);
    if (cmd_qwp->parsed()) run_qwp(qwp);
    if (cmd_spectrum->parsed()) run_spectrum(spectrum);
    if (cmd_mc->parsed()) run_mc(mc);
    if (cmd_fit->parsed()) return run_fit(fit);
  } catch (const nvpol::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nvpol::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const nvpol::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const nvpol::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
