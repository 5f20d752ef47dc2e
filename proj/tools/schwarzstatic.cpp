// Command-line driver: sweep, selftest, mode, match-round, gauge-test.
// Exit codes: 0 ok, 1 usage or config error, 2 verification failure or I/O error.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <omp.h>

#include "schwarzstatic/background.hpp"
#include "schwarzstatic/gauge.hpp"
#include "schwarzstatic/selftest.hpp"
#include "schwarzstatic/sweep.hpp"
#include "schwarzstatic/synthetic.hpp"

using namespace schwarzstatic;
namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0, kConfigError = 1, kFailure = 2;

/// Config file, then SCHWARZSTATIC_SEED, then explicit flags.
struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  int jobs = 0;

  SweepConfig load() const {
    SweepConfig c = config_path.empty() ? SweepConfig{} : load_config(config_path);
    if (const char* env = std::getenv("SCHWARZSTATIC_SEED")) {
      try {
        std::size_t used = 0;
        const std::string s(env);
        c.seed = std::stoull(s, &used);
        if (used != s.size() || s.find('-') != std::string::npos) throw std::invalid_argument(s);
      } catch (const std::exception&) {
        throw ConfigError(std::string("SCHWARZSTATIC_SEED is not a non-negative integer: ") + env);
      }
    }
    if (seed) c.seed = *seed;
    return c;
  }
  int threads() const { return jobs > 0 ? jobs : omp_get_max_threads(); }
};

void add_common(CLI::App* app, CommonArgs& a, bool with_jobs) {
  app->add_option("--config", a.config_path, "JSON config file")->check(CLI::ExistingFile);
  app->add_option("--seed", a.seed, "seed for randomized checks (overrides config and SCHWARZSTATIC_SEED)");
  if (with_jobs) app->add_option("--jobs,-j", a.jobs, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
}

fs::path prepare_out_dir(const std::string& dir) {
  const fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + p.string() + ": " + ec.message());
  return p;
}

const char* status(bool pass) { return pass ? "PASS" : "FAIL"; }

struct SweepArgs {
  CommonArgs common;
  std::string out_dir = ".";
  bool profile = false, no_timing = false;
  std::optional<std::vector<double>> masses, offsets;
  std::optional<int> ell_max;
  std::optional<double> decay_q, r_max_factor;
};

int cmd_sweep(const SweepArgs& a) {
  SweepConfig c = a.common.load();
  if (a.masses) c.masses = *a.masses;
  if (a.offsets) c.r0_offsets = *a.offsets;
  if (a.ell_max) c.ell_max = *a.ell_max;
  if (a.decay_q) c.decay_q = *a.decay_q;
  if (a.r_max_factor) c.r_max_factor = *a.r_max_factor;
  c.validate();

  const auto rep = run_sweep(c, {a.common.threads(), !a.no_timing});
  const fs::path out = prepare_out_dir(a.out_dir);
  write_file(out / "sweep.csv", [&](std::ostream& os) { write_csv(rep, os); });
  write_file(out / "sweep.json", [&](std::ostream& os) { write_json(rep, os); });
  if (a.profile) {
    const auto vo = c.verify_options();
    for (const auto& r : rep.records) {
      if (!r.error.empty()) continue;
      const auto sol = integrate_mode(make_ivp({r.m, r.r0}, r.ell, 1.0), vo.r_max_factor * r.r0, vo.mode);
      write_file(out / profile_filename(r.m, r.r0, r.ell), [&](std::ostream& os) { write_profile(sol, os); });
    }
  }
  for (const auto& r : rep.records)
    if (!r.pass)
      std::cout << "FAIL m=" << format_double(r.m) << " r0=" << format_double(r.r0) << " ell=" << r.ell << ' '
                << to_string(r.cls) << (r.error.empty() ? "" : " (" + r.error + ")") << '\n';
  std::cout << rep.summary.passed << '/' << rep.summary.records << " modes non-decaying, " << rep.summary.undetermined
            << " undetermined; reports in " << out.string() << '\n';
  return rep.all_pass() ? kOk : kFailure;
}

struct SelftestArgs {
  CommonArgs common;
  bool mutate_dg4 = false;
  int refine = 0;
};

int cmd_selftest(const SelftestArgs& a) {
  const SweepConfig c = a.common.load();
  omp_set_num_threads(a.common.threads());
  const auto rep = run_selftest({c.seed, a.mutate_dg4, a.refine, Exec::Parallel});
  for (const auto& s : rep.suites)
    std::cout << status(s.pass) << ' ' << s.name << " measured=" << format_double(s.measured)
              << " tolerance=" << format_double(s.tolerance) << "  " << s.detail << '\n';
  return rep.all_pass() ? kOk : kFailure;
}

struct ModeArgs {
  double m = 1, r0 = 3, a0 = 1, decay_q = 0.75, r_max_factor = 1e6;
  int ell = 0;
  std::string out_dir = ".";
};

int cmd_mode(const ModeArgs& a) {
  SchwarzschildParams p;
  try {
    p = SchwarzschildParams::make(a.m, a.r0);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (a.ell < 0) throw ConfigError("--ell must be non-negative");
  SweepConfig c;
  c.decay_q = a.decay_q;
  c.r_max_factor = a.r_max_factor;
  c.validate();
  const auto vo = c.verify_options();
  const auto sol = integrate_mode(make_ivp(p, a.ell, a.a0), vo.r_max_factor * p.r0, vo.mode);
  const auto cls = classify(sol, c.decay_q, vo.classifier);
  const fs::path file = prepare_out_dir(a.out_dir) / profile_filename(p.m, p.r0, a.ell);
  write_file(file, [&](std::ostream& os) { write_profile(sol, os); });

  const std::size_t last = sol.radii.size() - 1;
  std::cout << "class=" << to_string(cls.kind) << " fitted_limit=" << format_double(cls.fitted_limit)
            << " fitted_exponent=" << format_double(cls.fitted_exponent) << " r_max=" << format_double(sol.r_max())
            << " final_Phi=" << format_double(sol.Phi(last)) << (sol.closed_form ? " branch=closed-form" : "")
            << "\nprofile " << file.string() << '\n';
  const bool bad = cls.kind == AsymptoticKind::Undetermined || (a.a0 != 0.0 && cls.kind == AsymptoticKind::DecaysToZero);
  return bad ? kFailure : kOk;
}

int cmd_match_round(double rho, double h) {
  RoundMatch mt;
  try {
    mt = match_round_data({rho, h});
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  std::cout << "m=" << format_double(mt.m) << " r0=" << format_double(mt.r0)
            << " horizon_degenerate=" << (mt.horizon_degenerate ? "true" : "false")
            << " valid=" << (mt.valid ? "true" : "false");
  if (mt.valid) {
    const auto back = bartnik_data(mt.params());
    std::cout << " round_trip_error=" << format_double(std::fmax(std::fabs(back.rho - rho), std::fabs(back.h - h)));
  }
  std::cout << '\n';
  return kOk;
}

struct GaugeArgs {
  CommonArgs common;
  double m = 1, r0 = 3, r_out = 6;
  int n_r = 13, band = 8, count = 5, L = 4;
};

int cmd_gauge_test(const GaugeArgs& a) {
  const SweepConfig c = a.common.load();
  SchwarzschildParams p;
  try {
    p = SchwarzschildParams::make(a.m, a.r0);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (!(a.r_out > a.r0) || a.n_r < 6 || a.band < a.L || a.count < 1)
    throw ConfigError("gauge-test: need r_out > r0, n_r >= 6, band >= L, count >= 1");
  omp_set_num_threads(a.common.threads());
  const ShellGrid grid{RadialGrid::uniform(p.r0, a.r_out, a.n_r), SphereGrid::for_band(a.band)};

  bool ok = true;
  for (int k = 0; k < a.count; ++k) {
    const RandomDeformation g(p, grid.sphere, c.seed + static_cast<std::uint64_t>(k), {.L = a.L});
    const auto res = apply_gauge(sample_deformation(g.sampler(), grid), build_gauge_field(g.sampler(), p, grid), p);
    ok = ok && res.ok;
    std::cout << status(res.ok) << " annihilation seed=" << c.seed + static_cast<std::uint64_t>(k)
              << " max_radial=" << format_double(res.max_radial) << '\n';
  }

  const auto Y = random_boundary_vanishing_field(p, c.seed);
  const auto XY = gauge_field_from_vector(Y, p, grid);
  const auto X = build_gauge_field(lie_derivative_sampler(Y, p, grid.sphere), p, grid);
  double err = 0, scale = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    err = std::fmax(err, std::fabs(X.x_perp[i] + XY.x_perp[i]));
    scale = std::fmax(scale, std::fabs(XY.x_perp[i]));
    for (std::size_t A = 0; A < 2; ++A) {
      err = std::fmax(err, std::fabs(X.x_tan[i][A] + XY.x_tan[i][A]));
      scale = std::fmax(scale, std::fabs(XY.x_tan[i][A]));
    }
  }
  const bool rec = err <= 1e-6 * scale;
  std::cout << status(rec) << " recovery of -Y relative_error=" << format_double(err / scale) << '\n';
  return ok && rec ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linearized static vacuum extensions on Schwarzschild exteriors: verification driver"};
  app.require_subcommand(1);

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "kernel-triviality sweep over (m, r0, ell)");
  add_common(sweep, sw.common, true);
  sweep->add_option("--out-dir,-o", sw.out_dir, "directory for sweep.csv, sweep.json and profiles");
  sweep->add_flag("--profile", sw.profile, "also write mode_m<m>_r0<r0>_l<ell>.csv for every record");
  sweep->add_flag("--no-timing", sw.no_timing, "write wall_time_s = 0 so reports are byte-reproducible");
  sweep->add_option("--masses", sw.masses, "override config masses");
  sweep->add_option("--r0-offsets", sw.offsets, "override config r0 offsets (r0 = 2 max(0,m) + offset)");
  sweep->add_option("--ell-max", sw.ell_max, "override config ell_max");
  sweep->add_option("--decay-q", sw.decay_q, "override config decay_q");
  sweep->add_option("--r-max-factor", sw.r_max_factor, "override config r_max_factor");

  SelftestArgs st;
  auto* selftest = app.add_subcommand("selftest", "harmonic, gauge and structure self-test suites");
  add_common(selftest, st.common, true);
  selftest->add_flag("--mutate-dg4", st.mutate_dg4, "flip the sign in one structure equation (must fail)");
  selftest->add_option("--refine", st.refine, "halve the radial spacing this many times")->check(CLI::Range(0, 3));

  ModeArgs md;
  auto* mode = app.add_subcommand("mode", "integrate and classify one harmonic mode, write its profile");
  mode->add_option("--m", md.m, "mass parameter")->capture_default_str();
  mode->add_option("--r0", md.r0, "inner radius")->capture_default_str();
  mode->add_option("--ell", md.ell, "harmonic degree")->capture_default_str();
  mode->add_option("--a0", md.a0, "boundary value a(r0)")->capture_default_str();
  mode->add_option("--decay-q", md.decay_q, "decay exponent threshold")->capture_default_str();
  mode->add_option("--r-max-factor", md.r_max_factor, "integrate to this multiple of r0")->capture_default_str();
  mode->add_option("--out-dir,-o", md.out_dir, "directory for the profile file");

  double rho = 1, h = 2;
  auto* match = app.add_subcommand("match-round", "Schwarzschild parameters for round data (rho, h)");
  match->set_help_flag("--help", "Print this help message and exit");
  match->add_option("--rho", rho, "area radius")->required();
  match->add_option("--h", h, "constant mean curvature")->required();

  GaugeArgs ga;
  auto* gauge = app.add_subcommand("gauge-test", "gauge annihilation and -Y recovery on random deformations");
  add_common(gauge, ga.common, true);
  gauge->add_option("--m", ga.m, "mass parameter")->capture_default_str();
  gauge->add_option("--r0", ga.r0, "inner radius")->capture_default_str();
  gauge->add_option("--r-out", ga.r_out, "outer radius of the shell")->capture_default_str();
  gauge->add_option("--n-r", ga.n_r, "radial nodes")->capture_default_str();
  gauge->add_option("--band", ga.band, "sphere grid band")->capture_default_str();
  gauge->add_option("--L", ga.L, "angular band of the random deformation")->capture_default_str();
  gauge->add_option("--count", ga.count, "number of random deformations")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*sweep) return cmd_sweep(sw);
    if (*selftest) return cmd_selftest(st);
    if (*mode) return cmd_mode(md);
    if (*match) return cmd_match_round(rho, h);
    if (*gauge) return cmd_gauge_test(ga);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kConfigError;
}
