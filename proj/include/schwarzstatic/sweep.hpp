#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "schwarzstatic/modes.hpp"

namespace schwarzstatic {

/// Invalid or unreadable configuration (CLI exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepTolerances {
  double ode_rtol = 1e-10;
  double ode_atol = 1e-12;
  double eps_dec = 1e-4;
  double k_div = 1e3;
  double cauchy_rtol = 1e-3;
};

/// Config file schema (all keys optional, unknown keys rejected):
///   masses: [number], r0_offsets: [number > 0], ell_max: int >= 0,
///   decay_q: number in (1/2, 1), r_max_factor: number >= 1e4,
///   tolerances: {ode_rtol, ode_atol, eps_dec, k_div, cauchy_rtol}, seed: uint64
struct SweepConfig {
  std::vector<double> masses{-1.0, -0.25, 0.25, 1.0};
  std::vector<double> r0_offsets{0.1, 1.0, 10.0};
  int ell_max = 8;
  double decay_q = 0.75;
  double r_max_factor = 1e6;
  SweepTolerances tolerances;
  std::uint64_t seed = 20240607;

  /// Throws ConfigError.
  void validate() const;
  VerifyOptions verify_options() const;
  std::size_t task_count() const { return masses.size() * r0_offsets.size() * static_cast<std::size_t>(ell_max + 1); }
};

/// Throws ConfigError on unknown keys, wrong types or invalid values.
SweepConfig config_from_json(const nlohmann::json& j, SweepConfig base = {});
SweepConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const SweepConfig& c);

struct VerdictRecord {
  double m = 0, r0 = 0;
  int ell = 0;
  AsymptoticKind cls = AsymptoticKind::Undetermined;
  double fitted_limit = 0, fitted_exponent = 0, r_max = 0;
  bool pass = false;
  double wall_time_s = 0;
  std::string error;  ///< set when the integrator failed; the record then does not pass
};

struct SweepSummary {
  std::size_t records = 0, passed = 0, failed = 0, undetermined = 0;
};

struct SweepReport {
  SweepConfig config;
  std::vector<VerdictRecord> records;  ///< task order: masses, then offsets, then ell
  SweepSummary summary;
  bool all_pass() const { return summary.failed == 0; }
};

struct SweepRunOptions {
  int jobs = 1;
  bool timing = true;  ///< false writes wall_time_s = 0 for byte-identical reports
};

SweepReport run_sweep(const SweepConfig& config, const SweepRunOptions& opts = {});

/// Shortest round-trip decimal form.
std::string format_double(double x);

void write_csv(const SweepReport& r, std::ostream& os);
void write_json(const SweepReport& r, std::ostream& os);

std::string profile_filename(double m, double r0, int ell);
/// Columns r,a,da,A,phi,Phi at every solution sample.
void write_profile(const ModeSolution& sol, std::ostream& os);

/// Writes to a file; throws std::runtime_error naming the path on failure.
void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body);

}  // namespace schwarzstatic
