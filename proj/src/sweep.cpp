#include "schwarzstatic/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>

namespace schwarzstatic {

using ojson = nlohmann::ordered_json;

namespace {

double positive(const char* key, double v) {
  if (!(std::isfinite(v) && v > 0.0)) throw ConfigError(std::string(key) + " must be a positive number");
  return v;
}

double number(const nlohmann::json& j, const char* key) {
  if (!j.is_number()) throw ConfigError(std::string(key) + " must be a number");
  return j.get<double>();
}

std::vector<double> number_list(const nlohmann::json& j, const char* key) {
  if (!j.is_array()) throw ConfigError(std::string(key) + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(number(v, key));
  return out;
}

void dump(const ojson& j, std::ostream& os, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' '), close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case ojson::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad << ojson(it.key()).dump() << ": ";
        dump(it.value(), os, indent + 2);
      }
      os << '\n' << close << '}';
      return;
    }
    case ojson::value_t::array: {
      // numeric arrays stay on one line
      const bool flat = std::all_of(j.begin(), j.end(), [](const ojson& v) { return v.is_primitive(); });
      os << '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << (flat ? ", " : ",");
        if (!flat) os << '\n' << pad;
        first = false;
        dump(v, os, indent + 2);
      }
      if (!flat && !j.empty()) os << '\n' << close;
      os << ']';
      return;
    }
    case ojson::value_t::number_float: {
      const double x = j.get<double>();
      os << (std::isfinite(x) ? format_double(x) : "null");
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace

void SweepConfig::validate() const {
  if (masses.empty()) throw ConfigError("masses must not be empty");
  for (double m : masses)
    if (!std::isfinite(m)) throw ConfigError("masses must be finite");
  if (r0_offsets.empty()) throw ConfigError("r0_offsets must not be empty");
  for (double d : r0_offsets) positive("r0_offsets entries", d);
  // a(r) ~ r^l overflows double beyond this at r_max_factor 1e6
  if (ell_max < 0 || ell_max > 40) throw ConfigError("ell_max must be in [0, 40]");
  if (!(decay_q > 0.5 && decay_q < 1.0)) throw ConfigError("decay_q must lie in (1/2, 1)");
  if (!(std::isfinite(r_max_factor) && r_max_factor >= 1e2))
    throw ConfigError("r_max_factor must be at least 100 (the classifier fits the last decade)");
  positive("tolerances.ode_rtol", tolerances.ode_rtol);
  positive("tolerances.ode_atol", tolerances.ode_atol);
  positive("tolerances.eps_dec", tolerances.eps_dec);
  if (!(positive("tolerances.k_div", tolerances.k_div) > 1.0)) throw ConfigError("tolerances.k_div must exceed 1");
  if (!(positive("tolerances.cauchy_rtol", tolerances.cauchy_rtol) < 1.0))
    throw ConfigError("tolerances.cauchy_rtol must be below 1");
}

VerifyOptions SweepConfig::verify_options() const {
  VerifyOptions v;
  v.r_max_factor = r_max_factor;
  v.mode.ode = {tolerances.ode_rtol, tolerances.ode_atol};
  v.classifier = {tolerances.eps_dec, tolerances.k_div, tolerances.cauchy_rtol};
  return v;
}

SweepConfig config_from_json(const nlohmann::json& j, SweepConfig c) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const auto& v = it.value();
    if (k == "masses") {
      c.masses = number_list(v, "masses");
    } else if (k == "r0_offsets") {
      c.r0_offsets = number_list(v, "r0_offsets");
    } else if (k == "ell_max") {
      if (!v.is_number_integer()) throw ConfigError("ell_max must be an integer");
      c.ell_max = v.get<int>();
    } else if (k == "decay_q") {
      c.decay_q = number(v, "decay_q");
    } else if (k == "r_max_factor") {
      c.r_max_factor = number(v, "r_max_factor");
    } else if (k == "seed") {
      if (!v.is_number_unsigned()) throw ConfigError("seed must be a non-negative integer");
      c.seed = v.get<std::uint64_t>();
    } else if (k == "tolerances") {
      if (!v.is_object()) throw ConfigError("tolerances must be an object");
      for (auto t = v.begin(); t != v.end(); ++t) {
        const std::string& tk = t.key();
        double* slot = tk == "ode_rtol"      ? &c.tolerances.ode_rtol
                       : tk == "ode_atol"    ? &c.tolerances.ode_atol
                       : tk == "eps_dec"     ? &c.tolerances.eps_dec
                       : tk == "k_div"       ? &c.tolerances.k_div
                       : tk == "cauchy_rtol" ? &c.tolerances.cauchy_rtol
                                             : nullptr;
        if (!slot) throw ConfigError("unknown key tolerances." + tk);
        *slot = number(t.value(), tk.c_str());
      }
    } else {
      throw ConfigError("unknown config key " + k);
    }
  }
  c.validate();
  return c;
}

SweepConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  try {
    return config_from_json(j);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

nlohmann::json to_json(const SweepConfig& c) {
  return {{"masses", c.masses},
          {"r0_offsets", c.r0_offsets},
          {"ell_max", c.ell_max},
          {"decay_q", c.decay_q},
          {"r_max_factor", c.r_max_factor},
          {"tolerances",
           {{"ode_rtol", c.tolerances.ode_rtol},
            {"ode_atol", c.tolerances.ode_atol},
            {"eps_dec", c.tolerances.eps_dec},
            {"k_div", c.tolerances.k_div},
            {"cauchy_rtol", c.tolerances.cauchy_rtol}}},
          {"seed", c.seed}};
}

SweepReport run_sweep(const SweepConfig& config, const SweepRunOptions& opts) {
  config.validate();
  SweepReport rep;
  rep.config = config;
  const std::size_t n_ell = static_cast<std::size_t>(config.ell_max + 1);
  const std::size_t n_off = config.r0_offsets.size();
  const std::size_t n = config.task_count();
  rep.records.resize(n);
  const VerifyOptions vo = config.verify_options();

#pragma omp parallel for num_threads(std::max(opts.jobs, 1)) schedule(dynamic, 1)
  for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(n); ++t) {
    const std::size_t i = static_cast<std::size_t>(t);
    const double m = config.masses[i / (n_off * n_ell)];
    const double delta = config.r0_offsets[(i / n_ell) % n_off];
    VerdictRecord& r = rep.records[i];
    r.m = m;
    r.r0 = 2.0 * std::max(0.0, m) + delta;
    r.ell = static_cast<int>(i % n_ell);
    const auto start = std::chrono::steady_clock::now();
    try {
      const auto v = verify_kernel_trivial({m, r.r0}, r.ell, config.decay_q, vo);
      r.cls = v.cls.kind;
      r.fitted_limit = v.cls.fitted_limit;
      r.fitted_exponent = v.cls.fitted_exponent;
      r.r_max = v.r_max;
      r.pass = v.pass;
    } catch (const std::exception& e) {
      r.cls = AsymptoticKind::Undetermined;
      r.pass = false;
      r.error = e.what();
    }
    if (opts.timing) r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }

  rep.summary.records = n;
  for (const auto& r : rep.records) {
    if (r.pass)
      ++rep.summary.passed;
    else
      ++rep.summary.failed;
    if (r.cls == AsymptoticKind::Undetermined) ++rep.summary.undetermined;
  }
  return rep;
}

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_csv(const SweepReport& r, std::ostream& os) {
  os << "m,r0,ell,class,fitted_limit,fitted_exponent,r_max,pass,wall_time_s\n";
  for (const auto& v : r.records)
    os << format_double(v.m) << ',' << format_double(v.r0) << ',' << v.ell << ',' << to_string(v.cls) << ','
       << format_double(v.fitted_limit) << ',' << format_double(v.fitted_exponent) << ','
       << format_double(v.r_max) << ',' << (v.pass ? "true" : "false") << ',' << format_double(v.wall_time_s)
       << '\n';
}

void write_json(const SweepReport& r, std::ostream& os) {
  ojson records = ojson::array();
  for (const auto& v : r.records) {
    ojson rec{{"m", v.m},
              {"r0", v.r0},
              {"ell", v.ell},
              {"class", std::string(to_string(v.cls))},
              {"fitted_limit", v.fitted_limit},
              {"fitted_exponent", v.fitted_exponent},
              {"r_max", v.r_max},
              {"pass", v.pass},
              {"wall_time_s", v.wall_time_s}};
    if (!v.error.empty()) rec["error"] = v.error;
    records.push_back(std::move(rec));
  }
  const ojson doc{{"schema_version", "1"},
                  {"config", ojson::parse(to_json(r.config).dump())},
                  {"summary",
                   {{"records", r.summary.records},
                    {"passed", r.summary.passed},
                    {"failed", r.summary.failed},
                    {"undetermined", r.summary.undetermined}}},
                  {"records", std::move(records)}};
  dump(doc, os, 0);
  os << '\n';
}

std::string profile_filename(double m, double r0, int ell) {
  return "mode_m" + format_double(m) + "_r0" + format_double(r0) + "_l" + std::to_string(ell) + ".csv";
}

void write_profile(const ModeSolution& sol, std::ostream& os) {
  os << "r,a,da,A,phi,Phi\n";
  for (std::size_t i = 0; i < sol.radii.size(); ++i)
    os << format_double(sol.radii[i]) << ',' << format_double(sol.a[i]) << ',' << format_double(sol.da[i]) << ','
       << format_double(sol.A(i)) << ',' << format_double(sol.phi(i)) << ',' << format_double(sol.Phi(i)) << '\n';
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  body(out);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace schwarzstatic
