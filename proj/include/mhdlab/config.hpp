#pragma once

#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mhdlab/diophantine.hpp"
#include "mhdlab/errors.hpp"
#include "mhdlab/grid.hpp"

namespace mhdlab {

enum class ExperimentKind {
  check_diophantine,
  classify_spectrum,
  verify_kernels,
  linear_decay,
  nonlinear_run,
};

inline const char* kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::check_diophantine: return "check-diophantine";
    case ExperimentKind::classify_spectrum: return "classify-spectrum";
    case ExperimentKind::verify_kernels: return "verify-kernels";
    case ExperimentKind::linear_decay: return "linear-decay";
    default: return "nonlinear-run";
  }
}

inline ExperimentKind kind_from_name(const std::string& s) {
  for (ExperimentKind k :
       {ExperimentKind::check_diophantine, ExperimentKind::classify_spectrum,
        ExperimentKind::verify_kernels, ExperimentKind::linear_decay,
        ExperimentKind::nonlinear_run}) {
    if (s == kind_name(k)) return k;
  }
  throw config_error("unknown experiment kind: " + s);
}

// Flat key=value experiment description.  Every key has a documented
// default; unknown keys are rejected.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::check_diophantine;

  // grid
  int n = 2;
  int N = 128;

  // background field: components, or the token "golden"
  std::string b_tilde_spec = "golden";
  Vec b_tilde{0.0, 0.0, 0.0};  // resolved from b_tilde_spec
  double r = 1.1;
  int K_cert = 64;

  // dissipation case
  double mu = 0.0;
  double nu = 1.0;

  // solver
  double dt = 1e-3;
  double T = 1.0;
  int record_stride = 100;
  double amplitude = 1e-2;
  double shell_max = 4.0;
  double cfl_guard = 0.8;
  bool project_b = true;

  // diagnostics
  std::vector<double> alpha = {2.0};
  double lyapunov_s = -1.0;  // < 0 means "use 2r"
  double fit_t_min = -1.0;   // < 0 means "last half-decade of log(1+t)"
  double fit_t_max = -1.0;

  // diophantine / kernel sweeps
  int K_max = 1000;
  std::vector<double> times = {0.0, 0.01, 0.1, 1.0, 10.0, 100.0};

  // linear-decay experiment
  double spectrum_s = 5.0;
  int band = 512;
  int samples = 61;

  std::uint64_t seed = 12345;
  std::string out = "out";
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw config_error("malformed number '" + item + "' for key '" + key + "'");
    }
  }
  if (out.empty()) throw config_error("empty list for key '" + key + "'");
  return out;
}

inline double parse_number(const std::string& key, const std::string& value) {
  auto v = parse_list(key, value);
  if (v.size() != 1) throw config_error("expected a single number for key '" + key + "'");
  return v[0];
}

inline long parse_integer(const std::string& key, const std::string& value) {
  double v = parse_number(key, value);
  long i = long(v);
  if (double(i) != v) throw config_error("expected an integer for key '" + key + "'");
  return i;
}

inline bool parse_flag(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  throw config_error("expected true/false for key '" + key + "'");
}

}  // namespace detail

inline void validate_config(ExperimentConfig& cfg) {
  if (cfg.n != 2 && cfg.n != 3) throw config_error("n must be 2 or 3");
  if (cfg.N < 8 || cfg.N % 2 != 0) throw config_error("N must be even and >= 8");
  if (cfg.b_tilde_spec == "golden") {
    cfg.b_tilde = golden_vector(cfg.n);
  } else {
    auto comps = detail::parse_list("b_tilde", cfg.b_tilde_spec);
    if (int(comps.size()) != cfg.n)
      throw config_error("b_tilde needs exactly n components or the token 'golden'");
    cfg.b_tilde = Vec{0.0, 0.0, 0.0};
    for (int i = 0; i < cfg.n; ++i) cfg.b_tilde[std::size_t(i)] = comps[std::size_t(i)];
  }
  if (cfg.r <= cfg.n - 1)
    throw config_error("r must exceed n - 1 (Diophantine exponent range), got " +
                       std::to_string(cfg.r));
  bool case01 = cfg.mu == 0.0 && cfg.nu == 1.0;
  bool case10 = cfg.mu == 1.0 && cfg.nu == 0.0;
  if (!case01 && !case10) throw config_error("(mu, nu) must be (0,1) or (1,0)");
  if (cfg.dt <= 0.0) throw config_error("dt must be positive");
  if (cfg.T < 0.0) throw config_error("T must be nonnegative");
  if (cfg.record_stride < 1) throw config_error("record_stride must be >= 1");
  if (cfg.K_max < 1) throw config_error("K_max must be >= 1");
  if (cfg.K_cert < 1) throw config_error("K_cert must be >= 1");
  if (cfg.band < 1) throw config_error("band must be >= 1");
  if (cfg.samples < 2) throw config_error("samples must be >= 2");
  if (cfg.amplitude <= 0.0) throw config_error("amplitude must be positive");
  if (cfg.spectrum_s < 0.0) throw config_error("spectrum_s must be nonnegative");
  for (double a : cfg.alpha) {
    if (a < 0.0) throw config_error("alpha entries must be nonnegative");
  }
  for (double t : cfg.times) {
    if (t < 0.0) throw config_error("times entries must be nonnegative");
  }
  if (cfg.lyapunov_s < 0.0) cfg.lyapunov_s = 2.0 * cfg.r;
}

// Parse "key = value" lines ('#' starts a comment).  The kind argument comes
// from the CLI subcommand; a kind key inside the file must agree with it.
inline ExperimentConfig parse_config(std::istream& in, ExperimentKind kind) {
  ExperimentConfig cfg;
  cfg.kind = kind;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("line " + std::to_string(lineno) + ": expected key=value");
    std::string key = detail::trim(line.substr(0, eq));
    std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw config_error("line " + std::to_string(lineno) + ": empty key or value");

    if (key == "kind") {
      if (kind_from_name(value) != kind)
        throw config_error("config kind '" + value + "' does not match subcommand '" +
                           std::string(kind_name(kind)) + "'");
    } else if (key == "n") {
      cfg.n = int(detail::parse_integer(key, value));
    } else if (key == "N") {
      cfg.N = int(detail::parse_integer(key, value));
    } else if (key == "b_tilde") {
      cfg.b_tilde_spec = value;
    } else if (key == "r") {
      cfg.r = detail::parse_number(key, value);
    } else if (key == "K_cert") {
      cfg.K_cert = int(detail::parse_integer(key, value));
    } else if (key == "mu") {
      cfg.mu = detail::parse_number(key, value);
    } else if (key == "nu") {
      cfg.nu = detail::parse_number(key, value);
    } else if (key == "dt") {
      cfg.dt = detail::parse_number(key, value);
    } else if (key == "T") {
      cfg.T = detail::parse_number(key, value);
    } else if (key == "record_stride") {
      cfg.record_stride = int(detail::parse_integer(key, value));
    } else if (key == "amplitude") {
      cfg.amplitude = detail::parse_number(key, value);
    } else if (key == "shell_max") {
      cfg.shell_max = detail::parse_number(key, value);
    } else if (key == "cfl_guard") {
      cfg.cfl_guard = detail::parse_number(key, value);
    } else if (key == "project_b") {
      cfg.project_b = detail::parse_flag(key, value);
    } else if (key == "alpha") {
      cfg.alpha = detail::parse_list(key, value);
    } else if (key == "lyapunov_s") {
      cfg.lyapunov_s = detail::parse_number(key, value);
    } else if (key == "fit_t_min") {
      cfg.fit_t_min = detail::parse_number(key, value);
    } else if (key == "fit_t_max") {
      cfg.fit_t_max = detail::parse_number(key, value);
    } else if (key == "K_max") {
      cfg.K_max = int(detail::parse_integer(key, value));
    } else if (key == "times") {
      cfg.times = detail::parse_list(key, value);
    } else if (key == "spectrum_s") {
      cfg.spectrum_s = detail::parse_number(key, value);
    } else if (key == "band") {
      cfg.band = int(detail::parse_integer(key, value));
    } else if (key == "samples") {
      cfg.samples = int(detail::parse_integer(key, value));
    } else if (key == "seed") {
      cfg.seed = std::uint64_t(detail::parse_integer(key, value));
    } else if (key == "out") {
      cfg.out = value;
    } else {
      throw config_error("unknown config key '" + key + "'");
    }
  }
  validate_config(cfg);
  return cfg;
}

inline ExperimentConfig parse_config_file(const std::filesystem::path& path,
                                          ExperimentKind kind) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot read config file: " + path.string());
  return parse_config(in, kind);
}

// The effective configuration, echoed verbatim-parseable for reruns.
inline std::string config_echo(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "kind = " << kind_name(cfg.kind) << "\n";
  os << "n = " << cfg.n << "\n";
  os << "N = " << cfg.N << "\n";
  os << "b_tilde = ";
  if (cfg.b_tilde_spec == "golden") {
    os << "golden";
  } else {
    for (int i = 0; i < cfg.n; ++i) os << (i ? "," : "") << cfg.b_tilde[std::size_t(i)];
  }
  os << "\n";
  os << "r = " << cfg.r << "\n";
  os << "K_cert = " << cfg.K_cert << "\n";
  os << "mu = " << cfg.mu << "\n";
  os << "nu = " << cfg.nu << "\n";
  os << "dt = " << cfg.dt << "\n";
  os << "T = " << cfg.T << "\n";
  os << "record_stride = " << cfg.record_stride << "\n";
  os << "amplitude = " << cfg.amplitude << "\n";
  os << "shell_max = " << cfg.shell_max << "\n";
  os << "cfl_guard = " << cfg.cfl_guard << "\n";
  os << "project_b = " << (cfg.project_b ? "true" : "false") << "\n";
  os << "alpha = ";
  for (std::size_t i = 0; i < cfg.alpha.size(); ++i) os << (i ? "," : "") << cfg.alpha[i];
  os << "\n";
  os << "lyapunov_s = " << cfg.lyapunov_s << "\n";
  if (cfg.fit_t_min >= 0.0) os << "fit_t_min = " << cfg.fit_t_min << "\n";
  if (cfg.fit_t_max >= 0.0) os << "fit_t_max = " << cfg.fit_t_max << "\n";
  os << "K_max = " << cfg.K_max << "\n";
  os << "times = ";
  for (std::size_t i = 0; i < cfg.times.size(); ++i) os << (i ? "," : "") << cfg.times[i];
  os << "\n";
  os << "spectrum_s = " << cfg.spectrum_s << "\n";
  os << "band = " << cfg.band << "\n";
  os << "samples = " << cfg.samples << "\n";
  os << "seed = " << cfg.seed << "\n";
  os << "out = " << cfg.out << "\n";
  return os.str();
}

}  // namespace mhdlab
