#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "erkn/integrator.hpp"
#include "erkn/problems.hpp"
#include "erkn/tableau.hpp"

namespace erkn {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind { kConverge, kEfficiency, kEnergy, kStability, kVerify };

std::string to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(std::string_view s);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kConverge;
  std::vector<std::string> methods;
  std::string problem = "duffing";
  std::map<std::string, double> problem_params;
  std::vector<double> h;       // strictly decreasing; energy uses h.front()
  std::vector<double> t_end;   // one value, or the energy schedule
  std::string h_source;        // preset name or "explicit"
  std::filesystem::path out_dir = "out";
  double stage_tol = 1e-14;
  int max_iters = 50;
  bool timing = true;  // false writes cpu_seconds = 0
  // stability
  double v_lo = 0.125, v_hi = 50.0, z_lo = -50.0, z_hi = 50.0;
  int nv = 400, nz = 400;
  // verify
  std::vector<double> v_samples{0.0, 0.1, 1.0, 10.0, 100.0, 400.0};
  double omega = 2.0;
  std::vector<double> decay_h{0.4, 0.2, 0.1, 0.05};

  /// Throws ConfigError on unknown names or invalid schedules.
  void validate() const;
};

/// Step sizes of the named schedule for a problem. Presets: "converge",
/// "efficiency", "energy"; for sine-gordon also "error" (= converge) and
/// "cpu" (= efficiency).
std::vector<double> h_preset(std::string_view problem, std::string_view preset);

/// Defaults following the experiment protocol for (kind, problem).
ExperimentConfig default_config(ExperimentKind kind, std::string_view problem);

/// Parses a JSON config. Required keys: "methods", "problem". Optional:
/// "experiment", "problem_params", "h" (list or preset name), "t_end" (number
/// or list), "out_dir", "stage_tol", "max_iters", "timing", "V_range",
/// "z_range", "nV", "nz", "v_samples", "omega", "decay_h". `kind` overrides
/// "experiment". Throws ConfigError (parse errors carry the line number).
ExperimentConfig parse_config(std::string_view text,
                              std::optional<ExperimentKind> kind = std::nullopt);
ExperimentConfig load_config(const std::filesystem::path& path,
                             std::optional<ExperimentKind> kind = std::nullopt);

/// Method list expansion: "all", "serkn" and "rkn" are accepted as groups.
std::vector<std::string> expand_methods(const std::vector<std::string>& names);

struct ConvergeRow {
  std::string method;
  double h = 0.0;
  std::int64_t nfev = 0;
  double ge = 0.0;
  double cpu_seconds = 0.0;
  std::string status = "ok";
};

struct EnergyRow {
  std::string method;
  double t_end = 0.0;
  double geh = 0.0;
  std::string status = "ok";
};

struct VerifyRow {
  std::string method;
  std::string check_id;
  double value = 0.0;
  double threshold = 0.0;
  std::string pass;  // "true", "false" or "n/a" for informational rows
};

struct RunResult {
  std::vector<std::filesystem::path> files;
  bool verify_failed = false;
  std::vector<ConvergeRow> converge;
  std::vector<EnergyRow> energy;
  std::vector<VerifyRow> verify;
};

/// Max-norm error in q at common sample times against the closed-form
/// reference or, without one, a SERKN3s4(1) run at h_min / 20. Samples are
/// every h_max when every h divides it, otherwise only the final time.
std::vector<ConvergeRow> run_convergence(const ExperimentConfig& cfg);
std::vector<EnergyRow> run_energy(const ExperimentConfig& cfg);
std::vector<VerifyRow> run_verify(const ExperimentConfig& cfg);

/// Runs the experiment and writes its CSVs plus run.json into cfg.out_dir.
RunResult run_experiment(const ExperimentConfig& cfg);

std::string config_to_json(const ExperimentConfig& cfg);

}  // namespace erkn
