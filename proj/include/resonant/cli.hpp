#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "resonant/models.hpp"
#include "resonant/verify.hpp"

namespace resonant::cli {

constexpr int kSchemaVersion = 1;

enum ExitCode { pass = 0, assertion_failure = 1, inadmissible_input = 2, config_error = 3 };

enum class Actuation { pea, sea };

/// A parsed job. Relative paths are resolved against the config file's directory.
struct JobConfig {
  Actuation actuation = Actuation::pea;
  DynamicsModel model;

  WaveformKind kind = WaveformKind::harmonic;
  double amplitude = 1.0;
  double omega = 1.0;
  double smoothing = 0.1;
  std::size_t samples = 2048;
  std::optional<std::filesystem::path> waveform_csv;

  /// "family" plus that family's parameters, or "profile" with a path.
  nlohmann::json design = nlohmann::json::object();

  /// One value for a constant penalty, N values for a sampled Q(t).
  std::vector<double> q{2.0};
  double eps_rel = 1e-3;

  IntegrationOptions integration;

  double sweep_lo = 0.2, sweep_hi = 1.5;
  std::size_t sweep_rows = 261;
  double sweep_k1 = 1.0;
  unsigned sweep_threads = 0;

  std::filesystem::path out_dir = "out";
  std::vector<std::string> formats{"csv", "json", "svg"};
  std::filesystem::path base_dir;
};

/// Throws ConfigError on a missing or unknown field, a wrong type, or a
/// value outside its documented range.
JobConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
JobConfig load_config(const std::filesystem::path& path);

/// Command-line overrides applied on top of a config.
struct Overrides {
  std::optional<std::filesystem::path> out;
  std::optional<std::vector<std::string>> formats;
  std::optional<double> tol;
  std::optional<long long> seed;
};

/// Each command writes its artifacts under the output directory, prints the
/// report to `log`, and returns an ExitCode.
int cmd_analyze(const JobConfig& cfg, const Overrides& ov, std::ostream& log);
int cmd_design(const JobConfig& cfg, const Overrides& ov, std::ostream& log);
int cmd_verify(const JobConfig& cfg, const Overrides& ov, std::ostream& log);
int cmd_sweep(const JobConfig& cfg, const Overrides& ov, std::ostream& log);

/// Full front end: argument parsing, dispatch and error-to-exit-code mapping.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace resonant::cli
