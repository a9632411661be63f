#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "muskat/core.hpp"
#include "muskat/diagnostics.hpp"
#include "muskat/integrator.hpp"

namespace muskat {

enum class ScenarioId { BackwardSeed, ForwardRerun, ConjTurnover, LemmaVerify, DeltaTilt };

std::string to_string(ScenarioId id);
/// Throws ConfigError for an unknown id.
ScenarioId parse_scenario(std::string_view text);

/// How the smoothing threshold is compared with the Fourier coefficients.
/// Raw: against the unnormalized DFT sums |X_k| (so eps/n on the 1/n
/// scale). Unit: against c_k = X_k / n directly.
enum class ThresholdScale { Raw, Unit };

struct RunConfig {
  ScenarioId scenario = ScenarioId::BackwardSeed;
  std::size_t n = 2048;
  double density_jump = 1.0;
  StepControl step{};
  double eps = 1e-6;
  ThresholdScale eps_scale = ThresholdScale::Raw;
  std::size_t smooth_every = 1;
  /// Final time; scenario default when unset (see default_t_final).
  std::optional<double> t_final{};
  double snapshot_every = 2e-3;
  double slope_tol = 1e-10;
  /// FORWARD_RERUN input snapshot; when unset the backward seed run is
  /// performed first into <out>/backward.
  std::optional<std::filesystem::path> input{};
  double delta = 1e-2;
  double lemma_R = 18.0;
  double quad_tol = 1e-10;
  std::filesystem::path out = "out";

  /// Threshold on the 1/n coefficient scale.
  double unit_eps() const;
  double default_t_final() const;
  double resolved_t_final() const { return t_final.value_or(default_t_final()); }

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Parses the YAML schema documented in the README. Unknown keys and
/// malformed values raise ConfigError with the source line.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

enum class RunStatus { Ok, NumericalFailure, Error };

std::string to_string(RunStatus status);

struct RunManifest {
  RunStatus status = RunStatus::Ok;
  std::string message;
  std::string config_json;  // echo of the resolved config
  std::string version;
  double wall_seconds = 0.0;
  std::vector<Event> events;
  std::string timeline;  // regime pattern, empty when not computed
  std::vector<std::string> files;
  /// Scenario-specific results as a JSON object.
  std::string summary_json = "{}";

  std::string to_json() const;
};

std::string config_to_json(const RunConfig& config);

/// Runs one scenario, writing snapshots, events, timeline, norms and
/// manifest.json under config.out. Numerical failures do not throw; they
/// are reported through the manifest status. The manifest is written even on
/// failure.
RunManifest run_scenario(const RunConfig& config);

/// CSV with a "# t = <time>" comment, a header and one row per node:
/// alpha,z1,z2,dz1,dz2,p1 at 17 significant digits.
void export_snapshot(const SampledCurve& curve, double time,
                     const std::filesystem::path& path, const FilterSpec& filter = {});

struct ImportedSnapshot {
  SampledCurve curve;
  std::optional<double> time;
};

/// Reads a file written by export_snapshot. Files without the p1 column use
/// z1 - alpha.
ImportedSnapshot import_snapshot(const std::filesystem::path& path);

std::string library_version();

}  // namespace muskat
