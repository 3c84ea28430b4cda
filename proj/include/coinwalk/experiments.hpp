#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coinwalk/wigner.hpp"

namespace coinwalk {

inline constexpr std::string_view kToolVersion = "1.0.0";

/// Largest ring for which the Wigner experiment evaluates dense 2M x 2M grids.
inline constexpr std::size_t kMaxWignerRing = 64;

enum class ExperimentKind { Entropy, Variance, Wigner };

std::string_view experiment_name(ExperimentKind kind);

/// Named initial coin. Names: zero, plus_i, plus_3pi4, or custom:a_re:a_im:b_re:b_im
/// (a per-qubit state applied to every qubit).
struct CoinChoice {
  std::string name;
  QubitState qubit;
};

CoinChoice parse_coin(std::string_view token);

/// One run section of a config file.
struct ExperimentConfig {
  std::string name = "run";
  ExperimentKind kind = ExperimentKind::Entropy;
  std::size_t ring_size = 0;
  std::vector<CoinChoice> coins;
  std::vector<BakerSpec> members;
  FloquetAngles angles;
  long t_max = 0;
  std::optional<long> stride;
  std::vector<Observable> observables;
  std::optional<TimeWindow> saturation_window;
  std::optional<TimeWindow> slope_window;
  std::optional<TimeWindow> growth_window;
  std::optional<TimeWindow> late_window;
  std::vector<long> grid_times;

  /// Throws ConfigError naming the violated invariant (GuardViolation for the Wigner ring cap).
  void validate() const;

  /// Recorded times: multiples of `stride`, or every step up to t = 200 and every fifth after.
  std::vector<long> record_times() const;
};

/// Parses "[name]" sections of "key = value" lines; '#' starts a comment.
std::vector<ExperimentConfig> parse_config(std::istream& in);
std::vector<ExperimentConfig> parse_config_text(std::string_view text);
std::vector<ExperimentConfig> parse_config_file(const std::filesystem::path& path);

std::string to_config_text(const ExperimentConfig& config);

/// Built-in runs: fig3 .. fig7.
std::vector<ExperimentConfig> preset(std::string_view name);
std::vector<std::string> preset_names();

/// Everything recorded for one (member, coin) pair.
struct MemberResult {
  BakerSpec member;
  std::string coin;
  std::vector<ObservableSeries> series;
  std::optional<Saturation> saturation;
  std::optional<double> slope;
  std::optional<double> growth;
  std::optional<double> late_distance;
  std::vector<WignerGrid> grids;

  std::string label() const { return member.label() + "_" + coin; }
  const ObservableSeries& find(Observable o) const;
};

struct RunResult {
  ExperimentConfig config;
  std::vector<MemberResult> members;
};

RunResult run_entropy_experiment(const ExperimentConfig& config, int threads = 1);
RunResult run_variance_experiment(const ExperimentConfig& config, int threads = 1);
RunResult run_wigner_experiment(const ExperimentConfig& config, int threads = 1);
RunResult run_experiment(const ExperimentConfig& config, int threads = 1);

struct RunManifest {
  std::vector<std::string> config_text;
  std::string tool_version{kToolVersion};
  double wall_seconds = 0.0;
  std::vector<std::filesystem::path> files;
};

/// Creates `dir` if needed and checks that a file can be written there.
void ensure_output_dir(const std::filesystem::path& dir);

/// Writes one "t,value" CSV per (member, coin, observable), a summary CSV per run, any
/// exported Wigner grids, and manifest.json. Returns the manifest.
RunManifest emit_csv(const std::vector<RunResult>& runs, const std::filesystem::path& dir,
                     double wall_seconds);

void write_series_csv(std::ostream& out, const ObservableSeries& series);

}  // namespace coinwalk
