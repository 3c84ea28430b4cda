// simulate: runs coined-walk experiments from a config file or a built-in preset.
#include <chrono>
#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "coinwalk/experiments.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitGuard = 2;

}  // namespace

int main(int argc, char** argv) {
  using namespace coinwalk;

  CLI::App app{"Coined quantum walk driven by quantum baker maps"};
  std::string config_path;
  std::string preset_name;
  std::string out_dir = "out";
  int threads = 1;
  bool print_config = false;
  app.add_option("--config", config_path, "Config file with one [section] per run");
  app.add_option("--preset", preset_name, "Built-in run appended after the config runs")
      ->check(CLI::IsMember(preset_names()));
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--threads", threads, "Worker threads for the sector loop")
      ->check(CLI::Range(1, 256))
      ->capture_default_str();
  app.add_flag("--print-config", print_config, "Print the resolved runs and exit");
  app.set_version_flag("--version", std::string(kToolVersion));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (config_path.empty() && preset_name.empty()) {
      throw ConfigError("nothing to run: pass --config <path> and/or --preset <name>");
    }
    std::vector<ExperimentConfig> runs;
    if (!config_path.empty()) runs = parse_config_file(config_path);
    if (!preset_name.empty()) {
      for (auto& c : preset(preset_name)) runs.push_back(std::move(c));
    }
    if (runs.empty()) throw ConfigError("config '" + config_path + "' defines no runs");
    for (std::size_t i = 0; i < runs.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (runs[i].name == runs[j].name) {
          throw ConfigError("run name '" + runs[i].name + "' appears twice");
        }
      }
      runs[i].validate();
    }
    if (print_config) {
      for (const auto& c : runs) std::cout << to_config_text(c) << '\n';
      return 0;
    }
    ensure_output_dir(out_dir);

    const auto start = std::chrono::steady_clock::now();
    std::vector<RunResult> results;
    for (const auto& c : runs) {
      std::fprintf(stderr, "running %s (%zu members x %zu coins, t_max=%ld)\n", c.name.c_str(),
                   c.members.size(), c.coins.size(), c.t_max);
      results.push_back(run_experiment(c, threads));
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const auto manifest = emit_csv(results, out_dir, wall);
    std::fprintf(stderr, "wrote %zu files to %s in %.2f s\n", manifest.files.size(),
                 out_dir.c_str(), wall);
    return 0;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const GuardViolation& e) {
    std::fprintf(stderr, "numerical guard violated: %s\n", e.what());
    return kExitGuard;
  } catch (const InvalidArgument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
}
