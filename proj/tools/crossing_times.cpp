// crossing-times: run or sweep a declarative crossing-probability experiment.
//
// Exit codes: 0 success, 2 invalid configuration or arguments,
// 3 numerical failure, 1 I/O or other errors.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "experiment.hpp"

namespace {

int run_command(const std::string& command, const std::string& config_path,
                const std::optional<std::string>& out_override,
                const std::optional<std::uint64_t>& seed_override,
                const std::optional<unsigned>& threads_override, bool timing) {
  namespace ex = crossing::experiment;
  const bool sweep = command == "sweep";
  const auto cfg = ex::load_config(config_path, sweep, {seed_override, threads_override, out_override});

  const auto result = ex::execute(cfg, sweep, timing);

  const std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  ex::write_csv(dir / "results.csv", result.rows);
  ex::write_manifest(dir / "manifest.json", cfg, command, config_path, result.rows.size());
  std::cerr << "crossing-times: wrote " << result.rows.size() << " rows to "
            << (dir / "results.csv").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Crossing and no-crossing probabilities over a time interval"};
  app.set_version_flag("--version", std::string(CROSSING_VERSION));
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  bool timing = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "Experiment configuration (INI)")->required();
    sub->add_option("--out", out, "Output directory (overrides [run] out)");
    sub->add_option("--seed", seed, "RNG seed (overrides [run] seed)");
    sub->add_option("--threads", threads, "Worker threads");
    sub->add_flag("--timing", timing, "Fill the wallclock column (breaks byte reproducibility)");
  };
  auto* run = app.add_subcommand("run", "Evaluate the selected methods at the configured tau");
  auto* sweep = app.add_subcommand("sweep", "Evaluate over the Cartesian product of [sweep] axes");
  add_common(run);
  add_common(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string command = run->parsed() ? "run" : "sweep";
  try {
    return run_command(command, config_path, out, seed, threads, timing);
  } catch (const crossing::ConfigError& e) {
    std::cerr << "crossing-times: invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const crossing::NumericalError& e) {
    std::cerr << "crossing-times: numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const crossing::DomainError& e) {
    std::cerr << "crossing-times: numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "crossing-times: error: " << e.what() << "\n";
    return 1;
  }
}
