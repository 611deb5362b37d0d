#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "dplab/config.hpp"
#include "dplab/errors.hpp"
#include "dplab/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"dplab - numerical laboratory for double-phase variational problems"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir = "out";
  std::int64_t seed_override = -1;
  std::vector<std::string> suite_override;

  CLI::App* run = app.add_subcommand("run", "execute the scenario of a config file");
  run->add_option("config", config_path, "configuration file")->required();
  run->add_option("--output", output_dir, "output directory (default: out)");
  run->add_option("--seed", seed_override, "override the configured seed");
  run->add_option("--suite", suite_override, "verify scenario: suites to run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : dplab::kExitConfigError;
  }

  try {
    dplab::RunConfig cfg = dplab::parse_config_file(config_path);
    if (seed_override >= 0) {
      cfg.seed = static_cast<std::uint64_t>(seed_override);
      cfg.ledger.seed = cfg.seed;
    }
    if (!suite_override.empty()) cfg.suites = suite_override;
    return dplab::run_scenario(cfg, output_dir);
  } catch (const dplab::config_error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return dplab::kExitConfigError;
  } catch (const dplab::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return dplab::kExitNumericError;
  }
}
