#include "pslab/config.hpp"
#include "pslab/errors.hpp"
#include "pslab/run.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Patterson-Sullivan numerics for discrete subgroups of SL(d,R)"};
  app.set_version_flag("--version", pslab::kVersion);
  app.require_subcommand(1);

  std::string configPath;
  std::string outDir;
  int workers = 0;
  for (const auto& name : pslab::knownCommands()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", configPath, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", outDir, "output directory (default: the config's output field)");
    sub->add_option("--workers", workers, "worker threads (overrides the config)")->check(CLI::PositiveNumber);
  }
  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  std::string target = outDir;
  try {
    pslab::RunConfig config = pslab::loadConfig(configPath);
    if (config.command != command) {
      throw pslab::ConfigError("command", "config is for '" + config.command + "', not '" + command + "'");
    }
    if (target.empty()) target = config.output;
    const auto outcome = pslab::runConfig(config, target, workers > 0 ? workers : config.workers);
    for (const auto& f : outcome.files) std::cout << (std::filesystem::path(target) / f).string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    const auto record = pslab::errorRecord(e);
    std::cerr << record.dump() << "\n";
    if (!target.empty()) {
      std::error_code ec;
      std::filesystem::create_directories(target, ec);
      std::ofstream(std::filesystem::path(target) / "error.json") << record.dump(2) << "\n";
    }
    return pslab::exitCodeFor(e);
  }
}
