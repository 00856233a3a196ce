// rdpp <subcommand> --config <path> [--out <dir>]

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rdpp/config.hpp"
#include "rdpp/error.hpp"
#include "rdpp/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Prey / active predator / dormant predator reaction-diffusion toolkit"};
  app.set_version_flag("--version", std::string(rdpp::kVersion));
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_dir;
  for (const char* name : {"simulate", "picard", "ode", "equilibria", "bifurcate", "dispersion", "invariant", "absorb"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "run configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (overrides [output] dir)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : rdpp::kConfigError;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    std::ifstream in(config_path, std::ios::binary);
    std::stringstream text;
    text << in.rdbuf();
    rdpp::RunConfig config = rdpp::parse_config(text.str(), rdpp::parse_subcommand(sub));
    if (!out_dir.empty()) config.output_dir = out_dir;
    return rdpp::run(config, config.output_dir, std::cerr);
  } catch (const rdpp::ConfigError& e) {
    std::cerr << config_path << ": " << e.what() << '\n';
    return rdpp::kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "rdpp: " << e.what() << '\n';
    return rdpp::exit_code_for(e);
  }
}
