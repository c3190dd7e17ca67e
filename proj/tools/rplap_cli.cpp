#include <CLI11.hpp>
#include <iostream>

#include "rplap/commands.hpp"
#include "rplap/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Radial p-Laplace Gelfand problems on model manifolds"};
  std::string config;
  std::string out = ".";
  std::string command;
  app.add_option("--config", config, "JSON config file (or inline JSON text)")->required();
  app.add_option("--out", out, "output directory");
  app.add_option("--command", command, "pipeline to run")
      ->required()
      ->check(CLI::IsMember(rplap::command_names()));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : rplap::kExitConfig;
  }

  rplap::RunConfig cfg;
  try {
    cfg = rplap::load_config(config);
  } catch (const rplap::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return rplap::kExitConfig;
  }
  return rplap::run_command(command, cfg, out, std::cerr);
}
