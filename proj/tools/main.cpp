#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "polar_iga/runner.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isogeometric Poisson solver on polar domains with corners"};
  app.require_subcommand(1);

  std::string config_path, problem, out_path;

  CLI::App* run = app.add_subcommand("run", "Run a configured convergence study");
  run->add_option("config", config_path, "Config file (.json or .toml)")->required();

  CLI::App* exp = app.add_subcommand("export-geometry", "Write a problem geometry as patch JSON");
  exp->add_option("problem", problem, "pacman | lshape")->required();
  exp->add_option("path", out_path, "Output file")->required();

  CLI::App* info = app.add_subcommand("mesh-info", "Mesh diagnostics for a config");
  info->add_option("config", config_path, "Config file (.json or .toml)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const polar_iga::RunConfig config = polar_iga::load_run_config(config_path);
      polar_iga::run_experiment(config, std::cout);
    } else if (exp->parsed()) {
      polar_iga::export_geometry(problem, out_path);
    } else if (info->parsed()) {
      const polar_iga::RunConfig config = polar_iga::load_run_config(config_path);
      polar_iga::mesh_info(config, std::cout);
    }
  } catch (const polar_iga::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
