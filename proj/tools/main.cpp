#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "cli_commands.hpp"

int main(int argc, char** argv) {
  using namespace carleman::cli;

  CLI::App app{"Carleman-regularized Maxwell Cauchy-problem reconstruction"};
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1, 1);

  std::string config_path;
  std::optional<std::string> out_path, seed, n_max, resolution, noise, mesh_out;
  std::vector<std::string> sets;
  app.add_option("-c,--config", config_path, "key = value configuration file");
  app.add_option("-o,--out", out_path, "output file (- for stdout); sets output.path");
  app.add_option("--seed", seed, "sets run.seed");
  app.add_option("--n-max", n_max, "sets run.n_max");
  app.add_option("--resolution", resolution, "sets mesh.resolution");
  app.add_option("--noise", noise, "sets run.noise");
  app.add_option("--mesh-out", mesh_out, "write the boundary mesh as CSV; sets output.mesh");
  app.add_option("--set", sets, "override any key: --set key=value (repeatable)");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"verify", "run the numerical self-checks"},
      {"stratton-chu", "reproduce the field from full Cauchy data"},
      {"reconstruct", "Carleman reconstruction from data on S"},
      {"expand-cache", "precompute expansion coefficients as JSON"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  std::vector<std::pair<std::string, std::string>> overrides;
  auto flag = [&](const char* key, const std::optional<std::string>& v) {
    if (v) overrides.emplace_back(key, *v);
  };
  flag("output.path", out_path);
  flag("run.seed", seed);
  flag("run.n_max", n_max);
  flag("mesh.resolution", resolution);
  flag("run.noise", noise);
  flag("output.mesh", mesh_out);
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      std::cerr << "config error: --set expects key=value, got '" << s << "'\n";
      return kExitConfigError;
    }
    overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }

  ExperimentConfig cfg;
  try {
    cfg = load_config(config_path, overrides);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
  return run_command(app.get_subcommands().front()->get_name(), cfg, std::cout, std::cerr);
}
