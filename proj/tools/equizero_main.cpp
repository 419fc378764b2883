// equizero: batch experiments on random polynomial ensembles over compact
// sets (Szego kernels, expected zero densities, sphere scaling limits).
//
//   equizero run <config>       execute an experiment, write artifacts + manifest
//   equizero validate <config>  report violations without running
//   equizero version

#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "equizero/errors.hpp"
#include "equizero/experiments.hpp"

namespace {

int do_validate(const std::string& path) {
  const auto config = equizero::ExperimentConfig::from_file(path);
  const auto violations = equizero::validate(config);
  nlohmann::json j;
  j["config_path"] = path;
  j["violations"] = nlohmann::json::array();
  for (const auto& v : violations)
    j["violations"].push_back({{"field", v.field}, {"message", v.message}});
  std::cout << j.dump(2) << "\n";
  return violations.empty() ? 0 : 2;
}

int do_run(const std::string& path) {
  const auto config = equizero::ExperimentConfig::from_file(path);
  const auto manifest = equizero::run_experiment(config);
  std::cout << manifest.to_json() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical lab for equilibrium measures and random polynomial zeros"};
  app.require_subcommand(1);

  std::string run_path, validate_path;
  CLI::App* run_cmd = app.add_subcommand("run", "execute an experiment config");
  run_cmd->add_option("config", run_path, "config file path")->required();
  CLI::App* val_cmd = app.add_subcommand("validate", "check a config without running");
  val_cmd->add_option("config", validate_path, "config file path")->required();
  CLI::App* ver_cmd = app.add_subcommand("version", "print the tool version");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ver_cmd->parsed()) {
      std::cout << "equizero " << equizero::kToolVersion << "\n";
      return 0;
    }
    if (val_cmd->parsed()) return do_validate(validate_path);
    return do_run(run_path);
  } catch (const equizero::Error& e) {
    nlohmann::json err;
    err["error"] = {{"code", e.code()}, {"message", e.what()}};
    std::cout << err.dump(2) << "\n";
    return 1;
  } catch (const std::exception& e) {
    nlohmann::json err;
    err["error"] = {{"code", "internal"}, {"message", e.what()}};
    std::cout << err.dump(2) << "\n";
    return 1;
  }
}
