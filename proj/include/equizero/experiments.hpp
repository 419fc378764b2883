#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "equizero/config.hpp"

namespace equizero {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunManifest {
  nlohmann::json config_echo;
  std::string version = kToolVersion;
  struct Stage {
    std::string name;
    double wall_ms;
  };
  std::vector<Stage> stages;
  struct Output {
    std::string name;
    std::string sha256;
    std::uint64_t bytes;
  };
  std::vector<Output> outputs;
  nlohmann::json metrics;

  std::string to_json() const;
};

// Executes the named experiment, writes its artifacts atomically into
// config.output_dir and manifest.json last.  Throws ValidationError when
// validate(config) is non-empty.
RunManifest run_experiment(const ExperimentConfig& config);

}  // namespace equizero
