#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "equizero/domain.hpp"

namespace equizero {

// Structured config value: key = value with nested { } blocks and [ ] lists.
struct ConfigValue {
  enum class Type { Integer, Real, Boolean, String, Array, Table };

  Type type = Type::Table;
  std::int64_t int_v = 0;
  double real_v = 0.0;
  bool bool_v = false;
  std::string str_v;
  std::vector<ConfigValue> array_v;
  std::map<std::string, ConfigValue> table_v;

  std::int64_t as_int(const std::string& context) const;
  double as_real(const std::string& context) const;
  bool as_bool(const std::string& context) const;
  const std::string& as_string(const std::string& context) const;

  bool has(const std::string& key) const;
  const ConfigValue& at(const std::string& key) const;
  const ConfigValue* find(const std::string& key) const;

  nlohmann::json to_json() const;
};

ConfigValue parse_config(const std::string& text);
ConfigValue parse_config_file(const std::filesystem::path& path);

DomainModel domain_from_config(const ConfigValue& block);
RegionSpec region_from_config(const ConfigValue& block);
ConfigValue domain_to_config(const DomainModel& model);
ConfigValue region_to_config(const RegionSpec& region);

enum class ExperimentKind { Converge, Sandwich, Zeros, Density, Scaling, Bm, SuFlat };

std::string experiment_kind_name(ExperimentKind k);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Converge;
  std::optional<DomainModel> domain;
  std::optional<RegionSpec> region;
  std::vector<int> N_list;
  int m = 1;
  int trials = 0;
  bool seed_present = false;
  std::uint64_t seed = 0;
  int points = 100;            // random evaluation points (sandwich, su-flat)
  double radius = 3.0;         // sampling radius
  double epsilon = 0.1;        // BM discount
  int sup_resolution = 0;      // BM sup grid (0: derived from N)
  int k = 0;                   // density codimension (0: k = m)
  double step = 0.0;           // FD step (0: default rule)
  double u_max = 5.0;
  int u_points = 101;
  std::vector<double> radii;   // converge grid override
  int angles = 8;
  double r_lo = 0.0, r_hi = 0.0;
  int r_points = 0;
  int threads = 0;             // 0: default_thread_count()
  std::filesystem::path output_dir;
  ConfigValue raw;             // config echo for the manifest

  static ExperimentConfig from_value(const ConfigValue& root);
  static ExperimentConfig from_file(const std::filesystem::path& path);
};

struct Violation {
  std::string field;
  std::string message;
};

// Empty iff run() would accept the config.  Caps: kernel-evaluation
// experiments N <= 500/200/60 for m = 1/2/3; Gram-factorization paths
// (bm) N <= 60/25/15.
std::vector<Violation> validate(const ExperimentConfig& config);

}  // namespace equizero
