#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stochsched/distributions.hpp"
#include "stochsched/model.hpp"

namespace stochsched {

struct GeneratorConfig {
  int projects = 10;
  int duration = 6;
  int horizon = 12;
  int window = 1;  // gamma = LS_p - ES_p
  int skills = 10;
  int skills_per_activity = 2;
  int skills_per_project = 3;  // upper bound on |S^(p)|
  int resources = 10;
  int skills_per_resource = 2;
  double capacity = 20.0;
  double utilization = 1.0;
  double demand_cv = 0.1;
  TruncatedNormal efficiency{0.5, 1.5, 1.0, 0.25};
  TruncatedNormal cost_rate{600.0, 1000.0, 800.0, 100.0};
  double c_min = 0.7;
  double c_max = 1.3;
  /// Right-skewed triangles with mean E: support length c_max - c_min, mode at
  /// a quarter of the support.
  bool skew = false;
  std::uint64_t seed = 1;
  std::string name;

  /// Throws std::invalid_argument describing the first problem found.
  void validate() const;
};

/// Named configurations: "basic", "tiny", "small".
GeneratorConfig preset(const std::string& name);
std::vector<std::string> preset_names();

Instance generate(const GeneratorConfig& cfg);

/// Uncertainty interval of one level.
struct UncertaintyLevel {
  double c_min = 0.7;
  double c_max = 1.3;
  std::string id() const;
};

std::vector<UncertaintyLevel> uncertainty_levels();

/// One-parameter-at-a-time variations of a base configuration.
struct SuiteSpec {
  std::vector<int> projects{10, 15, 20, 25};
  std::vector<int> windows{0, 1, 2, 3};
  std::vector<int> skills_per_resource{1, 2, 4, 6, 8, 10};
  std::vector<double> utilization{0.8, 1.0, 1.2};
  std::vector<UncertaintyLevel> levels = uncertainty_levels();
  int instances = 10;
};

struct SuiteStructure {
  std::string id;  // "base", "P15", "gamma0", "Sk4", "rho0.8", ...
  GeneratorConfig config;
};

/// Base structure followed by every non-base value of each swept parameter.
std::vector<SuiteStructure> suite_structures(const GeneratorConfig& base, const SuiteSpec& spec);

struct SuiteInstance {
  std::string structure;
  std::string level;
  int index = 0;
  std::uint64_t seed = 0;
  GeneratorConfig config;
};

/// Configurations of every (structure, instance, level); the per-instance
/// seed depends only on the base seed and the instance index.
std::vector<SuiteInstance> suite_configs(const GeneratorConfig& base, const SuiteSpec& spec);

std::uint64_t instance_seed(std::uint64_t base, int index);

}  // namespace stochsched
