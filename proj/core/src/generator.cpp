#include "stochsched/generator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace stochsched {

namespace {

void check(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("generator config: " + what);
}

/// `count` distinct values of `pool`, in draw order.
std::vector<int> draw_without_replacement(std::vector<int> pool, int count, Rng& rng) {
  std::vector<int> out;
  for (int i = 0; i < count; ++i) {
    const int j = uniform_int(rng, i, static_cast<int>(pool.size()) - 1);
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    out.push_back(pool[static_cast<std::size_t>(i)]);
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

void GeneratorConfig::validate() const {
  check(projects >= 1, "projects must be >= 1");
  check(duration >= 1, "duration must be >= 1");
  check(horizon >= 1, "horizon must be >= 1");
  check(window >= 0, "window must be >= 0");
  check(duration + window <= horizon, "duration + window exceeds the horizon");
  check(skills >= 1, "skills must be >= 1");
  check(skills_per_activity >= 1, "skills per activity must be >= 1");
  check(skills_per_project >= 1, "skills per project must be >= 1");
  check(resources >= 1, "resources must be >= 1");
  check(skills_per_resource >= 1 && skills_per_resource <= skills,
        "skills per resource must be in [1, skills]");
  check(capacity >= 0.0, "capacity must be >= 0");
  check(utilization > 0.0, "utilization must be > 0");
  check(demand_cv >= 0.0, "demand cv must be >= 0");
  check(efficiency.valid() && efficiency.lower > 0.0, "invalid efficiency distribution");
  check(cost_rate.valid() && cost_rate.lower > 0.0, "invalid cost-rate distribution");
  check(c_min > 0.0 && c_min <= c_max, "need 0 < c_min <= c_max");
  if (skew) check(1.0 - 5.0 * (c_max - c_min) / 12.0 > 0.0, "skewed support too wide");
}

GeneratorConfig preset(const std::string& name) {
  GeneratorConfig c;
  if (name == "basic") {
    c.name = "basic";
    return c;
  }
  if (name == "tiny") {
    c.projects = 2;
    c.duration = 2;
    c.horizon = 4;
    c.window = 1;
    c.skills = 2;
    c.skills_per_activity = 1;
    c.skills_per_project = 2;
    c.resources = 2;
    c.skills_per_resource = 1;
    c.capacity = 10.0;
    c.utilization = 1.2;
    c.name = "tiny";
    return c;
  }
  if (name == "small") {
    c.projects = 3;
    c.duration = 3;
    c.horizon = 6;
    c.window = 1;
    c.skills = 3;
    c.skills_per_activity = 2;
    c.skills_per_project = 3;
    c.resources = 3;
    c.skills_per_resource = 2;
    c.capacity = 10.0;
    c.name = "small";
    return c;
  }
  throw std::invalid_argument("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() { return {"basic", "tiny", "small"}; }

Instance generate(const GeneratorConfig& cfg) {
  cfg.validate();
  // one stream per component, so changing one parameter leaves the others' draws alone
  Rng start_rng(instance_seed(cfg.seed, 0));
  Rng skill_rng(instance_seed(cfg.seed, 1));
  Rng resource_rng(instance_seed(cfg.seed, 2));
  Rng cost_rng(instance_seed(cfg.seed, 3));
  Rng demand_rng(instance_seed(cfg.seed, 4));
  InstanceData d;
  d.name = cfg.name;
  d.horizon = cfg.horizon;
  d.skill_count = cfg.skills;
  d.rng_seed = cfg.seed;

  std::vector<int> all_skills(static_cast<std::size_t>(cfg.skills));
  for (int s = 0; s < cfg.skills; ++s) all_skills[static_cast<std::size_t>(s)] = s;

  // projects: windows and skill structure
  const int per_project = std::min(cfg.skills_per_project, cfg.skills);
  const int per_activity = std::min(cfg.skills_per_activity, per_project);
  for (int p = 0; p < cfg.projects; ++p) {
    Project pr;
    pr.id = p;
    pr.duration = cfg.duration;
    pr.earliest_start = uniform_int(start_rng, 1, cfg.horizon - cfg.window - cfg.duration + 1);
    pr.latest_start = pr.earliest_start + cfg.window;
    auto own = draw_without_replacement(all_skills, per_project, skill_rng);
    std::sort(own.begin(), own.end());
    for (int q = 0; q < cfg.duration; ++q) {
      auto act = draw_without_replacement(own, per_activity, skill_rng);
      std::sort(act.begin(), act.end());
      std::vector<SkillDemand> demands;
      for (int s : act) demands.push_back({s, TriangularDist::zero()});
      pr.activities.push_back(std::move(demands));
    }
    d.projects.push_back(std::move(pr));
  }

  for (int k = 0; k < cfg.resources; ++k) {
    Resource r;
    r.id = k;
    r.skills = draw_without_replacement(all_skills, cfg.skills_per_resource, resource_rng);
    std::sort(r.skills.begin(), r.skills.end());
    for (std::size_t i = 0; i < r.skills.size(); ++i) r.efficiency.push_back(sample(cfg.efficiency, resource_rng));
    r.capacity.assign(static_cast<std::size_t>(cfg.horizon), cfg.capacity);
    d.resources.push_back(std::move(r));
  }
  for (int s = 0; s < cfg.skills; ++s) d.external_cost.push_back(sample(cfg.cost_rate, cost_rng));

  // expected demands: equal share of rho * capacity, then per-package noise
  std::size_t packages = 0;
  for (const auto& pr : d.projects) {
    for (const auto& act : pr.activities) packages += act.size();
  }
  const double total_capacity = cfg.capacity * cfg.resources * cfg.horizon;
  const double init = cfg.utilization * total_capacity / static_cast<double>(packages);
  const double width = cfg.c_max - cfg.c_min;
  const double skew_lo = 1.0 - 5.0 * width / 12.0;
  for (auto& pr : d.projects) {
    for (auto& act : pr.activities) {
      for (auto& sd : act) {
        double mean = init;
        if (cfg.demand_cv > 0.0) mean = init + cfg.demand_cv * init * standard_normal(demand_rng);
        mean = std::max(mean, 1e-6);
        if (cfg.skew) {
          sd.dist = {mean * skew_lo, mean * (skew_lo + 0.25 * width), mean * (skew_lo + width)};
        } else {
          sd.dist = {mean * cfg.c_min, mean, mean * cfg.c_max};
        }
      }
    }
  }

  d.generator_params = {
      {"projects", cfg.projects},
      {"duration", cfg.duration},
      {"horizon", cfg.horizon},
      {"window", cfg.window},
      {"skills", cfg.skills},
      {"skills_per_activity", cfg.skills_per_activity},
      {"skills_per_project", cfg.skills_per_project},
      {"resources", cfg.resources},
      {"skills_per_resource", cfg.skills_per_resource},
      {"capacity", cfg.capacity},
      {"utilization", cfg.utilization},
      {"demand_cv", cfg.demand_cv},
      {"efficiency_lower", cfg.efficiency.lower},
      {"efficiency_upper", cfg.efficiency.upper},
      {"efficiency_mean", cfg.efficiency.mean},
      {"efficiency_stdev", cfg.efficiency.stdev},
      {"cost_lower", cfg.cost_rate.lower},
      {"cost_upper", cfg.cost_rate.upper},
      {"cost_mean", cfg.cost_rate.mean},
      {"cost_stdev", cfg.cost_rate.stdev},
      {"c_min", cfg.c_min},
      {"c_max", cfg.c_max},
      {"skew", cfg.skew ? 1.0 : 0.0},
  };
  return Instance(std::move(d));
}

std::string UncertaintyLevel::id() const { return "u" + fmt(c_min) + "-" + fmt(c_max); }

std::vector<UncertaintyLevel> uncertainty_levels() {
  return {{0.9, 1.1}, {0.7, 1.3}, {0.5, 1.5}, {0.2, 1.8}};
}

std::vector<SuiteStructure> suite_structures(const GeneratorConfig& base, const SuiteSpec& spec) {
  std::vector<SuiteStructure> out{{"base", base}};
  for (int v : spec.projects) {
    if (v == base.projects) continue;
    auto c = base;
    c.projects = v;
    out.push_back({"P" + std::to_string(v), c});
  }
  for (int v : spec.windows) {
    if (v == base.window) continue;
    auto c = base;
    c.window = v;
    out.push_back({"gamma" + std::to_string(v), c});
  }
  for (int v : spec.skills_per_resource) {
    if (v == base.skills_per_resource) continue;
    auto c = base;
    c.skills_per_resource = v;
    out.push_back({"Sk" + std::to_string(v), c});
  }
  for (double v : spec.utilization) {
    if (v == base.utilization) continue;
    auto c = base;
    c.utilization = v;
    out.push_back({"rho" + fmt(v), c});
  }
  return out;
}

std::uint64_t instance_seed(std::uint64_t base, int index) {
  // splitmix64 of the pair
  std::uint64_t z = base * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(index) + 1;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<SuiteInstance> suite_configs(const GeneratorConfig& base, const SuiteSpec& spec) {
  std::vector<SuiteInstance> out;
  for (const auto& st : suite_structures(base, spec)) {
    for (int i = 0; i < spec.instances; ++i) {
      for (const auto& lvl : spec.levels) {
        SuiteInstance si;
        si.structure = st.id;
        si.level = lvl.id();
        si.index = i;
        si.seed = instance_seed(base.seed, i);
        si.config = st.config;
        si.config.seed = si.seed;
        si.config.c_min = lvl.c_min;
        si.config.c_max = lvl.c_max;
        char idx[16];
        std::snprintf(idx, sizeof idx, "i%02d", i);
        si.config.name = st.id + "/" + idx + "/" + si.level;
        out.push_back(std::move(si));
      }
    }
  }
  return out;
}

}  // namespace stochsched
