#include "stochsched/scenarios.hpp"

namespace stochsched {

ScenarioSet ScenarioSet::sample(const Instance& inst, int count, std::uint64_t seed) {
  ScenarioSet set;
  set.count_ = count;
  set.seed_ = seed;
  set.values_.resize(static_cast<std::size_t>(inst.project_count()));
  for (int p = 0; p < inst.project_count(); ++p) {
    const Project& pr = inst.project(p);
    auto& proj = set.values_[static_cast<std::size_t>(p)];
    proj.resize(pr.activities.size());
    for (std::size_t q = 0; q < pr.activities.size(); ++q) {
      proj[q].assign(pr.activities[q].size(), std::vector<double>(static_cast<std::size_t>(count)));
    }
  }
  Rng rng(seed);
  for (int n = 0; n < count; ++n) {
    for (int p = 0; p < inst.project_count(); ++p) {
      const Project& pr = inst.project(p);
      for (std::size_t q = 0; q < pr.activities.size(); ++q) {
        for (std::size_t i = 0; i < pr.activities[q].size(); ++i) {
          set.values_[static_cast<std::size_t>(p)][q][i][static_cast<std::size_t>(n)] =
              stochsched::sample(pr.activities[q][i].dist, rng);
        }
      }
    }
  }
  return set;
}

namespace {

template <typename Pick>
ScenarioSet single(const Instance& inst, Pick pick) {
  std::vector<std::vector<std::vector<std::vector<double>>>> values(
      static_cast<std::size_t>(inst.project_count()));
  for (int p = 0; p < inst.project_count(); ++p) {
    const Project& pr = inst.project(p);
    auto& proj = values[static_cast<std::size_t>(p)];
    proj.resize(pr.activities.size());
    for (std::size_t q = 0; q < pr.activities.size(); ++q) {
      for (const auto& sd : pr.activities[q]) proj[q].push_back({pick(sd.dist)});
    }
  }
  return ScenarioSet::from_values(1, 0, std::move(values));
}

}  // namespace

ScenarioSet ScenarioSet::mean(const Instance& inst) {
  return single(inst, [](const TriangularDist& d) { return d.mean(); });
}

ScenarioSet ScenarioSet::maximum(const Instance& inst) {
  return single(inst, [](const TriangularDist& d) { return d.max; });
}

ScenarioSet ScenarioSet::from_values(
    int count, std::uint64_t seed,
    std::vector<std::vector<std::vector<std::vector<double>>>> values) {
  ScenarioSet set;
  set.count_ = count;
  set.seed_ = seed;
  set.values_ = std::move(values);
  return set;
}

const std::vector<double>& ScenarioSet::values_for_skill(const Instance& inst, int p, int q,
                                                         int skill) const {
  static const std::vector<double> kEmpty;
  const auto& act = inst.project(p).activities[static_cast<std::size_t>(q - 1)];
  for (std::size_t i = 0; i < act.size(); ++i) {
    if (act[i].skill == skill) return values(p, q, static_cast<int>(i));
  }
  return kEmpty;
}

}  // namespace stochsched
