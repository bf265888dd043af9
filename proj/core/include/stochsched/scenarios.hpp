#pragma once

#include <cstdint>
#include <vector>

#include "stochsched/model.hpp"

namespace stochsched {

/// N sampled realizations of every work package. values(p, q, i) holds the
/// N draws for the i-th demand entry of activity q of project p.
class ScenarioSet {
 public:
  ScenarioSet() = default;

  /// Draws `count` scenarios scenario by scenario, packages in (p, q, entry)
  /// order.
  static ScenarioSet sample(const Instance& inst, int count, std::uint64_t seed);
  /// A single scenario at every package mean.
  static ScenarioSet mean(const Instance& inst);
  /// A single scenario at every package maximum.
  static ScenarioSet maximum(const Instance& inst);
  /// Wraps explicit draws laid out as values[p][q - 1][entry][n].
  static ScenarioSet from_values(int count, std::uint64_t seed,
                                 std::vector<std::vector<std::vector<std::vector<double>>>> values);

  int count() const { return count_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<double>& values(int p, int q, int entry) const {
    return values_[static_cast<std::size_t>(p)][static_cast<std::size_t>(q - 1)]
                  [static_cast<std::size_t>(entry)];
  }
  /// Draws of skill s in activity q of project p, empty if no demand.
  const std::vector<double>& values_for_skill(const Instance& inst, int p, int q, int skill) const;

 private:
  int count_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<std::vector<std::vector<std::vector<double>>>> values_;
};

}  // namespace stochsched
