#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "stochsched/distributions.hpp"

namespace stochsched {

/// Raised for inputs whose shape is wrong (as opposed to merely infeasible).
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when instance data violates a model invariant.
class InvalidInstance : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SkillDemand {
  int skill = 0;
  TriangularDist dist;

  friend bool operator==(const SkillDemand&, const SkillDemand&) = default;
};

/// A project is a chain of `duration` activities, one period each. Periods
/// are 1-based; activities are 1-based in the accessors below.
struct Project {
  int id = 0;
  int duration = 1;
  int earliest_start = 1;
  int latest_start = 1;
  /// activities[q - 1] lists the skills with nonzero demand in activity q.
  std::vector<std::vector<SkillDemand>> activities;

  int window() const { return latest_start - earliest_start; }
  int latest_finish() const { return latest_start + duration - 1; }
  int activity_earliest(int q) const { return earliest_start + q - 1; }
  int activity_latest(int q) const { return latest_start + q - 1; }

  /// Demand of skill s in activity q, or the zero distribution.
  TriangularDist demand(int q, int skill) const;
  /// Distinct skills demanded anywhere in the project, ascending.
  std::vector<int> skills() const;

  friend bool operator==(const Project&, const Project&) = default;
};

struct Resource {
  int id = 0;
  /// Held skills ascending, with efficiency[i] belonging to skills[i].
  std::vector<int> skills;
  std::vector<double> efficiency;
  /// capacity[t - 1] is the real work time available in period t.
  std::vector<double> capacity;

  /// Efficiency in skill s, 0 if the skill is not held.
  double eta(int skill) const;
  double capacity_at(int period) const { return capacity[static_cast<std::size_t>(period - 1)]; }

  friend bool operator==(const Resource&, const Resource&) = default;
};

struct InstanceData {
  std::string name;
  int horizon = 1;
  int skill_count = 1;
  std::vector<Project> projects;
  std::vector<Resource> resources;
  std::vector<double> external_cost;
  std::uint64_t rng_seed = 0;
  /// Generator parameters this instance was produced from (provenance only).
  std::map<std::string, double> generator_params;

  friend bool operator==(const InstanceData&, const InstanceData&) = default;
};

/// Immutable validated problem data.
class Instance {
 public:
  explicit Instance(InstanceData data);

  const InstanceData& data() const { return data_; }
  const std::string& name() const { return data_.name; }
  int horizon() const { return data_.horizon; }
  int skill_count() const { return data_.skill_count; }
  int project_count() const { return static_cast<int>(data_.projects.size()); }
  int resource_count() const { return static_cast<int>(data_.resources.size()); }
  const std::vector<Project>& projects() const { return data_.projects; }
  const Project& project(int p) const { return data_.projects[static_cast<std::size_t>(p)]; }
  const std::vector<Resource>& resources() const { return data_.resources; }
  const Resource& resource(int k) const { return data_.resources[static_cast<std::size_t>(k)]; }
  double external_cost(int s) const { return data_.external_cost[static_cast<std::size_t>(s)]; }
  double eta(int skill, int k) const { return eta_[index(skill, k)]; }
  double capacity(int k, int period) const { return resource(k).capacity_at(period); }
  /// K_s: resources holding skill s, ascending.
  const std::vector<int>& resources_with_skill(int s) const {
    return holders_[static_cast<std::size_t>(s)];
  }
  /// Sum over all resources and periods of the capacity.
  double total_capacity() const;
  /// Sum of all work-package means.
  double total_expected_demand() const;

 private:
  std::size_t index(int skill, int k) const {
    return static_cast<std::size_t>(skill) * data_.resources.size() + static_cast<std::size_t>(k);
  }

  InstanceData data_;
  std::vector<double> eta_;
  std::vector<std::vector<int>> holders_;
};

/// Activity-to-period assignment per project (row p lists the periods of
/// activities 1..d_p).
struct Schedule {
  std::vector<std::vector<int>> periods;

  const std::vector<int>& row(int p) const { return periods[static_cast<std::size_t>(p)]; }
  /// Activity (1-based) of project p in period t, or 0.
  int activity_at(int p, int period) const;

  friend bool operator==(const Schedule&, const Schedule&) = default;
  friend auto operator<=>(const Schedule&, const Schedule&) = default;
};

struct ScheduleViolation {
  enum class Kind { BeforeEarliest, AfterLatest, NotIncreasing };
  int project = 0;
  int activity = 0;
  Kind kind = Kind::AfterLatest;
  int period = 0;
  int bound = 0;

  std::string describe() const;
};

struct ScheduleCheck {
  std::vector<ScheduleViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks time windows and activity order. Throws StructuralError if the
/// schedule has the wrong number of rows or a row has the wrong length.
ScheduleCheck validate_schedule(const Instance& inst, const Schedule& sched);

/// All feasible period vectors for one project, lexicographically ordered.
std::vector<std::vector<int>> enumerate_schedules(const Project& project);

/// Earliest schedule (every project at ES_p, activities back to back).
Schedule earliest_schedule(const Instance& inst);

/// Distribution of project p's skill-s demand scheduled in period t, or the
/// zero distribution.
TriangularDist scheduled_demand(const Instance& inst, const Schedule& sched, int p, int skill,
                                int period);

struct StaffingEntry {
  int project = 0;
  int period = 0;
  int skill = 0;
  int resource = 0;
  double work = 0.0;  // effective work time

  friend bool operator==(const StaffingEntry&, const StaffingEntry&) = default;
};

/// Sparse effective-work allocation x[p][t][s][k]. Entries are kept sorted
/// by (p, t, s, k) with no duplicates and no zeros.
class StaffingPlan {
 public:
  StaffingPlan() = default;
  /// Sorts, merges duplicate cells and drops zeros.
  static StaffingPlan from_entries(std::vector<StaffingEntry> entries);

  /// Adds `work` to the (p, t, s, k) cell.
  void add(int p, int period, int skill, int k, double work);
  double get(int p, int period, int skill, int k) const;
  const std::vector<StaffingEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  friend bool operator==(const StaffingPlan&, const StaffingPlan&) = default;

 private:
  std::vector<StaffingEntry> entries_;
};

struct PlanViolation {
  enum class Kind { Negative, SkillNotHeld, OutsideProjectSpan, OverCapacity, BadIndex };
  Kind kind = Kind::Negative;
  int project = -1;
  int period = 0;
  int skill = -1;
  int resource = -1;
  double amount = 0.0;

  std::string describe() const;
};

/// Relative capacity tolerance for floating-point feasibility checks.
inline constexpr double kCapacityTolerance = 1e-9;

/// Checks nonnegativity, skill eligibility and per-(k, t) capacity.
std::vector<PlanViolation> validate_plan(const Instance& inst, const StaffingPlan& plan);

}  // namespace stochsched
