#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "stochsched/model.hpp"
#include "stochsched/scenarios.hpp"

namespace stochsched {

/// Rejected evaluation input; what() lists every violation found.
class InfeasibleInput : public std::runtime_error {
 public:
  explicit InfeasibleInput(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// One scheduled work package: the (p, s) demand of the activity that the
/// schedule places in period t.
struct DemandTerm {
  int project = 0;
  int period = 0;
  int skill = 0;
  int activity = 0;  // 1-based
  TriangularDist dist;
  double cost_rate = 0.0;
};

/// The (p, t, s)-keyed aggregation shared by all objectives. Terms are
/// ordered by (p, t, s).
class ScheduledDemand {
 public:
  ScheduledDemand(const Instance& inst, const Schedule& sched);

  const std::vector<DemandTerm>& terms() const { return terms_; }
  /// Index of the (p, t, s) term, or -1 when nothing is scheduled there.
  int find(int p, int period, int skill) const {
    return lookup_[key(p, period, skill)];
  }
  /// Sum over k of x_ptsk for every term.
  std::vector<double> coverage(const StaffingPlan& plan) const;

 private:
  std::size_t key(int p, int period, int skill) const {
    return (static_cast<std::size_t>(p) * static_cast<std::size_t>(horizon_ + 1) +
            static_cast<std::size_t>(period)) *
               static_cast<std::size_t>(skills_) +
           static_cast<std::size_t>(skill);
  }

  int horizon_ = 0;
  int skills_ = 0;
  std::vector<DemandTerm> terms_;
  std::vector<int> lookup_;
};

/// Throws InfeasibleInput unless the schedule and plan are feasible.
void require_feasible(const Instance& inst, const Schedule& sched, const StaffingPlan& plan);

/// E[G(z, x, xi)]: sum of c_s * E[(D'_pst - sum_k x_ptsk)^+], exact.
double expected_external_cost(const Instance& inst, const Schedule& sched,
                              const StaffingPlan& plan);

/// Deterministic surrogate with every demand replaced by its mean.
double ev_cost(const Instance& inst, const Schedule& sched, const StaffingPlan& plan);

/// Average external cost over the given scenarios. Throws on an empty set.
double saa_cost(const Instance& inst, const Schedule& sched, const StaffingPlan& plan,
                const ScenarioSet& scenarios);

/// Exact expected external cost per term (same order as ScheduledDemand).
std::vector<double> term_costs(const Instance& inst, const ScheduledDemand& demand,
                               const StaffingPlan& plan);

/// Expected external cost of each period 1..T (index 0 unused).
std::vector<double> period_cost_profile(const Instance& inst, const Schedule& sched,
                                        const StaffingPlan& plan);

}  // namespace stochsched
