#include "stochsched/evaluator.hpp"

#include <algorithm>
#include <numeric>

namespace stochsched {

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out = "infeasible input";
  for (const auto& s : items) out += "; " + s;
  return out;
}

}  // namespace

InfeasibleInput::InfeasibleInput(std::vector<std::string> violations)
    : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

ScheduledDemand::ScheduledDemand(const Instance& inst, const Schedule& sched)
    : horizon_(inst.horizon()), skills_(inst.skill_count()) {
  lookup_.assign(static_cast<std::size_t>(inst.project_count()) *
                     static_cast<std::size_t>(horizon_ + 1) * static_cast<std::size_t>(skills_),
                 -1);
  for (int p = 0; p < inst.project_count(); ++p) {
    const Project& pr = inst.project(p);
    const auto& row = sched.row(p);
    for (int q = 1; q <= pr.duration; ++q) {
      const int t = row[static_cast<std::size_t>(q - 1)];
      auto demands = pr.activities[static_cast<std::size_t>(q - 1)];
      std::sort(demands.begin(), demands.end(),
                [](const auto& a, const auto& b) { return a.skill < b.skill; });
      for (const auto& sd : demands) {
        if (sd.dist.is_zero()) continue;
        auto& slot = lookup_[key(p, t, sd.skill)];
        if (slot >= 0) {
          throw StructuralError("two activities of project " + std::to_string(p) +
                                " share period " + std::to_string(t));
        }
        slot = static_cast<int>(terms_.size());
        terms_.push_back({p, t, sd.skill, q, sd.dist, inst.external_cost(sd.skill)});
      }
    }
  }
}

std::vector<double> ScheduledDemand::coverage(const StaffingPlan& plan) const {
  std::vector<double> cov(terms_.size(), 0.0);
  for (const auto& e : plan.entries()) {
    if (e.period < 0 || e.period > horizon_ || e.skill < 0 || e.skill >= skills_) continue;
    const std::size_t k = key(e.project, e.period, e.skill);
    if (k >= lookup_.size()) continue;
    const int idx = lookup_[k];
    if (idx >= 0) cov[static_cast<std::size_t>(idx)] += e.work;
  }
  return cov;
}

void require_feasible(const Instance& inst, const Schedule& sched, const StaffingPlan& plan) {
  std::vector<std::string> problems;
  try {
    const auto check = validate_schedule(inst, sched);
    for (const auto& v : check.violations) problems.push_back(v.describe());
  } catch (const StructuralError& e) {
    problems.emplace_back(e.what());
  }
  for (const auto& v : validate_plan(inst, plan)) problems.push_back(v.describe());
  if (!problems.empty()) throw InfeasibleInput(std::move(problems));
}

std::vector<double> term_costs(const Instance&, const ScheduledDemand& demand,
                               const StaffingPlan& plan) {
  const auto cov = demand.coverage(plan);
  std::vector<double> out(cov.size());
  for (std::size_t i = 0; i < cov.size(); ++i) {
    const auto& term = demand.terms()[i];
    out[i] = term.cost_rate * tri_shortfall(term.dist, cov[i]);
  }
  return out;
}

double expected_external_cost(const Instance& inst, const Schedule& sched,
                              const StaffingPlan& plan) {
  require_feasible(inst, sched, plan);
  const ScheduledDemand demand(inst, sched);
  const auto costs = term_costs(inst, demand, plan);
  return std::accumulate(costs.begin(), costs.end(), 0.0);
}

double ev_cost(const Instance& inst, const Schedule& sched, const StaffingPlan& plan) {
  require_feasible(inst, sched, plan);
  const ScheduledDemand demand(inst, sched);
  const auto cov = demand.coverage(plan);
  double total = 0.0;
  for (std::size_t i = 0; i < cov.size(); ++i) {
    const auto& term = demand.terms()[i];
    total += term.cost_rate * std::max(0.0, term.dist.mean() - cov[i]);
  }
  return total;
}

double saa_cost(const Instance& inst, const Schedule& sched, const StaffingPlan& plan,
                const ScenarioSet& scenarios) {
  if (scenarios.count() <= 0) throw std::invalid_argument("saa_cost: empty scenario set");
  require_feasible(inst, sched, plan);
  const ScheduledDemand demand(inst, sched);
  const auto cov = demand.coverage(plan);
  double total = 0.0;
  for (std::size_t i = 0; i < cov.size(); ++i) {
    const auto& term = demand.terms()[i];
    const auto& draws = scenarios.values_for_skill(inst, term.project, term.activity, term.skill);
    double sum = 0.0;
    for (double d : draws) sum += std::max(0.0, d - cov[i]);
    total += term.cost_rate * sum;
  }
  return total / scenarios.count();
}

std::vector<double> period_cost_profile(const Instance& inst, const Schedule& sched,
                                        const StaffingPlan& plan) {
  const ScheduledDemand demand(inst, sched);
  const auto costs = term_costs(inst, demand, plan);
  std::vector<double> profile(static_cast<std::size_t>(inst.horizon() + 1), 0.0);
  for (std::size_t i = 0; i < costs.size(); ++i) {
    profile[static_cast<std::size_t>(demand.terms()[i].period)] += costs[i];
  }
  return profile;
}

}  // namespace stochsched
