#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "stochsched/generator.hpp"
#include "stochsched/matheuristic.hpp"
#include "stochsched/model.hpp"

namespace stochsched {

struct BudgetBias {
  double bb = 0.0;
  double bb_rel = 0.0;
};

/// E[G] of the EV solution minus its own mean-value cost.
BudgetBias budget_bias(const Instance& inst, const Schedule& ev_schedule,
                       const StaffingPlan& ev_plan);

struct Vss {
  double vss = 0.0;
  double vss_rel = 0.0;
};

/// E[G] of the EV solution minus E[G] of the stochastic solution; the
/// relative form divides by the former.
Vss vss(const Instance& inst, const Schedule& stoch_schedule, const StaffingPlan& stoch_plan,
        const Schedule& ev_schedule, const StaffingPlan& ev_plan);

/// |E[G] - theta| / E[G], 0 when E[G] is 0.
double relative_gap(double expected_cost, double theta);

struct MeanCi {
  double mean = 0.0;
  double low = 0.0;
  double high = 0.0;
  int n = 0;
};

/// Student-t confidence interval of the mean; a single value has zero width.
MeanCi mean_ci(const std::vector<double>& values, double confidence = 0.95);

enum class SolverKind { Ev, Saa, Mh };

struct SolverSpec {
  SolverKind kind = SolverKind::Mh;
  double time_limit = 60.0;  // B&B limit, or MH budget
  long node_limit = -1;
  int sample_size = 100;
  /// MH only.
  double ev_time_limit = 10.0;
  long max_searches = -1;
  /// Saa only: larger instances get a flagged row instead of a solve.
  int max_projects = std::numeric_limits<int>::max();

  std::string id() const;
};

struct Job {
  std::string structure;
  std::string level;
  int index = 0;
  GeneratorConfig config;
  SolverSpec solver;
  std::uint64_t seed = 1;
};

struct ExperimentReport {
  std::string instance;
  std::string structure;
  std::string level;
  int index = 0;
  std::string solver;
  std::uint64_t seed = 0;
  double time_budget = 0.0;
  double theta = 0.0;          // the solver's own objective
  double expected_cost = 0.0;  // exact, recomputed
  double wall_time = 0.0;
  bool optimal = false;
  int sample_size = 0;
  /// EV solution of the same instance (EV and MH jobs).
  double ev_theta = std::numeric_limits<double>::quiet_NaN();
  double ev_expected_cost = std::numeric_limits<double>::quiet_NaN();
  bool flagged = false;
  std::string note;
};

ExperimentReport run_job(const Job& job);

/// Runs jobs on up to `workers` threads; results keep the job order.
std::vector<ExperimentReport> run_jobs(const std::vector<Job>& jobs, int workers = 1,
                                       const std::function<void(const ExperimentReport&)>& progress = {});

/// Averages `metric` over the rows of each (structure, level, index) group,
/// skipping flagged rows.
std::vector<double> instance_means(const std::vector<ExperimentReport>& rows,
                                   const std::function<double(const ExperimentReport&)>& metric);

void write_reports_csv(std::ostream& out, const std::vector<ExperimentReport>& rows);

struct SweepSpec {
  /// Any of "bias", "saa-gap", "mh-vs-saa", "params", "skew".
  std::vector<std::string> studies{"bias", "saa-gap", "mh-vs-saa", "params", "skew"};
  GeneratorConfig base;
  SuiteSpec suite;
  double mh_budget = 60.0;
  double ev_time_limit = 10.0;
  double saa_time_limit = 360.0;
  std::vector<int> sample_sizes{10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
  int saa_seeds = 10;
  int saa_max_projects = std::numeric_limits<int>::max();
  int runs = 1;  // seeded MH runs per instance
  int workers = 1;
  std::string out_dir = "results";
};

struct SweepOutput {
  std::vector<ExperimentReport> reports;
  std::vector<std::string> files;
};

/// Runs the requested studies, writing reports.csv and one aggregate CSV per
/// study into out_dir.
SweepOutput run_sweep(const SweepSpec& spec,
                      const std::function<void(const ExperimentReport&)>& progress = {});

}  // namespace stochsched
