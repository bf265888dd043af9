#pragma once

#include <iosfwd>
#include <vector>

#include "stochsched/evaluator.hpp"
#include "stochsched/model.hpp"

namespace stochsched {

enum class FwVariant { Basic, Modified };
enum class FwInit { Greedy, Lp };
enum class LineSearch { GoldenSection, FixedStep };

struct FwConfig {
  FwVariant variant = FwVariant::Modified;
  FwInit init = FwInit::Greedy;
  LineSearch line_search = LineSearch::FixedStep;
  int iterations = 1000;  // i_max
  /// Idle pseudo-entry per column so unused capacity keeps the column sum at 1.
  bool slack = true;
  /// Record B(i) for every i; otherwise only the points the extrapolation needs.
  bool full_trace = true;
  double golden_tolerance = 1e-6;
};

/// u in product-of-simplices form: u[col][e] is the share of column col's
/// capacity given to its e-th eligible term, slack[col] the idle share.
struct SimplexAllocation {
  std::vector<std::vector<double>> u;
  std::vector<double> slack;
};

/// The staffing subproblem at a fixed schedule: scheduled terms and the
/// (t, k) columns with positive capacity.
class StaffingProblem {
 public:
  StaffingProblem(const Instance& inst, const Schedule& sched);

  struct Column {
    int period = 0;
    int resource = 0;
    double capacity = 0.0;
    std::vector<int> terms;       // eligible term indices, ascending (p, s)
    std::vector<double> weight;   // eta_sk * a_kt per eligible term
  };

  const Instance& instance() const { return *inst_; }
  const Schedule& schedule() const { return sched_; }
  const ScheduledDemand& demand() const { return demand_; }
  const std::vector<Column>& columns() const { return columns_; }

  std::vector<double> coverage(const SimplexAllocation& a) const;
  /// Theta_z(u).
  double objective(const SimplexAllocation& a) const;
  /// chi per column entry, i.e. minus the partial derivative of Theta_z.
  std::vector<std::vector<double>> gradient(const SimplexAllocation& a) const;

  StaffingPlan to_plan(const SimplexAllocation& a) const;
  /// Inverse of to_plan for plans on eligible cells; unused share goes to
  /// slack, or to the first entry when slack is disabled.
  SimplexAllocation from_plan(const StaffingPlan& plan, bool slack = true) const;

 private:
  const Instance* inst_;
  Schedule sched_;
  ScheduledDemand demand_;
  std::vector<Column> columns_;
};

SimplexAllocation greedy_initial(const StaffingProblem& prob, bool slack = true);
SimplexAllocation lp_initial(const StaffingProblem& prob, bool slack = true);
SimplexAllocation greedy_initial(const Instance& inst, const Schedule& sched);
SimplexAllocation lp_initial(const Instance& inst, const Schedule& sched);

struct FwResult {
  SimplexAllocation allocation;
  StaffingPlan plan;
  /// Exact expected external cost of `plan`.
  double objective = 0.0;
  /// (i, B(z, i)) pairs, i = 1..i_max.
  std::vector<std::pair<int, double>> trace;
  /// Exponential-fit limit of the trace.
  double extrapolated = 0.0;
};

FwResult fw_solve(const StaffingProblem& prob, const FwConfig& cfg);
FwResult fw_solve(const Instance& inst, const Schedule& sched, const FwConfig& cfg);

/// Limit a of B ~ a + b exp(-c i) through three equally spaced observations.
double fw_extrapolate(double b0, double b1, double b2);
/// Uses B at 0.5, 0.75 and 1.0 times the last iteration of the trace.
double fw_extrapolate(const std::vector<std::pair<int, double>>& trace);

void write_trace_csv(std::ostream& out, const std::vector<std::pair<int, double>>& trace);

}  // namespace stochsched
