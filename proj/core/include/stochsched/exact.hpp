#pragma once

#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <vector>

#include "stochsched/model.hpp"
#include "stochsched/scenarios.hpp"
#include "stochsched/staffing_lp.hpp"

namespace stochsched {

struct BnbOptions {
  double time_limit = std::numeric_limits<double>::infinity();  // seconds
  long node_limit = -1;                                           // -1: none
  bool record_nodes = false;
};

/// One explored node: choice[p] indexes enumerate_schedules(project p), -1
/// while undecided.
struct NodeRecord {
  std::vector<int> choice;
  double bound = 0.0;
};

struct ExactSolution {
  Schedule schedule;
  StaffingPlan plan;
  double objective = 0.0;  // value of the solver's own objective
  bool optimal = false;
  long nodes = 0;
  std::vector<NodeRecord> node_log;
};

/// Depth-first branch-and-bound over per-project schedule choices. Each node
/// is bounded by the staffing LP in which undecided projects mix their
/// candidate schedules with continuous weights.
ExactSolution branch_and_bound(const Instance& inst, const DemandModel& demand,
                               const BnbOptions& opts = {});

/// Expected-value problem: every demand at its mean.
ExactSolution solve_ev(const Instance& inst, const BnbOptions& opts = {});

struct SaaSolution : ExactSolution {
  double expected_cost = 0.0;  // exact E[G] of the returned solution
  int sample_size = 0;
  std::uint64_t seed = 0;
};

SaaSolution solve_saa(const Instance& inst, int sample_size, std::uint64_t seed,
                      const BnbOptions& opts = {});
SaaSolution solve_saa(const Instance& inst, const ScenarioSet& scenarios,
                      const BnbOptions& opts = {});

enum class OracleStaffing { Linearized, FrankWolfe };

struct OracleOptions {
  OracleStaffing staffing = OracleStaffing::Linearized;
  int breakpoints = 1000;
  int fw_iterations = 100000;
  long max_combinations = 100000;
};

class SearchSpaceTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleResult {
  Schedule schedule;
  StaffingPlan plan;
  double cost = 0.0;  // exact expected external cost
  long evaluations = 0;
};

/// Number of schedule combinations, saturating at max + 1.
long schedule_space_size(const Instance& inst, long max);

/// Evaluates every schedule combination with near-exact staffing.
OracleResult exhaustive_oracle(const Instance& inst, const OracleOptions& opts = {});

/// Optimal staffing cost of one schedule under the oracle's staffing mode,
/// with the plan's exact expected cost.
OracleResult oracle_staffing(const Instance& inst, const Schedule& sched,
                             const OracleOptions& opts = {});

/// Writes the EV (no scenarios) or SAA model as a mixed-integer program in
/// CPLEX LP text format. Variables: z_p_q_t (binary), x_p_t_s_k, y_p_t_s_n.
void write_lp_model(std::ostream& out, const Instance& inst, const ScenarioSet* scenarios);

struct ImportedSolution {
  Schedule schedule;
  StaffingPlan plan;
};

/// Reads "name value" lines (other lines ignored) of z and x variables.
/// Throws StructuralError if some activity is not assigned exactly once.
ImportedSolution import_lp_solution(std::istream& in, const Instance& inst);

}  // namespace stochsched
