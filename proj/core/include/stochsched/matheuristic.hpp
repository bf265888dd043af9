#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <vector>

#include "stochsched/distributions.hpp"
#include "stochsched/frank_wolfe.hpp"
#include "stochsched/model.hpp"

namespace stochsched {

struct MhConfig {
  double time_limit = 360.0;  // t_max, seconds
  int i_min = 50;
  int i_tilde = 1000;
  double beta = 0.1;
  int k_max = 3;
  double pi = 0.15;
  FwConfig fw;
  std::uint64_t seed = 1;
  /// Stop after this many neighborhood searches (n_r); -1 for no limit.
  long max_searches = -1;
  /// Limits of the EV solve producing the initial schedule.
  double ev_time_limit = 60.0;
  long ev_node_limit = -1;
  /// FW iterations used to staff the returned schedule.
  int polish_iterations = 10000;

  /// Throws std::invalid_argument.
  void validate() const;
};

struct MhLogRow {
  double wall_time = 0.0;
  long searches = 0;  // n_r
  int k = 1;
  double incumbent_cost = 0.0;
  double best_cost = 0.0;
};

struct MhResult {
  Schedule schedule;
  StaffingPlan plan;
  double expected_cost = 0.0;
  Schedule initial_schedule;
  double initial_cost = 0.0;
  long searches = 0;
  long evaluations = 0;
  long perturbations = 0;
  std::vector<MhLogRow> log;
};

MhResult mh_solve(const Instance& inst, const MhConfig& cfg);
/// Same search from a given starting schedule instead of the EV solution.
MhResult mh_solve(const Instance& inst, const Schedule& initial, const MhConfig& cfg);

/// Restores feasibility of project p after activity `anchor` (1-based) moved:
/// everything is clamped into its window, then predecessors are pulled back
/// and successors pushed forward as little as needed.
void repair(const Instance& inst, Schedule& sched, int p, int anchor = 1);

/// Shifts activity q of project p by `delta` periods and repairs.
void shift_activity(const Instance& inst, Schedule& sched, int p, int q, int delta);

struct Neighbor {
  Schedule schedule;
  std::vector<int> moved;  // projects touched by the move
};

/// Activities (project, activity) in the most expensive period, by cost
/// contribution descending; `profile_plan` staffs `sched`.
std::vector<std::pair<int, int>> peak_activities(const Instance& inst, const Schedule& sched,
                                                 const StaffingPlan& profile_plan);

/// All k-moves of the ranked list, one per window of k consecutive entries;
/// the shift direction is drawn from rng, falling back to the opposite one
/// when the first changes nothing. Moves that change nothing are dropped.
std::vector<Neighbor> k_moves(const Instance& inst, const Schedule& sched,
                              const std::vector<std::pair<int, int>>& ranked, int k, Rng& rng);

/// FW estimate of the optimal staffing cost (extrapolated bound).
double fw_estimate(const Instance& inst, const Schedule& sched, const FwConfig& fw,
                   int iterations);

struct ImprovementResult {
  Schedule schedule;
  double estimate = 0.0;
  bool improved = false;  // better than current or best
  long evaluations = 0;
};

/// Scans the k-neighborhood of `current` and stops at the first neighbor
/// beating `current_value` or `best_value`. Without one, the best neighbor
/// seen is returned, or `current` when the neighborhood is empty.
ImprovementResult first_improvement(const Instance& inst, const Schedule& current,
                                    double current_value, double best_value,
                                    const StaffingPlan& profile_plan, int k, int i_max,
                                    const FwConfig& fw, Rng& rng);

struct NeighborhoodDecision {
  bool accept = false;
  int k = 1;
};

/// Acceptance step: improvement resets k to 1; otherwise k grows and the
/// candidate is still accepted with probability beta.
NeighborhoodDecision neighborhood_change(double best_value, double candidate_value, int k,
                                         double beta, Rng& rng);

/// `swaps` exchanges of period vectors between random projects of equal
/// duration, each followed by repair. Returns the number performed.
int perturb(const Instance& inst, Schedule& sched, int swaps, Rng& rng);

/// Columns: wall_time (optional), n_r, k, incumbent_cost, best_cost.
void write_mh_log_csv(std::ostream& out, const std::vector<MhLogRow>& log,
                      bool include_time = true);

}  // namespace stochsched
