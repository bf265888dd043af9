#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "stochsched/lp.hpp"
#include "stochsched/model.hpp"
#include "stochsched/scenarios.hpp"

namespace stochsched {

/// Convex piecewise-linear approximation of zeta -> E[(D - zeta)^+] on
/// [0, inf): value at zero, then consecutive (length, slope) segments with
/// nondecreasing slopes in [-1, 0]. Zero beyond the last segment.
struct PiecewiseShortfall {
  double value_at_zero = 0.0;
  std::vector<std::pair<double, double>> segments;

  double operator()(double zeta) const;

  /// (mean - zeta)^+
  static PiecewiseShortfall from_mean(double mean);
  /// Empirical shortfall of equally weighted draws.
  static PiecewiseShortfall from_draws(std::vector<double> draws);
  /// Interpolates the exact triangular shortfall at `breakpoints` equally
  /// spaced segments on [min, max], exact (linear) below min.
  static PiecewiseShortfall from_triangular(const TriangularDist& d, int breakpoints);
};

/// How scheduled demand enters the staffing LP.
class DemandModel {
 public:
  virtual ~DemandModel() = default;
  /// Cost curve (before the cost rate) of package (p, q, s).
  virtual PiecewiseShortfall shortfall(const Instance& inst, int p, int q, int skill) const = 0;
  /// Point demand used for not-yet-scheduled projects in relaxations. Must
  /// make the relaxed cost a lower bound of the shortfall curve.
  virtual double relaxed_demand(const Instance& inst, int p, int q, int skill) const = 0;
  /// True if the relaxed formulation is exact once every weight is 0 or 1.
  virtual bool exact_when_integral() const { return false; }
};

/// Every demand at its mean (the expected-value problem).
class MeanDemand final : public DemandModel {
 public:
  PiecewiseShortfall shortfall(const Instance& inst, int p, int q, int skill) const override;
  double relaxed_demand(const Instance& inst, int p, int q, int skill) const override;
  bool exact_when_integral() const override { return true; }
};

/// Sample average over a scenario set.
class ScenarioDemand final : public DemandModel {
 public:
  explicit ScenarioDemand(const ScenarioSet& scenarios) : scenarios_(scenarios) {}
  PiecewiseShortfall shortfall(const Instance& inst, int p, int q, int skill) const override;
  double relaxed_demand(const Instance& inst, int p, int q, int skill) const override;
  bool exact_when_integral() const override { return scenarios_.count() == 1; }

 private:
  const ScenarioSet& scenarios_;
};

/// Exact triangular shortfall linearized on equally spaced breakpoints.
class LinearizedDemand final : public DemandModel {
 public:
  explicit LinearizedDemand(int breakpoints) : breakpoints_(breakpoints) {}
  PiecewiseShortfall shortfall(const Instance& inst, int p, int q, int skill) const override;
  double relaxed_demand(const Instance& inst, int p, int q, int skill) const override;

 private:
  int breakpoints_;
};

/// Per project either a fixed period vector or a set of candidate period
/// vectors mixed with continuous weights.
struct ProjectChoice {
  std::optional<std::vector<int>> fixed;
  std::vector<std::vector<int>> candidates;
};

struct StaffingModel {
  lp::LinearProgram program;
  struct XVar {
    int project, period, skill, resource, column;
  };
  std::vector<XVar> x;
  /// weights[p][j] is the column of candidate j of relaxed project p.
  std::vector<std::vector<int>> weights;
};

/// Builds the staffing LP for a (partially) fixed schedule.
StaffingModel build_staffing_model(const Instance& inst, const std::vector<ProjectChoice>& choice,
                                   const DemandModel& demand);

struct StaffingLpResult {
  lp::Status status = lp::Status::IterationLimit;
  StaffingPlan plan;
  double cost = 0.0;
  std::vector<std::vector<double>> weights;  // candidate weights of relaxed projects
};

StaffingLpResult solve_staffing_model(const Instance& inst, const StaffingModel& model,
                                      const lp::Options& opts = {});

/// Optimal staffing for a fixed schedule under the given demand model.
StaffingLpResult staffing_lp(const Instance& inst, const Schedule& sched,
                             const DemandModel& demand);

}  // namespace stochsched
