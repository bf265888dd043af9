#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace stochsched::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Sense { LessEqual, GreaterEqual, Equal };

struct Row {
  std::vector<std::pair<int, double>> coefs;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
};

/// min  offset + c'x   s.t.  rows,  0 <= x <= upper.
struct LinearProgram {
  std::vector<double> cost;
  std::vector<double> upper;
  std::vector<std::string> names;  // optional, used by exporters
  std::vector<Row> rows;
  double offset = 0.0;

  int add_variable(double c, double ub = kInfinity, std::string name = {});
  int add_row(Row row);
  int variable_count() const { return static_cast<int>(cost.size()); }
};

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit, TimeLimit };

struct Result {
  Status status = Status::IterationLimit;
  double objective = 0.0;
  std::vector<double> x;
  long iterations = 0;
  bool used_bland = false;
};

struct Options {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-10;
  long max_iterations = 5'000'000;
  /// Consecutive non-improving iterations after which Bland's rule is used.
  long stall_limit = 64;
  /// Wall-clock seconds, checked every few iterations.
  double time_limit = kInfinity;
};

/// Dense two-phase bounded-variable primal simplex. Dantzig pricing with a
/// switch to Bland's rule on stalling, so degenerate problems terminate.
Result solve(const LinearProgram& lp, const Options& opts = {});

std::string to_string(Status s);

}  // namespace stochsched::lp
