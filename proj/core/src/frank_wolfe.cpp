#include "stochsched/frank_wolfe.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "stochsched/staffing_lp.hpp"

namespace stochsched {

StaffingProblem::StaffingProblem(const Instance& inst, const Schedule& sched)
    : inst_(&inst), sched_(sched), demand_(inst, sched) {
  const auto& terms = demand_.terms();
  // terms are sorted by (p, t, s); bucket them by period, keeping (p, s) order
  std::vector<std::vector<int>> by_period(static_cast<std::size_t>(inst.horizon() + 1));
  for (std::size_t j = 0; j < terms.size(); ++j) {
    by_period[static_cast<std::size_t>(terms[j].period)].push_back(static_cast<int>(j));
  }
  for (int t = 1; t <= inst.horizon(); ++t) {
    for (int k = 0; k < inst.resource_count(); ++k) {
      const double a = inst.capacity(k, t);
      if (a <= 0.0) continue;
      Column col;
      col.period = t;
      col.resource = k;
      col.capacity = a;
      for (int j : by_period[static_cast<std::size_t>(t)]) {
        const double eta = inst.eta(terms[static_cast<std::size_t>(j)].skill, k);
        if (eta <= 0.0) continue;
        col.terms.push_back(j);
        col.weight.push_back(eta * a);
      }
      columns_.push_back(std::move(col));
    }
  }
}

std::vector<double> StaffingProblem::coverage(const SimplexAllocation& a) const {
  std::vector<double> zeta(demand_.terms().size(), 0.0);
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    const auto& col = columns_[c];
    for (std::size_t e = 0; e < col.terms.size(); ++e) {
      zeta[static_cast<std::size_t>(col.terms[e])] += col.weight[e] * a.u[c][e];
    }
  }
  return zeta;
}

namespace {

double theta_of(const std::vector<DemandTerm>& terms, const std::vector<double>& zeta) {
  double total = 0.0;
  for (std::size_t j = 0; j < terms.size(); ++j) {
    total += terms[j].cost_rate * tri_shortfall(terms[j].dist, zeta[j]);
  }
  return total;
}

/// argmin over [0, 1] by golden section, then the best of the bracket
/// midpoint and both end points.
template <typename F>
double golden_section(F f, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0, b = 1.0;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a >= tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double mid = 0.5 * (a + b);
  double best = 0.0, fbest = f(0.0);
  const double fm = f(mid);
  if (fm < fbest) {
    best = mid;
    fbest = fm;
  }
  if (f(1.0) < fbest) best = 1.0;
  return best;
}

/// Target entry of a column: argmax chi, or -1 for the slack entry.
int target_of(const StaffingProblem::Column& col, const std::vector<DemandTerm>& terms,
              const std::vector<double>& zeta, bool slack) {
  int best = -1;
  double best_chi = slack ? 0.0 : -1.0;
  for (std::size_t e = 0; e < col.terms.size(); ++e) {
    const auto j = static_cast<std::size_t>(col.terms[e]);
    const double chi = terms[j].cost_rate * col.weight[e] * (1.0 - tri_cdf(terms[j].dist, zeta[j]));
    if (chi > best_chi) {
      best_chi = chi;
      best = static_cast<int>(e);
    }
  }
  return best;
}

void move_column(std::vector<double>& u, double& slack, int target, double theta) {
  for (double& v : u) v *= 1.0 - theta;
  slack *= 1.0 - theta;
  if (target < 0) {
    slack += theta;
  } else {
    u[static_cast<std::size_t>(target)] += theta;
  }
}

int best_rate_entry(const StaffingProblem::Column& col, const std::vector<DemandTerm>& terms) {
  int best = -1;
  double rate = -1.0;
  for (std::size_t e = 0; e < col.terms.size(); ++e) {
    const double r = terms[static_cast<std::size_t>(col.terms[e])].cost_rate * col.weight[e];
    if (r > rate) {
      rate = r;
      best = static_cast<int>(e);
    }
  }
  return best;
}

/// Puts the unused share of every column on slack, or on the best-rate entry.
void close_columns(const StaffingProblem& prob, SimplexAllocation& a, bool slack) {
  const auto& terms = prob.demand().terms();
  for (std::size_t c = 0; c < prob.columns().size(); ++c) {
    auto& u = a.u[c];
    double sum = 0.0;
    for (double v : u) sum += v;
    if (sum > 1.0) {
      for (double& v : u) v /= sum;
      sum = 1.0;
    }
    const double rest = 1.0 - sum;
    const int e = best_rate_entry(prob.columns()[c], terms);
    if (slack || e < 0) {
      a.slack[c] = rest;
    } else {
      a.slack[c] = 0.0;
      u[static_cast<std::size_t>(e)] += rest;
    }
  }
}

SimplexAllocation empty_allocation(const StaffingProblem& prob) {
  SimplexAllocation a;
  for (const auto& col : prob.columns()) a.u.emplace_back(col.terms.size(), 0.0);
  a.slack.assign(prob.columns().size(), 0.0);
  return a;
}

}  // namespace

double StaffingProblem::objective(const SimplexAllocation& a) const {
  return theta_of(demand_.terms(), coverage(a));
}

std::vector<std::vector<double>> StaffingProblem::gradient(const SimplexAllocation& a) const {
  const auto zeta = coverage(a);
  const auto& terms = demand_.terms();
  std::vector<std::vector<double>> chi;
  for (const auto& col : columns_) {
    std::vector<double> g;
    for (std::size_t e = 0; e < col.terms.size(); ++e) {
      const auto j = static_cast<std::size_t>(col.terms[e]);
      g.push_back(terms[j].cost_rate * col.weight[e] * (1.0 - tri_cdf(terms[j].dist, zeta[j])));
    }
    chi.push_back(std::move(g));
  }
  return chi;
}

StaffingPlan StaffingProblem::to_plan(const SimplexAllocation& a) const {
  std::vector<StaffingEntry> entries;
  const auto& terms = demand_.terms();
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    const auto& col = columns_[c];
    for (std::size_t e = 0; e < col.terms.size(); ++e) {
      const double v = a.u[c][e];
      if (v <= 0.0) continue;
      const auto& term = terms[static_cast<std::size_t>(col.terms[e])];
      entries.push_back({term.project, col.period, term.skill, col.resource, v * col.weight[e]});
    }
  }
  return StaffingPlan::from_entries(std::move(entries));
}

SimplexAllocation StaffingProblem::from_plan(const StaffingPlan& plan, bool slack) const {
  SimplexAllocation a = empty_allocation(*this);
  const auto& terms = demand_.terms();
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    const auto& col = columns_[c];
    for (std::size_t e = 0; e < col.terms.size(); ++e) {
      const auto& term = terms[static_cast<std::size_t>(col.terms[e])];
      a.u[c][e] = std::max(0.0, plan.get(term.project, col.period, term.skill, col.resource)) /
                  col.weight[e];
    }
  }
  close_columns(*this, a, slack);
  return a;
}

SimplexAllocation greedy_initial(const StaffingProblem& prob, bool slack) {
  SimplexAllocation a = empty_allocation(prob);
  const auto& terms = prob.demand().terms();
  const auto& cols = prob.columns();
  std::vector<double> open(terms.size());
  for (std::size_t j = 0; j < terms.size(); ++j) open[j] = terms[j].dist.mean();
  std::vector<double> room(cols.size(), 1.0);  // unassigned column share

  std::size_t begin = 0;
  while (begin < cols.size()) {
    std::size_t end = begin;
    while (end < cols.size() && cols[end].period == cols[begin].period) ++end;
    for (;;) {
      std::size_t bc = 0, be = 0;
      double rate = 0.0;
      for (std::size_t c = begin; c < end; ++c) {
        if (room[c] <= 0.0) continue;
        for (std::size_t e = 0; e < cols[c].terms.size(); ++e) {
          const auto j = static_cast<std::size_t>(cols[c].terms[e]);
          if (open[j] <= 0.0) continue;
          const double r = terms[j].cost_rate * cols[c].weight[e] / cols[c].capacity;
          if (r > rate) {
            rate = r;
            bc = c;
            be = e;
          }
        }
      }
      if (rate <= 0.0) break;
      const auto j = static_cast<std::size_t>(cols[bc].terms[be]);
      const double w = cols[bc].weight[be];
      const double share = std::min(room[bc], open[j] / w);
      a.u[bc][be] += share;
      if (share >= room[bc]) {
        room[bc] = 0.0;
        open[j] -= share * w;
      } else {
        room[bc] -= share;
        open[j] = 0.0;
      }
    }
    begin = end;
  }
  close_columns(prob, a, slack);
  return a;
}

SimplexAllocation lp_initial(const StaffingProblem& prob, bool slack) {
  const auto res = staffing_lp(prob.instance(), prob.schedule(), MeanDemand{});
  if (res.status != lp::Status::Optimal) {
    throw std::runtime_error("lp_initial: staffing LP " + lp::to_string(res.status));
  }
  return prob.from_plan(res.plan, slack);
}

SimplexAllocation greedy_initial(const Instance& inst, const Schedule& sched) {
  return greedy_initial(StaffingProblem(inst, sched));
}

SimplexAllocation lp_initial(const Instance& inst, const Schedule& sched) {
  return lp_initial(StaffingProblem(inst, sched));
}

FwResult fw_solve(const StaffingProblem& prob, const FwConfig& cfg) {
  if (cfg.iterations < 1) throw std::invalid_argument("fw_solve: iterations must be >= 1");
  const auto& terms = prob.demand().terms();
  const auto& cols = prob.columns();
  SimplexAllocation a =
      cfg.init == FwInit::Greedy ? greedy_initial(prob, cfg.slack) : lp_initial(prob, cfg.slack);

  const int n = cfg.iterations;
  const int i0 = std::max(1, static_cast<int>(std::lround(0.5 * n)));
  const int i1 = std::max(1, static_cast<int>(std::lround(0.75 * n)));
  FwResult out;
  auto record = [&](int i, const std::vector<double>& zeta) {
    if (cfg.full_trace || i == i0 || i == i1 || i == n) out.trace.emplace_back(i, theta_of(terms, zeta));
  };

  std::vector<double> zeta = prob.coverage(a);
  record(1, zeta);
  std::vector<int> target(cols.size());
  std::vector<double> dzeta(terms.size());
  for (int i = 2; i <= n; ++i) {
    const double fixed_theta = 2.0 / (i + 2.0);
    if (cfg.variant == FwVariant::Basic) {
      for (std::size_t c = 0; c < cols.size(); ++c) target[c] = target_of(cols[c], terms, zeta, cfg.slack);
      std::fill(dzeta.begin(), dzeta.end(), 0.0);
      for (std::size_t c = 0; c < cols.size(); ++c) {
        for (std::size_t e = 0; e < cols[c].terms.size(); ++e) {
          const double g = static_cast<int>(e) == target[c] ? 1.0 : 0.0;
          dzeta[static_cast<std::size_t>(cols[c].terms[e])] += cols[c].weight[e] * (g - a.u[c][e]);
        }
      }
      double theta = fixed_theta;
      if (cfg.line_search == LineSearch::GoldenSection) {
        theta = golden_section(
            [&](double th) {
              double total = 0.0;
              for (std::size_t j = 0; j < terms.size(); ++j) {
                total += terms[j].cost_rate * tri_shortfall(terms[j].dist, zeta[j] + th * dzeta[j]);
              }
              return total;
            },
            cfg.golden_tolerance);
      }
      if (theta > 0.0) {
        for (std::size_t c = 0; c < cols.size(); ++c) move_column(a.u[c], a.slack[c], target[c], theta);
      }
    } else {
      for (std::size_t c = 0; c < cols.size(); ++c) {
        const auto& col = cols[c];
        if (col.terms.empty()) continue;
        const int tgt = target_of(col, terms, zeta, cfg.slack);
        double theta = fixed_theta;
        if (cfg.line_search == LineSearch::GoldenSection) {
          theta = golden_section(
              [&](double th) {
                double total = 0.0;
                for (std::size_t e = 0; e < col.terms.size(); ++e) {
                  const auto j = static_cast<std::size_t>(col.terms[e]);
                  const double g = static_cast<int>(e) == tgt ? 1.0 : 0.0;
                  total += terms[j].cost_rate *
                           tri_shortfall(terms[j].dist, zeta[j] + th * col.weight[e] * (g - a.u[c][e]));
                }
                return total;
              },
              cfg.golden_tolerance);
        }
        if (theta <= 0.0) continue;
        for (std::size_t e = 0; e < col.terms.size(); ++e) {
          const double g = static_cast<int>(e) == tgt ? 1.0 : 0.0;
          zeta[static_cast<std::size_t>(col.terms[e])] += theta * col.weight[e] * (g - a.u[c][e]);
        }
        move_column(a.u[c], a.slack[c], tgt, theta);
      }
    }
    zeta = prob.coverage(a);
    record(i, zeta);
  }

  out.plan = prob.to_plan(a);
  out.allocation = std::move(a);
  out.objective = theta_of(terms, prob.demand().coverage(out.plan));
  out.extrapolated = n >= 3 ? fw_extrapolate(out.trace) : out.trace.back().second;
  return out;
}

FwResult fw_solve(const Instance& inst, const Schedule& sched, const FwConfig& cfg) {
  const StaffingProblem prob(inst, sched);
  FwResult r = fw_solve(prob, cfg);
  r.objective = expected_external_cost(inst, sched, r.plan);
  return r;
}

double fw_extrapolate(double b0, double b1, double b2) {
  const double den = b0 - 2.0 * b1 + b2;
  if (std::abs(den) < 1e-12) return b2;
  const double a = (b0 * b2 - b1 * b1) / den;
  if (!std::isfinite(a)) return b2;
  return std::clamp(a, 0.0, b2);
}

double fw_extrapolate(const std::vector<std::pair<int, double>>& trace) {
  if (trace.size() < 3) throw std::invalid_argument("fw_extrapolate: fewer than 3 observations");
  const int n = trace.back().first;
  auto at = [&](int i) {
    double v = trace.front().second;
    for (const auto& [k, b] : trace) {
      if (k > i) break;
      v = b;
    }
    return v;
  };
  const int i0 = std::max(1, static_cast<int>(std::lround(0.5 * n)));
  const int i1 = std::max(1, static_cast<int>(std::lround(0.75 * n)));
  return fw_extrapolate(at(i0), at(i1), at(n));
}

void write_trace_csv(std::ostream& out, const std::vector<std::pair<int, double>>& trace) {
  out << "iteration,bound\n";
  char buf[64];
  for (const auto& [i, b] : trace) {
    std::snprintf(buf, sizeof buf, "%d,%.17g\n", i, b);
    out << buf;
  }
}

}  // namespace stochsched
