#include "stochsched/matheuristic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>

#include "stochsched/evaluator.hpp"
#include "stochsched/exact.hpp"

namespace stochsched {

namespace {

bool better(double candidate, double reference) {
  return candidate < reference - 1e-9 * std::max(1.0, std::abs(reference));
}

struct Evaluation {
  double estimate = 0.0;
  double exact = 0.0;
  StaffingPlan plan;
};

/// High-accuracy evaluations keyed by schedule.
class EvaluationCache {
 public:
  EvaluationCache(const Instance& inst, const FwConfig& fw, int iterations)
      : inst_(inst), fw_(fw) {
    fw_.iterations = iterations;
    fw_.full_trace = false;
  }

  const Evaluation& get(const Schedule& s, long& evaluations) {
    auto it = cache_.find(s);
    if (it != cache_.end()) return it->second;
    if (cache_.size() >= 4096) cache_.clear();
    const FwResult r = fw_solve(inst_, s, fw_);
    ++evaluations;
    Evaluation e{fw_extrapolate(r.trace), r.objective, r.plan};
    return cache_.emplace(s, std::move(e)).first->second;
  }

 private:
  const Instance& inst_;
  FwConfig fw_;
  std::map<Schedule, Evaluation> cache_;
};

}  // namespace

void MhConfig::validate() const {
  auto check = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("mh config: ") + what);
  };
  check(time_limit >= 0.0, "time limit must be >= 0");
  check(i_min >= 3, "i_min must be >= 3");
  check(i_tilde >= 3, "i_tilde must be >= 3");
  check(beta >= 0.0 && beta <= 1.0, "beta must be in [0, 1]");
  check(k_max >= 1, "k_max must be >= 1");
  check(pi >= 0.0, "pi must be >= 0");
  check(polish_iterations >= 1, "polish iterations must be >= 1");
}

void repair(const Instance& inst, Schedule& sched, int p, int anchor) {
  const Project& pr = inst.project(p);
  auto& row = sched.periods[static_cast<std::size_t>(p)];
  const int d = pr.duration;
  for (int q = 1; q <= d; ++q) {
    auto& v = row[static_cast<std::size_t>(q - 1)];
    v = std::clamp(v, pr.activity_earliest(q), pr.activity_latest(q));
  }
  const int a = std::clamp(anchor, 1, d) - 1;
  for (int i = a + 1; i < d; ++i) {
    auto ui = static_cast<std::size_t>(i);
    row[ui] = std::max(row[ui], row[ui - 1] + 1);
  }
  for (int i = a - 1; i >= 0; --i) {
    auto ui = static_cast<std::size_t>(i);
    row[ui] = std::min(row[ui], row[ui + 1] - 1);
  }
}

void shift_activity(const Instance& inst, Schedule& sched, int p, int q, int delta) {
  sched.periods[static_cast<std::size_t>(p)][static_cast<std::size_t>(q - 1)] += delta;
  repair(inst, sched, p, q);
}

std::vector<std::pair<int, int>> peak_activities(const Instance& inst, const Schedule& sched,
                                                 const StaffingPlan& profile_plan) {
  const ScheduledDemand demand(inst, sched);
  const auto costs = term_costs(inst, demand, profile_plan);
  std::vector<double> profile(static_cast<std::size_t>(inst.horizon() + 1), 0.0);
  for (std::size_t i = 0; i < costs.size(); ++i) {
    profile[static_cast<std::size_t>(demand.terms()[i].period)] += costs[i];
  }
  const auto peak = std::max_element(profile.begin() + 1, profile.end());
  if (*peak <= 0.0) return {};
  const int t = static_cast<int>(peak - profile.begin());

  std::vector<double> contribution(static_cast<std::size_t>(inst.project_count()), 0.0);
  for (std::size_t i = 0; i < costs.size(); ++i) {
    const auto& term = demand.terms()[i];
    if (term.period == t) contribution[static_cast<std::size_t>(term.project)] += costs[i];
  }
  std::vector<std::pair<int, int>> out;
  for (int p = 0; p < inst.project_count(); ++p) {
    const int q = sched.activity_at(p, t);
    if (q > 0) out.emplace_back(p, q);
  }
  std::stable_sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
    return contribution[static_cast<std::size_t>(a.first)] >
           contribution[static_cast<std::size_t>(b.first)];
  });
  return out;
}

std::vector<Neighbor> k_moves(const Instance& inst, const Schedule& sched,
                              const std::vector<std::pair<int, int>>& ranked, int k, Rng& rng) {
  std::vector<Neighbor> out;
  const int m = static_cast<int>(ranked.size());
  if (m == 0) return out;
  const int width = std::min(k, m);
  for (int j = 0; j + width <= m; ++j) {
    const int first = uniform01(rng) < 0.5 ? -1 : 1;
    for (int delta : {first, -first}) {
      Neighbor n{sched, {}};
      for (int i = j; i < j + width; ++i) {
        const auto [p, q] = ranked[static_cast<std::size_t>(i)];
        shift_activity(inst, n.schedule, p, q, delta);
        n.moved.push_back(p);
      }
      if (n.schedule != sched) {
        out.push_back(std::move(n));
        break;
      }
    }
  }
  return out;
}

double fw_estimate(const Instance& inst, const Schedule& sched, const FwConfig& fw,
                   int iterations) {
  FwConfig c = fw;
  c.iterations = std::max(3, iterations);
  c.full_trace = false;
  const FwResult r = fw_solve(StaffingProblem(inst, sched), c);
  return fw_extrapolate(r.trace);
}

ImprovementResult first_improvement(const Instance& inst, const Schedule& current,
                                    double current_value, double best_value,
                                    const StaffingPlan& profile_plan, int k, int i_max,
                                    const FwConfig& fw, Rng& rng) {
  ImprovementResult out{current, current_value, false, 0};
  const auto ranked = peak_activities(inst, current, profile_plan);
  const auto neighbors = k_moves(inst, current, ranked, k, rng);
  double best_seen = std::numeric_limits<double>::infinity();
  for (const auto& n : neighbors) {
    const double v = fw_estimate(inst, n.schedule, fw, i_max);
    ++out.evaluations;
    if (better(v, current_value) || better(v, best_value)) {
      out.schedule = n.schedule;
      out.estimate = v;
      out.improved = true;
      return out;
    }
    if (v < best_seen) {
      best_seen = v;
      out.schedule = n.schedule;
      out.estimate = v;
    }
  }
  return out;
}

NeighborhoodDecision neighborhood_change(double best_value, double candidate_value, int k,
                                         double beta, Rng& rng) {
  if (better(candidate_value, best_value)) return {true, 1};
  const bool accept = uniform01(rng) < beta;
  return {accept, k + 1};
}

int perturb(const Instance& inst, Schedule& sched, int swaps, Rng& rng) {
  if (swaps <= 0) return 0;
  const int n = inst.project_count();
  std::vector<int> eligible;
  for (int p = 0; p < n; ++p) {
    for (int r = 0; r < n; ++r) {
      if (r != p && inst.project(r).duration == inst.project(p).duration) {
        eligible.push_back(p);
        break;
      }
    }
  }
  if (eligible.empty()) return 0;
  for (int i = 0; i < swaps; ++i) {
    const int p = eligible[static_cast<std::size_t>(
        uniform_int(rng, 0, static_cast<int>(eligible.size()) - 1))];
    std::vector<int> partners;
    for (int r : eligible) {
      if (r != p && inst.project(r).duration == inst.project(p).duration) partners.push_back(r);
    }
    const int r = partners[static_cast<std::size_t>(
        uniform_int(rng, 0, static_cast<int>(partners.size()) - 1))];
    std::swap(sched.periods[static_cast<std::size_t>(p)], sched.periods[static_cast<std::size_t>(r)]);
    repair(inst, sched, p);
    repair(inst, sched, r);
  }
  return swaps;
}

MhResult mh_solve(const Instance& inst, const MhConfig& cfg) {
  cfg.validate();
  BnbOptions o;
  o.time_limit = cfg.ev_time_limit;
  o.node_limit = cfg.ev_node_limit;
  const ExactSolution ev = solve_ev(inst, o);
  return mh_solve(inst, ev.schedule, cfg);
}

MhResult mh_solve(const Instance& inst, const Schedule& initial, const MhConfig& cfg) {
  cfg.validate();
  if (!validate_schedule(inst, initial).ok()) {
    throw std::invalid_argument("mh_solve: infeasible initial schedule");
  }
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  auto out_of_budget = [&](long searches) {
    if (cfg.max_searches >= 0 && searches >= cfg.max_searches) return true;
    return elapsed() >= cfg.time_limit;
  };

  Rng rng(cfg.seed);
  MhResult res;
  res.initial_schedule = initial;
  EvaluationCache cache(inst, cfg.fw, cfg.i_tilde);

  Schedule best = initial;  // Z*
  const Evaluation* best_eval = &cache.get(best, res.evaluations);
  double best_value = best_eval->estimate;
  double best_exact = best_eval->exact;
  res.initial_cost = best_exact;

  Schedule seen = best;  // never-worsening record
  double seen_exact = best_exact;

  Schedule z = best;
  double z_value = best_value;
  StaffingPlan z_plan = best_eval->plan;
  const int swaps = static_cast<int>(std::floor(cfg.pi * inst.project_count()));

  long n_r = 0;
  while (!out_of_budget(n_r)) {
    int k = 1;
    do {
      ++n_r;
      const int i_max =
          static_cast<int>(std::lround(std::sqrt(static_cast<double>(n_r)) * cfg.i_min));
      const auto fi = first_improvement(inst, z, z_value, best_value, z_plan, k, i_max, cfg.fw, rng);
      res.evaluations += fi.evaluations;

      const Evaluation& cand = cache.get(fi.schedule, res.evaluations);
      if (cand.exact < seen_exact) {
        seen = fi.schedule;
        seen_exact = cand.exact;
      }
      const auto dec = neighborhood_change(best_value, cand.estimate, k, cfg.beta, rng);
      if (dec.accept) {
        best = fi.schedule;
        best_value = cand.estimate;
        best_exact = cand.exact;
        z_plan = cand.plan;
      } else {
        z_plan = cache.get(best, res.evaluations).plan;
      }
      k = dec.k;
      z = best;
      z_value = best_value;
      res.log.push_back({elapsed(), n_r, k, best_exact, seen_exact});
    } while (k <= cfg.k_max && !out_of_budget(n_r));
    if (out_of_budget(n_r)) break;

    z = best;
    if (perturb(inst, z, swaps, rng) > 0) ++res.perturbations;
    const Evaluation& pe = cache.get(z, res.evaluations);
    z_value = pe.estimate;
    z_plan = pe.plan;
  }
  res.searches = n_r;

  FwConfig polish = cfg.fw;
  polish.iterations = cfg.polish_iterations;
  polish.full_trace = false;
  const FwResult fin = fw_solve(inst, seen, polish);
  res.schedule = seen;
  res.plan = fin.plan;
  res.expected_cost = fin.objective;
  return res;
}

void write_mh_log_csv(std::ostream& out, const std::vector<MhLogRow>& log, bool include_time) {
  out << (include_time ? "wall_time," : "") << "n_r,k,incumbent_cost,best_cost\n";
  char buf[160];
  for (const auto& r : log) {
    if (include_time) {
      std::snprintf(buf, sizeof buf, "%.6f,", r.wall_time);
      out << buf;
    }
    std::snprintf(buf, sizeof buf, "%ld,%d,%.17g,%.17g\n", r.searches, r.k, r.incumbent_cost,
                  r.best_cost);
    out << buf;
  }
}

}  // namespace stochsched
