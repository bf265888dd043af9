#pragma once

#include <algorithm>
#include <vector>

#include "stochsched/distributions.hpp"
#include "stochsched/model.hpp"

namespace fixtures {

using namespace stochsched;

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

inline TriangularDist random_tri(Rng& rng, double scale = 10.0) {
  double v[3] = {uniform(rng, 0.0, scale), uniform(rng, 0.0, scale), uniform(rng, 0.0, scale)};
  std::sort(v, v + 3);
  return {v[0], v[1], v[2]};
}

/// One project, one activity, one skill, one resource.
inline Instance single(TriangularDist demand, double eta, double capacity, double cost) {
  InstanceData d;
  d.horizon = 1;
  d.skill_count = 1;
  d.external_cost = {cost};
  Project p;
  p.duration = 1;
  p.earliest_start = p.latest_start = 1;
  p.activities = {{{0, demand}}};
  d.projects = {p};
  d.resources = {Resource{0, {0}, {eta}, {capacity}}};
  return Instance(d);
}

struct TinyShape {
  int projects = 2;
  int horizon = 4;
  int resources = 2;
  int skills = 2;
  int max_duration = 2;
  int max_window = 1;
  double capacity = 6.0;
  double demand_scale = 6.0;
};

/// Small random instance built without the library generator.
inline Instance random_tiny(Rng& rng, const TinyShape& sh = {}) {
  InstanceData d;
  d.horizon = sh.horizon;
  d.skill_count = sh.skills;
  for (int s = 0; s < sh.skills; ++s) d.external_cost.push_back(uniform(rng, 1.0, 2.0));
  for (int p = 0; p < sh.projects; ++p) {
    Project pr;
    pr.id = p;
    pr.duration = uniform_int(rng, 1, std::min(sh.max_duration, sh.horizon));
    const int gamma = uniform_int(rng, 0, std::min(sh.max_window, sh.horizon - pr.duration));
    pr.earliest_start = uniform_int(rng, 1, sh.horizon - pr.duration - gamma + 1);
    pr.latest_start = pr.earliest_start + gamma;
    for (int q = 0; q < pr.duration; ++q) {
      std::vector<SkillDemand> act;
      for (int s = 0; s < sh.skills; ++s) {
        if (uniform01(rng) < 0.6) act.push_back({s, random_tri(rng, sh.demand_scale)});
      }
      if (act.empty()) act.push_back({uniform_int(rng, 0, sh.skills - 1), random_tri(rng, sh.demand_scale)});
      pr.activities.push_back(act);
    }
    d.projects.push_back(pr);
  }
  for (int k = 0; k < sh.resources; ++k) {
    Resource r;
    r.id = k;
    for (int s = 0; s < sh.skills; ++s) {
      if (uniform01(rng) < 0.6) {
        r.skills.push_back(s);
        r.efficiency.push_back(uniform(rng, 0.5, 1.5));
      }
    }
    if (r.skills.empty()) {
      r.skills.push_back(uniform_int(rng, 0, sh.skills - 1));
      r.efficiency.push_back(uniform(rng, 0.5, 1.5));
    }
    for (int t = 0; t < sh.horizon; ++t) r.capacity.push_back(uniform(rng, 0.0, sh.capacity));
    d.resources.push_back(r);
  }
  return Instance(d);
}

inline Schedule random_schedule(Rng& rng, const Instance& inst) {
  Schedule s;
  for (const auto& pr : inst.projects()) {
    const auto all = enumerate_schedules(pr);
    s.periods.push_back(all[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(all.size()) - 1))]);
  }
  return s;
}

/// Random capacity-feasible plan on the scheduled packages.
inline StaffingPlan random_plan(Rng& rng, const Instance& inst, const Schedule& sched) {
  StaffingPlan plan;
  for (int k = 0; k < inst.resource_count(); ++k) {
    for (int t = 1; t <= inst.horizon(); ++t) {
      std::vector<std::pair<int, int>> cells;
      for (int p = 0; p < inst.project_count(); ++p) {
        const int q = sched.activity_at(p, t);
        if (q == 0) continue;
        for (const auto& sd : inst.project(p).activities[static_cast<std::size_t>(q - 1)]) {
          if (inst.eta(sd.skill, k) > 0.0) cells.emplace_back(p, sd.skill);
        }
      }
      if (cells.empty()) continue;
      std::vector<double> w(cells.size() + 1);
      double sum = 0.0;
      for (auto& v : w) sum += (v = uniform01(rng));
      for (std::size_t i = 0; i < cells.size(); ++i) {
        const double real = inst.capacity(k, t) * w[i] / sum;
        plan.add(cells[i].first, t, cells[i].second, k, real * inst.eta(cells[i].second, k));
      }
    }
  }
  return plan;
}

}  // namespace fixtures
