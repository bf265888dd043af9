#include "stochsched/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <tuple>

namespace stochsched {

TriangularDist Project::demand(int q, int skill) const {
  for (const auto& sd : activities[static_cast<std::size_t>(q - 1)]) {
    if (sd.skill == skill) return sd.dist;
  }
  return TriangularDist::zero();
}

std::vector<int> Project::skills() const {
  std::set<int> all;
  for (const auto& act : activities) {
    for (const auto& sd : act) all.insert(sd.skill);
  }
  return {all.begin(), all.end()};
}

double Resource::eta(int skill) const {
  for (std::size_t i = 0; i < skills.size(); ++i) {
    if (skills[i] == skill) return efficiency[i];
  }
  return 0.0;
}

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw InvalidInstance(what);
}

}  // namespace

Instance::Instance(InstanceData data) : data_(std::move(data)) {
  const int T = data_.horizon;
  const int S = data_.skill_count;
  require(T >= 1, "horizon must be >= 1");
  require(S >= 1, "skill count must be >= 1");
  require(static_cast<int>(data_.external_cost.size()) == S,
          "external cost vector must have one rate per skill");
  for (int s = 0; s < S; ++s) {
    require(data_.external_cost[static_cast<std::size_t>(s)] > 0.0,
            "external cost rate of skill " + std::to_string(s) + " must be positive");
  }
  for (std::size_t p = 0; p < data_.projects.size(); ++p) {
    const Project& pr = data_.projects[p];
    const std::string tag = "project " + std::to_string(p) + ": ";
    require(pr.id == static_cast<int>(p), tag + "id must equal its position");
    require(pr.duration >= 1, tag + "duration must be >= 1");
    require(pr.earliest_start >= 1, tag + "earliest start must be >= 1");
    require(pr.latest_start >= pr.earliest_start, tag + "latest start before earliest start");
    require(pr.latest_finish() <= T, tag + "latest finish exceeds the horizon");
    require(static_cast<int>(pr.activities.size()) == pr.duration,
            tag + "one demand list per activity required");
    for (const auto& act : pr.activities) {
      std::set<int> seen;
      for (const auto& sd : act) {
        require(sd.skill >= 0 && sd.skill < S, tag + "demand skill out of range");
        require(seen.insert(sd.skill).second, tag + "duplicate skill in an activity");
        require(sd.dist.valid(), tag + "invalid triangular distribution");
      }
    }
  }
  const std::size_t K = data_.resources.size();
  eta_.assign(static_cast<std::size_t>(S) * K, 0.0);
  holders_.assign(static_cast<std::size_t>(S), {});
  for (std::size_t k = 0; k < K; ++k) {
    const Resource& r = data_.resources[k];
    const std::string tag = "resource " + std::to_string(k) + ": ";
    require(r.id == static_cast<int>(k), tag + "id must equal its position");
    require(r.skills.size() == r.efficiency.size(), tag + "one efficiency per held skill");
    require(static_cast<int>(r.capacity.size()) == T, tag + "one capacity per period");
    require(std::is_sorted(r.skills.begin(), r.skills.end()) &&
                std::adjacent_find(r.skills.begin(), r.skills.end()) == r.skills.end(),
            tag + "skills must be strictly ascending");
    for (double a : r.capacity) require(a >= 0.0, tag + "capacity must be nonnegative");
    for (std::size_t i = 0; i < r.skills.size(); ++i) {
      const int s = r.skills[i];
      require(s >= 0 && s < S, tag + "skill out of range");
      require(r.efficiency[i] > 0.0, tag + "efficiency must be positive");
      eta_[index(s, static_cast<int>(k))] = r.efficiency[i];
      holders_[static_cast<std::size_t>(s)].push_back(static_cast<int>(k));
    }
  }
}

double Instance::total_capacity() const {
  double sum = 0.0;
  for (const auto& r : data_.resources) {
    for (double a : r.capacity) sum += a;
  }
  return sum;
}

double Instance::total_expected_demand() const {
  double sum = 0.0;
  for (const auto& pr : data_.projects) {
    for (const auto& act : pr.activities) {
      for (const auto& sd : act) sum += sd.dist.mean();
    }
  }
  return sum;
}

int Schedule::activity_at(int p, int period) const {
  const auto& r = row(p);
  // rows are short and increasing
  for (std::size_t q = 0; q < r.size(); ++q) {
    if (r[q] == period) return static_cast<int>(q) + 1;
    if (r[q] > period) break;
  }
  return 0;
}

std::string ScheduleViolation::describe() const {
  std::ostringstream os;
  os << "project " << project << " activity " << activity << ": period " << period;
  switch (kind) {
    case Kind::BeforeEarliest: os << " before earliest start " << bound; break;
    case Kind::AfterLatest: os << " after latest start " << bound; break;
    case Kind::NotIncreasing: os << " not after predecessor period " << bound; break;
  }
  return os.str();
}

ScheduleCheck validate_schedule(const Instance& inst, const Schedule& sched) {
  if (static_cast<int>(sched.periods.size()) != inst.project_count()) {
    throw StructuralError("schedule has " + std::to_string(sched.periods.size()) +
                          " rows, instance has " + std::to_string(inst.project_count()) +
                          " projects");
  }
  ScheduleCheck check;
  for (int p = 0; p < inst.project_count(); ++p) {
    const Project& pr = inst.project(p);
    const auto& r = sched.row(p);
    if (static_cast<int>(r.size()) != pr.duration) {
      throw StructuralError("schedule row " + std::to_string(p) + " has " +
                            std::to_string(r.size()) + " entries, project has " +
                            std::to_string(pr.duration) + " activities");
    }
    for (int q = 1; q <= pr.duration; ++q) {
      const int t = r[static_cast<std::size_t>(q - 1)];
      if (t < pr.activity_earliest(q)) {
        check.violations.push_back(
            {p, q, ScheduleViolation::Kind::BeforeEarliest, t, pr.activity_earliest(q)});
      }
      if (t > pr.activity_latest(q)) {
        check.violations.push_back(
            {p, q, ScheduleViolation::Kind::AfterLatest, t, pr.activity_latest(q)});
      }
      if (q > 1 && t <= r[static_cast<std::size_t>(q - 2)]) {
        check.violations.push_back(
            {p, q, ScheduleViolation::Kind::NotIncreasing, t, r[static_cast<std::size_t>(q - 2)]});
      }
    }
  }
  return check;
}

namespace {

void extend(const Project& pr, std::vector<int>& prefix, std::vector<std::vector<int>>& out) {
  const int q = static_cast<int>(prefix.size()) + 1;
  if (q > pr.duration) {
    out.push_back(prefix);
    return;
  }
  const int lo = std::max(pr.activity_earliest(q), prefix.empty() ? 1 : prefix.back() + 1);
  for (int t = lo; t <= pr.activity_latest(q); ++t) {
    prefix.push_back(t);
    extend(pr, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<std::vector<int>> enumerate_schedules(const Project& project) {
  std::vector<std::vector<int>> out;
  std::vector<int> prefix;
  prefix.reserve(static_cast<std::size_t>(project.duration));
  extend(project, prefix, out);
  return out;
}

Schedule earliest_schedule(const Instance& inst) {
  Schedule s;
  for (const auto& pr : inst.projects()) {
    std::vector<int> r;
    for (int q = 1; q <= pr.duration; ++q) r.push_back(pr.activity_earliest(q));
    s.periods.push_back(std::move(r));
  }
  return s;
}

TriangularDist scheduled_demand(const Instance& inst, const Schedule& sched, int p, int skill,
                                int period) {
  const int q = sched.activity_at(p, period);
  if (q == 0) return TriangularDist::zero();
  return inst.project(p).demand(q, skill);
}

namespace {

auto key_of(const StaffingEntry& e) { return std::tie(e.project, e.period, e.skill, e.resource); }

}  // namespace

StaffingPlan StaffingPlan::from_entries(std::vector<StaffingEntry> entries) {
  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto& a, const auto& b) { return key_of(a) < key_of(b); });
  StaffingPlan plan;
  for (const auto& e : entries) {
    if (!plan.entries_.empty() && key_of(plan.entries_.back()) == key_of(e)) {
      plan.entries_.back().work += e.work;
    } else {
      plan.entries_.push_back(e);
    }
  }
  std::erase_if(plan.entries_, [](const auto& e) { return e.work == 0.0; });
  return plan;
}

void StaffingPlan::add(int p, int period, int skill, int k, double work) {
  StaffingEntry probe{p, period, skill, k, work};
  auto it = std::lower_bound(entries_.begin(), entries_.end(), probe,
                             [](const auto& a, const auto& b) { return key_of(a) < key_of(b); });
  if (it != entries_.end() && key_of(*it) == key_of(probe)) {
    it->work += work;
    if (it->work == 0.0) entries_.erase(it);
  } else if (work != 0.0) {
    entries_.insert(it, probe);
  }
}

double StaffingPlan::get(int p, int period, int skill, int k) const {
  StaffingEntry probe{p, period, skill, k, 0.0};
  auto it = std::lower_bound(entries_.begin(), entries_.end(), probe,
                             [](const auto& a, const auto& b) { return key_of(a) < key_of(b); });
  if (it != entries_.end() && key_of(*it) == key_of(probe)) return it->work;
  return 0.0;
}

std::string PlanViolation::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Negative:
      os << "negative work " << amount << " at (p=" << project << ", t=" << period
         << ", s=" << skill << ", k=" << resource << ")";
      break;
    case Kind::SkillNotHeld:
      os << "resource " << resource << " does not hold skill " << skill;
      break;
    case Kind::OutsideProjectSpan:
      os << "work for project " << project << " in period " << period
         << " outside its span";
      break;
    case Kind::OverCapacity:
      os << "resource " << resource << " over capacity in period " << period << " by "
         << amount;
      break;
    case Kind::BadIndex:
      os << "index out of range at (p=" << project << ", t=" << period << ", s=" << skill
         << ", k=" << resource << ")";
      break;
  }
  return os.str();
}

std::vector<PlanViolation> validate_plan(const Instance& inst, const StaffingPlan& plan) {
  std::vector<PlanViolation> out;
  const int T = inst.horizon();
  const int K = inst.resource_count();
  std::vector<double> load(static_cast<std::size_t>(T * K), 0.0);
  for (const auto& e : plan.entries()) {
    if (e.project < 0 || e.project >= inst.project_count() || e.period < 1 || e.period > T ||
        e.skill < 0 || e.skill >= inst.skill_count() || e.resource < 0 || e.resource >= K) {
      out.push_back({PlanViolation::Kind::BadIndex, e.project, e.period, e.skill, e.resource,
                     e.work});
      continue;
    }
    if (e.work < 0.0) {
      out.push_back({PlanViolation::Kind::Negative, e.project, e.period, e.skill, e.resource,
                     e.work});
    }
    const double eta = inst.eta(e.skill, e.resource);
    if (eta <= 0.0) {
      out.push_back({PlanViolation::Kind::SkillNotHeld, e.project, e.period, e.skill,
                     e.resource, e.work});
      continue;
    }
    const Project& pr = inst.project(e.project);
    if (e.period < pr.earliest_start || e.period > pr.latest_finish()) {
      out.push_back({PlanViolation::Kind::OutsideProjectSpan, e.project, e.period, e.skill,
                     e.resource, e.work});
    }
    load[static_cast<std::size_t>((e.period - 1) * K + e.resource)] += e.work / eta;
  }
  for (int t = 1; t <= T; ++t) {
    for (int k = 0; k < K; ++k) {
      const double a = inst.capacity(k, t);
      const double used = load[static_cast<std::size_t>((t - 1) * K + k)];
      const double tol = std::max(kCapacityTolerance * a, 1e-12);
      if (used > a + tol) {
        out.push_back({PlanViolation::Kind::OverCapacity, -1, t, -1, k, used - a});
      }
    }
  }
  return out;
}

}  // namespace stochsched
