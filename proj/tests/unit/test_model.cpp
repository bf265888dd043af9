#include <functional>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "stochsched/model.hpp"

using namespace stochsched;

namespace {

Project chain(int es, int ls, int d) {
  Project p;
  p.duration = d;
  p.earliest_start = es;
  p.latest_start = ls;
  p.activities.assign(static_cast<std::size_t>(d), {{0, TriangularDist{1, 2, 3}}});
  return p;
}

Instance one_project(Project p, int horizon) {
  InstanceData d;
  d.horizon = horizon;
  d.skill_count = 1;
  d.external_cost = {1.0};
  d.projects = {p};
  d.resources = {Resource{0, {0}, {1.0}, std::vector<double>(static_cast<std::size_t>(horizon), 1.0)}};
  return Instance(d);
}

std::size_t brute_force_count(const Project& p) {
  std::size_t count = 0;
  const int lo = p.earliest_start, hi = p.latest_finish();
  const int n = hi - lo + 1;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> periods;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) periods.push_back(lo + i);
    }
    if (static_cast<int>(periods.size()) != p.duration) continue;
    bool ok = true;
    for (int q = 1; q <= p.duration; ++q) {
      const int t = periods[static_cast<std::size_t>(q - 1)];
      ok = ok && t >= p.activity_earliest(q) && t <= p.activity_latest(q);
    }
    count += ok;
  }
  return count;
}

}  // namespace

TEST_CASE("validate_schedule examples") {
  const Instance inst = one_project(chain(1, 3, 3), 5);
  CHECK(validate_schedule(inst, Schedule{{{1, 2, 3}}}).ok());
  const auto bad = validate_schedule(inst, Schedule{{{2, 4, 6}}});
  REQUIRE(bad.violations.size() == 1);
  CHECK(bad.violations[0].activity == 3);
  CHECK(bad.violations[0].kind == ScheduleViolation::Kind::AfterLatest);
  CHECK(bad.violations[0].bound == 5);
  CHECK(!validate_schedule(inst, Schedule{{{2, 2, 3}}}).ok());
  CHECK_THROWS_AS(validate_schedule(inst, Schedule{{{1, 2}}}), StructuralError);
  CHECK_THROWS_AS(validate_schedule(inst, Schedule{}), StructuralError);
}

TEST_CASE("enumerate_schedules examples") {
  const auto a = enumerate_schedules(chain(1, 3, 3));
  const std::set<std::vector<int>> s(a.begin(), a.end());
  for (auto v : {std::vector<int>{1, 2, 3}, {1, 4, 5}, {2, 3, 5}, {3, 4, 5}}) CHECK(s.count(v) == 1);
  CHECK(std::is_sorted(a.begin(), a.end()));
  CHECK(enumerate_schedules(chain(4, 4, 2)) == std::vector<std::vector<int>>{{4, 5}});
  CHECK(enumerate_schedules(chain(1, 2, 2)) == std::vector<std::vector<int>>{{1, 2}, {1, 3}, {2, 3}});
  CHECK(enumerate_schedules(chain(2, 2, 3)).size() == 1);
}

TEST_CASE("enumeration matches brute force and validation") {
  for (int d = 1; d <= 5; ++d) {
    for (int g = 0; g <= 4; ++g) {
      const Project p = chain(2, 2 + g, d);
      const auto all = enumerate_schedules(p);
      CHECK(all.size() == brute_force_count(p));
      const Instance inst = one_project(p, p.latest_finish());
      for (const auto& row : all) CHECK(validate_schedule(inst, Schedule{{row}}).ok());
      // everything else in the window box is rejected
      const std::set<std::vector<int>> valid(all.begin(), all.end());
      std::vector<int> row(static_cast<std::size_t>(d), p.earliest_start);
      std::function<void(int)> rec = [&](int q) {
        if (q == d) {
          CHECK(validate_schedule(inst, Schedule{{row}}).ok() == (valid.count(row) == 1));
          return;
        }
        for (int t = 1; t <= p.latest_finish(); ++t) {
          row[static_cast<std::size_t>(q)] = t;
          rec(q + 1);
        }
      };
      if (d <= 3) rec(0);
    }
  }
}

TEST_CASE("random feasible schedules put one activity per period") {
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    const Instance inst = fixtures::random_tiny(rng, {3, 6, 2, 2, 3, 2});
    const Schedule s = fixtures::random_schedule(rng, inst);
    REQUIRE(validate_schedule(inst, s).ok());
    for (int p = 0; p < inst.project_count(); ++p) {
      std::set<int> seen(s.row(p).begin(), s.row(p).end());
      CHECK(seen.size() == s.row(p).size());
      for (int q = 1; q <= inst.project(p).duration; ++q) {
        const int t = s.row(p)[static_cast<std::size_t>(q - 1)];
        CHECK(s.activity_at(p, t) == q);
        for (const auto& sd : inst.project(p).activities[static_cast<std::size_t>(q - 1)]) {
          CHECK(scheduled_demand(inst, s, p, sd.skill, t) == sd.dist);
        }
      }
    }
  }
}

TEST_CASE("scheduled_demand") {
  Project p = chain(1, 1, 1);
  p.activities = {{{0, TriangularDist{7, 10, 13}}}};
  const Instance inst = one_project(p, 3);
  const Schedule s{{{1}}};
  CHECK(scheduled_demand(inst, s, 0, 0, 1) == TriangularDist{7, 10, 13});
  CHECK(scheduled_demand(inst, s, 0, 0, 2).is_zero());
}

TEST_CASE("instance invariants") {
  Project p = chain(3, 3, 3);
  CHECK_THROWS_AS(one_project(p, 4), InvalidInstance);
  p = chain(2, 1, 1);
  CHECK_THROWS_AS(one_project(p, 4), InvalidInstance);
  InstanceData d = one_project(chain(1, 1, 1), 2).data();
  d.external_cost = {0.0};
  CHECK_THROWS_AS(Instance{d}, InvalidInstance);
  d = one_project(chain(1, 1, 1), 2).data();
  d.resources[0].efficiency = {0.0};
  CHECK_THROWS_AS(Instance{d}, InvalidInstance);
  d = one_project(chain(1, 1, 1), 2).data();
  d.resources[0].capacity[1] = -1.0;
  CHECK_THROWS_AS(Instance{d}, InvalidInstance);
}

TEST_CASE("staffing plan storage and validation") {
  StaffingPlan plan;
  plan.add(0, 2, 0, 0, 1.0);
  plan.add(0, 1, 0, 0, 2.0);
  plan.add(0, 2, 0, 0, 0.5);
  CHECK(plan.entries().size() == 2);
  CHECK(plan.entries()[0].period == 1);
  CHECK(plan.get(0, 2, 0, 0) == 1.5);
  CHECK(plan.get(0, 3, 0, 0) == 0.0);
  CHECK(StaffingPlan::from_entries({{0, 2, 0, 0, 1.0}, {0, 1, 0, 0, 2.0}, {0, 2, 0, 0, 0.5}}) == plan);

  const Instance inst = fixtures::single({1, 2, 3}, 0.5, 4.0, 1.0);
  CHECK(validate_plan(inst, StaffingPlan::from_entries({{0, 1, 0, 0, 2.0}})).empty());
  const auto over = validate_plan(inst, StaffingPlan::from_entries({{0, 1, 0, 0, 2.1}}));
  REQUIRE(over.size() == 1);
  CHECK(over[0].kind == PlanViolation::Kind::OverCapacity);
  CHECK(!validate_plan(inst, StaffingPlan::from_entries({{0, 1, 0, 0, -1.0}})).empty());
}
