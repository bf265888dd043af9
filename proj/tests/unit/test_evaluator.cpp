#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "stochsched/evaluator.hpp"
#include "stochsched/scenarios.hpp"

using namespace stochsched;

namespace {

StaffingPlan cover_max(const Instance& inst, const Schedule& s) {
  std::vector<StaffingEntry> e;
  for (int p = 0; p < inst.project_count(); ++p) {
    for (int q = 1; q <= inst.project(p).duration; ++q) {
      for (const auto& sd : inst.project(p).activities[static_cast<std::size_t>(q - 1)]) {
        e.push_back({p, s.row(p)[static_cast<std::size_t>(q - 1)], sd.skill, 0, sd.dist.max});
      }
    }
  }
  return StaffingPlan::from_entries(e);
}

}  // namespace

TEST_CASE("expected cost boundary cases") {
  const Instance inst = fixtures::single({7, 10, 13}, 1.0, 20.0, 2.0);
  const Schedule s{{{1}}};
  CHECK(expected_external_cost(inst, s, StaffingPlan{}) == doctest::Approx(20.0));
  CHECK(expected_external_cost(inst, s, cover_max(inst, s)) == 0.0);
  const auto mean_cov = StaffingPlan::from_entries({{0, 1, 0, 0, 10.0}});
  CHECK(ev_cost(inst, s, mean_cov) == 0.0);
  CHECK(expected_external_cost(inst, s, mean_cov) > 0.0);
  CHECK(expected_external_cost(inst, s, mean_cov) ==
        doctest::Approx(2.0 * tri_shortfall({7, 10, 13}, 10.0)));

  const Instance det = fixtures::single(TriangularDist::point(10), 1.0, 5.0, 3.0);
  const auto half = StaffingPlan::from_entries({{0, 1, 0, 0, 4.0}});
  CHECK(ev_cost(det, s, half) == doctest::Approx(18.0));
  CHECK(expected_external_cost(det, s, half) == doctest::Approx(18.0));
}

TEST_CASE("infeasible inputs are rejected with a violation list") {
  const Instance inst = fixtures::single({7, 10, 13}, 1.0, 5.0, 1.0);
  const Schedule s{{{1}}};
  const auto over = StaffingPlan::from_entries({{0, 1, 0, 0, 6.0}});
  CHECK_THROWS_AS(expected_external_cost(inst, s, over), InfeasibleInput);
  try {
    ev_cost(inst, s, over);
  } catch (const InfeasibleInput& e) {
    CHECK(e.violations().size() == 1);
  }
  CHECK_THROWS_AS(expected_external_cost(inst, Schedule{{{2}}}, StaffingPlan{}), InfeasibleInput);
  CHECK_THROWS_AS(saa_cost(inst, s, StaffingPlan{}, ScenarioSet{}), std::invalid_argument);
}

TEST_CASE("saa special scenario sets") {
  Rng rng(8);
  for (int i = 0; i < 30; ++i) {
    const Instance inst = fixtures::random_tiny(rng);
    const Schedule s = fixtures::random_schedule(rng, inst);
    const StaffingPlan plan = fixtures::random_plan(rng, inst, s);
    CHECK(saa_cost(inst, s, plan, ScenarioSet::mean(inst)) ==
          doctest::Approx(ev_cost(inst, s, plan)).epsilon(1e-12));
    // worst case: every package at its max
    const ScheduledDemand dem(inst, s);
    const auto cov = dem.coverage(plan);
    double worst = 0.0;
    for (std::size_t j = 0; j < cov.size(); ++j) {
      worst += dem.terms()[j].cost_rate * std::max(0.0, dem.terms()[j].dist.max - cov[j]);
    }
    CHECK(saa_cost(inst, s, plan, ScenarioSet::maximum(inst)) == doctest::Approx(worst));
  }
}

TEST_CASE("expected cost matches Monte Carlo") {
  Rng rng(17);
  for (int i = 0; i < 5; ++i) {
    const Instance inst = fixtures::random_tiny(rng);
    const Schedule s = fixtures::random_schedule(rng, inst);
    const StaffingPlan plan = fixtures::random_plan(rng, inst, s);
    const ScheduledDemand dem(inst, s);
    const auto cov = dem.coverage(plan);
    const int n = 1'000'000;
    double sum = 0.0, sq = 0.0;
    Rng mc(100 + i);
    for (int r = 0; r < n; ++r) {
      double g = 0.0;
      for (std::size_t j = 0; j < cov.size(); ++j) {
        const auto& term = dem.terms()[j];
        g += term.cost_rate * std::max(0.0, sample(term.dist, mc) - cov[j]);
      }
      sum += g;
      sq += g * g;
    }
    const double mean = sum / n;
    const double se = std::sqrt(std::max(0.0, sq / n - mean * mean) / n);
    CHECK(std::abs(expected_external_cost(inst, s, plan) - mean) <= 3 * se + 1e-12);
  }
}

TEST_CASE("saa converges to expected cost") {
  Rng rng(29);
  const Instance inst = fixtures::random_tiny(rng);
  const Schedule s = fixtures::random_schedule(rng, inst);
  const StaffingPlan plan = fixtures::random_plan(rng, inst, s);
  const double exact = expected_external_cost(inst, s, plan);
  const double saa = saa_cost(inst, s, plan, ScenarioSet::sample(inst, 100'000, 3));
  CHECK(std::abs(saa - exact) <= 0.005 * exact);
}

TEST_CASE("objective properties on random inputs") {
  Rng rng(13);
  for (int i = 0; i < 200; ++i) {
    const Instance inst = fixtures::random_tiny(rng);
    const Schedule s = fixtures::random_schedule(rng, inst);
    const StaffingPlan a = fixtures::random_plan(rng, inst, s);
    const StaffingPlan b = fixtures::random_plan(rng, inst, s);
    const double ea = expected_external_cost(inst, s, a);
    CHECK(ev_cost(inst, s, a) <= ea + 1e-12);
    // convexity along the segment between two feasible plans
    std::vector<StaffingEntry> mid;
    for (auto e : a.entries()) mid.push_back({e.project, e.period, e.skill, e.resource, 0.5 * e.work});
    for (auto e : b.entries()) mid.push_back({e.project, e.period, e.skill, e.resource, 0.5 * e.work});
    const auto m = StaffingPlan::from_entries(mid);
    CHECK(expected_external_cost(inst, s, m) <= 0.5 * (ea + expected_external_cost(inst, s, b)) + 1e-9);
    // monotone: dropping work never lowers any objective
    std::vector<StaffingEntry> less;
    for (auto e : a.entries()) less.push_back({e.project, e.period, e.skill, e.resource, 0.7 * e.work});
    const auto l = StaffingPlan::from_entries(less);
    const auto sc = ScenarioSet::sample(inst, 20, static_cast<std::uint64_t>(i));
    CHECK(expected_external_cost(inst, s, l) >= ea - 1e-12);
    CHECK(ev_cost(inst, s, l) >= ev_cost(inst, s, a) - 1e-12);
    CHECK(saa_cost(inst, s, l, sc) >= saa_cost(inst, s, a, sc) - 1e-12);
  }
}

TEST_CASE("period cost profile sums to the total") {
  Rng rng(2);
  const Instance inst = fixtures::random_tiny(rng);
  const Schedule s = fixtures::random_schedule(rng, inst);
  const StaffingPlan plan = fixtures::random_plan(rng, inst, s);
  const auto prof = period_cost_profile(inst, s, plan);
  double sum = 0.0;
  for (double v : prof) sum += v;
  CHECK(sum == doctest::Approx(expected_external_cost(inst, s, plan)));
  CHECK(prof[0] == 0.0);
}
