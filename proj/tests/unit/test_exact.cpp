#include <cmath>
#include <map>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "stochsched/evaluator.hpp"
#include "stochsched/exact.hpp"

using namespace stochsched;

namespace {

/// Minimum of the fixed-schedule LP over all schedule combinations.
double enumerate_min(const Instance& inst, const DemandModel& demand, const std::vector<int>& fixed) {
  const int P = inst.project_count();
  std::vector<std::vector<std::vector<int>>> opts;
  for (int p = 0; p < P; ++p) opts.push_back(enumerate_schedules(inst.project(p)));
  double best = 1e300;
  std::vector<std::size_t> idx(static_cast<std::size_t>(P), 0);
  for (;;) {
    bool consistent = true;
    Schedule s;
    for (int p = 0; p < P; ++p) {
      const auto i = idx[static_cast<std::size_t>(p)];
      const int f = fixed.empty() ? -1 : fixed[static_cast<std::size_t>(p)];
      consistent = consistent && (f < 0 || static_cast<std::size_t>(f) == i);
      s.periods.push_back(opts[static_cast<std::size_t>(p)][i]);
    }
    if (consistent) best = std::min(best, staffing_lp(inst, s, demand).cost);
    int p = P - 1;
    while (p >= 0 && ++idx[static_cast<std::size_t>(p)] == opts[static_cast<std::size_t>(p)].size()) {
      idx[static_cast<std::size_t>(p)] = 0;
      --p;
    }
    if (p < 0) break;
  }
  return best;
}

Instance fixed_windows(Instance inst) {
  InstanceData d = inst.data();
  for (auto& p : d.projects) p.latest_start = p.earliest_start;
  return Instance(d);
}

}  // namespace

TEST_CASE("zero windows reduce to one staffing LP") {
  Rng rng(5);
  const Instance inst = fixed_windows(fixtures::random_tiny(rng, {3, 5, 2, 2, 3, 2}));
  const auto ev = solve_ev(inst);
  CHECK(ev.optimal);
  CHECK(ev.schedule == earliest_schedule(inst));
  CHECK(ev.objective == doctest::Approx(staffing_lp(inst, ev.schedule, MeanDemand{}).cost));
  const auto oracle = exhaustive_oracle(inst);
  CHECK(oracle.evaluations == 1);
}

TEST_CASE("solve_ev matches enumeration and node bounds are valid") {
  Rng rng(7);
  for (int i = 0; i < 25; ++i) {
    const Instance inst = fixtures::random_tiny(rng, {3, 6, 2, 2, 3, 2});
    BnbOptions opts;
    opts.record_nodes = true;
    const auto ev = solve_ev(inst, opts);
    REQUIRE(ev.optimal);
    CHECK(validate_schedule(inst, ev.schedule).ok());
    CHECK(ev_cost(inst, ev.schedule, ev.plan) == doctest::Approx(ev.objective).epsilon(1e-9));
    const double ref = enumerate_min(inst, MeanDemand{}, {});
    CHECK(ev.objective == doctest::Approx(ref).epsilon(1e-9));
    for (const auto& node : ev.node_log) {
      CHECK(node.bound <= enumerate_min(inst, MeanDemand{}, node.choice) + 1e-7);
    }
  }
}

TEST_CASE("solve_saa is exact for its sample and reports the true cost") {
  Rng rng(9);
  for (int i = 0; i < 10; ++i) {
    const Instance inst = fixtures::random_tiny(rng, {2, 4, 2, 2, 2, 1});
    const auto sc = ScenarioSet::sample(inst, 20, static_cast<std::uint64_t>(i));
    const auto saa = solve_saa(inst, sc);
    REQUIRE(saa.optimal);
    CHECK(saa.objective == doctest::Approx(enumerate_min(inst, ScenarioDemand(sc), {})).epsilon(1e-9));
    CHECK(saa.objective == doctest::Approx(saa_cost(inst, saa.schedule, saa.plan, sc)).epsilon(1e-9));
    CHECK(saa.expected_cost == doctest::Approx(expected_external_cost(inst, saa.schedule, saa.plan)));
    CHECK(saa.sample_size == 20);
  }
}

TEST_CASE("single mean scenario reproduces the EV solve") {
  Rng rng(12);
  for (int i = 0; i < 10; ++i) {
    const Instance inst = fixtures::random_tiny(rng, {3, 6, 2, 2, 3, 2});
    const auto ev = solve_ev(inst);
    const auto saa = solve_saa(inst, ScenarioSet::mean(inst));
    CHECK(saa.schedule == ev.schedule);
    CHECK(saa.plan == ev.plan);
    CHECK(saa.objective == ev.objective);
    CHECK(saa.nodes == ev.nodes);
  }
}

TEST_CASE("limits return an incumbent flagged non-optimal") {
  Rng rng(3);
  const Instance inst = fixtures::random_tiny(rng, {4, 6, 2, 2, 3, 2});
  BnbOptions opts;
  opts.node_limit = 1;
  const auto r = solve_ev(inst, opts);
  CHECK(!r.optimal);
  CHECK(validate_schedule(inst, r.schedule).ok());
  opts.node_limit = -1;
  opts.time_limit = 0.0;
  CHECK(!solve_ev(inst, opts).optimal);
}

TEST_CASE("exhaustive oracle") {
  Rng rng(15);
  const Instance inst = fixtures::random_tiny(rng, {2, 4, 2, 2, 2, 1});
  const long n = schedule_space_size(inst, 100000);
  const auto lin = exhaustive_oracle(inst);
  CHECK(lin.evaluations == n);
  OracleOptions fw;
  fw.staffing = OracleStaffing::FrankWolfe;
  fw.fw_iterations = 20000;
  const auto f = exhaustive_oracle(inst, fw);
  CHECK(std::abs(f.cost - lin.cost) <= 0.002 * lin.cost + 1e-9);
  OracleOptions small;
  small.max_combinations = n - 1;
  CHECK_THROWS_AS(exhaustive_oracle(inst, small), SearchSpaceTooLarge);

  // 2 projects x 3 schedules each
  InstanceData d = inst.data();
  d.horizon = 4;
  for (auto& p : d.projects) {
    p.duration = 2;
    p.earliest_start = 1;
    p.latest_start = 2;
    p.activities.resize(2, p.activities[0]);
  }
  for (auto& r : d.resources) r.capacity.resize(4, 3.0);
  const Instance nine(d);
  CHECK(exhaustive_oracle(nine).evaluations == 9);
}

TEST_CASE("lp export and solution import") {
  Rng rng(17);
  const Instance inst = fixtures::random_tiny(rng, {2, 4, 2, 2, 2, 1});
  const auto sc = ScenarioSet::sample(inst, 3, 1);
  std::ostringstream ev_model, saa_model;
  write_lp_model(ev_model, inst, nullptr);
  write_lp_model(saa_model, inst, &sc);
  CHECK(ev_model.str().find("Minimize") != std::string::npos);
  CHECK(ev_model.str().find("Binaries") != std::string::npos);
  CHECK(saa_model.str().find("_2:") != std::string::npos);
  auto count = [](const std::string& text, const std::string& key) {
    std::size_t n = 0;
    for (auto pos = text.find(key); pos != std::string::npos; pos = text.find(key, pos + 1)) ++n;
    return n;
  };
  CHECK(count(ev_model.str(), " dem_") > 0);
  CHECK(count(saa_model.str(), " dem_") == 3 * count(ev_model.str(), " dem_"));

  const auto ev = solve_ev(inst);
  std::ostringstream values;
  values << "objective " << ev.objective << "\n";
  for (int p = 0; p < inst.project_count(); ++p) {
    for (int q = 1; q <= inst.project(p).duration; ++q) {
      for (int t = inst.project(p).activity_earliest(q); t <= inst.project(p).activity_latest(q); ++t) {
        values << "z_" << p << "_" << q << "_" << t << " "
               << (ev.schedule.row(p)[static_cast<std::size_t>(q - 1)] == t ? 1 : 0) << "\n";
      }
    }
  }
  for (const auto& e : ev.plan.entries()) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "x_%d_%d_%d_%d %.17g\n", e.project, e.period, e.skill, e.resource, e.work);
    values << buf;
  }
  std::istringstream in(values.str());
  const auto imp = import_lp_solution(in, inst);
  CHECK(imp.schedule == ev.schedule);
  CHECK(imp.plan == ev.plan);
  std::istringstream broken("z_0_1_1 1\n");
  CHECK_THROWS_AS(import_lp_solution(broken, inst), StructuralError);
}
