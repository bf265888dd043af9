// Acceptance suite: one criterion per invocation, one PASS/FAIL line each.
//   acceptance <1..10|all> [--cli <path to stochsched executable>]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "stochsched/distributions.hpp"
#include "stochsched/evaluator.hpp"
#include "stochsched/exact.hpp"
#include "stochsched/experiments.hpp"
#include "stochsched/frank_wolfe.hpp"
#include "stochsched/generator.hpp"
#include "stochsched/io.hpp"
#include "stochsched/matheuristic.hpp"
#include "stochsched/staffing_lp.hpp"

using namespace stochsched;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string cli_path;

std::string f(double v, int digits = 6) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string pct(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * v);
  return buf;
}

std::string list(const std::vector<double>& v, bool percent = false) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += percent ? pct(v[i]) : f(v[i]);
  }
  return out + "]";
}

void progress(const std::string& msg) { std::cerr << "  " << msg << std::endl; }

Instance basic_instance(int index, const UncertaintyLevel& lvl, bool skew = false) {
  GeneratorConfig c = preset("basic");
  c.seed = instance_seed(2024, index);
  c.c_min = lvl.c_min;
  c.c_max = lvl.c_max;
  c.skew = skew;
  return generate(c);
}

Instance tiny_instance(std::uint64_t base, int index) {
  GeneratorConfig c = preset("tiny");
  c.seed = instance_seed(base, index);
  return generate(c);
}

// 1: closed-form shortfall against quadrature, derivative against the cdf

Outcome criterion1() {
  Rng rng(101);
  double worst_value = 0.0;
  double worst_slope = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const TriangularDist d = fixtures::random_tri(rng, 100.0);
    const double span = d.max - d.min;
    const double zeta = fixtures::uniform(rng, d.min - 0.2 * span, d.max + 0.2 * span);
    const double exact = tri_shortfall(d, zeta);
    const double quad = oracles::shortfall_quadrature(d, zeta);
    const double rel = quad == 0.0 ? std::abs(exact) : std::abs(exact - quad) / std::abs(quad);
    worst_value = std::max(worst_value, rel);

    const double h = 1e-6 * std::max(1.0, span);
    if (std::abs(zeta - d.min) > 2 * h && std::abs(zeta - d.mode) > 2 * h &&
        std::abs(zeta - d.max) > 2 * h) {
      const double fd = (tri_shortfall(d, zeta + h) - tri_shortfall(d, zeta - h)) / (2 * h);
      worst_slope = std::max(worst_slope, std::abs(fd - (tri_cdf(d, zeta) - 1.0)));
    }
  }
  return {worst_value < 1e-8 && worst_slope < 1e-6,
          "max rel err " + f(worst_value, 3) + " (< 1e-8), max slope err " + f(worst_slope, 3) +
              " (< 1e-6)"};
}

// 2: FW against the finely linearized staffing LP

Outcome criterion2() {
  Rng rng(202);
  fixtures::TinyShape sh;
  sh.projects = 3;
  sh.horizon = 5;
  sh.resources = 3;
  sh.skills = 3;
  sh.max_duration = 3;
  sh.max_window = 2;
  FwConfig fw;
  fw.iterations = 10000;
  fw.line_search = LineSearch::GoldenSection;
  fw.variant = FwVariant::Modified;
  fw.full_trace = false;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Instance inst = fixtures::random_tiny(rng, sh);
    const Schedule s = fixtures::random_schedule(rng, inst);
    const double fw_cost = fw_solve(inst, s, fw).objective;
    const double lp_cost = staffing_lp(inst, s, LinearizedDemand(1000)).cost;
    const double scale = std::max(lp_cost, fw_cost);
    const double rel = scale > 1e-9 ? std::abs(fw_cost - lp_cost) / scale : 0.0;
    worst = std::max(worst, rel);
  }
  return {worst <= 0.002, "max relative difference " + pct(worst) + " over 50 instances (<= 0.2%)"};
}

// 3: basic FW with exact line search never increases the bound

Outcome criterion3() {
  Rng rng(303);
  fixtures::TinyShape sh;
  sh.projects = 3;
  sh.horizon = 6;
  sh.resources = 3;
  sh.skills = 3;
  sh.max_duration = 3;
  sh.max_window = 2;
  FwConfig fw;
  fw.variant = FwVariant::Basic;
  fw.line_search = LineSearch::GoldenSection;
  fw.iterations = 300;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Instance inst = fixtures::random_tiny(rng, sh);
    const Schedule s = fixtures::random_schedule(rng, inst);
    const auto r = fw_solve(inst, s, fw);
    for (std::size_t j = 1; j < r.trace.size(); ++j) {
      const double rise = r.trace[j].second - r.trace[j - 1].second;
      worst = std::max(worst, rise / std::max(1.0, std::abs(r.trace[j - 1].second)));
    }
  }
  return {worst <= 1e-9, "largest relative increase " + f(worst, 3) + " over 100 schedules (<= 1e-9)"};
}

// 4: MH against exhaustive enumeration on tiny instances

Outcome criterion4() {
  MhConfig mc;
  mc.time_limit = 60.0;
  mc.max_searches = 500;
  double worst = -1.0;
  int within = 0;
  for (int i = 0; i < 30; ++i) {
    const Instance inst = tiny_instance(404, i);
    const auto oracle = exhaustive_oracle(inst);
    mc.seed = static_cast<std::uint64_t>(i + 1);
    const auto mh = mh_solve(inst, mc);
    const double rel = oracle.cost > 0.0 ? (mh.expected_cost - oracle.cost) / oracle.cost : 0.0;
    worst = std::max(worst, rel);
    within += rel <= 0.005;
  }
  return {within == 30, std::to_string(within) + "/30 within 0.5%, worst excess " + pct(worst)};
}

// 5: budget bias of the EV solution across uncertainty levels

Outcome criterion5() {
  BnbOptions o;
  o.node_limit = 5000;
  std::vector<double> means;
  bool nonnegative = true;
  for (const auto& lvl : uncertainty_levels()) {
    std::vector<double> rel;
    for (int i = 0; i < 10; ++i) {
      const Instance inst = basic_instance(i, lvl);
      const auto ev = solve_ev(inst, o);
      const auto bb = budget_bias(inst, ev.schedule, ev.plan);
      nonnegative = nonnegative && bb.bb >= -1e-9 * std::max(1.0, ev.objective);
      rel.push_back(bb.bb_rel);
    }
    means.push_back(mean_ci(rel).mean);
    progress(lvl.id() + " mean BB_rel " + pct(means.back()));
  }
  bool increasing = true;
  for (std::size_t i = 1; i < means.size(); ++i) increasing = increasing && means[i] > means[i - 1];
  const bool in_range = means[1] >= 0.05 && means[1] <= 0.20;
  return {nonnegative && increasing && in_range,
          "BB >= 0: " + std::string(nonnegative ? "yes" : "no") + ", mean BB_rel " +
              list(means, true) + (increasing ? " increasing" : " NOT increasing") +
              ", [0.7,1.3] in 5-20%: " + (in_range ? "yes" : "no")};
}

// 6: value of the stochastic solution

Outcome criterion6() {
  bool tiny_ok = true;
  double worst_tiny = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Instance inst = tiny_instance(606, i);
    const auto ev = solve_ev(inst);
    const auto st = exhaustive_oracle(inst);
    const auto v = vss(inst, st.schedule, st.plan, ev.schedule, ev.plan);
    worst_tiny = std::min(worst_tiny, v.vss_rel);
    tiny_ok = tiny_ok && v.vss >= -1e-6 * std::max(1.0, st.cost);
  }

  std::vector<double> means;
  for (const auto& lvl : uncertainty_levels()) {
    std::vector<Job> jobs;
    for (int i = 0; i < 10; ++i) {
      Job j;
      j.structure = "base";
      j.level = lvl.id();
      j.index = i;
      j.config = preset("basic");
      j.config.seed = instance_seed(2024, i);
      j.config.c_min = lvl.c_min;
      j.config.c_max = lvl.c_max;
      j.solver.kind = SolverKind::Mh;
      j.solver.time_limit = 20.0;
      j.solver.node_limit = 5000;
      jobs.push_back(j);
    }
    const auto rows = run_jobs(jobs);
    means.push_back(mean_ci(instance_means(rows, [](const ExperimentReport& r) {
                      return (r.ev_expected_cost - r.expected_cost) / r.ev_expected_cost;
                    })).mean);
    progress(lvl.id() + " mean VSS_rel " + pct(means.back()));
  }
  bool increasing = true;
  for (std::size_t i = 1; i < means.size(); ++i) increasing = increasing && means[i] > means[i - 1];
  const bool big = means.back() > 0.10;
  return {tiny_ok && increasing && big,
          "tiny VSS >= 0: " + std::string(tiny_ok ? "yes" : "no") + " (min rel " +
              pct(worst_tiny) + "), basic mean VSS_rel " + list(means, true) +
              (increasing ? " increasing" : " NOT increasing") + ", > 10% at [0.2,1.8]: " +
              (big ? "yes" : "no")};
}

// 7: SAA gap shrinks with the sample size

Outcome criterion7() {
  const std::vector<int> sizes{10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
  const int instances = 50;
  const int seeds = 10;
  std::vector<double> gaps;
  for (int n : sizes) {
    std::vector<double> per_instance;
    for (int i = 0; i < instances; ++i) {
      GeneratorConfig c = preset("small");
      c.seed = instance_seed(707, i);
      const Instance inst = generate(c);
      double sum = 0.0;
      for (int s = 0; s < seeds; ++s) {
        const auto r = solve_saa(inst, n, instance_seed(c.seed, s));
        sum += relative_gap(r.expected_cost, r.objective);
      }
      per_instance.push_back(sum / seeds);
    }
    gaps.push_back(mean_ci(per_instance).mean);
    progress("N=" + std::to_string(n) + " mean gap " + pct(gaps.back()));
  }
  bool nonincreasing = true;
  for (std::size_t i = 1; i < gaps.size(); ++i) nonincreasing = nonincreasing && gaps[i] <= gaps[i - 1];

  double tiny_gap = 0.0;
  for (int i = 0; i < 10; ++i) {
    const Instance inst = tiny_instance(717, i);
    double sum = 0.0;
    for (int s = 0; s < seeds; ++s) {
      const auto r = solve_saa(inst, 100, static_cast<std::uint64_t>(s + 1));
      sum += relative_gap(r.expected_cost, r.objective);
    }
    tiny_gap += sum / seeds / 10.0;
  }
  return {nonincreasing && tiny_gap < 0.05,
          "small-structure gap by N " + list(gaps, true) +
              (nonincreasing ? " nonincreasing" : " NOT nonincreasing") + ", tiny gap at N=100 " +
              pct(tiny_gap) + " (< 5%)"};
}

// 8: parameter sweeps at reduced scale

Outcome criterion8() {
  const UncertaintyLevel lvl{0.7, 1.3};
  auto mean_cost = [&](const std::string& id, GeneratorConfig cfg) {
    std::vector<Job> jobs;
    for (int i = 0; i < 5; ++i) {
      Job j;
      j.structure = id;
      j.level = lvl.id();
      j.index = i;
      j.config = cfg;
      j.config.seed = instance_seed(808, i);
      j.solver.kind = SolverKind::Mh;
      j.solver.time_limit = 15.0;
      j.solver.node_limit = 5000;
      jobs.push_back(j);
    }
    const double m = mean_ci(instance_means(run_jobs(jobs), [](const ExperimentReport& r) {
                       return r.expected_cost;
                     })).mean;
    progress(id + " mean cost " + f(m));
    return m;
  };
  const GeneratorConfig base = preset("basic");
  auto with = [&](auto set) {
    GeneratorConfig c = base;
    set(c);
    return c;
  };
  const double c_base = mean_cost("base", base);
  const double c_p15 = mean_cost("P15", with([](auto& c) { c.projects = 15; }));
  const double c_g0 = mean_cost("gamma0", with([](auto& c) { c.window = 0; }));
  const double c_g2 = mean_cost("gamma2", with([](auto& c) { c.window = 2; }));
  const double c_g3 = mean_cost("gamma3", with([](auto& c) { c.window = 3; }));
  const double c_sk1 = mean_cost("Sk1", with([](auto& c) { c.skills_per_resource = 1; }));
  const double c_r08 = mean_cost("rho0.8", with([](auto& c) { c.utilization = 0.8; }));
  const double c_r12 = mean_cost("rho1.2", with([](auto& c) { c.utilization = 1.2; }));

  const bool p_ok = c_p15 <= c_base;
  const double ratio = c_sk1 / c_base;
  const bool sk_ok = ratio >= 1.5 && ratio <= 3.0;
  const bool rho_ok = c_r08 < c_base && c_base < c_r12;
  const double saving = c_g0 - c_base;
  const bool g_ok = saving > 0.0 && std::abs(c_g3 - c_g2) <= 0.5 * saving &&
                    c_g2 <= c_base + 0.5 * saving;
  std::string d = "P: " + f(c_base) + " -> " + f(c_p15) + (p_ok ? " ok" : " FAIL");
  d += "; Sk1/Sk2 ratio " + f(ratio, 4) + (sk_ok ? " ok" : " FAIL");
  d += "; rho " + list({c_r08, c_base, c_r12}) + (rho_ok ? " ok" : " FAIL");
  d += "; gamma 0..3 " + list({c_g0, c_base, c_g2, c_g3}) + (g_ok ? " ok" : " FAIL");
  return {p_ok && sk_ok && rho_ok && g_ok, d};
}

// 9: repeated CLI solves give identical files

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion9() {
  if (cli_path.empty()) return {false, "no --cli path given"};
  const fs::path dir = fs::temp_directory_path() / ("stochsched_acc9_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::vector<std::pair<std::string, std::string>> runs{
      {"generate --preset small --seed 7 -o {out}/inst.json", "inst.json"},
      {"solve-ev -i {in} --node-limit 2000 -o {out}/ev.json", "ev.json"},
      {"solve-saa -i {in} -N 30 --seed 5 --node-limit 2000 -o {out}/saa.json --export-lp {out}/saa.lp", "saa.json"},
      {"solve-saa -i {in} -N 30 --seed 5 --export-only --export-lp {out}/saa2.lp", "saa2.lp"},
      {"solve-mh -i {in} --seed 3 --max-searches 100 --ev-node-limit 2000 -o {out}/mh.json --log {out}/mh.csv --log-no-time", "mh.json"},
      {"solve-mh -i {in} --seed 3 --max-searches 100 --ev-node-limit 2000 -o {out}/mh2.json --log {out}/mh.csv --log-no-time", "mh.csv"},
      {"evaluate -i {in} --plan {out}/ev.json --scenarios 50 --seed 2 -o {out}/eval.json", "eval.json"},
      {"evaluate -i {in} --plan {out}/ev.json --restaff --trace {out}/trace.csv -o {out}/re.json", "trace.csv"},
      {"oracle -i {in} --staffing lp --breakpoints 100 -o {out}/oracle.json", "oracle.json"},
  };
  auto expand = [&](std::string cmd, const fs::path& out) {
    auto replace = [&](const std::string& key, const std::string& value) {
      for (auto pos = cmd.find(key); pos != std::string::npos; pos = cmd.find(key)) {
        cmd.replace(pos, key.size(), value);
      }
    };
    replace("{in}", (dir / "a" / "inst.json").string());
    replace("{out}", out.string());
    return cmd;
  };
  int identical = 0;
  std::string failed;
  for (const auto& [cmd, file] : runs) {
    std::string first;
    bool same = true;
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path out = dir / (rep == 0 ? "a" : "b");
      fs::create_directories(out);
      const std::string line = "\"" + cli_path + "\" " + expand(cmd, out) + " > /dev/null";
      if (std::system(line.c_str()) != 0) {
        same = false;
        failed += " [" + cmd.substr(0, cmd.find(' ')) + " exit != 0]";
        break;
      }
      const std::string bytes = slurp(out / file);
      if (rep == 0) first = bytes;
      else same = same && !bytes.empty() && bytes == first;
    }
    identical += same;
    if (!same && failed.find(file) == std::string::npos) failed += " " + file;
  }
  fs::remove_all(dir);
  const int total = static_cast<int>(runs.size());
  return {identical == total, std::to_string(identical) + "/" + std::to_string(total) +
                                  " outputs byte-identical" + (failed.empty() ? "" : ";" + failed)};
}

// 10: skewed and symmetric suites follow the same cost trend

Outcome criterion10() {
  std::vector<double> sym, skw;
  for (const auto& lvl : uncertainty_levels()) {
    for (bool skew : {false, true}) {
      std::vector<Job> jobs;
      for (int i = 0; i < 5; ++i) {
        Job j;
        j.structure = skew ? "skew" : "base";
        j.level = lvl.id();
        j.index = i;
        j.config = preset("basic");
        j.config.seed = instance_seed(1010, i);
        j.config.c_min = lvl.c_min;
        j.config.c_max = lvl.c_max;
        j.config.skew = skew;
        j.solver.kind = SolverKind::Mh;
        j.solver.time_limit = 5.0;
        j.solver.node_limit = 3000;
        jobs.push_back(j);
      }
      const double m = mean_ci(instance_means(run_jobs(jobs), [](const ExperimentReport& r) {
                         return r.expected_cost;
                       })).mean;
      (skew ? skw : sym).push_back(m);
    }
    progress(lvl.id() + " symmetric " + f(sym.back()) + " skewed " + f(skw.back()));
  }
  const double ma = mean_ci(sym).mean;
  const double mb = mean_ci(skw).mean;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < sym.size(); ++i) {
    sab += (sym[i] - ma) * (skw[i] - mb);
    saa += (sym[i] - ma) * (sym[i] - ma);
    sbb += (skw[i] - mb) * (skw[i] - mb);
  }
  const double r = sab / std::sqrt(saa * sbb);
  return {r > 0.95, "symmetric " + list(sym) + ", skewed " + list(skw) + ", correlation " +
                        f(r, 4) + " (> 0.95)"};
}

/// Stated runtime bounds in seconds; other criteria have none.
double runtime_limit(int c) {
  switch (c) {
    case 1: return 10.0;
    case 2: return 120.0;
    case 4: return 2700.0;
    case 8: return 14400.0;
    default: return std::numeric_limits<double>::infinity();
  }
}

const std::vector<std::pair<std::string, std::function<Outcome()>>> kCriteria{
    {"shortfall closed form", criterion1},   {"staffing optimality", criterion2},
    {"monotone FW", criterion3},             {"MH global optimality", criterion4},
    {"budget bias", criterion5},             {"value of the stochastic solution", criterion6},
    {"SAA consistency", criterion7},         {"parameter sweeps", criterion8},
    {"determinism", criterion9},             {"skew robustness", criterion10},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--cli" && i + 1 < argc) {
      cli_path = argv[++i];
    } else if (a == "all") {
      for (int c = 1; c <= static_cast<int>(kCriteria.size()); ++c) which.push_back(c);
    } else {
      which.push_back(std::atoi(a.c_str()));
    }
  }
  if (which.empty()) {
    std::cerr << "usage: acceptance <1..10|all> [--cli path]\n";
    return 1;
  }
  bool all_pass = true;
  for (int c : which) {
    if (c < 1 || c > static_cast<int>(kCriteria.size())) {
      std::cerr << "unknown criterion " << c << "\n";
      return 1;
    }
    const auto& [name, fn] = kCriteria[static_cast<std::size_t>(c - 1)];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > runtime_limit(c)) {
      o.pass = false;
      o.detail += ", runtime over the " + f(runtime_limit(c)) + " s bound";
    }
    std::cout << "criterion " << c << " (" << name << "): " << (o.pass ? "PASS" : "FAIL") << "  "
              << o.detail << "  [" << f(secs, 4) << " s]" << std::endl;
    all_pass = all_pass && o.pass;
  }
  return all_pass ? 0 : 1;
}
