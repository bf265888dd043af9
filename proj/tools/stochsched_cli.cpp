#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "stochsched/evaluator.hpp"
#include "stochsched/exact.hpp"
#include "stochsched/experiments.hpp"
#include "stochsched/frank_wolfe.hpp"
#include "stochsched/generator.hpp"
#include "stochsched/io.hpp"
#include "stochsched/matheuristic.hpp"

using namespace stochsched;
using ordered_json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kInvalid = 2, kTimeLimit = 3 };

/// Invalid input detected by the CLI itself.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// generator flags: values are applied on top of the chosen preset

struct GenFlags {
  std::string preset = "basic";
  std::vector<std::function<void(GeneratorConfig&)>> apply;

  GeneratorConfig config() const {
    GeneratorConfig c = stochsched::preset(preset);
    for (const auto& f : apply) f(c);
    return c;
  }
};

template <class T>
void gen_flag(CLI::App* app, GenFlags& flags, const std::string& name, const std::string& desc,
              std::function<void(GeneratorConfig&, const T&)> set) {
  auto value = std::make_shared<T>();
  CLI::Option* opt = app->add_option(name, *value, desc);
  flags.apply.push_back([value, opt, set](GeneratorConfig& c) {
    if (opt->count() > 0) set(c, *value);
  });
}

#define GEN_FIELD(T, flag, field, desc) \
  gen_flag<T>(app, flags, flag, desc, [](GeneratorConfig& c, const T& v) { c.field = v; })

void add_generator_flags(CLI::App* app, GenFlags& flags) {
  app->add_option("--preset", flags.preset, "Base configuration")
      ->check(CLI::IsMember(preset_names()));
  GEN_FIELD(int, "--projects", projects, "Number of projects");
  GEN_FIELD(int, "--duration", duration, "Activities per project");
  GEN_FIELD(int, "--horizon", horizon, "Planning horizon T");
  GEN_FIELD(int, "--window", window, "Time window size LS - ES");
  GEN_FIELD(int, "--skills", skills, "Number of skills");
  GEN_FIELD(int, "--skills-per-activity", skills_per_activity, "Skills per activity");
  GEN_FIELD(int, "--skills-per-project", skills_per_project, "Bound on skills per project");
  GEN_FIELD(int, "--resources", resources, "Number of resources");
  GEN_FIELD(int, "--skills-per-resource", skills_per_resource, "Skills per resource");
  GEN_FIELD(double, "--capacity", capacity, "Capacity per resource and period");
  GEN_FIELD(double, "--utilization", utilization, "Utilization rho");
  GEN_FIELD(double, "--demand-cv", demand_cv, "Coefficient of variation of demand means");
  GEN_FIELD(double, "--eta-min", efficiency.lower, "Efficiency lower bound");
  GEN_FIELD(double, "--eta-max", efficiency.upper, "Efficiency upper bound");
  GEN_FIELD(double, "--eta-mean", efficiency.mean, "Efficiency mean");
  GEN_FIELD(double, "--eta-sd", efficiency.stdev, "Efficiency standard deviation");
  GEN_FIELD(double, "--cost-min", cost_rate.lower, "External cost rate lower bound");
  GEN_FIELD(double, "--cost-max", cost_rate.upper, "External cost rate upper bound");
  GEN_FIELD(double, "--cost-mean", cost_rate.mean, "External cost rate mean");
  GEN_FIELD(double, "--cost-sd", cost_rate.stdev, "External cost rate standard deviation");
  GEN_FIELD(double, "--c-min", c_min, "Lower uncertainty factor");
  GEN_FIELD(double, "--c-max", c_max, "Upper uncertainty factor");
  GEN_FIELD(bool, "--skew", skew, "Right-skewed triangles");
  GEN_FIELD(std::uint64_t, "--seed", seed, "Generator seed");
  GEN_FIELD(std::string, "--name", name, "Instance name");
}

#undef GEN_FIELD

void add_fw_flags(CLI::App* app, FwConfig& fw) {
  const std::map<std::string, FwVariant> variants{{"basic", FwVariant::Basic},
                                                  {"modified", FwVariant::Modified}};
  const std::map<std::string, FwInit> inits{{"greedy", FwInit::Greedy}, {"lp", FwInit::Lp}};
  const std::map<std::string, LineSearch> searches{{"golden", LineSearch::GoldenSection},
                                                   {"fixed", LineSearch::FixedStep}};
  app->add_option("--fw-variant", fw.variant, "basic or modified")
      ->transform(CLI::CheckedTransformer(variants));
  app->add_option("--fw-init", fw.init, "greedy or lp")->transform(CLI::CheckedTransformer(inits));
  app->add_option("--fw-line-search", fw.line_search, "golden or fixed")
      ->transform(CLI::CheckedTransformer(searches));
  app->add_option("--fw-iterations", fw.iterations, "FW iterations")->check(CLI::PositiveNumber);
  app->add_option("--fw-golden-tolerance", fw.golden_tolerance, "Golden-section bracket width");
  app->add_flag("!--fw-no-slack", fw.slack, "Drop the idle pseudo-entry of each column");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string schedule_text(const Schedule& s) {
  std::string out;
  for (std::size_t p = 0; p < s.periods.size(); ++p) {
    out += "  project " + std::to_string(p) + ":";
    for (int t : s.periods[p]) out += " " + std::to_string(t);
    out += "\n";
  }
  return out;
}

void save(const std::string& path, const SolutionRecord& rec) {
  if (!path.empty()) write_solution(path, rec);
}

// subcommands

struct GenerateArgs {
  GenFlags gen;
  std::string output;
  bool suite = false;
  int instances = 10;
  std::string out_dir = "instances";
};

int run_generate(const GenerateArgs& a) {
  const GeneratorConfig base = a.gen.config();
  base.validate();
  if (!a.suite) {
    const Instance inst = generate(base);
    if (a.output.empty()) {
      std::cout << instance_to_json(inst);
    } else {
      write_instance(a.output, inst);
      std::cout << "wrote " << a.output << " (" << inst.project_count() << " projects, "
                << inst.resource_count() << " resources, " << inst.skill_count() << " skills)\n";
    }
    return kOk;
  }
  SuiteSpec spec;
  spec.instances = a.instances;
  ordered_json manifest;
  manifest["format"] = "stochsched-manifest/1";
  manifest["base_seed"] = base.seed;
  manifest["instances"] = ordered_json::array();
  for (const auto& si : suite_configs(base, spec)) {
    char idx[16];
    std::snprintf(idx, sizeof idx, "i%02d", si.index);
    const std::string rel = si.structure + "/" + idx + "/" + si.level + ".json";
    write_instance(a.out_dir + "/" + rel, generate(si.config));
    manifest["instances"].push_back({{"path", rel},
                                     {"structure", si.structure},
                                     {"index", si.index},
                                     {"level", si.level},
                                     {"seed", si.seed}});
  }
  write_text(a.out_dir + "/manifest.json", manifest.dump(2) + "\n");
  std::cout << "wrote " << manifest["instances"].size() << " instances to " << a.out_dir << "\n";
  return kOk;
}

struct ExactArgs {
  std::string instance;
  std::string output;
  double time_limit = 360.0;
  long node_limit = -1;
  int samples = 100;
  std::uint64_t seed = 1;
  std::string export_lp;
  bool export_only = false;
};

BnbOptions bnb_options(const ExactArgs& a) {
  BnbOptions o;
  o.time_limit = a.time_limit;
  o.node_limit = a.node_limit;
  return o;
}

int run_solve_ev(const ExactArgs& a) {
  const Instance inst = read_instance(a.instance);
  if (!a.export_lp.empty()) {
    std::ostringstream lp;
    write_lp_model(lp, inst, nullptr);
    write_text(a.export_lp, lp.str());
    if (a.export_only) return kOk;
  }
  const auto t0 = std::chrono::steady_clock::now();
  const auto ev = solve_ev(inst, bnb_options(a));
  SolutionRecord rec;
  rec.solver = "ev";
  rec.instance = inst.name();
  rec.schedule = ev.schedule;
  rec.plan = ev.plan;
  rec.objective = ev.objective;
  rec.expected_cost = expected_external_cost(inst, ev.schedule, ev.plan);
  rec.optimal = ev.optimal;
  rec.info["nodes"] = static_cast<double>(ev.nodes);
  save(a.output, rec);
  std::cout << "EV objective " << fmt(rec.objective) << ", expected cost " << fmt(rec.expected_cost)
            << (ev.optimal ? " (optimal)" : " (limit reached)") << ", " << ev.nodes << " nodes, "
            << fmt(elapsed(t0)) << " s\n"
            << schedule_text(ev.schedule);
  return ev.optimal ? kOk : kTimeLimit;
}

int run_solve_saa(const ExactArgs& a) {
  const Instance inst = read_instance(a.instance);
  if (a.samples < 1) throw InputError("sample size must be >= 1");
  const ScenarioSet scen = ScenarioSet::sample(inst, a.samples, a.seed);
  if (!a.export_lp.empty()) {
    std::ostringstream lp;
    write_lp_model(lp, inst, &scen);
    write_text(a.export_lp, lp.str());
    if (a.export_only) return kOk;
  }
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = solve_saa(inst, scen, bnb_options(a));
  SolutionRecord rec;
  rec.solver = "saa";
  rec.instance = inst.name();
  rec.schedule = s.schedule;
  rec.plan = s.plan;
  rec.objective = s.objective;
  rec.expected_cost = s.expected_cost;
  rec.optimal = s.optimal;
  rec.info["nodes"] = static_cast<double>(s.nodes);
  rec.info["sample_size"] = s.sample_size;
  rec.info["seed"] = static_cast<double>(s.seed);
  rec.info["relative_gap"] = relative_gap(s.expected_cost, s.objective);
  save(a.output, rec);
  std::cout << "SAA objective " << fmt(rec.objective) << ", expected cost "
            << fmt(rec.expected_cost) << (s.optimal ? " (optimal)" : " (limit reached)") << ", "
            << s.nodes << " nodes, " << fmt(elapsed(t0)) << " s\n"
            << schedule_text(s.schedule);
  return s.optimal ? kOk : kTimeLimit;
}

struct MhArgs {
  std::string instance;
  std::string output;
  std::string log;
  bool log_time = true;
  MhConfig cfg;
};

int run_solve_mh(const MhArgs& a) {
  const Instance inst = read_instance(a.instance);
  a.cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = mh_solve(inst, a.cfg);
  SolutionRecord rec;
  rec.solver = "mh";
  rec.instance = inst.name();
  rec.schedule = r.schedule;
  rec.plan = r.plan;
  rec.objective = r.expected_cost;
  rec.expected_cost = expected_external_cost(inst, r.schedule, r.plan);
  rec.info["initial_cost"] = r.initial_cost;
  rec.info["searches"] = static_cast<double>(r.searches);
  rec.info["perturbations"] = static_cast<double>(r.perturbations);
  rec.info["seed"] = static_cast<double>(a.cfg.seed);
  save(a.output, rec);
  if (!a.log.empty()) {
    std::ostringstream csv;
    write_mh_log_csv(csv, r.log, a.log_time);
    write_text(a.log, csv.str());
  }
  std::cout << "MH expected cost " << fmt(rec.expected_cost) << " (initial "
            << fmt(r.initial_cost) << "), " << r.searches << " neighborhood searches, "
            << fmt(elapsed(t0)) << " s\n"
            << schedule_text(r.schedule);
  return kOk;
}

struct EvaluateArgs {
  std::string instance;
  std::string solution;
  std::string lp_values;
  std::string output;
  int scenarios = 0;
  std::uint64_t seed = 1;
  bool restaff = false;
  FwConfig fw;
  std::string trace;
};

int run_evaluate(const EvaluateArgs& a) {
  const Instance inst = read_instance(a.instance);
  Schedule sched;
  StaffingPlan plan;
  std::string source;
  if (!a.lp_values.empty()) {
    std::ifstream in(a.lp_values);
    if (!in) throw InputError("cannot read " + a.lp_values);
    const auto imp = import_lp_solution(in, inst);
    sched = imp.schedule;
    plan = imp.plan;
    source = "lp-import";
  } else {
    const auto rec = read_solution(a.solution);
    sched = rec.schedule;
    plan = rec.plan;
    source = rec.solver;
  }
  const auto check = validate_schedule(inst, sched);
  if (!check.ok()) throw InputError("infeasible schedule: " + check.violations.front().describe());
  if (a.restaff) {
    const auto r = fw_solve(inst, sched, a.fw);
    plan = r.plan;
    if (!a.trace.empty()) {
      std::ostringstream csv;
      write_trace_csv(csv, r.trace);
      write_text(a.trace, csv.str());
    }
  }
  ordered_json out;
  out["format"] = "stochsched-evaluation/1";
  out["instance"] = inst.name();
  out["source"] = source;
  out["restaffed"] = a.restaff;
  out["expected_cost"] = expected_external_cost(inst, sched, plan);
  out["ev_cost"] = ev_cost(inst, sched, plan);
  const auto bb = budget_bias(inst, sched, plan);
  out["budget_bias"] = bb.bb;
  out["budget_bias_rel"] = bb.bb_rel;
  if (a.scenarios > 0) {
    const auto scen = ScenarioSet::sample(inst, a.scenarios, a.seed);
    out["saa_cost"] = saa_cost(inst, sched, plan, scen);
    out["saa_samples"] = a.scenarios;
    out["saa_seed"] = a.seed;
  }
  const auto profile = period_cost_profile(inst, sched, plan);
  out["period_costs"] = std::vector<double>(profile.begin() + 1, profile.end());
  const std::string text = out.dump(2) + "\n";
  if (!a.output.empty()) {
    write_text(a.output, text);
    if (a.restaff) {
      SolutionRecord rec;
      rec.solver = "fw";
      rec.instance = inst.name();
      rec.schedule = sched;
      rec.plan = plan;
      rec.objective = out["expected_cost"].get<double>();
      rec.expected_cost = rec.objective;
      write_solution(a.output + ".solution.json", rec);
    }
  }
  std::cout << text;
  return kOk;
}

struct OracleArgs {
  std::string instance;
  std::string output;
  std::string staffing = "lp";
  OracleOptions opts;
};

int run_oracle(OracleArgs a) {
  const Instance inst = read_instance(a.instance);
  a.opts.staffing = a.staffing == "fw" ? OracleStaffing::FrankWolfe : OracleStaffing::Linearized;
  OracleResult r;
  try {
    r = exhaustive_oracle(inst, a.opts);
  } catch (const SearchSpaceTooLarge& e) {
    throw InputError(e.what());
  }
  SolutionRecord rec;
  rec.solver = "oracle-" + a.staffing;
  rec.instance = inst.name();
  rec.schedule = r.schedule;
  rec.plan = r.plan;
  rec.objective = r.cost;
  rec.expected_cost = r.cost;
  rec.optimal = true;
  rec.info["evaluations"] = static_cast<double>(r.evaluations);
  save(a.output, rec);
  std::cout << "oracle expected cost " << fmt(r.cost) << " over " << r.evaluations
            << " schedules\n"
            << schedule_text(r.schedule);
  return kOk;
}

struct SweepArgs {
  GenFlags gen;
  SweepSpec spec;
  int instances = 10;
  std::vector<int> projects, windows, skills_per_resource;
  std::vector<double> utilization;
  bool quiet = false;
};

int run_sweep_cmd(SweepArgs a) {
  a.spec.base = a.gen.config();
  a.spec.base.validate();
  a.spec.suite.instances = a.instances;
  if (!a.projects.empty()) a.spec.suite.projects = a.projects;
  if (!a.windows.empty()) a.spec.suite.windows = a.windows;
  if (!a.skills_per_resource.empty()) a.spec.suite.skills_per_resource = a.skills_per_resource;
  if (!a.utilization.empty()) a.spec.suite.utilization = a.utilization;
  const bool quiet = a.quiet;
  const auto out = run_sweep(a.spec, [quiet](const ExperimentReport& r) {
    if (quiet) return;
    std::cerr << r.solver << " " << r.instance << " cost " << fmt(r.expected_cost) << " ("
              << fmt(r.wall_time) << " s)" << (r.flagged ? " flagged: " + r.note : "") << "\n";
  });
  for (const auto& f : out.files) std::cout << "wrote " << f << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic multi-project scheduling and staffing"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "stochsched 0.1.0");

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Generate an instance or an instance suite");
  add_generator_flags(g, gen.gen);
  g->add_option("-o,--output", gen.output, "Instance file (stdout when omitted)");
  g->add_flag("--suite", gen.suite, "Generate every structure, instance and uncertainty level");
  g->add_option("--instances", gen.instances, "Instances per structure")->check(CLI::PositiveNumber);
  g->add_option("--out-dir", gen.out_dir, "Suite output directory");

  ExactArgs ev;
  auto* e = app.add_subcommand("solve-ev", "Solve the expected-value problem by branch-and-bound");
  ExactArgs saa;
  auto* s = app.add_subcommand("solve-saa", "Solve the sample average approximation");
  for (auto [cmd, args] : {std::pair{e, &ev}, std::pair{s, &saa}}) {
    cmd->add_option("-i,--instance", args->instance, "Instance file")->required();
    cmd->add_option("-o,--output", args->output, "Solution file");
    cmd->add_option("--time-limit", args->time_limit, "Seconds")->check(CLI::NonNegativeNumber);
    cmd->add_option("--node-limit", args->node_limit, "Maximum nodes, -1 for none");
    cmd->add_option("--export-lp", args->export_lp, "Write the model in LP format");
    cmd->add_flag("--export-only", args->export_only, "Only write the LP model");
  }
  s->add_option("-N,--samples", saa.samples, "Sample size");
  s->add_option("--seed", saa.seed, "Scenario seed");

  MhArgs mh;
  auto* m = app.add_subcommand("solve-mh", "Run the matheuristic");
  m->add_option("-i,--instance", mh.instance, "Instance file")->required();
  m->add_option("-o,--output", mh.output, "Solution file");
  m->add_option("--log", mh.log, "Run log CSV");
  m->add_flag("!--log-no-time", mh.log_time, "Omit the wall-time column of the log");
  m->add_option("--time-limit", mh.cfg.time_limit, "t_max in seconds")->check(CLI::NonNegativeNumber);
  m->add_option("--i-min", mh.cfg.i_min, "Initial FW iterations");
  m->add_option("--i-tilde", mh.cfg.i_tilde, "FW iterations of acceptance evaluations");
  m->add_option("--beta", mh.cfg.beta, "Acceptance probability of worse solutions");
  m->add_option("--k-max", mh.cfg.k_max, "Largest neighborhood");
  m->add_option("--pi", mh.cfg.pi, "Perturbation factor");
  m->add_option("--seed", mh.cfg.seed, "Search seed");
  m->add_option("--max-searches", mh.cfg.max_searches, "Stop after this many neighborhood searches");
  m->add_option("--ev-time-limit", mh.cfg.ev_time_limit, "Time limit of the initial EV solve");
  m->add_option("--ev-node-limit", mh.cfg.ev_node_limit, "Node limit of the initial EV solve");
  m->add_option("--polish-iterations", mh.cfg.polish_iterations, "FW iterations for the final plan");
  add_fw_flags(m, mh.cfg.fw);

  EvaluateArgs ea;
  auto* v = app.add_subcommand("evaluate", "Evaluate a solution exactly");
  v->add_option("-i,--instance", ea.instance, "Instance file")->required();
  auto* plan_opt = v->add_option("--plan,--solution", ea.solution, "Solution file");
  auto* lp_opt = v->add_option("--lp-values", ea.lp_values, "Variable values from an external solver");
  plan_opt->excludes(lp_opt);
  v->add_option("-o,--output", ea.output, "Evaluation file");
  v->add_option("--scenarios", ea.scenarios, "Also report the average over N sampled scenarios");
  v->add_option("--seed", ea.seed, "Scenario seed");
  v->add_flag("--restaff", ea.restaff, "Replace the plan by FW staffing of the schedule");
  v->add_option("--trace", ea.trace, "FW trace CSV (with --restaff)");
  add_fw_flags(v, ea.fw);

  OracleArgs oa;
  auto* o = app.add_subcommand("oracle", "Exhaustive search over all schedules");
  o->add_option("-i,--instance", oa.instance, "Instance file")->required();
  o->add_option("-o,--output", oa.output, "Solution file");
  o->add_option("--staffing", oa.staffing, "lp or fw")->check(CLI::IsMember({"lp", "fw"}));
  o->add_option("--breakpoints", oa.opts.breakpoints, "Linearization breakpoints");
  o->add_option("--fw-iterations", oa.opts.fw_iterations, "FW iterations");
  o->add_option("--max-combinations", oa.opts.max_combinations, "Refuse larger search spaces");

  SweepArgs sw;
  auto* w = app.add_subcommand("sweep", "Run experiment studies and write CSV reports");
  add_generator_flags(w, sw.gen);
  w->add_option("--studies", sw.spec.studies, "bias saa-gap mh-vs-saa params skew")
      ->check(CLI::IsMember({"bias", "saa-gap", "mh-vs-saa", "params", "skew"}));
  w->add_option("--instances", sw.instances, "Instances per structure")->check(CLI::PositiveNumber);
  w->add_option("--mh-budget", sw.spec.mh_budget, "MH seconds per run");
  w->add_option("--ev-time-limit", sw.spec.ev_time_limit, "Seconds for the EV start solution");
  w->add_option("--saa-time-limit", sw.spec.saa_time_limit, "Seconds per SAA solve");
  w->add_option("--sample-sizes", sw.spec.sample_sizes, "SAA sample sizes");
  w->add_option("--saa-seeds", sw.spec.saa_seeds, "Scenario seeds per instance");
  w->add_option("--saa-max-projects", sw.spec.saa_max_projects, "Flag SAA rows above this size");
  w->add_option("--runs", sw.spec.runs, "Seeded MH runs per instance");
  w->add_option("--workers", sw.spec.workers, "Concurrent jobs")->check(CLI::PositiveNumber);
  w->add_option("--out-dir", sw.spec.out_dir, "Output directory");
  w->add_option("--sweep-projects", sw.projects, "Project counts");
  w->add_option("--sweep-windows", sw.windows, "Window sizes");
  w->add_option("--sweep-skills-per-resource", sw.skills_per_resource, "Skills per resource");
  w->add_option("--sweep-utilization", sw.utilization, "Utilizations");
  w->add_flag("-q,--quiet", sw.quiet, "No per-job progress");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::CallForAllHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::CallForVersion& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kUsage;
  }

  try {
    if (*g) return run_generate(gen);
    if (*e) return run_solve_ev(ev);
    if (*s) return run_solve_saa(saa);
    if (*m) return run_solve_mh(mh);
    if (*v) {
      if (ea.solution.empty() && ea.lp_values.empty()) {
        std::cerr << "error: one of --plan or --lp-values is required\n";
        return kUsage;
      }
      return run_evaluate(ea);
    }
    if (*o) return run_oracle(oa);
    if (*w) return run_sweep_cmd(sw);
  } catch (const std::exception& ex) {
    std::string msg = ex.what();
    for (auto& c : msg) {
      if (c == '\n') c = ';';
    }
    std::cerr << "error: " << msg << "\n";
    return kInvalid;
  }
  return kUsage;
}
