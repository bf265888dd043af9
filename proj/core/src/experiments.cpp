#include "stochsched/experiments.hpp"

#include <atomic>
#include <boost/math/distributions/students_t.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "stochsched/evaluator.hpp"
#include "stochsched/exact.hpp"
#include "stochsched/io.hpp"

namespace stochsched {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void ci_columns(std::ostream& out, const MeanCi& m) {
  out << ',' << num(m.mean) << ',' << num(m.low) << ',' << num(m.high);
}

std::string ci_header(const std::string& name) {
  return "," + name + "_mean," + name + "_low," + name + "_high";
}

double bb_rel_of(const ExperimentReport& r) {
  return r.ev_expected_cost > 0.0 ? (r.ev_expected_cost - r.ev_theta) / r.ev_expected_cost : 0.0;
}

double vss_rel_of(const ExperimentReport& r) {
  return r.ev_expected_cost > 0.0 ? (r.ev_expected_cost - r.expected_cost) / r.ev_expected_cost
                                  : 0.0;
}

GeneratorConfig at_level(GeneratorConfig c, const UncertaintyLevel& lvl) {
  c.c_min = lvl.c_min;
  c.c_max = lvl.c_max;
  return c;
}

std::string instance_name(const std::string& structure, int index, const std::string& level) {
  char idx[16];
  std::snprintf(idx, sizeof idx, "i%02d", index);
  return structure + "/" + idx + "/" + level;
}

}  // namespace

BudgetBias budget_bias(const Instance& inst, const Schedule& ev_schedule,
                       const StaffingPlan& ev_plan) {
  const double eg = expected_external_cost(inst, ev_schedule, ev_plan);
  const double theta = ev_cost(inst, ev_schedule, ev_plan);
  BudgetBias out;
  out.bb = eg - theta;
  out.bb_rel = eg > 0.0 ? out.bb / eg : 0.0;
  return out;
}

Vss vss(const Instance& inst, const Schedule& stoch_schedule, const StaffingPlan& stoch_plan,
        const Schedule& ev_schedule, const StaffingPlan& ev_plan) {
  const double ev = expected_external_cost(inst, ev_schedule, ev_plan);
  const double st = expected_external_cost(inst, stoch_schedule, stoch_plan);
  Vss out;
  out.vss = ev - st;
  out.vss_rel = ev > 0.0 ? out.vss / ev : 0.0;
  return out;
}

double relative_gap(double expected_cost, double theta) {
  return expected_cost > 0.0 ? std::abs(expected_cost - theta) / expected_cost : 0.0;
}

MeanCi mean_ci(const std::vector<double>& values, double confidence) {
  MeanCi out;
  out.n = static_cast<int>(values.size());
  if (values.empty()) {
    out.mean = out.low = out.high = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / out.n;
  out.low = out.high = out.mean;
  if (out.n < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  const double sd = std::sqrt(ss / (out.n - 1));
  const boost::math::students_t t(out.n - 1);
  const double half = boost::math::quantile(t, 0.5 + confidence / 2.0) * sd / std::sqrt(out.n);
  out.low = out.mean - half;
  out.high = out.mean + half;
  return out;
}

std::string SolverSpec::id() const {
  switch (kind) {
    case SolverKind::Ev:
      return "ev";
    case SolverKind::Saa:
      return "saa" + std::to_string(sample_size);
    case SolverKind::Mh:
      break;
  }
  return "mh";
}

ExperimentReport run_job(const Job& job) {
  ExperimentReport r;
  r.structure = job.structure;
  r.level = job.level;
  r.index = job.index;
  r.solver = job.solver.id();
  r.seed = job.seed;
  r.time_budget = job.solver.time_limit;
  r.instance = job.config.name;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const Instance inst = generate(job.config);
    BnbOptions o;
    o.time_limit = job.solver.time_limit;
    o.node_limit = job.solver.node_limit;
    switch (job.solver.kind) {
      case SolverKind::Ev: {
        const auto ev = solve_ev(inst, o);
        r.theta = ev.objective;
        r.expected_cost = expected_external_cost(inst, ev.schedule, ev.plan);
        r.optimal = ev.optimal;
        r.ev_theta = r.theta;
        r.ev_expected_cost = r.expected_cost;
        break;
      }
      case SolverKind::Saa: {
        r.sample_size = job.solver.sample_size;
        if (inst.project_count() > job.solver.max_projects) {
          r.flagged = true;
          r.note = "instance beyond the exact solver's scale";
          break;
        }
        const auto s = solve_saa(inst, job.solver.sample_size, job.seed, o);
        r.theta = s.objective;
        r.expected_cost = expected_external_cost(inst, s.schedule, s.plan);
        r.optimal = s.optimal;
        break;
      }
      case SolverKind::Mh: {
        BnbOptions eo;
        eo.time_limit = job.solver.ev_time_limit;
        eo.node_limit = job.solver.node_limit;
        const auto ev = solve_ev(inst, eo);
        r.ev_theta = ev.objective;
        r.ev_expected_cost = expected_external_cost(inst, ev.schedule, ev.plan);
        MhConfig mc;
        mc.time_limit = job.solver.time_limit;
        mc.max_searches = job.solver.max_searches;
        mc.seed = job.seed;
        const auto mh = mh_solve(inst, ev.schedule, mc);
        r.theta = mh.expected_cost;
        r.expected_cost = expected_external_cost(inst, mh.schedule, mh.plan);
        break;
      }
    }
  } catch (const std::exception& e) {
    r.flagged = true;
    r.note = e.what();
  }
  r.wall_time = seconds_since(t0);
  return r;
}

std::vector<ExperimentReport> run_jobs(const std::vector<Job>& jobs, int workers,
                                       const std::function<void(const ExperimentReport&)>& progress) {
  std::vector<ExperimentReport> out(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  auto work = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      out[i] = run_job(jobs[i]);
      if (progress) {
        std::lock_guard<std::mutex> lock(mu);
        progress(out[i]);
      }
    }
  };
  const int n = std::max(1, std::min(workers, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return out;
}

std::vector<double> instance_means(const std::vector<ExperimentReport>& rows,
                                   const std::function<double(const ExperimentReport&)>& metric) {
  std::map<std::tuple<std::string, std::string, int>, std::pair<double, int>> acc;
  std::vector<std::tuple<std::string, std::string, int>> order;
  for (const auto& r : rows) {
    if (r.flagged) continue;
    const auto key = std::make_tuple(r.structure, r.level, r.index);
    auto [it, fresh] = acc.try_emplace(key, 0.0, 0);
    if (fresh) order.push_back(key);
    it->second.first += metric(r);
    it->second.second += 1;
  }
  std::vector<double> out;
  for (const auto& key : order) {
    const auto& [sum, n] = acc[key];
    out.push_back(sum / n);
  }
  return out;
}

void write_reports_csv(std::ostream& out, const std::vector<ExperimentReport>& rows) {
  out << "instance,structure,level,index,solver,seed,time_budget,theta,expected_cost,wall_time,"
         "optimal,sample_size,ev_theta,ev_expected_cost,flagged,note\n";
  for (const auto& r : rows) {
    out << csv_field(r.instance) << ',' << r.structure << ',' << r.level << ',' << r.index << ','
        << r.solver << ',' << r.seed << ',' << num(r.time_budget) << ',' << num(r.theta) << ','
        << num(r.expected_cost) << ',' << num(r.wall_time) << ',' << (r.optimal ? 1 : 0) << ','
        << r.sample_size << ',' << num(r.ev_theta) << ',' << num(r.ev_expected_cost) << ','
        << (r.flagged ? 1 : 0) << ',' << csv_field(r.note) << '\n';
  }
}

SweepOutput run_sweep(const SweepSpec& spec,
                      const std::function<void(const ExperimentReport&)>& progress) {
  for (const auto& s : spec.studies) {
    if (s != "bias" && s != "saa-gap" && s != "mh-vs-saa" && s != "params" && s != "skew") {
      throw std::invalid_argument("unknown study '" + s + "'");
    }
  }
  auto wants = [&](const std::string& s) {
    return std::find(spec.studies.begin(), spec.studies.end(), s) != spec.studies.end();
  };
  SweepOutput result;
  auto emit = [&](const std::string& file, const std::string& text) {
    const std::string path = spec.out_dir + "/" + file;
    write_text(path, text);
    result.files.push_back(path);
  };

  SolverSpec mh;
  mh.kind = SolverKind::Mh;
  mh.time_limit = spec.mh_budget;
  mh.ev_time_limit = spec.ev_time_limit;
  const UncertaintyLevel base_level{spec.base.c_min, spec.base.c_max};

  auto mh_jobs = [&](const std::string& structure, const GeneratorConfig& cfg,
                     const UncertaintyLevel& lvl, const std::string& level_id) {
    std::vector<Job> jobs;
    for (int i = 0; i < spec.suite.instances; ++i) {
      for (int run = 0; run < spec.runs; ++run) {
        Job j;
        j.structure = structure;
        j.level = level_id;
        j.index = i;
        j.config = at_level(cfg, lvl);
        j.config.seed = instance_seed(spec.base.seed, i);
        j.config.name = instance_name(structure, i, level_id);
        j.solver = mh;
        j.seed = static_cast<std::uint64_t>(run + 1);
        jobs.push_back(j);
      }
    }
    return jobs;
  };
  auto run = [&](const std::vector<Job>& jobs) {
    auto rows = run_jobs(jobs, spec.workers, progress);
    result.reports.insert(result.reports.end(), rows.begin(), rows.end());
    return rows;
  };

  if (wants("bias")) {
    std::ostringstream csv;
    csv << "level,c_min,c_max,n" << ci_header("bb") << ci_header("bb_rel") << ci_header("vss")
        << ci_header("vss_rel") << '\n';
    for (const auto& lvl : spec.suite.levels) {
      const auto rows = run(mh_jobs("base", spec.base, lvl, lvl.id()));
      const auto bb = instance_means(rows, [](const auto& r) { return r.ev_expected_cost - r.ev_theta; });
      const auto bb_rel = instance_means(rows, bb_rel_of);
      const auto v = instance_means(rows, [](const auto& r) { return r.ev_expected_cost - r.expected_cost; });
      const auto v_rel = instance_means(rows, vss_rel_of);
      csv << lvl.id() << ',' << num(lvl.c_min) << ',' << num(lvl.c_max) << ',' << bb.size();
      ci_columns(csv, mean_ci(bb));
      ci_columns(csv, mean_ci(bb_rel));
      ci_columns(csv, mean_ci(v));
      ci_columns(csv, mean_ci(v_rel));
      csv << '\n';
    }
    emit("bias_vss.csv", csv.str());
  }

  if (wants("saa-gap")) {
    std::ostringstream csv;
    csv << "sample_size,n" << ci_header("gap") << ci_header("expected_cost") << ci_header("wall_time")
        << '\n';
    for (int n : spec.sample_sizes) {
      std::vector<Job> jobs;
      for (int i = 0; i < spec.suite.instances; ++i) {
        for (int s = 0; s < spec.saa_seeds; ++s) {
          Job j;
          j.structure = "base";
          j.level = base_level.id();
          j.index = i;
          j.config = spec.base;
          j.config.seed = instance_seed(spec.base.seed, i);
          j.config.name = instance_name("base", i, j.level);
          j.solver.kind = SolverKind::Saa;
          j.solver.sample_size = n;
          j.solver.time_limit = spec.saa_time_limit;
          j.solver.max_projects = spec.saa_max_projects;
          j.seed = instance_seed(j.config.seed, s);
          jobs.push_back(j);
        }
      }
      const auto rows = run(jobs);
      csv << n << ',' << instance_means(rows, [](const auto&) { return 0.0; }).size();
      ci_columns(csv, mean_ci(instance_means(rows, [](const auto& r) {
                   return relative_gap(r.expected_cost, r.theta);
                 })));
      ci_columns(csv, mean_ci(instance_means(rows, [](const auto& r) { return r.expected_cost; })));
      ci_columns(csv, mean_ci(instance_means(rows, [](const auto& r) { return r.wall_time; })));
      csv << '\n';
    }
    emit("saa_gap.csv", csv.str());
  }

  if (wants("mh-vs-saa")) {
    const int n = spec.sample_sizes.empty() ? 100 : spec.sample_sizes.back();
    std::vector<Job> saa_jobs;
    for (int i = 0; i < spec.suite.instances; ++i) {
      Job j;
      j.structure = "base";
      j.level = base_level.id();
      j.index = i;
      j.config = spec.base;
      j.config.seed = instance_seed(spec.base.seed, i);
      j.config.name = instance_name("base", i, j.level);
      j.solver.kind = SolverKind::Saa;
      j.solver.sample_size = n;
      j.solver.time_limit = spec.saa_time_limit;
      j.solver.max_projects = spec.saa_max_projects;
      saa_jobs.push_back(j);
    }
    const auto saa = run(saa_jobs);
    std::vector<double> times;
    for (const auto& r : saa) {
      if (!r.flagged) times.push_back(r.wall_time);
    }
    SolverSpec matched = mh;
    matched.time_limit = times.empty() ? spec.mh_budget : mean_ci(times).mean;
    auto jobs = mh_jobs("base", spec.base, base_level, base_level.id());
    for (auto& j : jobs) j.solver = matched;
    const auto mhr = run(jobs);
    std::ostringstream csv;
    csv << "index,saa_expected_cost,saa_wall_time,mh_expected_cost,mh_budget,normalized_difference\n";
    const auto mh_cost = instance_means(mhr, [](const auto& r) { return r.expected_cost; });
    std::vector<double> diffs;
    for (std::size_t i = 0; i < saa.size(); ++i) {
      const auto& s = saa[i];
      const double m = i < mh_cost.size() ? mh_cost[i] : std::numeric_limits<double>::quiet_NaN();
      const double d = s.flagged || !(s.expected_cost > 0.0)
                           ? std::numeric_limits<double>::quiet_NaN()
                           : (s.expected_cost - m) / s.expected_cost;
      if (!std::isnan(d)) diffs.push_back(d);
      csv << s.index << ',' << num(s.flagged ? std::nan("") : s.expected_cost) << ','
          << num(s.wall_time) << ',' << num(m) << ',' << num(matched.time_limit) << ',' << num(d)
          << '\n';
    }
    csv << "mean,,,,," << num(mean_ci(diffs).mean) << '\n';
    emit("mh_vs_saa.csv", csv.str());
  }

  if (wants("params")) {
    std::ostringstream csv;
    csv << "structure,parameter,value,n" << ci_header("expected_cost") << '\n';
    const auto structures = suite_structures(spec.base, spec.suite);
    for (const auto& st : structures) {
      const auto rows = run(mh_jobs(st.id, st.config, base_level, base_level.id()));
      const auto cost = mean_ci(instance_means(rows, [](const auto& r) { return r.expected_cost; }));
      std::vector<std::pair<std::string, double>> params;
      if (st.id == "base") {
        params = {{"projects", st.config.projects},
                  {"window", st.config.window},
                  {"skills_per_resource", st.config.skills_per_resource},
                  {"utilization", st.config.utilization}};
      } else if (st.id[0] == 'P') {
        params = {{"projects", st.config.projects}};
      } else if (st.id[0] == 'g') {
        params = {{"window", st.config.window}};
      } else if (st.id[0] == 'S') {
        params = {{"skills_per_resource", st.config.skills_per_resource}};
      } else {
        params = {{"utilization", st.config.utilization}};
      }
      for (const auto& [name, value] : params) {
        csv << st.id << ',' << name << ',' << num(value) << ',' << cost.n;
        ci_columns(csv, cost);
        csv << '\n';
      }
    }
    emit("params.csv", csv.str());
  }

  if (wants("skew")) {
    std::ostringstream csv;
    csv << "level,width,n" << ci_header("symmetric_cost") << ci_header("skewed_cost") << '\n';
    for (const auto& lvl : spec.suite.levels) {
      auto skewed = spec.base;
      skewed.skew = true;
      const auto sym = run(mh_jobs("base", spec.base, lvl, lvl.id()));
      const auto skw = run(mh_jobs("skew", skewed, lvl, lvl.id()));
      const auto cost = [](const auto& r) { return r.expected_cost; };
      const auto a = mean_ci(instance_means(sym, cost));
      const auto b = mean_ci(instance_means(skw, cost));
      csv << lvl.id() << ',' << num(lvl.c_max - lvl.c_min) << ',' << a.n;
      ci_columns(csv, a);
      ci_columns(csv, b);
      csv << '\n';
    }
    emit("skew.csv", csv.str());
  }

  std::ostringstream all;
  write_reports_csv(all, result.reports);
  emit("reports.csv", all.str());
  return result;
}

}  // namespace stochsched
