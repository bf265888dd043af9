#include "stochsched/exact.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "stochsched/evaluator.hpp"
#include "stochsched/frank_wolfe.hpp"

namespace stochsched {

namespace {

bool better(double cost, double best) {
  return cost < best - 1e-9 * std::max(1.0, std::abs(best));
}

class BranchAndBound {
 public:
  BranchAndBound(const Instance& inst, const DemandModel& demand, const BnbOptions& opts)
      : inst_(inst), demand_(demand), opts_(opts), start_(std::chrono::steady_clock::now()) {
    const int P = inst.project_count();
    for (int p = 0; p < P; ++p) options_.push_back(enumerate_schedules(inst.project(p)));
    order_.resize(static_cast<std::size_t>(P));
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
      return options_[static_cast<std::size_t>(a)].size() < options_[static_cast<std::size_t>(b)].size();
    });
    choice_.assign(static_cast<std::size_t>(P), -1);
  }

  ExactSolution run() {
    explore(0);
    ExactSolution out;
    if (!has_incumbent_) {
      // only possible when stopped before the root finished
      Schedule s = earliest_schedule(inst_);
      evaluate_leaf(s);
    }
    out.schedule = best_schedule_;
    out.plan = best_plan_;
    out.objective = best_;
    out.optimal = !stopped_ && !numerical_trouble_;
    out.nodes = nodes_;
    out.node_log = std::move(log_);
    return out;
  }

 private:
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  Schedule schedule_of(const std::vector<int>& ch) const {
    Schedule s;
    for (std::size_t p = 0; p < ch.size(); ++p) s.periods.push_back(options_[p][static_cast<std::size_t>(ch[p])]);
    return s;
  }

  void evaluate_leaf(const Schedule& s) {
    const auto res = staffing_lp(inst_, s, demand_);
    if (res.status != lp::Status::Optimal) {
      numerical_trouble_ = true;
      return;
    }
    if (!has_incumbent_ || better(res.cost, best_)) {
      has_incumbent_ = true;
      best_ = res.cost;
      best_schedule_ = s;
      best_plan_ = res.plan;
    }
  }

  void explore(std::size_t depth) {
    if (stopped_) return;
    if (elapsed() > opts_.time_limit || (opts_.node_limit >= 0 && nodes_ >= opts_.node_limit)) {
      stopped_ = true;
      return;
    }
    ++nodes_;
    const std::size_t P = choice_.size();
    std::vector<ProjectChoice> pc(P);
    for (std::size_t p = 0; p < P; ++p) {
      if (choice_[p] >= 0) {
        pc[p].fixed = options_[p][static_cast<std::size_t>(choice_[p])];
      } else {
        pc[p].candidates = options_[p];
      }
    }
    lp::Options lo;
    lo.time_limit = std::max(0.0, opts_.time_limit - elapsed());
    const auto res = solve_staffing_model(inst_, build_staffing_model(inst_, pc, demand_), lo);
    if (res.status == lp::Status::TimeLimit) {
      stopped_ = true;
      return;
    }
    if (res.status != lp::Status::Optimal) {
      numerical_trouble_ = true;
      return;
    }
    if (opts_.record_nodes) log_.push_back({choice_, res.cost});
    if (depth == P) {
      if (!has_incumbent_ || better(res.cost, best_)) {
        has_incumbent_ = true;
        best_ = res.cost;
        best_schedule_ = schedule_of(choice_);
        best_plan_ = res.plan;
      }
      return;
    }
    if (has_incumbent_ && !better(res.cost, best_)) return;

    // candidate rounding: heaviest weight per undecided project
    std::vector<int> rounded = choice_;
    bool integral = true;
    for (std::size_t p = 0; p < P; ++p) {
      if (choice_[p] >= 0) continue;
      const auto& w = res.weights[p];
      const auto it = std::max_element(w.begin(), w.end());
      rounded[p] = static_cast<int>(it - w.begin());
      for (double v : w) integral = integral && (v < 1e-9 || v > 1.0 - 1e-9);
    }
    if (integral && demand_.exact_when_integral()) {
      evaluate_leaf(schedule_of(rounded));
      return;
    }
    if (depth == 0) evaluate_leaf(schedule_of(rounded));

    const auto p = static_cast<std::size_t>(order_[depth]);
    std::vector<int> kids(options_[p].size());
    std::iota(kids.begin(), kids.end(), 0);
    const auto& w = res.weights[p];
    std::stable_sort(kids.begin(), kids.end(), [&](int a, int b) {
      return w[static_cast<std::size_t>(a)] > w[static_cast<std::size_t>(b)] + 1e-12;
    });
    for (int j : kids) {
      choice_[p] = j;
      explore(depth + 1);
      choice_[p] = -1;
      if (stopped_) return;
    }
  }

  const Instance& inst_;
  const DemandModel& demand_;
  BnbOptions opts_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::vector<std::vector<int>>> options_;
  std::vector<int> order_;
  std::vector<int> choice_;
  long nodes_ = 0;
  bool stopped_ = false;
  bool numerical_trouble_ = false;
  bool has_incumbent_ = false;
  double best_ = std::numeric_limits<double>::infinity();
  Schedule best_schedule_;
  StaffingPlan best_plan_;
  std::vector<NodeRecord> log_;
};

}  // namespace

ExactSolution branch_and_bound(const Instance& inst, const DemandModel& demand,
                               const BnbOptions& opts) {
  return BranchAndBound(inst, demand, opts).run();
}

ExactSolution solve_ev(const Instance& inst, const BnbOptions& opts) {
  const MeanDemand mean;
  return branch_and_bound(inst, mean, opts);
}

SaaSolution solve_saa(const Instance& inst, const ScenarioSet& scenarios, const BnbOptions& opts) {
  if (scenarios.count() <= 0) throw std::invalid_argument("solve_saa: empty scenario set");
  const ScenarioDemand demand(scenarios);
  SaaSolution out;
  static_cast<ExactSolution&>(out) = branch_and_bound(inst, demand, opts);
  out.expected_cost = expected_external_cost(inst, out.schedule, out.plan);
  out.sample_size = scenarios.count();
  out.seed = scenarios.seed();
  return out;
}

SaaSolution solve_saa(const Instance& inst, int sample_size, std::uint64_t seed,
                      const BnbOptions& opts) {
  if (sample_size <= 0) throw std::invalid_argument("solve_saa: sample size must be positive");
  return solve_saa(inst, ScenarioSet::sample(inst, sample_size, seed), opts);
}

long schedule_space_size(const Instance& inst, long max) {
  long total = 1;
  for (const auto& pr : inst.projects()) {
    const long n = static_cast<long>(enumerate_schedules(pr).size());
    if (total > (max + 1) / n) return max + 1;
    total *= n;
  }
  return std::min(total, max + 1);
}

OracleResult oracle_staffing(const Instance& inst, const Schedule& sched, const OracleOptions& opts) {
  OracleResult r;
  r.schedule = sched;
  r.evaluations = 1;
  if (opts.staffing == OracleStaffing::Linearized) {
    const auto res = staffing_lp(inst, sched, LinearizedDemand(opts.breakpoints));
    if (res.status != lp::Status::Optimal) {
      throw std::runtime_error("oracle: staffing LP " + lp::to_string(res.status));
    }
    r.plan = res.plan;
  } else {
    FwConfig cfg;
    cfg.variant = FwVariant::Modified;
    cfg.init = FwInit::Lp;
    cfg.line_search = LineSearch::GoldenSection;
    cfg.iterations = opts.fw_iterations;
    cfg.full_trace = false;
    r.plan = fw_solve(inst, sched, cfg).plan;
  }
  r.cost = expected_external_cost(inst, sched, r.plan);
  return r;
}

OracleResult exhaustive_oracle(const Instance& inst, const OracleOptions& opts) {
  if (schedule_space_size(inst, opts.max_combinations) > opts.max_combinations) {
    throw SearchSpaceTooLarge("exhaustive oracle: more than " + std::to_string(opts.max_combinations) +
                              " schedule combinations");
  }
  const int P = inst.project_count();
  std::vector<std::vector<std::vector<int>>> options;
  for (int p = 0; p < P; ++p) options.push_back(enumerate_schedules(inst.project(p)));
  std::vector<std::size_t> idx(static_cast<std::size_t>(P), 0);
  OracleResult best;
  best.cost = std::numeric_limits<double>::infinity();
  long count = 0;
  for (;;) {
    Schedule s;
    for (int p = 0; p < P; ++p) s.periods.push_back(options[static_cast<std::size_t>(p)][idx[static_cast<std::size_t>(p)]]);
    auto r = oracle_staffing(inst, s, opts);
    ++count;
    if (count == 1 || better(r.cost, best.cost)) best = std::move(r);
    int p = P - 1;
    while (p >= 0) {
      auto& i = idx[static_cast<std::size_t>(p)];
      if (++i < options[static_cast<std::size_t>(p)].size()) break;
      i = 0;
      --p;
    }
    if (p < 0) break;
  }
  best.evaluations = count;
  return best;
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class LinearExpr {
 public:
  void add(double c, const std::string& var) {
    if (c == 0.0) return;
    std::string sign = c < 0 ? " - " : (terms_ == 0 ? " " : " + ");
    text_ += sign + num(std::abs(c)) + " " + var;
    if (++terms_ % 6 == 0) text_ += "\n  ";
  }
  bool empty() const { return terms_ == 0; }
  const std::string& str() const { return text_; }

 private:
  std::string text_;
  int terms_ = 0;
};

std::string z_name(int p, int q, int t) {
  return "z_" + std::to_string(p) + "_" + std::to_string(q) + "_" + std::to_string(t);
}

}  // namespace

void write_lp_model(std::ostream& out, const Instance& inst, const ScenarioSet* scenarios) {
  const ScenarioSet mean = ScenarioSet::mean(inst);
  const ScenarioSet& sc = scenarios ? *scenarios : mean;
  const int N = sc.count();
  out << "\\ stochsched " << (scenarios ? "SAA" : "EV") << " model of instance " << inst.name()
      << ", " << N << " scenario(s)\n";
  std::vector<std::string> binaries;
  LinearExpr obj;
  std::ostringstream rows;
  std::ostringstream bounds;

  for (int p = 0; p < inst.project_count(); ++p) {
    const Project& pr = inst.project(p);
    for (int q = 1; q <= pr.duration; ++q) {
      LinearExpr once;
      for (int t = pr.activity_earliest(q); t <= pr.activity_latest(q); ++t) {
        once.add(1.0, z_name(p, q, t));
        binaries.push_back(z_name(p, q, t));
      }
      rows << " once_" << p << "_" << q << ":" << once.str() << " = 1\n";
      if (q < pr.duration) {
        LinearExpr ord;
        for (int t = pr.activity_earliest(q); t <= pr.activity_latest(q); ++t) ord.add(t, z_name(p, q, t));
        for (int t = pr.activity_earliest(q + 1); t <= pr.activity_latest(q + 1); ++t) {
          ord.add(-t, z_name(p, q + 1, t));
        }
        rows << " order_" << p << "_" << q << ":" << ord.str() << " <= -1\n";
      }
    }
  }
  // capacity and demand rows
  std::vector<std::vector<LinearExpr>> cap(static_cast<std::size_t>(inst.resource_count()),
                                           std::vector<LinearExpr>(static_cast<std::size_t>(inst.horizon() + 1)));
  for (int p = 0; p < inst.project_count(); ++p) {
    const Project& pr = inst.project(p);
    for (int s : pr.skills()) {
      for (int t = pr.earliest_start; t <= pr.latest_finish(); ++t) {
        std::vector<std::string> xs;
        for (int k : inst.resources_with_skill(s)) {
          if (inst.capacity(k, t) <= 0.0) continue;
          const std::string x = "x_" + std::to_string(p) + "_" + std::to_string(t) + "_" +
                                std::to_string(s) + "_" + std::to_string(k);
          xs.push_back(x);
          cap[static_cast<std::size_t>(k)][static_cast<std::size_t>(t)].add(1.0 / inst.eta(s, k), x);
        }
        for (int n = 0; n < N; ++n) {
          LinearExpr row;
          for (int q = 1; q <= pr.duration; ++q) {
            if (t < pr.activity_earliest(q) || t > pr.activity_latest(q)) continue;
            const auto& act = pr.activities[static_cast<std::size_t>(q - 1)];
            for (std::size_t i = 0; i < act.size(); ++i) {
              if (act[i].skill != s) continue;
              row.add(sc.values(p, q, static_cast<int>(i))[static_cast<std::size_t>(n)], z_name(p, q, t));
            }
          }
          if (row.empty()) continue;
          const std::string y = "y_" + std::to_string(p) + "_" + std::to_string(t) + "_" +
                                std::to_string(s) + "_" + std::to_string(n);
          for (const auto& x : xs) row.add(-1.0, x);
          row.add(-1.0, y);
          obj.add(inst.external_cost(s) / N, y);
          rows << " dem_" << p << "_" << t << "_" << s << "_" << n << ":" << row.str() << " <= 0\n";
        }
      }
    }
  }
  for (int k = 0; k < inst.resource_count(); ++k) {
    for (int t = 1; t <= inst.horizon(); ++t) {
      const auto& e = cap[static_cast<std::size_t>(k)][static_cast<std::size_t>(t)];
      if (e.empty()) continue;
      rows << " cap_" << k << "_" << t << ":" << e.str() << " <= " << num(inst.capacity(k, t)) << "\n";
    }
  }
  out << "Minimize\n obj:" << (obj.empty() ? std::string(" 0 z_dummy") : obj.str()) << "\n";
  out << "Subject To\n" << rows.str();
  out << "Binaries\n";
  for (const auto& b : binaries) out << " " << b << "\n";
  out << "End\n";
}

ImportedSolution import_lp_solution(std::istream& in, const Instance& inst) {
  ImportedSolution sol;
  sol.schedule.periods.resize(static_cast<std::size_t>(inst.project_count()));
  std::vector<std::vector<int>> hits(static_cast<std::size_t>(inst.project_count()));
  for (int p = 0; p < inst.project_count(); ++p) {
    sol.schedule.periods[static_cast<std::size_t>(p)].assign(static_cast<std::size_t>(inst.project(p).duration), 0);
    hits[static_cast<std::size_t>(p)].assign(static_cast<std::size_t>(inst.project(p).duration), 0);
  }
  std::vector<StaffingEntry> entries;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string name;
    double value = 0.0;
    if (!(ls >> name >> value)) continue;
    std::vector<int> idx;
    std::istringstream parts(name.size() > 2 ? name.substr(2) : std::string());
    std::string tok;
    bool ok = name.size() > 2 && name[1] == '_';
    while (ok && std::getline(parts, tok, '_')) {
      try {
        idx.push_back(std::stoi(tok));
      } catch (const std::exception&) {
        ok = false;
      }
    }
    if (!ok) continue;
    if (name[0] == 'z' && idx.size() == 3 && value > 0.5) {
      const int p = idx[0], q = idx[1], t = idx[2];
      if (p < 0 || p >= inst.project_count() || q < 1 || q > inst.project(p).duration) {
        throw StructuralError("import: variable " + name + " out of range");
      }
      sol.schedule.periods[static_cast<std::size_t>(p)][static_cast<std::size_t>(q - 1)] = t;
      ++hits[static_cast<std::size_t>(p)][static_cast<std::size_t>(q - 1)];
    } else if (name[0] == 'x' && idx.size() == 4 && value != 0.0) {
      entries.push_back({idx[0], idx[1], idx[2], idx[3], value});
    }
  }
  for (int p = 0; p < inst.project_count(); ++p) {
    for (int q = 1; q <= inst.project(p).duration; ++q) {
      if (hits[static_cast<std::size_t>(p)][static_cast<std::size_t>(q - 1)] != 1) {
        throw StructuralError("import: activity " + std::to_string(q) + " of project " +
                              std::to_string(p) + " is not assigned exactly once");
      }
    }
  }
  sol.plan = StaffingPlan::from_entries(std::move(entries));
  return sol;
}

}  // namespace stochsched
