#include "stochsched/staffing_lp.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <tuple>

namespace stochsched {

double PiecewiseShortfall::operator()(double zeta) const {
  double value = value_at_zero;
  double pos = 0.0;
  for (const auto& [len, slope] : segments) {
    if (zeta <= pos) break;
    const double step = std::min(len, zeta - pos);
    value += slope * step;
    pos += len;
  }
  return std::max(0.0, value);
}

PiecewiseShortfall PiecewiseShortfall::from_mean(double mean) {
  PiecewiseShortfall f;
  if (mean <= 0.0) return f;
  f.value_at_zero = mean;
  f.segments.emplace_back(mean, -1.0);
  return f;
}

PiecewiseShortfall PiecewiseShortfall::from_draws(std::vector<double> draws) {
  PiecewiseShortfall f;
  if (draws.empty()) return f;
  for (double& d : draws) d = std::max(0.0, d);
  std::sort(draws.begin(), draws.end());
  const double n = static_cast<double>(draws.size());
  double sum = 0.0;
  for (double d : draws) sum += d;
  f.value_at_zero = sum / n;
  double prev = 0.0;
  for (std::size_t j = 0; j < draws.size(); ++j) {
    const double len = draws[j] - prev;
    if (len > 0.0) {
      f.segments.emplace_back(len, -static_cast<double>(draws.size() - j) / n);
    }
    prev = draws[j];
  }
  return f;
}

PiecewiseShortfall PiecewiseShortfall::from_triangular(const TriangularDist& d, int breakpoints) {
  if (breakpoints < 1) throw std::invalid_argument("from_triangular: breakpoints < 1");
  PiecewiseShortfall f;
  if (d.is_zero()) return f;
  if (d.is_degenerate()) return from_mean(d.mode);
  f.value_at_zero = d.mean();
  if (d.min > 0.0) f.segments.emplace_back(d.min, -1.0);
  const double h = (d.max - d.min) / breakpoints;
  double left = tri_shortfall(d, d.min);
  for (int i = 1; i <= breakpoints; ++i) {
    const double z = i == breakpoints ? d.max : d.min + h * i;
    const double right = tri_shortfall(d, z);
    f.segments.emplace_back(h, (right - left) / h);
    left = right;
  }
  return f;
}

PiecewiseShortfall MeanDemand::shortfall(const Instance& inst, int p, int q, int skill) const {
  return PiecewiseShortfall::from_mean(inst.project(p).demand(q, skill).mean());
}

double MeanDemand::relaxed_demand(const Instance& inst, int p, int q, int skill) const {
  return inst.project(p).demand(q, skill).mean();
}

PiecewiseShortfall ScenarioDemand::shortfall(const Instance& inst, int p, int q, int skill) const {
  return PiecewiseShortfall::from_draws(scenarios_.values_for_skill(inst, p, q, skill));
}

double ScenarioDemand::relaxed_demand(const Instance& inst, int p, int q, int skill) const {
  const auto& v = scenarios_.values_for_skill(inst, p, q, skill);
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double d : v) s += std::max(0.0, d);
  return s / static_cast<double>(v.size());
}

PiecewiseShortfall LinearizedDemand::shortfall(const Instance& inst, int p, int q,
                                               int skill) const {
  return PiecewiseShortfall::from_triangular(inst.project(p).demand(q, skill), breakpoints_);
}

double LinearizedDemand::relaxed_demand(const Instance& inst, int p, int q, int skill) const {
  return inst.project(p).demand(q, skill).mean();
}

namespace {

using Key = std::tuple<int, int, int>;  // (p, t, s)

std::string xname(int p, int t, int s, int k) {
  return "x_" + std::to_string(p) + "_" + std::to_string(t) + "_" + std::to_string(s) + "_" +
         std::to_string(k);
}

}  // namespace

StaffingModel build_staffing_model(const Instance& inst, const std::vector<ProjectChoice>& choice,
                                   const DemandModel& demand) {
  if (static_cast<int>(choice.size()) != inst.project_count()) {
    throw StructuralError("build_staffing_model: one choice per project required");
  }
  // Fixed packages: (p, t, s) -> (q). Relaxed: (p, t, s) -> per-candidate demand.
  std::map<Key, int> fixed;
  std::map<Key, std::vector<double>> relaxed;
  for (int p = 0; p < inst.project_count(); ++p) {
    const Project& pr = inst.project(p);
    const auto& ch = choice[static_cast<std::size_t>(p)];
    if (ch.fixed) {
      for (int q = 1; q <= pr.duration; ++q) {
        const int t = (*ch.fixed)[static_cast<std::size_t>(q - 1)];
        for (const auto& sd : pr.activities[static_cast<std::size_t>(q - 1)]) {
          if (!sd.dist.is_zero()) fixed[{p, t, sd.skill}] = q;
        }
      }
      continue;
    }
    const std::size_t nc = ch.candidates.size();
    if (nc == 0) throw StructuralError("build_staffing_model: relaxed project without candidates");
    for (std::size_t j = 0; j < nc; ++j) {
      for (int q = 1; q <= pr.duration; ++q) {
        const int t = ch.candidates[j][static_cast<std::size_t>(q - 1)];
        for (const auto& sd : pr.activities[static_cast<std::size_t>(q - 1)]) {
          if (sd.dist.is_zero()) continue;
          auto& vec = relaxed[{p, t, sd.skill}];
          vec.resize(nc, 0.0);
          vec[j] += demand.relaxed_demand(inst, p, q, sd.skill);
        }
      }
    }
  }

  StaffingModel model;
  auto& lpm = model.program;
  std::map<Key, std::vector<int>> xcols;
  std::map<std::pair<int, int>, std::vector<std::pair<int, double>>> capacity;  // (t, k)
  auto make_x = [&](const Key& key) {
    const auto [p, t, s] = key;
    auto& cols = xcols[key];
    for (int k : inst.resources_with_skill(s)) {
      const double a = inst.capacity(k, t);
      if (a <= 0.0) continue;
      const double eta = inst.eta(s, k);
      const int col = lpm.add_variable(0.0, eta * a, xname(p, t, s, k));
      cols.push_back(col);
      model.x.push_back({p, t, s, k, col});
      capacity[{t, k}].emplace_back(col, 1.0 / eta);
    }
  };
  for (const auto& [key, q] : fixed) make_x(key);
  for (const auto& [key, v] : relaxed) make_x(key);

  for (const auto& [key, q] : fixed) {
    const auto [p, t, s] = key;
    const double c = inst.external_cost(s);
    const auto f = demand.shortfall(inst, p, q, s);
    lpm.offset += c * f.value_at_zero;
    lp::Row row;
    int seg = 0;
    for (const auto& [len, slope] : f.segments) {
      const int col = lpm.add_variable(c * slope, len,
                                       "d_" + std::to_string(p) + "_" + std::to_string(t) + "_" +
                                           std::to_string(s) + "_" + std::to_string(seg++));
      row.coefs.emplace_back(col, 1.0);
    }
    if (row.coefs.empty()) continue;
    for (int col : xcols[key]) row.coefs.emplace_back(col, -1.0);
    lpm.add_row(std::move(row));
  }

  model.weights.assign(static_cast<std::size_t>(inst.project_count()), {});
  for (int p = 0; p < inst.project_count(); ++p) {
    const auto& ch = choice[static_cast<std::size_t>(p)];
    if (ch.fixed) continue;
    auto& w = model.weights[static_cast<std::size_t>(p)];
    lp::Row conv;
    conv.sense = lp::Sense::Equal;
    conv.rhs = 1.0;
    for (std::size_t j = 0; j < ch.candidates.size(); ++j) {
      const int col = lpm.add_variable(0.0, 1.0, "w_" + std::to_string(p) + "_" + std::to_string(j));
      w.push_back(col);
      conv.coefs.emplace_back(col, 1.0);
    }
    lpm.add_row(std::move(conv));
  }
  for (const auto& [key, v] : relaxed) {
    const auto [p, t, s] = key;
    const int y = lpm.add_variable(inst.external_cost(s), lp::kInfinity,
                                   "y_" + std::to_string(p) + "_" + std::to_string(t) + "_" +
                                       std::to_string(s));
    lp::Row row;
    const auto& w = model.weights[static_cast<std::size_t>(p)];
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[j] != 0.0) row.coefs.emplace_back(w[j], v[j]);
    }
    for (int col : xcols[key]) row.coefs.emplace_back(col, -1.0);
    row.coefs.emplace_back(y, -1.0);
    lpm.add_row(std::move(row));
  }

  for (const auto& [tk, coefs] : capacity) {
    if (coefs.size() < 2) continue;  // the variable bound already covers it
    lp::Row row;
    row.coefs = coefs;
    row.rhs = inst.capacity(tk.second, tk.first);
    lpm.add_row(std::move(row));
  }
  return model;
}

StaffingLpResult solve_staffing_model(const Instance& inst, const StaffingModel& model,
                                      const lp::Options& opts) {
  StaffingLpResult out;
  const auto res = lp::solve(model.program, opts);
  out.status = res.status;
  if (res.status != lp::Status::Optimal) return out;
  out.cost = res.objective;

  std::vector<StaffingEntry> entries;
  entries.reserve(model.x.size());
  std::map<std::pair<int, int>, double> usage;
  for (const auto& xv : model.x) {
    const double ub = model.program.upper[static_cast<std::size_t>(xv.column)];
    const double v = std::clamp(res.x[static_cast<std::size_t>(xv.column)], 0.0, ub);
    if (v <= 0.0) continue;
    entries.push_back({xv.project, xv.period, xv.skill, xv.resource, v});
    usage[{xv.period, xv.resource}] += v / inst.eta(xv.skill, xv.resource);
  }
  for (auto& e : entries) {
    const double used = usage[{e.period, e.resource}];
    const double cap = inst.capacity(e.resource, e.period);
    if (used > cap) e.work *= cap / used;
  }
  out.plan = StaffingPlan::from_entries(std::move(entries));

  out.weights.assign(model.weights.size(), {});
  for (std::size_t p = 0; p < model.weights.size(); ++p) {
    for (int col : model.weights[p]) {
      out.weights[p].push_back(std::clamp(res.x[static_cast<std::size_t>(col)], 0.0, 1.0));
    }
  }
  return out;
}

StaffingLpResult staffing_lp(const Instance& inst, const Schedule& sched,
                             const DemandModel& demand) {
  std::vector<ProjectChoice> choice(static_cast<std::size_t>(inst.project_count()));
  for (int p = 0; p < inst.project_count(); ++p) {
    choice[static_cast<std::size_t>(p)].fixed = sched.row(p);
  }
  return solve_staffing_model(inst, build_staffing_model(inst, choice, demand));
}

}  // namespace stochsched
