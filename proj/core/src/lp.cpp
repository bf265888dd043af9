#include "stochsched/lp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace stochsched::lp {

int LinearProgram::add_variable(double c, double ub, std::string name) {
  cost.push_back(c);
  upper.push_back(ub);
  names.push_back(std::move(name));
  return static_cast<int>(cost.size()) - 1;
}

int LinearProgram::add_row(Row row) {
  rows.push_back(std::move(row));
  return static_cast<int>(rows.size()) - 1;
}

std::string to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::IterationLimit: return "iteration-limit";
    case Status::TimeLimit: return "time-limit";
  }
  return "unknown";
}

namespace {

enum class VarState : unsigned char { Basic, AtLower, AtUpper };

class Tableau {
 public:
  Tableau(const LinearProgram& lp, const Options& opts)
      : opts_(opts), start_(std::chrono::steady_clock::now()) {
    m_ = static_cast<int>(lp.rows.size());
    nv_ = lp.variable_count();
    // count auxiliary columns
    int slacks = 0, artificials = 0;
    std::vector<Sense> sense(static_cast<std::size_t>(m_));
    std::vector<double> sign(static_cast<std::size_t>(m_), 1.0);
    for (int i = 0; i < m_; ++i) {
      const Row& r = lp.rows[static_cast<std::size_t>(i)];
      Sense s = r.sense;
      if (r.rhs < 0.0) {
        sign[static_cast<std::size_t>(i)] = -1.0;
        if (s == Sense::LessEqual) s = Sense::GreaterEqual;
        else if (s == Sense::GreaterEqual) s = Sense::LessEqual;
      }
      sense[static_cast<std::size_t>(i)] = s;
      if (s != Sense::Equal) ++slacks;
      if (s != Sense::LessEqual) ++artificials;
    }
    n_ = nv_ + slacks + artificials;
    first_artificial_ = nv_ + slacks;
    tab_.assign(static_cast<std::size_t>(m_) * static_cast<std::size_t>(n_), 0.0);
    beta_.assign(static_cast<std::size_t>(m_), 0.0);
    basis_.assign(static_cast<std::size_t>(m_), -1);
    upper_.assign(static_cast<std::size_t>(n_), kInfinity);
    state_.assign(static_cast<std::size_t>(n_), VarState::AtLower);
    cost_.assign(static_cast<std::size_t>(n_), 0.0);
    for (int j = 0; j < nv_; ++j) {
      upper_[static_cast<std::size_t>(j)] = lp.upper[static_cast<std::size_t>(j)];
      cost_[static_cast<std::size_t>(j)] = lp.cost[static_cast<std::size_t>(j)];
      if (upper_[static_cast<std::size_t>(j)] < 0.0) {
        throw std::invalid_argument("lp: negative upper bound");
      }
    }
    int next_slack = nv_, next_art = first_artificial_;
    for (int i = 0; i < m_; ++i) {
      const Row& r = lp.rows[static_cast<std::size_t>(i)];
      const double sg = sign[static_cast<std::size_t>(i)];
      double* row = row_ptr(i);
      for (const auto& [j, a] : r.coefs) {
        if (j < 0 || j >= nv_) throw std::invalid_argument("lp: column index out of range");
        row[j] += sg * a;
      }
      beta_[static_cast<std::size_t>(i)] = sg * r.rhs;
      const Sense s = sense[static_cast<std::size_t>(i)];
      if (s == Sense::LessEqual) {
        row[next_slack] = 1.0;
        basis_[static_cast<std::size_t>(i)] = next_slack;
        ++next_slack;
      } else {
        if (s == Sense::GreaterEqual) {
          row[next_slack] = -1.0;
          ++next_slack;
        }
        row[next_art] = 1.0;
        basis_[static_cast<std::size_t>(i)] = next_art;
        ++next_art;
      }
      state_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] = VarState::Basic;
    }
  }

  Result run() {
    Result res;
    if (first_artificial_ < n_) {
      std::vector<double> phase1(static_cast<std::size_t>(n_), 0.0);
      for (int j = first_artificial_; j < n_; ++j) phase1[static_cast<std::size_t>(j)] = 1.0;
      const Status st = optimize(phase1, res);
      if (st == Status::IterationLimit || st == Status::TimeLimit) {
        res.status = st;
        return res;
      }
      double infeas = 0.0, scale = 1.0;
      for (int i = 0; i < m_; ++i) {
        if (basis_[static_cast<std::size_t>(i)] >= first_artificial_) {
          infeas += std::max(0.0, beta_[static_cast<std::size_t>(i)]);
        }
        scale = std::max(scale, std::abs(beta_[static_cast<std::size_t>(i)]));
      }
      if (infeas > opts_.feasibility_tol * scale * std::max(1, m_)) {
        res.status = Status::Infeasible;
        return res;
      }
      for (int j = first_artificial_; j < n_; ++j) {
        upper_[static_cast<std::size_t>(j)] = 0.0;
        if (state_[static_cast<std::size_t>(j)] != VarState::Basic) {
          state_[static_cast<std::size_t>(j)] = VarState::AtLower;
        }
      }
      drive_out_artificials();
    }
    res.status = optimize(cost_, res);
    res.x.assign(static_cast<std::size_t>(nv_), 0.0);
    for (int j = 0; j < nv_; ++j) {
      if (state_[static_cast<std::size_t>(j)] == VarState::AtUpper) {
        res.x[static_cast<std::size_t>(j)] = upper_[static_cast<std::size_t>(j)];
      }
    }
    for (int i = 0; i < m_; ++i) {
      const int j = basis_[static_cast<std::size_t>(i)];
      if (j < nv_) {
        double v = std::max(0.0, beta_[static_cast<std::size_t>(i)]);
        v = std::min(v, upper_[static_cast<std::size_t>(j)]);
        res.x[static_cast<std::size_t>(j)] = v;
      }
    }
    res.objective = 0.0;
    for (int j = 0; j < nv_; ++j) {
      res.objective += cost_[static_cast<std::size_t>(j)] * res.x[static_cast<std::size_t>(j)];
    }
    return res;
  }

 private:
  double* row_ptr(int i) { return tab_.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(n_); }

  // Pivots basic artificials at zero level out of the basis where a
  // structural or slack column can replace them.
  void drive_out_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] < first_artificial_) continue;
      const double* row = row_ptr(i);
      int best = -1;
      double best_abs = 1e-7;
      for (int j = 0; j < first_artificial_; ++j) {
        if (state_[static_cast<std::size_t>(j)] == VarState::Basic) continue;
        if (std::abs(row[j]) > best_abs) {
          best_abs = std::abs(row[j]);
          best = j;
        }
      }
      if (best < 0) continue;
      // entering variable keeps its current bound value, the artificial sits
      // at zero, so the basic values do not change
      const double value = state_[static_cast<std::size_t>(best)] == VarState::AtUpper
                               ? upper_[static_cast<std::size_t>(best)]
                               : 0.0;
      const int leaving = basis_[static_cast<std::size_t>(i)];
      pivot(i, best, nullptr);
      state_[static_cast<std::size_t>(leaving)] = VarState::AtLower;
      beta_[static_cast<std::size_t>(i)] = value;
    }
  }

  void pivot(int r, int j, std::vector<double>* reduced) {
    double* pr = row_ptr(r);
    const double piv = pr[j];
    const double inv = 1.0 / piv;
    for (int c = 0; c < n_; ++c) pr[c] *= inv;
    pr[j] = 1.0;
    nonzero_.clear();
    for (int c = 0; c < n_; ++c) {
      if (pr[c] != 0.0) nonzero_.push_back(c);
    }
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* row = row_ptr(i);
      const double f = row[j];
      if (f == 0.0) continue;
      for (int c : nonzero_) row[c] -= f * pr[c];
      row[j] = 0.0;
    }
    if (reduced) {
      const double f = (*reduced)[static_cast<std::size_t>(j)];
      if (f != 0.0) {
        for (int c : nonzero_) (*reduced)[static_cast<std::size_t>(c)] -= f * pr[c];
        (*reduced)[static_cast<std::size_t>(j)] = 0.0;
      }
    }
    state_[static_cast<std::size_t>(j)] = VarState::Basic;
    basis_[static_cast<std::size_t>(r)] = j;
  }

  Status optimize(const std::vector<double>& cost, Result& res) {
    std::vector<double> d = cost;
    for (int i = 0; i < m_; ++i) {
      const double cb = cost[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])];
      if (cb == 0.0) continue;
      const double* row = row_ptr(i);
      for (int c = 0; c < n_; ++c) {
        if (row[c] != 0.0) d[static_cast<std::size_t>(c)] -= cb * row[c];
      }
    }
    for (int i = 0; i < m_; ++i) d[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] = 0.0;

    bool bland = false;
    long stall = 0;
    double scale = 1.0;
    for (double c : cost) scale = std::max(scale, std::abs(c));
    const double dtol = opts_.optimality_tol * scale;

    while (true) {
      if (res.iterations >= opts_.max_iterations) return Status::IterationLimit;
      if (res.iterations % 32 == 0 && opts_.time_limit < kInfinity &&
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count() >
              opts_.time_limit) {
        return Status::TimeLimit;
      }
      // pricing
      int enter = -1;
      double best = 0.0;
      for (int j = 0; j < n_; ++j) {
        const VarState st = state_[static_cast<std::size_t>(j)];
        if (st == VarState::Basic || upper_[static_cast<std::size_t>(j)] <= 0.0) continue;
        const double dj = d[static_cast<std::size_t>(j)];
        double gain = 0.0;
        if (st == VarState::AtLower) {
          if (dj < -dtol) gain = -dj;
        } else if (dj > dtol) {
          gain = dj;
        }
        if (gain <= 0.0) continue;
        if (bland) {
          enter = j;
          break;
        }
        if (gain > best) {
          best = gain;
          enter = j;
        }
      }
      if (enter < 0) return Status::Optimal;
      ++res.iterations;

      const double dir = state_[static_cast<std::size_t>(enter)] == VarState::AtLower ? 1.0 : -1.0;
      double theta = upper_[static_cast<std::size_t>(enter)];
      int leave_row = -1;
      double leave_piv = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double a = row_ptr(i)[enter];
        if (std::abs(a) <= opts_.pivot_tol) continue;
        const double rate = -dir * a;  // change of basic var per unit step
        const int bj = basis_[static_cast<std::size_t>(i)];
        const double bv = beta_[static_cast<std::size_t>(i)];
        double limit;
        if (rate < 0.0) {
          limit = std::max(0.0, bv) / -rate;
        } else {
          const double ub = upper_[static_cast<std::size_t>(bj)];
          if (ub == kInfinity) continue;
          limit = std::max(0.0, ub - bv) / rate;
        }
        bool take = false;
        if (limit < theta - 1e-12) {
          take = true;
        } else if (limit <= theta + 1e-12 && leave_row >= 0) {
          if (bland) take = bj < basis_[static_cast<std::size_t>(leave_row)];
          else take = std::abs(a) > std::abs(leave_piv);
        } else if (limit <= theta && leave_row < 0) {
          take = true;
        }
        if (take) {
          theta = limit;
          leave_row = i;
          leave_piv = a;
        }
      }
      if (theta == kInfinity) return Status::Unbounded;

      const double dj = d[static_cast<std::size_t>(enter)];
      const double improvement = -dj * dir * theta;
      for (int i = 0; i < m_; ++i) {
        const double a = row_ptr(i)[enter];
        if (a != 0.0) beta_[static_cast<std::size_t>(i)] -= dir * a * theta;
      }
      if (leave_row < 0) {
        state_[static_cast<std::size_t>(enter)] =
            dir > 0 ? VarState::AtUpper : VarState::AtLower;
      } else {
        const int leaving = basis_[static_cast<std::size_t>(leave_row)];
        const double rate = -dir * leave_piv;
        const double start = dir > 0 ? 0.0 : upper_[static_cast<std::size_t>(enter)];
        pivot(leave_row, enter, &d);
        state_[static_cast<std::size_t>(leaving)] =
            rate < 0.0 ? VarState::AtLower : VarState::AtUpper;
        beta_[static_cast<std::size_t>(leave_row)] = start + dir * theta;
      }
      if (improvement > 1e-12 * scale) {
        stall = 0;
        bland = false;
      } else if (++stall > opts_.stall_limit) {
        bland = true;
        res.used_bland = true;
      }
    }
  }

  const Options& opts_;
  std::chrono::steady_clock::time_point start_;
  int m_ = 0, nv_ = 0, n_ = 0, first_artificial_ = 0;
  std::vector<double> tab_;
  std::vector<double> beta_;
  std::vector<int> basis_;
  std::vector<double> upper_;
  std::vector<VarState> state_;
  std::vector<double> cost_;
  std::vector<int> nonzero_;
};

}  // namespace

Result solve(const LinearProgram& lp, const Options& opts) {
  if (lp.upper.size() != lp.cost.size()) throw std::invalid_argument("lp: bound/cost size mismatch");
  Tableau tab(lp, opts);
  Result res = tab.run();
  res.objective += lp.offset;
  return res;
}

}  // namespace stochsched::lp
