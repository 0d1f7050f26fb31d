#include "batchcg/lp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace batchcg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Working solver for one LpProblem. Structural columns are followed by two
// artificial columns per row (+1 and -1), so a feasible phase-1 start
// exists for any sign pattern of the residuals and the snapshot codes stay
// stable while the master grows.
class Solver {
 public:
  Solver(const LpProblem& p, const SimplexOptions& o)
      : p_(p),
        o_(o),
        n_(p.num_cols()),
        m_(p.rows),
        total_(n_ + 2 * m_),
        lo_(static_cast<std::size_t>(total_)),
        hi_(static_cast<std::size_t>(total_)),
        cost_(static_cast<std::size_t>(total_), 0.0),
        stat_(static_cast<std::size_t>(total_), VarStatus::AtLower),
        xval_(static_cast<std::size_t>(total_), 0.0),
        in_basis_(static_cast<std::size_t>(total_), 0),
        basis_(static_cast<std::size_t>(m_), -1),
        binv_(m_, m_) {
    for (int j = 0; j < n_; ++j) {
      lo_[static_cast<std::size_t>(j)] = p_.lower[static_cast<std::size_t>(j)];
      hi_[static_cast<std::size_t>(j)] = p_.upper[static_cast<std::size_t>(j)];
    }
    for (int a = n_; a < total_; ++a) {
      lo_[static_cast<std::size_t>(a)] = 0.0;
      hi_[static_cast<std::size_t>(a)] = 0.0;  // opened up during phase 1
    }
  }

  LpResult run(SimplexState& state);

 private:
  enum class Step { Optimal, IterationLimit, Unbounded, Repair };

  bool is_artificial(int j) const { return j >= n_; }
  int art_row(int j) const { return j < n_ + m_ ? j - n_ : j - n_ - m_; }
  double art_coef(int j) const { return j < n_ + m_ ? 1.0 : -1.0; }

  int encode(int j) const { return j < n_ ? j : -1 - (j - n_); }
  int decode(int code) const { return code >= 0 ? code : n_ + (-1 - code); }

  double dot_y(int j, const Eigen::VectorXd& y) const {
    if (is_artificial(j)) return art_coef(j) * y[art_row(j)];
    double acc = 0.0;
    for (const auto& [row, coef] : p_.cols[static_cast<std::size_t>(j)]) acc += coef * y[row];
    return acc;
  }

  void ftran(int j, Eigen::VectorXd& w) const {
    w.setZero();
    if (is_artificial(j)) {
      w = art_coef(j) * binv_.col(art_row(j));
      return;
    }
    for (const auto& [row, coef] : p_.cols[static_cast<std::size_t>(j)])
      w.noalias() += coef * binv_.col(row);
  }

  bool refactor() {
    Eigen::MatrixXd basis_mat = Eigen::MatrixXd::Zero(m_, m_);
    for (int i = 0; i < m_; ++i) {
      int j = basis_[static_cast<std::size_t>(i)];
      if (is_artificial(j)) {
        basis_mat(art_row(j), i) = art_coef(j);
      } else {
        for (const auto& [row, coef] : p_.cols[static_cast<std::size_t>(j)])
          basis_mat(row, i) += coef;
      }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(basis_mat);
    if (!lu.isInvertible()) return false;
    binv_ = lu.inverse();
    return true;
  }

  void compute_basics() {
    Eigen::VectorXd residual(m_);
    for (int i = 0; i < m_; ++i) residual[i] = p_.rhs[static_cast<std::size_t>(i)];
    for (int j = 0; j < total_; ++j) {
      if (stat_[static_cast<std::size_t>(j)] == VarStatus::Basic) continue;
      double value = xval_[static_cast<std::size_t>(j)];
      if (value == 0.0) continue;
      if (is_artificial(j)) {
        residual[art_row(j)] -= art_coef(j) * value;
      } else {
        for (const auto& [row, coef] : p_.cols[static_cast<std::size_t>(j)])
          residual[row] -= coef * value;
      }
    }
    Eigen::VectorXd xb = binv_ * residual;
    for (int i = 0; i < m_; ++i) xval_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] = xb[i];
  }

  void snap_nonbasic() {
    for (int j = 0; j < total_; ++j) {
      if (stat_[static_cast<std::size_t>(j)] == VarStatus::Basic) continue;
      double lo = lo_[static_cast<std::size_t>(j)], hi = hi_[static_cast<std::size_t>(j)];
      if (stat_[static_cast<std::size_t>(j)] == VarStatus::AtUpper && hi < kLpInfinity) {
        xval_[static_cast<std::size_t>(j)] = hi;
      } else {
        stat_[static_cast<std::size_t>(j)] = VarStatus::AtLower;
        xval_[static_cast<std::size_t>(j)] = lo > -kLpInfinity ? lo : std::min(0.0, hi);
      }
    }
  }

  bool basics_feasible(double tol) const {
    for (int i = 0; i < m_; ++i) {
      int j = basis_[static_cast<std::size_t>(i)];
      double x = xval_[static_cast<std::size_t>(j)];
      if (x < lo_[static_cast<std::size_t>(j)] - tol || x > hi_[static_cast<std::size_t>(j)] + tol)
        return false;
    }
    return true;
  }

  bool try_warm(const SimplexState& state) {
    if (!state.valid || static_cast<int>(state.basis.size()) != m_) return false;
    std::fill(in_basis_.begin(), in_basis_.end(), 0);
    for (int i = 0; i < m_; ++i) {
      int j = decode(state.basis[static_cast<std::size_t>(i)]);
      if (j < 0 || j >= total_ || in_basis_[static_cast<std::size_t>(j)]) return false;
      basis_[static_cast<std::size_t>(i)] = j;
      in_basis_[static_cast<std::size_t>(j)] = 1;
    }
    for (int j = 0; j < total_; ++j)
      stat_[static_cast<std::size_t>(j)] =
          in_basis_[static_cast<std::size_t>(j)] ? VarStatus::Basic : VarStatus::AtLower;
    for (int j = 0; j < n_ && j < static_cast<int>(state.col_status.size()); ++j)
      if (!in_basis_[static_cast<std::size_t>(j)])
        stat_[static_cast<std::size_t>(j)] = state.col_status[static_cast<std::size_t>(j)] ==
                                                     VarStatus::AtUpper
                                                 ? VarStatus::AtUpper
                                                 : VarStatus::AtLower;
    if (!refactor()) return false;
    snap_nonbasic();
    compute_basics();
    return basics_feasible(o_.feas_tol);
  }

  void cold_start() {
    std::fill(in_basis_.begin(), in_basis_.end(), 0);
    for (int j = 0; j < total_; ++j) stat_[static_cast<std::size_t>(j)] = VarStatus::AtLower;
    snap_nonbasic();
    Eigen::VectorXd residual(m_);
    for (int i = 0; i < m_; ++i) residual[i] = p_.rhs[static_cast<std::size_t>(i)];
    for (int j = 0; j < n_; ++j) {
      double value = xval_[static_cast<std::size_t>(j)];
      if (value == 0.0) continue;
      for (const auto& [row, coef] : p_.cols[static_cast<std::size_t>(j)])
        residual[row] -= coef * value;
    }
    binv_.setZero();
    for (int i = 0; i < m_; ++i) {
      int art = residual[i] >= 0.0 ? n_ + i : n_ + m_ + i;
      basis_[static_cast<std::size_t>(i)] = art;
      in_basis_[static_cast<std::size_t>(art)] = 1;
      stat_[static_cast<std::size_t>(art)] = VarStatus::Basic;
      xval_[static_cast<std::size_t>(art)] = std::abs(residual[i]);
      binv_(i, i) = residual[i] >= 0.0 ? 1.0 : -1.0;
    }
  }

  void set_phase_costs(int phase) {
    for (int j = 0; j < n_; ++j)
      cost_[static_cast<std::size_t>(j)] = phase == 1 ? 0.0 : p_.obj[static_cast<std::size_t>(j)];
    for (int a = n_; a < total_; ++a) {
      cost_[static_cast<std::size_t>(a)] = phase == 1 ? 1.0 : 0.0;
      hi_[static_cast<std::size_t>(a)] = phase == 1 ? kLpInfinity : 0.0;
    }
  }

  Step iterate();

  // Swaps a basic artificial for any structural column with a usable pivot
  // element; rows with no candidate are redundant and keep the artificial.
  void drive_out_artificials() {
    Eigen::VectorXd w(m_);
    for (int i = 0; i < m_; ++i) {
      if (!is_artificial(basis_[static_cast<std::size_t>(i)])) continue;
      int best = -1;
      double best_mag = o_.pivot_tol;
      Eigen::VectorXd row = binv_.row(i);
      for (int j = 0; j < n_; ++j) {
        if (stat_[static_cast<std::size_t>(j)] == VarStatus::Basic) continue;
        double alpha = 0.0;
        for (const auto& [r, coef] : p_.cols[static_cast<std::size_t>(j)]) alpha += coef * row[r];
        if (std::abs(alpha) > best_mag) {
          best_mag = std::abs(alpha);
          best = j;
        }
      }
      if (best < 0) continue;
      ftran(best, w);
      int leaving = basis_[static_cast<std::size_t>(i)];
      stat_[static_cast<std::size_t>(leaving)] = VarStatus::AtLower;
      xval_[static_cast<std::size_t>(leaving)] = 0.0;
      replace_basis(i, best, w);  // t = 0 swap, values unchanged
    }
  }

  void replace_basis(int row, int entering, const Eigen::VectorXd& w) {
    int leaving = basis_[static_cast<std::size_t>(row)];
    in_basis_[static_cast<std::size_t>(leaving)] = 0;
    in_basis_[static_cast<std::size_t>(entering)] = 1;
    basis_[static_cast<std::size_t>(row)] = entering;
    stat_[static_cast<std::size_t>(entering)] = VarStatus::Basic;
    double pivot = w[row];
    binv_.row(row) /= pivot;
    for (int i = 0; i < m_; ++i) {
      if (i == row) continue;
      double factor = w[i];
      if (factor != 0.0) binv_.row(i) -= factor * binv_.row(row);
    }
  }

  const LpProblem& p_;
  SimplexOptions o_;
  int n_, m_, total_;
  std::vector<double> lo_, hi_, cost_;
  std::vector<VarStatus> stat_;
  std::vector<double> xval_;
  std::vector<char> in_basis_;
  std::vector<int> basis_;
  Eigen::MatrixXd binv_;
  std::int64_t iters_ = 0;
  std::int64_t degen_run_ = 0;
  bool bland_ = false;
  int pivots_since_refactor_ = 0;
  int price_cursor_ = 0;
};

Solver::Step Solver::iterate() {
  Eigen::VectorXd y(m_), w(m_);
  Eigen::VectorXd cb(m_);
  bool fresh_factor = false;
  double objective = 0.0;
  for (int j = 0; j < total_; ++j)
    objective += cost_[static_cast<std::size_t>(j)] * xval_[static_cast<std::size_t>(j)];
  while (true) {
    if (iters_ >= o_.max_iterations) return Step::IterationLimit;
    for (int i = 0; i < m_; ++i)
      cb[i] = cost_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])];
    y.noalias() = binv_.transpose() * cb;

    // entering variable: Dantzig over a cyclic window (full scan only to
    // certify optimality); Bland scans everything for the smallest index
    int entering = -1;
    double best_viol = o_.opt_tol;
    const int window = 4096;
    int scanned = 0;
    int j = bland_ ? 0 : price_cursor_;
    for (; scanned < total_; ++scanned, j = j + 1 == total_ ? 0 : j + 1) {
      VarStatus st = stat_[static_cast<std::size_t>(j)];
      if (st == VarStatus::Basic) continue;
      if (lo_[static_cast<std::size_t>(j)] >= hi_[static_cast<std::size_t>(j)]) continue;  // fixed
      double d = cost_[static_cast<std::size_t>(j)] - dot_y(j, y);
      double viol = st == VarStatus::AtLower ? -d : d;
      if (viol > best_viol) {
        entering = j;
        best_viol = viol;
        if (bland_) break;
      }
      if (!bland_ && entering >= 0 && scanned >= window) break;
    }
    if (!bland_) price_cursor_ = j;
    if (entering < 0) return Step::Optimal;
    if (best_viol < 1e-7) {
      // noise-band candidate: re-price against a fresh inverse once; if
      // even fresh data shows nothing stronger, the gain is below the
      // resolution this backend can certify, so stop here
      if (!fresh_factor) {
        if (!refactor()) return Step::Repair;
        compute_basics();
        if (!basics_feasible(10.0 * o_.feas_tol)) return Step::Repair;
        fresh_factor = true;
        continue;
      }
      return Step::Optimal;
    }

    ftran(entering, w);
    double dir = stat_[static_cast<std::size_t>(entering)] == VarStatus::AtLower ? 1.0 : -1.0;
    if (w.lpNorm<Eigen::Infinity>() <= o_.pivot_tol &&
        hi_[static_cast<std::size_t>(entering)] >= kLpInfinity) {
      // a near-zero column with an open bound is factorization noise;
      // trust it only straight after a refactorization
      if (!fresh_factor) {
        if (!refactor()) return Step::Repair;
        compute_basics();
        fresh_factor = true;
        continue;
      }
      return Step::Unbounded;
    }
    fresh_factor = false;

    // ratio test over basic bounds plus the entering variable's own span
    double span = hi_[static_cast<std::size_t>(entering)] >= kLpInfinity
                      ? kInf
                      : hi_[static_cast<std::size_t>(entering)] -
                            lo_[static_cast<std::size_t>(entering)];
    double best_t = span;
    int leave_row = -1;
    bool leave_to_upper = false;
    double leave_mag = 0.0;
    for (int i = 0; i < m_; ++i) {
      double g = dir * w[i];
      int b = basis_[static_cast<std::size_t>(i)];
      double t;
      bool to_upper;
      if (g > o_.pivot_tol) {
        t = (xval_[static_cast<std::size_t>(b)] - lo_[static_cast<std::size_t>(b)]) / g;
        to_upper = false;
      } else if (g < -o_.pivot_tol) {
        double cap = hi_[static_cast<std::size_t>(b)];
        if (cap >= kLpInfinity) continue;
        t = (cap - xval_[static_cast<std::size_t>(b)]) / (-g);
        to_upper = true;
      } else {
        continue;
      }
      if (t < 0.0) t = 0.0;
      bool take;
      if (t < best_t - 1e-9) {
        take = true;
      } else if (leave_row >= 0 && t <= best_t + 1e-9) {
        // near-tie: Bland needs the smallest variable index to terminate,
        // Dantzig prefers the largest pivot magnitude to limit drift
        take = bland_ ? b < basis_[static_cast<std::size_t>(leave_row)]
                      : std::abs(g) > leave_mag;
      } else {
        take = false;
      }
      if (take) {
        best_t = std::min(best_t, t);
        leave_row = i;
        leave_to_upper = to_upper;
        leave_mag = std::abs(g);
      }
    }
    if (leave_row < 0 && !std::isfinite(best_t)) {
      if (!fresh_factor) {
        if (!refactor()) return Step::Repair;
        compute_basics();
        fresh_factor = true;
        continue;
      }
      return Step::Unbounded;
    }

    double t = best_t;
    ++iters_;
    // stall detection by representable objective progress: steps whose
    // gain drowns in rounding must count as degenerate or Dantzig can
    // cycle through them forever
    double gain = best_viol * t;
    objective -= gain;
    if (gain <= 1e-9 * (1.0 + std::abs(objective))) {
      if (++degen_run_ > 5 * static_cast<std::int64_t>(m_)) bland_ = true;
    } else {
      degen_run_ = 0;
      bland_ = false;  // progress made, back to Dantzig
    }

    // move the entering variable and adjust the basics
    for (int i = 0; i < m_; ++i) {
      double delta = t * dir * w[i];
      if (delta != 0.0) xval_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] -= delta;
    }
    if (leave_row < 0) {
      // bound flip, no basis change
      VarStatus st = stat_[static_cast<std::size_t>(entering)];
      stat_[static_cast<std::size_t>(entering)] =
          st == VarStatus::AtLower ? VarStatus::AtUpper : VarStatus::AtLower;
      xval_[static_cast<std::size_t>(entering)] =
          st == VarStatus::AtLower ? hi_[static_cast<std::size_t>(entering)]
                                   : lo_[static_cast<std::size_t>(entering)];
      continue;
    }
    int leaving = basis_[static_cast<std::size_t>(leave_row)];
    xval_[static_cast<std::size_t>(entering)] =
        (dir > 0 ? lo_[static_cast<std::size_t>(entering)]
                 : hi_[static_cast<std::size_t>(entering)]) +
        dir * t;
    xval_[static_cast<std::size_t>(leaving)] = leave_to_upper
                                                   ? hi_[static_cast<std::size_t>(leaving)]
                                                   : lo_[static_cast<std::size_t>(leaving)];
    stat_[static_cast<std::size_t>(leaving)] =
        leave_to_upper ? VarStatus::AtUpper : VarStatus::AtLower;
    replace_basis(leave_row, entering, w);

    if (++pivots_since_refactor_ >= o_.refactor_every) {
      pivots_since_refactor_ = 0;
      if (!refactor()) return Step::Repair;
      compute_basics();
      if (!basics_feasible(10.0 * o_.feas_tol)) return Step::Repair;
    }
  }
}

LpResult Solver::run(SimplexState& state) {
  LpResult result;
  bool warm = try_warm(state);
  bool solved = false;
  for (int attempt = 0; attempt < 3 && !solved; ++attempt) {
    bland_ = false;
    degen_run_ = 0;
    pivots_since_refactor_ = 0;
    if (!warm) {
      cold_start();
      set_phase_costs(1);
      Step s1 = iterate();
      if (s1 == Step::IterationLimit) {
        result.status = LpStatus::IterationLimit;
        result.iterations = iters_;
        return result;
      }
      if (s1 == Step::Repair || s1 == Step::Unbounded) {
        warm = false;
        continue;
      }
      double infeasibility = 0.0;
      for (int a = n_; a < total_; ++a) infeasibility += xval_[static_cast<std::size_t>(a)];
      if (infeasibility > o_.feas_tol) {
        result.status = LpStatus::Infeasible;
        result.iterations = iters_;
        return result;
      }
      drive_out_artificials();
    }
    set_phase_costs(2);
    Step s2 = iterate();
    if (s2 == Step::IterationLimit) {
      result.status = LpStatus::IterationLimit;
      result.iterations = iters_;
      return result;
    }
    if (s2 == Step::Repair || (s2 == Step::Unbounded && attempt < 2)) {
      // an unbounded verdict gets one cold retry: on the bounded problems
      // this backend serves it can only be numerical
      warm = false;
      continue;
    }
    if (s2 == Step::Unbounded) {
      result.status = LpStatus::Unbounded;
      result.iterations = iters_;
      return result;
    }
    // fresh factorization; accept only if the recomputed basics fit
    if (refactor()) {
      compute_basics();
      if (basics_feasible(10.0 * o_.feas_tol)) solved = true;
    }
    warm = false;
  }
  if (!solved) {
    result.status = LpStatus::NumericalFailure;
    result.iterations = iters_;
    return result;
  }
  result.status = LpStatus::Optimal;

  result.iterations = iters_;
  result.x.resize(static_cast<std::size_t>(n_));
  double obj = 0.0;
  for (int j = 0; j < n_; ++j) {
    result.x[static_cast<std::size_t>(j)] = xval_[static_cast<std::size_t>(j)];
    obj += p_.obj[static_cast<std::size_t>(j)] * xval_[static_cast<std::size_t>(j)];
  }
  result.objective = obj;
  Eigen::VectorXd cb(m_);
  for (int i = 0; i < m_; ++i)
    cb[i] = cost_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])];
  Eigen::VectorXd y = binv_.transpose() * cb;
  result.y.assign(y.data(), y.data() + m_);

  state.valid = true;
  state.basis.resize(static_cast<std::size_t>(m_));
  for (int i = 0; i < m_; ++i)
    state.basis[static_cast<std::size_t>(i)] = encode(basis_[static_cast<std::size_t>(i)]);
  state.col_status.resize(static_cast<std::size_t>(n_));
  for (int j = 0; j < n_; ++j)
    state.col_status[static_cast<std::size_t>(j)] = stat_[static_cast<std::size_t>(j)];
  return result;
}

}  // namespace

LpResult SimplexBackend::solve(const LpProblem& problem, SimplexState& state) {
  Solver solver(problem, options_);
  return solver.run(state);
}

}  // namespace batchcg
