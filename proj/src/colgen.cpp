#include "batchcg/colgen.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include "batchcg/pricing.hpp"

namespace batchcg {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_config(const CgConfig& config) {
  if (config.ub_time_limit_seconds <= 0 || config.eps_neg < 0 || config.max_cg_iterations < 1 ||
      config.branch_node_limit < 1)
    fail(Errc::BadSpec, "CG limits must be positive");
}

}  // namespace

std::vector<ArcColumn> init_cols(const Instance& inst) {
  const int n = inst.n();
  std::vector<int> order = spt_order(inst);
  std::vector<ArcColumn> arcs;
  for (int start = 0; start < n; ++start) {
    std::vector<int> ids;
    int size = 0;
    for (int t = start; t < n; ++t) {
      const Job& job = inst.job(order[static_cast<std::size_t>(t)]);
      if (size + job.s > inst.capacity) break;  // runs stay SPT-consecutive
      ids.push_back(job.id);
      size += job.s;
      Batch batch = make_batch(inst, ids);
      for (int i = 1; i + batch.size() <= n + 1; ++i)
        arcs.push_back(ArcColumn{i, i + batch.size(), batch});
    }
  }
  return arcs;
}

CgRelaxation run_cg(const Instance& inst, const CgConfig& config) {
  check_config(config);
  auto start = Clock::now();
  CgRelaxation out;
  const bool multi = inst.machines > 1 || config.use_parallel_path;
  MasterOptions options;
  options.multi_commodity = multi;
  out.master = std::make_unique<RestrictedMaster>(inst, init_cols(inst), options);
  out.columns_initial = out.master->num_arcs();
  for (int iter = 1; iter <= config.max_cg_iterations; ++iter) {
    LpSolution sol = out.master->solve();
    out.iterations = iter;
    if (sol.status == LpSolution::Status::Infeasible)
      fail(Errc::Infeasible, "restricted master infeasible");
    if (sol.status == LpSolution::Status::IterationLimit)
      fail(Errc::IterationLimit, "simplex iteration limit inside the master");
    std::vector<ArcColumn> negative = multi
                                          ? new_cols_identical(inst, sol.duals, config.eps_neg)
                                          : new_cols_single(inst, sol.duals, config.eps_neg);
    out.last_solution = std::move(sol);
    if (negative.empty()) {
      out.converged = true;
      out.lower_bound = out.last_solution.objective;
      break;
    }
    int added = out.master->add_columns(negative);
    if (added == 0) fail(Errc::NumericalFailure, "pricing regenerated existing columns only");
    out.columns_generated += added;
  }
  if (!out.converged) out.lower_bound = out.last_solution.objective;  // not claimed as a bound
  out.lb_seconds = seconds_since(start);
  return out;
}

namespace {

bool batches_share_job(const Batch& a, const Batch& b) {
  std::size_t i = 0, j = 0;
  while (i < a.job_ids.size() && j < b.job_ids.size()) {
    if (a.job_ids[i] == b.job_ids[j]) return true;
    if (a.job_ids[i] < b.job_ids[j]) ++i; else ++j;
  }
  return false;
}

// Depth-first search over the final restricted master with integrality
// restored via column bounds. Fix-to-1 explored first; an incumbent from
// greedy rounding exists before the first node, so time-limited runs still
// report an upper bound.
class BranchAndBound {
 public:
  BranchAndBound(RestrictedMaster& master, const Instance& inst, const CgConfig& config)
      : master_(&master), inst_(&inst), config_(config) {}

  void run(const LpSolution& relaxation, CgResult& out) {
    deadline_ = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                   std::chrono::duration<double>(config_.ub_time_limit_seconds));
    master_->reset_all_bounds(0.0, 1.0);
    greedy_incumbent(relaxation);
    dfs();
    out.bb_nodes = nodes_;
    out.ub_time_limit_hit = time_hit_;
    out.node_limit_hit = node_hit_;
    if (best_value_ != kNoIncumbent) {
      out.cg_ub = best_value_;
      out.schedule = std::move(best_schedule_);
    }
  }

 private:
  static constexpr std::int64_t kNoIncumbent = std::numeric_limits<std::int64_t>::max();
  using BoundChange = std::tuple<int, double, double>;  // col, old lo, old hi

  bool limits_hit() {
    if (nodes_ >= config_.branch_node_limit) {
      node_hit_ = true;
      return true;
    }
    if (Clock::now() >= deadline_) {
      time_hit_ = true;
      return true;
    }
    return false;
  }

  void offer_schedule(Schedule sched) {
    std::int64_t value = evaluate_schedule(sched, *inst_);
    if (value < best_value_) {
      best_value_ = value;
      best_schedule_ = std::move(sched);
    }
  }

  // Rounding start: columns by LP value, a batch is taken when all its
  // jobs are still free; leftovers become SPT singletons on the least
  // loaded machine, then every machine is resequenced by Smith's rule.
  void greedy_incumbent(const LpSolution& relaxation) {
    const int n = inst_->n();
    const int m = inst_->machines;
    std::vector<int> cols(static_cast<std::size_t>(master_->num_columns()));
    std::iota(cols.begin(), cols.end(), 0);
    if (static_cast<int>(relaxation.primal.size()) == master_->num_columns())
      std::stable_sort(cols.begin(), cols.end(), [&](int a, int b) {
        return relaxation.primal[static_cast<std::size_t>(a)] >
               relaxation.primal[static_cast<std::size_t>(b)];
      });
    std::vector<char> assigned(static_cast<std::size_t>(n) + 1, 0);
    std::vector<std::vector<Batch>> machines(static_cast<std::size_t>(m));
    std::vector<std::int64_t> load(static_cast<std::size_t>(m), 0);
    for (int col : cols) {
      const ArcColumn& arc = master_->arc_of(col);
      if (arc.batch.empty()) continue;
      bool free = true;
      for (int id : arc.batch.job_ids)
        if (assigned[static_cast<std::size_t>(id)]) {
          free = false;
          break;
        }
      if (!free) continue;
      for (int id : arc.batch.job_ids) assigned[static_cast<std::size_t>(id)] = 1;
      int h = master_->machine_of(col) - 1;
      machines[static_cast<std::size_t>(h)].push_back(arc.batch);
      load[static_cast<std::size_t>(h)] += arc.batch.proc_time;
    }
    for (int id : spt_order(*inst_)) {
      if (assigned[static_cast<std::size_t>(id)]) continue;
      int h = 0;
      for (int c = 1; c < m; ++c)
        if (load[static_cast<std::size_t>(c)] < load[static_cast<std::size_t>(h)]) h = c;
      const Job& job = inst_->job(id);
      machines[static_cast<std::size_t>(h)].push_back(Batch{{id}, job.s, job.p});
      load[static_cast<std::size_t>(h)] += job.p;
    }
    for (auto& seq : machines) std::sort(seq.begin(), seq.end(), smith_before);
    offer_schedule(Schedule{std::move(machines)});
  }

  std::optional<Schedule> decode(const LpSolution& sol) {
    std::vector<Path> paths(static_cast<std::size_t>(inst_->machines));
    for (int col = 0; col < master_->num_columns(); ++col)
      if (sol.primal[static_cast<std::size_t>(col)] > 0.5)
        paths[static_cast<std::size_t>(master_->machine_of(col) - 1)].arcs.push_back(
            master_->arc_of(col));
    for (auto& path : paths)
      std::sort(path.arcs.begin(), path.arcs.end(),
                [](const ArcColumn& a, const ArcColumn& b) { return a.tail < b.tail; });
    try {
      return path_to_schedule(paths, *inst_);
    } catch (const Error&) {
      return std::nullopt;  // malformed rounding, drop the candidate
    }
  }

  std::vector<BoundChange> fix_column(int col, double lo, double hi) {
    std::vector<BoundChange> changes;
    auto [old_lo, old_hi] = master_->column_bounds(col);
    changes.emplace_back(col, old_lo, old_hi);
    master_->set_column_bounds(col, lo, hi);
    if (lo < 0.5) return changes;
    // x_col = 1 excludes columns sharing a job, and same-machine arcs
    // overlapping its node span (a second unit cannot cross the cut)
    const ArcColumn& arc = master_->arc_of(col);
    int machine = master_->machine_of(col);
    for (int other = 0; other < master_->num_columns(); ++other) {
      if (other == col) continue;
      auto [olo, ohi] = master_->column_bounds(other);
      if (ohi <= 0.0) continue;
      const ArcColumn& cand = master_->arc_of(other);
      bool conflict = batches_share_job(arc.batch, cand.batch);
      if (!conflict && master_->machine_of(other) == machine)
        conflict = std::max(arc.tail, cand.tail) < std::min(arc.head, cand.head);
      if (!conflict) continue;
      changes.emplace_back(other, olo, ohi);
      master_->set_column_bounds(other, 0.0, 0.0);
    }
    return changes;
  }

  void undo(const std::vector<BoundChange>& changes) {
    for (auto it = changes.rbegin(); it != changes.rend(); ++it)
      master_->set_column_bounds(std::get<0>(*it), std::get<1>(*it), std::get<2>(*it));
  }

  void dfs() {
    if (limits_hit()) return;
    ++nodes_;
    LpSolution sol;
    try {
      sol = master_->solve();
    } catch (const Error&) {
      return;
    }
    if (sol.status != LpSolution::Status::Optimal) return;
    if (best_value_ != kNoIncumbent &&
        sol.objective > static_cast<double>(best_value_) - 1.0 + 1e-6)
      return;  // integer objectives: no strict improvement below this node

    int branch = -1;
    double best_dist = 1.0;
    for (int col = 0; col < master_->num_columns(); ++col) {
      double v = sol.primal[static_cast<std::size_t>(col)];
      if (v <= 1e-6 || v >= 1.0 - 1e-6) continue;
      double dist = std::abs(v - 0.5);
      if (dist < best_dist) {
        best_dist = dist;
        branch = col;
      }
    }
    if (branch < 0) {
      if (auto sched = decode(sol)) offer_schedule(std::move(*sched));
      return;
    }
    sol = LpSolution{};  // keep recursion frames light

    auto fixed_one = fix_column(branch, 1.0, 1.0);
    dfs();
    undo(fixed_one);
    if (limits_hit()) return;
    auto fixed_zero = fix_column(branch, 0.0, 0.0);
    dfs();
    undo(fixed_zero);
  }

  RestrictedMaster* master_;
  const Instance* inst_;
  CgConfig config_;
  Clock::time_point deadline_;
  std::int64_t nodes_ = 0;
  bool time_hit_ = false;
  bool node_hit_ = false;
  std::int64_t best_value_ = kNoIncumbent;
  Schedule best_schedule_;
};

}  // namespace

CgResult branch_and_bound(CgRelaxation relax, const Instance& inst, const CgConfig& config) {
  check_config(config);
  CgResult out;
  out.cg_lb = relax.lower_bound;
  out.converged = relax.converged;
  out.iterations = relax.iterations;
  out.columns_initial = relax.columns_initial;
  out.columns_generated = relax.columns_generated;
  out.lb_seconds = relax.lb_seconds;

  auto start = Clock::now();
  BranchAndBound bnb(*relax.master, inst, config);
  bnb.run(relax.last_solution, out);
  out.ub_seconds = seconds_since(start);

  if (out.cg_ub && out.converged) {
    out.gap_percent = gap_percent(static_cast<double>(*out.cg_ub), out.cg_lb);
    out.certified_optimal = static_cast<double>(*out.cg_ub) - out.cg_lb <=
                            1e-6 * std::max(1.0, static_cast<double>(*out.cg_ub));
  }
  return out;
}

CgResult price_and_branch(const Instance& inst, const CgConfig& config) {
  return branch_and_bound(run_cg(inst, config), inst, config);
}

double gap_percent(double ub, double lb) {
  if (ub <= 0.0) fail(Errc::NonPositiveUb, "gap needs a positive upper bound");
  return 100.0 * (ub - lb) / ub;
}

}  // namespace batchcg
