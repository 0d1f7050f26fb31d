#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "batchcg/master.hpp"
#include "batchcg/model.hpp"

namespace batchcg {

struct CgConfig {
  double ub_time_limit_seconds = 60.0;
  double eps_neg = 1e-6;  // reduced-cost tolerance for pricing
  int max_cg_iterations = 100000;
  std::int64_t branch_node_limit = 10'000'000;
  // Run a single machine through the multi-commodity master and the
  // parallel pricing procedure. Always on when machines > 1.
  bool use_parallel_path = false;

  static CgConfig defaults_for(int machines) {
    CgConfig cfg;
    cfg.ub_time_limit_seconds = machines > 1 ? 180.0 : 60.0;
    return cfg;
  }
};

// Initial arc set: jobs in SPT order, every run of consecutive SPT jobs
// that fits the capacity, each emitted at every feasible position, plus
// every singleton at every position. Always covers the jobs, so the first
// restricted master is feasible.
std::vector<ArcColumn> init_cols(const Instance& inst);

// Column-generation state after the pricing loop.
struct CgRelaxation {
  double lower_bound = 0.0;
  bool converged = false;
  int iterations = 0;
  std::int64_t columns_initial = 0;
  std::int64_t columns_generated = 0;
  double lb_seconds = 0.0;
  LpSolution last_solution;
  std::unique_ptr<RestrictedMaster> master;
};

CgRelaxation run_cg(const Instance& inst, const CgConfig& config);

struct CgResult {
  double cg_lb = 0.0;
  bool converged = false;
  std::optional<std::int64_t> cg_ub;
  std::optional<double> gap_percent;
  std::optional<Schedule> schedule;
  bool certified_optimal = false;
  int iterations = 0;
  std::int64_t columns_initial = 0;
  std::int64_t columns_generated = 0;
  double lb_seconds = 0.0;
  double ub_seconds = 0.0;
  std::int64_t bb_nodes = 0;
  bool ub_time_limit_hit = false;
  bool node_limit_hit = false;
};

// Integrality stage: depth-first branch and bound over the relaxation's
// restricted master (consumed by the call); CG-UB is the re-evaluated
// total completion time of the best schedule found.
CgResult branch_and_bound(CgRelaxation relaxation, const Instance& inst, const CgConfig& config);

// Full pipeline: run_cg followed by branch_and_bound.
CgResult price_and_branch(const Instance& inst, const CgConfig& config);

// 100 * (ub - lb) / ub; ub must be positive.
double gap_percent(double ub, double lb);

}  // namespace batchcg
