#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "batchcg/model.hpp"

namespace batchcg {

// Simplex multipliers of the restricted master: u per flow node and
// machine, v per partition row. u[h][i-1] is the multiplier of node i
// (1..n+1) for machine h+1; v[j-1] belongs to job j.
struct DualValues {
  std::vector<std::vector<double>> u;
  std::vector<double> v;

  int machines() const { return static_cast<int>(u.size()); }
  double u_at(int machine, int node) const {
    return u[static_cast<std::size_t>(machine - 1)][static_cast<std::size_t>(node - 1)];
  }
  double v_at(int job) const { return v[static_cast<std::size_t>(job - 1)]; }
};

// Memoized state space of the cardinality-constrained knapsack family
// g_r(tau, ell) over LPT-renumbered jobs: best sum of profits v over items
// r..n with total size <= tau and cardinality exactly ell. A table serves
// one pricing round; duals change between rounds, so it is rebuilt.
class KnapsackTable {
 public:
  // v_by_id[j-1] is the profit of job id j.
  KnapsackTable(const Instance& inst, const std::vector<double>& v_by_id);

  // nullopt means infeasible (the -inf boundary).
  std::optional<double> value(int r, int tau, int ell);

  // Value plus the optimal item set, retrieved by backtracking. The batch
  // carries original job ids.
  std::optional<std::pair<double, Batch>> query(int r, int tau, int ell);

  const std::vector<int>& lpt_ids() const { return order_; }
  std::size_t entries_created() const { return entries_created_; }

 private:
  struct Cell {
    double value = 0.0;
    std::uint8_t state = 0;  // 0 untouched, 1 feasible, 2 infeasible
    std::uint8_t take = 0;   // branch choice at this state (y_r)
  };

  bool eval(int r, int tau, int ell, double& out);
  Cell& cell(int r, int tau, int ell) {
    return memo_[((static_cast<std::size_t>(r) - 1) * static_cast<std::size_t>(cap_ + 1) +
                  static_cast<std::size_t>(tau)) *
                     static_cast<std::size_t>(n_) +
                 (static_cast<std::size_t>(ell) - 1)];
  }
  void check_args(int r, int tau, int ell) const;

  const Instance* inst_;
  int n_;
  int cap_;
  std::vector<int> order_;  // order_[r-1] = job id at LPT position r
  std::vector<int> p_, s_;  // LPT-indexed
  std::vector<double> v_;   // LPT-indexed profits
  std::vector<Cell> memo_;
  std::size_t entries_created_ = 0;
};

// LPT positions where the processing time strictly drops, plus position 1.
// Sufficient set of knapsack roots for exact pricing.
struct BreakpointSet {
  std::vector<int> lpt_indices;
};

BreakpointSet breakpoints(const Instance& inst);

struct PricingStats {
  std::size_t memo_entries = 0;
};

// Arcs with reduced cost < -eps_neg for the single-machine master,
// deduplicated by (i,k,batch). Empty result = pricing optimal.
std::vector<ArcColumn> new_cols_single(const Instance& inst, const DualValues& duals,
                                       double eps_neg, PricingStats* stats = nullptr);

// Identical-parallel-machine pricing: one shared knapsack table, screening
// with the largest per-pair dual difference max_h(u_i^h - u_k^h). For m=1
// the output coincides with new_cols_single.
std::vector<ArcColumn> new_cols_identical(const Instance& inst, const DualValues& duals,
                                          double eps_neg, PricingStats* stats = nullptr);

// Machine-independent minimum over breakpoint roots of
// (n-i+1)*p_B - g_r(C, k-i) per pair i<k, with the attaining batch. The
// reduced cost of the best arc for machine h is value - (u_i^h - u_k^h).
struct PairMinimum {
  bool feasible = false;
  double value = 0.0;
  Batch batch;
};

class PairMinTable {
 public:
  explicit PairMinTable(int n) : n_(n), cells_(static_cast<std::size_t>(n) * (n + 1)) {}

  PairMinimum& at(int i, int k) {
    return cells_[static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(n_ + 1) +
                  static_cast<std::size_t>(k - 1)];
  }
  const PairMinimum& at(int i, int k) const {
    return cells_[static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(n_ + 1) +
                  static_cast<std::size_t>(k - 1)];
  }
  int n() const { return n_; }

 private:
  int n_;
  std::vector<PairMinimum> cells_;
};

PairMinTable pricing_pair_minima(const Instance& inst, const std::vector<double>& v_by_id,
                                 PricingStats* stats = nullptr);

// True reduced cost of an arc for machine h, recomputed from its batch and
// the duals (the independent check used by tests).
double reduced_cost(const ArcColumn& arc, const Instance& inst, const DualValues& duals,
                    int machine);

}  // namespace batchcg
