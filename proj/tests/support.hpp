#pragma once

// Shared test helpers: the reference instance used across suites, seeded
// random generators, and independent oracles (exhaustive batch pricing and
// a dense Big-M tableau LP) kept apart from the library code they check.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "batchcg/bench.hpp"
#include "batchcg/model.hpp"
#include "batchcg/oracle.hpp"
#include "batchcg/pricing.hpp"

namespace testsupport {

using batchcg::ArcColumn;
using batchcg::Batch;
using batchcg::DualValues;
using batchcg::Instance;
using batchcg::Schedule;
using batchcg::SplitMix64;

// Jobs (p,s): (5,6), (3,5), (2,4); C=10. Feasible batches {1},{2},{3},
// {1,3},{2,3}; single-machine optimum 14 via ({2,3},{1}).
inline Instance i3(int machines = 1) {
  return batchcg::validate_instance({{5, 6}, {3, 5}, {2, 4}}, 10, machines);
}

inline int rand_int(SplitMix64& rng, int lo, int hi) {
  return static_cast<int>(rng.next_in(static_cast<std::uint64_t>(lo),
                                      static_cast<std::uint64_t>(hi)));
}

// Uniform double in [lo, hi) from the top 53 bits.
inline double rand_double(SplitMix64& rng, double lo, double hi) {
  double unit = static_cast<double>(rng.next() >> 11) * 0x1.0p-53;
  return lo + unit * (hi - lo);
}

inline Instance random_instance(SplitMix64& rng, int n_lo, int n_hi, int capacity, int machines,
                                int p_max = 20) {
  int n = rand_int(rng, n_lo, n_hi);
  std::vector<std::pair<int, int>> raw;
  raw.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j)
    raw.emplace_back(rand_int(rng, 1, p_max), rand_int(rng, 1, capacity));
  return batchcg::validate_instance(raw, capacity, machines);
}

// Random partition of the jobs into capacity-feasible batches, dealt to
// machines, in random order per machine.
inline Schedule random_schedule(SplitMix64& rng, const Instance& inst) {
  int n = inst.n();
  std::vector<int> ids(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) ids[static_cast<std::size_t>(j)] = j + 1;
  for (int j = n - 1; j > 0; --j)
    std::swap(ids[static_cast<std::size_t>(j)], ids[static_cast<std::size_t>(rand_int(rng, 0, j))]);
  Schedule sched;
  sched.machines.resize(static_cast<std::size_t>(inst.machines));
  std::vector<int> current;
  int size = 0;
  auto flush = [&]() {
    if (current.empty()) return;
    int h = rand_int(rng, 0, inst.machines - 1);
    sched.machines[static_cast<std::size_t>(h)].push_back(batchcg::make_batch(inst, current));
    current.clear();
    size = 0;
  };
  for (int id : ids) {
    const auto& job = inst.job(id);
    if (size + job.s > inst.capacity || (size > 0 && rand_int(rng, 0, 2) == 0)) flush();
    current.push_back(id);
    size += job.s;
  }
  flush();
  return sched;
}

inline DualValues random_duals(SplitMix64& rng, const Instance& inst, int machines,
                               double magnitude = 30.0) {
  DualValues duals;
  duals.u.resize(static_cast<std::size_t>(machines));
  for (auto& u : duals.u) {
    u.resize(static_cast<std::size_t>(inst.n() + 1));
    for (auto& value : u) value = rand_double(rng, -magnitude, magnitude);
  }
  duals.v.resize(static_cast<std::size_t>(inst.n()));
  for (auto& value : duals.v) value = rand_double(rng, -magnitude, magnitude);
  return duals;
}

// Exhaustive minimum reduced cost over every feasible batch of cardinality
// k-i for machine h; nullopt when no batch of that cardinality fits.
inline std::optional<double> brute_min_reduced_cost(const Instance& inst,
                                                    const DualValues& duals, int machine, int i,
                                                    int k) {
  std::optional<double> best;
  for (const Batch& batch : batchcg::enumerate_feasible_batches(inst)) {
    if (batch.size() != k - i) continue;
    double rc = batchcg::reduced_cost(ArcColumn{i, k, batch}, inst, duals, machine);
    if (!best || rc < *best) best = rc;
  }
  return best;
}

// Every feasible batch at every feasible position.
inline std::vector<ArcColumn> all_arcs(const Instance& inst) {
  std::vector<ArcColumn> arcs;
  for (const Batch& batch : batchcg::enumerate_feasible_batches(inst))
    for (int i = 1; i + batch.size() <= inst.n() + 1; ++i)
      arcs.push_back(ArcColumn{i, i + batch.size(), batch});
  return arcs;
}

// Independent LP oracle: dense Big-M tableau simplex with Bland's rule for
// min c'x, Ax = b, x >= 0. Slow and simple on purpose.
inline std::optional<double> tableau_lp(std::vector<std::vector<double>> a,
                                        std::vector<double> b, std::vector<double> c) {
  const std::size_t rows = a.size();
  const std::size_t cols = c.size();
  double big_m = 1.0;
  for (double cj : c) big_m = std::max(big_m, std::abs(cj));
  big_m *= 1e5;
  for (std::size_t r = 0; r < rows; ++r)
    if (b[r] < 0) {
      b[r] = -b[r];
      for (auto& coef : a[r]) coef = -coef;
    }
  std::size_t width = cols + rows;
  std::vector<std::vector<double>> tab(rows, std::vector<double>(width + 1, 0.0));
  std::vector<std::size_t> basis(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j < cols; ++j) tab[r][j] = a[r][j];
    tab[r][cols + r] = 1.0;
    tab[r][width] = b[r];
    basis[r] = cols + r;
  }
  std::vector<double> cost(width, big_m);
  for (std::size_t j = 0; j < cols; ++j) cost[j] = c[j];
  while (true) {
    // reduced costs via current basis
    std::vector<double> y(rows, 0.0);
    std::size_t enter = width;
    for (std::size_t j = 0; j < width; ++j) {
      bool basic = false;
      for (std::size_t r = 0; r < rows; ++r)
        if (basis[r] == j) basic = true;
      if (basic) continue;
      double d = cost[j];
      for (std::size_t r = 0; r < rows; ++r) d -= cost[basis[r]] * tab[r][j];
      if (d < -1e-7) {
        enter = j;  // Bland: smallest index
        break;
      }
    }
    if (enter == width) break;
    std::size_t leave = rows;
    double best = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      if (tab[r][enter] <= 1e-9) continue;
      double ratio = tab[r][width] / tab[r][enter];
      if (leave == rows || ratio < best - 1e-12 ||
          (ratio <= best + 1e-12 && basis[r] < basis[leave])) {
        best = ratio;
        leave = r;
      }
    }
    if (leave == rows) return std::nullopt;  // unbounded: never expected here
    double pivot = tab[leave][enter];
    for (auto& value : tab[leave]) value /= pivot;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == leave) continue;
      double factor = tab[r][enter];
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j <= width; ++j) tab[r][j] -= factor * tab[leave][j];
    }
    basis[leave] = enter;
  }
  double objective = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    if (basis[r] >= cols && tab[r][width] > 1e-6) return std::nullopt;  // infeasible
    objective += cost[basis[r]] * tab[r][width];
  }
  return objective;
}

// The library LP data solved by the oracle above.
inline std::optional<double> tableau_lp_of(const batchcg::LpProblem& lp) {
  std::vector<std::vector<double>> a(static_cast<std::size_t>(lp.rows),
                                     std::vector<double>(lp.cols.size(), 0.0));
  for (std::size_t j = 0; j < lp.cols.size(); ++j)
    for (const auto& [row, coef] : lp.cols[j]) a[static_cast<std::size_t>(row)][j] += coef;
  return tableau_lp(std::move(a), lp.rhs, lp.obj);
}

}  // namespace testsupport
