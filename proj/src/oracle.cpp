#include "batchcg/oracle.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <numeric>

#include "batchcg/lp_writer.hpp"

namespace batchcg {

std::vector<Batch> enumerate_feasible_batches(const Instance& inst, int enumeration_cap) {
  const int n = inst.n();
  if (n > enumeration_cap)
    fail(Errc::TooLarge, "batch enumeration capped at n <= " + std::to_string(enumeration_cap));
  std::vector<Batch> batches;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    int size = 0;
    for (int j = 0; j < n; ++j)
      if (mask & (1u << j)) size += inst.job(j + 1).s;
    if (size > inst.capacity) continue;
    std::vector<int> ids;
    for (int j = 0; j < n; ++j)
      if (mask & (1u << j)) ids.push_back(j + 1);
    batches.push_back(make_batch(inst, std::move(ids)));
  }
  return batches;
}

namespace {

// Sum of completion-time contributions of one machine's batches in the
// given order.
std::int64_t sequence_cost(const std::vector<Batch>& batches) {
  std::int64_t completion = 0, total = 0;
  for (const Batch& b : batches) {
    completion += b.proc_time;
    total += completion * b.size();
  }
  return total;
}

std::int64_t best_machine_cost(std::vector<Batch> batches, bool all_orders,
                               std::vector<Batch>* best_order) {
  std::sort(batches.begin(), batches.end(), smith_before);
  if (!all_orders) {
    if (best_order) *best_order = batches;
    return sequence_cost(batches);
  }
  std::vector<Batch> order = batches;
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  std::sort(order.begin(), order.end(),
            [](const Batch& a, const Batch& b) { return a.job_ids < b.job_ids; });
  do {
    std::int64_t cost = sequence_cost(order);
    if (cost < best) {
      best = cost;
      if (best_order) *best_order = order;
    }
  } while (std::next_permutation(order.begin(), order.end(), [](const Batch& a, const Batch& b) {
    return a.job_ids < b.job_ids;
  }));
  return best;
}

struct Enumerator {
  const Instance& inst;
  bool all_orders;
  std::vector<Batch> blocks;
  std::vector<int> labels;  // machine per block, restricted growth
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  Schedule best_schedule;
  std::int64_t leaves = 0;

  explicit Enumerator(const Instance& i, bool orders) : inst(i), all_orders(orders) {}

  void evaluate_assignment() {
    const int m = inst.machines;
    std::vector<std::vector<Batch>> per_machine(static_cast<std::size_t>(m));
    for (std::size_t b = 0; b < blocks.size(); ++b)
      per_machine[static_cast<std::size_t>(labels[b])].push_back(blocks[b]);
    std::int64_t total = 0;
    Schedule sched;
    sched.machines.resize(static_cast<std::size_t>(m));
    for (int h = 0; h < m; ++h) {
      std::vector<Batch> ordered;
      total += best_machine_cost(per_machine[static_cast<std::size_t>(h)], all_orders, &ordered);
      sched.machines[static_cast<std::size_t>(h)] = std::move(ordered);
    }
    ++leaves;
    if (total < best) {
      best = total;
      best_schedule = std::move(sched);
    }
  }

  void assign(std::size_t block, int max_used) {
    if (block == blocks.size()) {
      evaluate_assignment();
      return;
    }
    int limit = std::min(max_used + 1, inst.machines - 1);
    for (int h = 0; h <= limit; ++h) {
      labels[block] = h;
      assign(block + 1, std::max(max_used, h));
    }
  }

  void leaf() {
    if (inst.machines == 1) {
      std::vector<Batch> ordered;
      std::int64_t total = best_machine_cost(blocks, all_orders, &ordered);
      ++leaves;
      if (total < best) {
        best = total;
        best_schedule.machines.assign(1, std::move(ordered));
      }
      return;
    }
    labels.assign(blocks.size(), 0);
    assign(1, 0);  // first block pinned to machine 0, machines are identical
  }

  void grow(int job) {
    if (job > inst.n()) {
      leaf();
      return;
    }
    const Job& j = inst.job(job);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (blocks[b].total_size + j.s > inst.capacity) continue;
      blocks[b].job_ids.push_back(job);
      blocks[b].total_size += j.s;
      int old_p = blocks[b].proc_time;
      blocks[b].proc_time = std::max(old_p, j.p);
      grow(job + 1);
      blocks[b].proc_time = old_p;
      blocks[b].total_size -= j.s;
      blocks[b].job_ids.pop_back();
    }
    blocks.push_back(Batch{{job}, j.s, j.p});
    grow(job + 1);
    blocks.pop_back();
  }
};

}  // namespace

OracleResult exact_optimum(const Instance& inst, bool all_orders) {
  const int n = inst.n();
  const int m = inst.machines;
  bool within = (m == 1 && n <= 9) || (m >= 2 && m <= 3 && n <= 7);
  if (!within)
    fail(Errc::TooLarge, "exact oracle limited to n <= 9 (m = 1) or n <= 7 (m <= 3)");
  Enumerator e(inst, all_orders);
  e.grow(1);
  OracleResult result;
  result.optimum = e.best;
  result.schedule = std::move(e.best_schedule);
  result.partitions_explored = e.leaves;
  return result;
}

void export_milp(const Instance& inst, std::ostream& out, std::int64_t big_m) {
  const int n = inst.n();
  std::int64_t total_work = 0;
  for (const Job& j : inst.jobs) total_work += j.p;
  const std::int64_t m_const = big_m > 0 ? big_m : total_work;

  LpWriter writer;
  auto x = [](int i, int j) { return "x_" + std::to_string(i) + "_" + std::to_string(j); };

  LpWriter::Terms objective;
  for (int i = 1; i <= n; ++i) objective.emplace_back(1.0, "c_" + std::to_string(i));
  writer.set_objective(std::move(objective));

  for (int i = 1; i <= n; ++i) {
    LpWriter::Terms terms;
    for (int j = 1; j <= n; ++j) terms.emplace_back(1.0, x(i, j));
    writer.add_constraint("assign_" + std::to_string(i), std::move(terms), '=', 1.0);
  }
  for (int j = 1; j <= n; ++j) {
    LpWriter::Terms terms;
    for (int i = 1; i <= n; ++i) terms.emplace_back(static_cast<double>(inst.job(i).s), x(i, j));
    writer.add_constraint("cap_" + std::to_string(j), std::move(terms), '<',
                          static_cast<double>(inst.capacity));
  }
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      writer.add_constraint(
          "ptime_" + std::to_string(i) + "_" + std::to_string(j),
          {{1.0, "P_" + std::to_string(j)}, {-static_cast<double>(inst.job(i).p), x(i, j)}}, '>',
          0.0);
  writer.add_constraint("chain_1", {{1.0, "C_1"}, {-1.0, "P_1"}}, '>', 0.0);
  for (int j = 2; j <= n; ++j)
    writer.add_constraint("chain_" + std::to_string(j),
                          {{1.0, "C_" + std::to_string(j)},
                           {-1.0, "C_" + std::to_string(j - 1)},
                           {-1.0, "P_" + std::to_string(j)}},
                          '>', 0.0);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      writer.add_constraint("comp_" + std::to_string(i) + "_" + std::to_string(j),
                            {{1.0, "c_" + std::to_string(i)},
                             {-1.0, "C_" + std::to_string(j)},
                             {-static_cast<double>(m_const), x(i, j)}},
                            '>', -static_cast<double>(m_const));
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) writer.mark_binary(x(i, j));
  writer.write(out);
}

void export_milp_file(const Instance& inst, const std::string& path, std::int64_t big_m) {
  std::ofstream out(path);
  if (!out) fail(Errc::IoFailure, "cannot open " + path + " for writing");
  export_milp(inst, out, big_m);
  if (!out) fail(Errc::IoFailure, "write failed on " + path);
}

}  // namespace batchcg
