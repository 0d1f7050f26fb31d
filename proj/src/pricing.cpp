#include "batchcg/pricing.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <string>

namespace batchcg {

KnapsackTable::KnapsackTable(const Instance& inst, const std::vector<double>& v_by_id)
    : inst_(&inst), n_(inst.n()), cap_(inst.capacity), order_(lpt_order(inst)) {
  if (static_cast<int>(v_by_id.size()) != n_)
    fail(Errc::IndexOutOfRange, "profit vector length differs from n");
  p_.resize(static_cast<std::size_t>(n_));
  s_.resize(static_cast<std::size_t>(n_));
  v_.resize(static_cast<std::size_t>(n_));
  for (int r = 1; r <= n_; ++r) {
    const Job& job = inst.job(order_[static_cast<std::size_t>(r - 1)]);
    p_[static_cast<std::size_t>(r - 1)] = job.p;
    s_[static_cast<std::size_t>(r - 1)] = job.s;
    v_[static_cast<std::size_t>(r - 1)] = v_by_id[static_cast<std::size_t>(job.id - 1)];
  }
  std::size_t cells = static_cast<std::size_t>(n_) * static_cast<std::size_t>(cap_ + 1) *
                      static_cast<std::size_t>(n_);
  if (cells > (std::size_t{1} << 27))
    fail(Errc::TooLarge, "knapsack state space n^2 (C+1) = " + std::to_string(cells) +
                             " exceeds the in-memory limit");
  memo_.resize(cells);
}

void KnapsackTable::check_args(int r, int tau, int ell) const {
  if (r < 1 || r > n_ || tau < 0 || tau > cap_ || ell < 0 || ell > n_)
    fail(Errc::IndexOutOfRange, "knapsack state (" + std::to_string(r) + "," +
                                    std::to_string(tau) + "," + std::to_string(ell) +
                                    ") out of range");
}

bool KnapsackTable::eval(int r, int tau, int ell, double& out) {
  if (ell == 0) {
    out = 0.0;
    return true;
  }
  if (ell > n_ - r + 1) return false;  // covers r == n_+1
  Cell& c = cell(r, tau, ell);
  if (c.state != 0) {
    out = c.value;
    return c.state == 1;
  }
  int size_r = s_[static_cast<std::size_t>(r - 1)];
  double take_val = 0.0, skip_val = 0.0;
  bool can_take = size_r <= tau && eval(r + 1, tau - size_r, ell - 1, take_val);
  if (can_take) take_val += v_[static_cast<std::size_t>(r - 1)];
  bool can_skip = eval(r + 1, tau, ell, skip_val);
  ++entries_created_;
  if (!can_take && !can_skip) {
    c.state = 2;
    return false;
  }
  // take wins ties so backtracking is deterministic
  if (can_take && (!can_skip || take_val >= skip_val)) {
    c.state = 1;
    c.take = 1;
    c.value = take_val;
  } else {
    c.state = 1;
    c.take = 0;
    c.value = skip_val;
  }
  out = c.value;
  return true;
}

std::optional<double> KnapsackTable::value(int r, int tau, int ell) {
  check_args(r, tau, ell);
  double out = 0.0;
  if (!eval(r, tau, ell, out)) return std::nullopt;
  return out;
}

std::optional<std::pair<double, Batch>> KnapsackTable::query(int r, int tau, int ell) {
  auto val = value(r, tau, ell);
  if (!val) return std::nullopt;
  std::vector<int> ids;
  ids.reserve(static_cast<std::size_t>(ell));
  int rr = r, tt = tau, ll = ell;
  while (ll > 0) {
    const Cell& c = cell(rr, tt, ll);
    if (c.take) {
      ids.push_back(order_[static_cast<std::size_t>(rr - 1)]);
      tt -= s_[static_cast<std::size_t>(rr - 1)];
      --ll;
    }
    ++rr;
  }
  return std::make_pair(*val, make_batch(*inst_, std::move(ids)));
}

BreakpointSet breakpoints(const Instance& inst) {
  BreakpointSet set;
  std::vector<int> order = lpt_order(inst);
  set.lpt_indices.push_back(1);
  for (int r = 2; r <= inst.n(); ++r)
    if (inst.job(order[static_cast<std::size_t>(r - 1)]).p <
        inst.job(order[static_cast<std::size_t>(r - 2)]).p)
      set.lpt_indices.push_back(r);
  return set;
}

double reduced_cost(const ArcColumn& arc, const Instance& inst, const DualValues& duals,
                    int machine) {
  double value = static_cast<double>(arc.cost(inst.n()));
  value -= duals.u_at(machine, arc.tail) - duals.u_at(machine, arc.head);
  for (int id : arc.batch.job_ids) value -= duals.v_at(id);
  return value;
}

namespace {

void require_duals(const Instance& inst, const DualValues& duals, int expected_machines) {
  if (duals.machines() < expected_machines)
    fail(Errc::IndexOutOfRange, "missing dual vectors");
  for (const auto& u : duals.u)
    if (static_cast<int>(u.size()) != inst.n() + 1)
      fail(Errc::IndexOutOfRange, "flow dual vector length differs from n+1");
  if (static_cast<int>(duals.v.size()) != inst.n())
    fail(Errc::IndexOutOfRange, "partition dual vector length differs from n");
}

// Core of both pricing procedures: walk the breakpoint roots per
// cardinality and hand every (position, batch, profit) candidate to the
// sink. delta(i,k) is the dual difference subtracted from the screening
// value.
template <typename Delta, typename Sink>
void scan_candidates(const Instance& inst, KnapsackTable& table, double eps_neg, Delta delta,
                     Sink sink) {
  const int n = inst.n();
  const BreakpointSet roots = breakpoints(inst);
  for (int ell = 1; ell <= n; ++ell) {
    for (int r : roots.lpt_indices) {
      auto best = table.query(r, inst.capacity, ell);
      if (!best) continue;
      const auto& [profit, batch] = *best;
      for (int i = 1; i + ell <= n + 1; ++i) {
        int k = i + ell;
        double value =
            static_cast<double>(batch.proc_time) * (n - i + 1) - profit - delta(i, k);
        if (value < -eps_neg) sink(i, k, batch, value);
      }
    }
  }
}

std::vector<ArcColumn> collect(std::map<ArcKey, ArcColumn>&& found) {
  std::vector<ArcColumn> arcs;
  arcs.reserve(found.size());
  for (auto& [key, arc] : found) arcs.push_back(std::move(arc));
  return arcs;
}

}  // namespace

std::vector<ArcColumn> new_cols_single(const Instance& inst, const DualValues& duals,
                                       double eps_neg, PricingStats* stats) {
  require_duals(inst, duals, 1);
  KnapsackTable table(inst, duals.v);
  std::map<ArcKey, ArcColumn> found;
  scan_candidates(
      inst, table, eps_neg,
      [&](int i, int k) { return duals.u_at(1, i) - duals.u_at(1, k); },
      [&](int i, int k, const Batch& batch, double) {
        ArcColumn arc{i, k, batch};
        found.emplace(arc_key(arc), std::move(arc));
      });
  if (stats) stats->memo_entries = table.entries_created();
  return collect(std::move(found));
}

std::vector<ArcColumn> new_cols_identical(const Instance& inst, const DualValues& duals,
                                          double eps_neg, PricingStats* stats) {
  const int m = duals.machines();
  require_duals(inst, duals, 1);
  const int n = inst.n();
  // largest per-pair dual difference; only this screens candidates
  std::vector<double> delta(static_cast<std::size_t>(n + 1) * (n + 1),
                            -std::numeric_limits<double>::infinity());
  for (int i = 1; i <= n; ++i)
    for (int k = i + 1; k <= n + 1; ++k) {
      double best = duals.u_at(1, i) - duals.u_at(1, k);
      for (int h = 2; h <= m; ++h)
        best = std::max(best, duals.u_at(h, i) - duals.u_at(h, k));
      delta[static_cast<std::size_t>(i - 1) * (n + 1) + static_cast<std::size_t>(k - 1)] = best;
    }
  KnapsackTable table(inst, duals.v);
  std::map<ArcKey, ArcColumn> found;
  scan_candidates(
      inst, table, eps_neg,
      [&](int i, int k) {
        return delta[static_cast<std::size_t>(i - 1) * (n + 1) + static_cast<std::size_t>(k - 1)];
      },
      [&](int i, int k, const Batch& batch, double) {
        ArcColumn arc{i, k, batch};
        found.emplace(arc_key(arc), std::move(arc));
      });
  if (stats) stats->memo_entries = table.entries_created();
  return collect(std::move(found));
}

PairMinTable pricing_pair_minima(const Instance& inst, const std::vector<double>& v_by_id,
                                 PricingStats* stats) {
  const int n = inst.n();
  KnapsackTable table(inst, v_by_id);
  PairMinTable minima(n);
  const BreakpointSet roots = breakpoints(inst);
  for (int ell = 1; ell <= n; ++ell) {
    for (int r : roots.lpt_indices) {
      auto best = table.query(r, inst.capacity, ell);
      if (!best) continue;
      const auto& [profit, batch] = *best;
      for (int i = 1; i + ell <= n + 1; ++i) {
        int k = i + ell;
        double value = static_cast<double>(batch.proc_time) * (n - i + 1) - profit;
        PairMinimum& cell = minima.at(i, k);
        if (!cell.feasible || value < cell.value) {
          cell.feasible = true;
          cell.value = value;
          cell.batch = batch;
        }
      }
    }
  }
  if (stats) stats->memo_entries = table.entries_created();
  return minima;
}

}  // namespace batchcg
