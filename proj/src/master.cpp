#include "batchcg/master.hpp"

#include <string>

#include "batchcg/lp_writer.hpp"

namespace batchcg {

RestrictedMaster::RestrictedMaster(const Instance& inst, std::span<const ArcColumn> initial_arcs,
                                   MasterOptions options, LpBackend* backend)
    : inst_(&inst) {
  multi_ = options.multi_commodity.value_or(inst.machines > 1);
  machines_ = multi_ ? inst.machines : 1;
  if (!multi_ && inst.machines > 1)
    fail(Errc::InvalidArc, "parallel instance requires the multi-commodity master");
  const int n = inst.n();
  lp_.rows = machines_ * (n + 1) + n;
  lp_.rhs.assign(static_cast<std::size_t>(lp_.rows), 0.0);
  for (int h = 1; h <= machines_; ++h) {
    lp_.rhs[static_cast<std::size_t>(flow_row(h, 1))] = 1.0;
    lp_.rhs[static_cast<std::size_t>(flow_row(h, n + 1))] = -1.0;
  }
  for (int j = 1; j <= n; ++j) lp_.rhs[static_cast<std::size_t>(partition_row(j))] = 1.0;

  if (backend) {
    backend_ = backend;
  } else {
    owned_backend_ = std::make_unique<SimplexBackend>(options.lp);
    backend_ = owned_backend_.get();
  }

  if (multi_)
    for (int k = 2; k <= n + 1; ++k) {
      ArcColumn empty_arc{1, k, Batch{}};
      append_arc(empty_arc);
    }
  add_columns(initial_arcs);
}

void RestrictedMaster::append_arc(const ArcColumn& arc) {
  arcs_.push_back(arc);
  const int n = inst_->n();
  for (int h = 1; h <= machines_; ++h) {
    std::vector<std::pair<int, double>> entries;
    entries.reserve(arc.batch.job_ids.size() + 2);
    entries.emplace_back(flow_row(h, arc.tail), 1.0);
    entries.emplace_back(flow_row(h, arc.head), -1.0);
    for (int id : arc.batch.job_ids) entries.emplace_back(partition_row(id), 1.0);
    lp_.add_col(static_cast<double>(arc.cost(n)), 0.0, kLpInfinity, std::move(entries));
  }
}

int RestrictedMaster::add_columns(std::span<const ArcColumn> arcs) {
  int added = 0;
  for (const ArcColumn& raw : arcs) {
    check_arc(raw, *inst_);
    if (raw.batch.empty() && !multi_)
      fail(Errc::InvalidArc, "empty arcs belong to the multi-commodity master");
    ArcColumn arc{raw.tail, raw.head,
                  raw.batch.empty() ? Batch{} : make_batch(*inst_, raw.batch.job_ids)};
    auto [it, inserted] = arc_index_.try_emplace(arc_key(arc), num_arcs());
    if (!inserted) continue;
    append_arc(arc);
    ++added;
  }
  return added;
}

LpSolution RestrictedMaster::solve() {
  LpResult res = backend_->solve(lp_, state_);
  LpSolution sol;
  sol.iterations = res.iterations;
  switch (res.status) {
    case LpStatus::Optimal:
      sol.status = LpSolution::Status::Optimal;
      break;
    case LpStatus::Infeasible:
      sol.status = LpSolution::Status::Infeasible;
      return sol;
    case LpStatus::IterationLimit:
      sol.status = LpSolution::Status::IterationLimit;
      return sol;
    default:
      fail(Errc::NumericalFailure, "LP backend failed on the master");
  }
  sol.objective = res.objective;
  sol.primal = std::move(res.x);
  const int n = inst_->n();
  sol.duals.u.assign(static_cast<std::size_t>(machines_),
                     std::vector<double>(static_cast<std::size_t>(n + 1), 0.0));
  for (int h = 1; h <= machines_; ++h)
    for (int node = 1; node <= n + 1; ++node)
      sol.duals.u[static_cast<std::size_t>(h - 1)][static_cast<std::size_t>(node - 1)] =
          res.y[static_cast<std::size_t>(flow_row(h, node))];
  sol.duals.v.resize(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j)
    sol.duals.v[static_cast<std::size_t>(j - 1)] = res.y[static_cast<std::size_t>(partition_row(j))];
  return sol;
}

void RestrictedMaster::set_column_bounds(int col, double lo, double hi) {
  if (col < 0 || col >= num_columns()) fail(Errc::IndexOutOfRange, "column index out of range");
  lp_.lower[static_cast<std::size_t>(col)] = lo;
  lp_.upper[static_cast<std::size_t>(col)] = hi;
}

std::pair<double, double> RestrictedMaster::column_bounds(int col) const {
  return {lp_.lower[static_cast<std::size_t>(col)], lp_.upper[static_cast<std::size_t>(col)]};
}

void RestrictedMaster::reset_all_bounds(double lo, double hi) {
  for (int col = 0; col < num_columns(); ++col) {
    lp_.lower[static_cast<std::size_t>(col)] = lo;
    lp_.upper[static_cast<std::size_t>(col)] = hi;
  }
}

void RestrictedMaster::dump_lp(std::ostream& out) const {
  LpWriter writer;
  const int n = inst_->n();
  auto col_name = [&](int col) {
    const ArcColumn& arc = arc_of(col);
    std::string name = "x_" + std::to_string(arc.tail) + "_" + std::to_string(arc.head);
    for (int id : arc.batch.job_ids) name += "_" + std::to_string(id);
    if (machines_ > 1) name += "_m" + std::to_string(machine_of(col));
    return name;
  };
  LpWriter::Terms objective;
  for (int col = 0; col < num_columns(); ++col)
    objective.emplace_back(lp_.obj[static_cast<std::size_t>(col)], col_name(col));
  writer.set_objective(std::move(objective));

  std::vector<LpWriter::Terms> row_terms(static_cast<std::size_t>(lp_.rows));
  for (int col = 0; col < num_columns(); ++col)
    for (const auto& [row, coef] : lp_.cols[static_cast<std::size_t>(col)])
      row_terms[static_cast<std::size_t>(row)].emplace_back(coef, col_name(col));
  for (int h = 1; h <= machines_; ++h)
    for (int node = 1; node <= n + 1; ++node) {
      int row = flow_row(h, node);
      writer.add_constraint("flow_m" + std::to_string(h) + "_" + std::to_string(node),
                            std::move(row_terms[static_cast<std::size_t>(row)]), '=',
                            lp_.rhs[static_cast<std::size_t>(row)]);
    }
  for (int j = 1; j <= n; ++j) {
    int row = partition_row(j);
    writer.add_constraint("part_" + std::to_string(j),
                          std::move(row_terms[static_cast<std::size_t>(row)]), '=',
                          lp_.rhs[static_cast<std::size_t>(row)]);
  }
  for (int col = 0; col < num_columns(); ++col) {
    double lo = lp_.lower[static_cast<std::size_t>(col)];
    double hi = lp_.upper[static_cast<std::size_t>(col)];
    if (lo != 0.0 || hi < kLpInfinity)
      writer.add_bound(LpWriter::format_number(lo) + " <= " + col_name(col) +
                       (hi < kLpInfinity ? " <= " + LpWriter::format_number(hi) : ""));
  }
  writer.write(out);
}

}  // namespace batchcg
