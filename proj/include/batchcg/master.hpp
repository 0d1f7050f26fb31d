#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "batchcg/lp.hpp"
#include "batchcg/model.hpp"
#include "batchcg/pricing.hpp"

namespace batchcg {

// Continuous restricted master solution: primal values per LP column plus
// the simplex multipliers the pricing step consumes.
struct LpSolution {
  enum class Status { Optimal, Infeasible, IterationLimit };
  Status status = Status::Infeasible;
  double objective = 0.0;
  std::vector<double> primal;
  DualValues duals;
  std::int64_t iterations = 0;
};

struct MasterOptions {
  // Multi-commodity layout (per-machine flow rows, empty arcs added up
  // front). Defaults to machines > 1; force true to run a single machine
  // through the parallel formulation.
  std::optional<bool> multi_commodity;
  SimplexOptions lp;
};

// Restricted master problem over the generated arc set: per machine n+1
// flow-conservation rows (+1 at node 1, -1 at node n+1) and n partition
// rows, all equalities; one LP column per (arc, machine).
class RestrictedMaster {
 public:
  RestrictedMaster(const Instance& inst, std::span<const ArcColumn> initial_arcs,
                   MasterOptions options = {}, LpBackend* backend = nullptr);

  // Appends new arcs, silently skipping duplicates; returns how many arcs
  // were genuinely new.
  int add_columns(std::span<const ArcColumn> arcs);

  LpSolution solve();

  int num_arcs() const { return static_cast<int>(arcs_.size()); }
  int num_columns() const { return lp_.num_cols(); }
  int num_rows() const { return lp_.rows; }
  int num_flow_rows() const { return machines_ * (inst_->n() + 1); }
  int num_partition_rows() const { return inst_->n(); }
  bool multi_commodity() const { return multi_; }
  int machines() const { return machines_; }

  const ArcColumn& arc_of(int col) const { return arcs_[static_cast<std::size_t>(col / machines_)]; }
  int machine_of(int col) const { return col % machines_ + 1; }  // 1-based
  int column_of(int arc_index, int machine) const { return arc_index * machines_ + machine - 1; }

  // Bound access for branch and bound over the final master.
  void set_column_bounds(int col, double lo, double hi);
  std::pair<double, double> column_bounds(int col) const;
  void reset_all_bounds(double lo, double hi);

  const Instance& instance() const { return *inst_; }
  const LpProblem& problem() const { return lp_; }

  // Current master in algebraic LP text, for debugging.
  void dump_lp(std::ostream& out) const;

 private:
  int flow_row(int machine, int node) const { return (machine - 1) * (inst_->n() + 1) + node - 1; }
  int partition_row(int job) const { return machines_ * (inst_->n() + 1) + job - 1; }
  void append_arc(const ArcColumn& arc);

  const Instance* inst_;
  bool multi_ = false;
  int machines_ = 1;  // commodity count in the LP
  LpProblem lp_;
  std::vector<ArcColumn> arcs_;
  std::map<ArcKey, int> arc_index_;
  SimplexState state_;
  std::unique_ptr<LpBackend> owned_backend_;
  LpBackend* backend_;
};

}  // namespace batchcg
