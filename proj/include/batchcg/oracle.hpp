#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "batchcg/model.hpp"

namespace batchcg {

// Ground-truth exact solver for small instances plus exhaustive
// enumeration helpers backing the test oracles.

// All batches with total size <= C, duplicate-free, in bitmask order.
std::vector<Batch> enumerate_feasible_batches(const Instance& inst, int enumeration_cap = 16);

struct OracleResult {
  std::int64_t optimum = 0;
  Schedule schedule;
  std::int64_t partitions_explored = 0;
};

// Enumerates every partition of the jobs into feasible batches (and every
// machine assignment for m>1). Batches on one machine are sequenced by
// Smith's rule; all_orders instead tries every order, which validates the
// rule on small instances.
OracleResult exact_optimum(const Instance& inst, bool all_orders = false);

// Assignment-indexed MILP for the single-machine problem in algebraic LP
// text. big_m <= 0 picks the smallest safe constant, the total work
// sum(p_j). Variables x_i_j (job i in batch j), P_j, C_j, c_i.
void export_milp(const Instance& inst, std::ostream& out, std::int64_t big_m = 0);
void export_milp_file(const Instance& inst, const std::string& path, std::int64_t big_m = 0);

}  // namespace batchcg
