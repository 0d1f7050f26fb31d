#pragma once

#include "batchcg/model.hpp"

namespace batchcg {

// Combinatorial lower bound from relaxing the capacity-C batch machine to
// a preemptive problem on m*C parallel unit machines: the k-th term is
// max(p_(k), V_k / (m*C)) with p_(k) the k-th smallest processing time and
// V_k the sum of the k smallest size-weighted works s_j * p_j.
struct PrBound {
  double value = 0.0;
  int machine_count = 0;  // relaxation width m*C
};

PrBound pr_bound(const Instance& inst);

}  // namespace batchcg
