#include "batchcg/bounds.hpp"

#include <algorithm>

namespace batchcg {

PrBound pr_bound(const Instance& inst) {
  PrBound result;
  result.machine_count = inst.machines * inst.capacity;
  // k-th smallest completion is at least the k-th smallest processing time
  // and at least the k smallest size-weighted works over the mC-wide
  // preemptive relaxation; the two floors are sorted independently.
  std::vector<std::int64_t> works;
  works.reserve(static_cast<std::size_t>(inst.n()));
  for (const Job& job : inst.jobs)
    works.push_back(static_cast<std::int64_t>(job.s) * job.p);
  std::sort(works.begin(), works.end());
  std::int64_t cumulative = 0;
  double bound = 0.0;
  std::size_t k = 0;
  for (int id : spt_order(inst)) {
    cumulative += works[k++];
    bound += std::max(static_cast<double>(inst.job(id).p),
                      static_cast<double>(cumulative) / result.machine_count);
  }
  result.value = bound;
  return result;
}

}  // namespace batchcg
