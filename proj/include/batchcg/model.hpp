#pragma once

#include <cstdint>
#include <tuple>
#include <utility>
#include <vector>

#include "batchcg/error.hpp"

namespace batchcg {

struct Job {
  int id = 0;  // 1-based, stable across sortings
  int p = 0;   // processing time
  int s = 0;   // size (capacity units)
};

struct Instance {
  std::vector<Job> jobs;  // jobs[j-1].id == j
  int capacity = 0;
  int machines = 1;

  int n() const { return static_cast<int>(jobs.size()); }
  const Job& job(int id) const { return jobs[static_cast<std::size_t>(id - 1)]; }
};

// A set of jobs processed simultaneously; every member shares the batch
// completion time. proc_time = max p_j over members, 0 for the placeholder.
struct Batch {
  std::vector<int> job_ids;  // sorted ascending
  int total_size = 0;
  int proc_time = 0;

  bool empty() const { return job_ids.empty(); }
  int size() const { return static_cast<int>(job_ids.size()); }
  friend bool operator==(const Batch&, const Batch&) = default;
};

// Builds a batch from ids, recomputing size and processing time.
Batch make_batch(const Instance& inst, std::vector<int> job_ids);

// Smith order for batches on one machine: nondecreasing proc_time/|B|,
// ties by smaller proc_time, then lexicographic ids.
bool smith_before(const Batch& a, const Batch& b);

// Ordered batch sequences, one per machine.
struct Schedule {
  std::vector<std::vector<Batch>> machines;
  friend bool operator==(const Schedule&, const Schedule&) = default;
};

// Arc (i,k,B): batch B placed so that n-i+1 jobs run from B to the end of
// its machine's sequence. Empty batches act as placeholders and may only
// leave node 1.
struct ArcColumn {
  int tail = 0;
  int head = 0;
  Batch batch;

  // Positional cost (n-i+1)*p_B; identical machines share it, empty arcs
  // cost nothing.
  std::int64_t cost(int n) const {
    return batch.empty() ? 0 : static_cast<std::int64_t>(n - tail + 1) * batch.proc_time;
  }
  friend bool operator==(const ArcColumn&, const ArcColumn&) = default;
};

using ArcKey = std::tuple<int, int, std::vector<int>>;

inline ArcKey arc_key(const ArcColumn& arc) {
  return {arc.tail, arc.head, arc.batch.job_ids};
}

// Chained arcs from node 1 to node n+1 on one machine.
struct Path {
  std::vector<ArcColumn> arcs;
};

// Checks raw job data and returns an instance with 1-based ids.
Instance validate_instance(const std::vector<std::pair<int, int>>& raw_jobs, int capacity,
                           int machines);

// Structural sanity of one arc against an instance (bounds, cardinality,
// known ids, capacity). Throws on violation.
void check_arc(const ArcColumn& arc, const Instance& inst);

// Total completion time of a schedule, recomputed from job data; verifies
// the partition and per-batch capacity.
std::int64_t evaluate_schedule(const Schedule& sched, const Instance& inst);

// Schedule <-> path correspondence. For m>1 a machine whose batches do not
// start at node 1 gets a leading empty arc; an idle machine maps to the
// full-span empty arc (1, n+1, {}).
std::vector<Path> schedule_to_path(const Schedule& sched, const Instance& inst);
Schedule path_to_schedule(const std::vector<Path>& paths, const Instance& inst);

// Sum of positional arc costs over all machines; equals evaluate_schedule
// of the corresponding schedule.
std::int64_t path_cost(const std::vector<Path>& paths, const Instance& inst);

// Permutation views of job ids; the instance itself is never reordered.
std::vector<int> lpt_order(const Instance& inst);  // p desc, ties id asc
std::vector<int> spt_order(const Instance& inst);  // p asc, ties id asc

}  // namespace batchcg
