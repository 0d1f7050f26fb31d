#include "batchcg/model.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace batchcg {

namespace {

const char* kErrcNames[] = {
    "EmptyInstance",  "NonPositive",      "OversizedJob",   "NotAPartition",
    "CapacityViolation", "BrokenChain",   "PartitionMismatch", "IndexOutOfRange",
    "ForeignJob",     "InvalidArc",       "Infeasible",     "NumericalFailure",
    "IterationLimit", "NoIntegerSolution", "NonPositiveUb", "TooLarge",
    "BadSigma",       "BadSpec",          "ParseError",     "IoFailure",
};

}  // namespace

const char* errc_name(Errc code) { return kErrcNames[static_cast<int>(code)]; }

Instance validate_instance(const std::vector<std::pair<int, int>>& raw_jobs, int capacity,
                           int machines) {
  if (raw_jobs.empty()) fail(Errc::EmptyInstance, "instance has no jobs");
  if (capacity < 1) fail(Errc::NonPositive, "capacity must be >= 1");
  if (machines < 1) fail(Errc::NonPositive, "machine count must be >= 1");
  Instance inst;
  inst.capacity = capacity;
  inst.machines = machines;
  inst.jobs.reserve(raw_jobs.size());
  int id = 0;
  for (const auto& [p, s] : raw_jobs) {
    ++id;
    if (p < 1) fail(Errc::NonPositive, "job " + std::to_string(id) + " has p < 1");
    if (s < 1) fail(Errc::NonPositive, "job " + std::to_string(id) + " has s < 1");
    if (s > capacity)
      fail(Errc::OversizedJob, "job " + std::to_string(id) + " has size " + std::to_string(s) +
                                   " > capacity " + std::to_string(capacity));
    inst.jobs.push_back(Job{id, p, s});
  }
  return inst;
}

Batch make_batch(const Instance& inst, std::vector<int> job_ids) {
  std::sort(job_ids.begin(), job_ids.end());
  Batch b;
  b.job_ids = std::move(job_ids);
  for (std::size_t t = 0; t < b.job_ids.size(); ++t) {
    int id = b.job_ids[t];
    if (id < 1 || id > inst.n())
      fail(Errc::ForeignJob, "unknown job id " + std::to_string(id));
    if (t > 0 && b.job_ids[t - 1] == id)
      fail(Errc::InvalidArc, "duplicate job id " + std::to_string(id) + " in batch");
    b.total_size += inst.job(id).s;
    b.proc_time = std::max(b.proc_time, inst.job(id).p);
  }
  return b;
}

bool smith_before(const Batch& a, const Batch& b) {
  // p_a/|a| < p_b/|b| via cross multiplication
  std::int64_t lhs = static_cast<std::int64_t>(a.proc_time) * b.size();
  std::int64_t rhs = static_cast<std::int64_t>(b.proc_time) * a.size();
  if (lhs != rhs) return lhs < rhs;
  if (a.proc_time != b.proc_time) return a.proc_time < b.proc_time;
  return a.job_ids < b.job_ids;
}

void check_arc(const ArcColumn& arc, const Instance& inst) {
  const int n = inst.n();
  if (arc.tail < 1 || arc.head > n + 1 || arc.tail >= arc.head)
    fail(Errc::InvalidArc, "arc nodes out of range");
  if (arc.batch.empty()) {
    if (arc.tail != 1) fail(Errc::InvalidArc, "empty arc must leave node 1");
    return;
  }
  if (arc.batch.size() != arc.head - arc.tail)
    fail(Errc::InvalidArc, "batch cardinality does not match arc span");
  Batch checked = make_batch(inst, arc.batch.job_ids);
  if (checked.total_size > inst.capacity)
    fail(Errc::CapacityViolation, "batch size exceeds capacity");
}

namespace {

// Recomputes a schedule batch from the instance; throws partition errors
// with the given code so callers keep their documented error identities.
Batch recompute(const Instance& inst, const std::vector<int>& ids, std::vector<char>& seen,
                Errc partition_code) {
  Batch b;
  for (int id : ids) {
    if (id < 1 || id > inst.n())
      fail(partition_code, "job id " + std::to_string(id) + " outside instance");
    if (seen[static_cast<std::size_t>(id)])
      fail(partition_code, "job " + std::to_string(id) + " scheduled twice");
    seen[static_cast<std::size_t>(id)] = 1;
    b.job_ids.push_back(id);
    b.total_size += inst.job(id).s;
    b.proc_time = std::max(b.proc_time, inst.job(id).p);
  }
  std::sort(b.job_ids.begin(), b.job_ids.end());
  return b;
}

void require_all_seen(const Instance& inst, const std::vector<char>& seen, Errc code) {
  for (int id = 1; id <= inst.n(); ++id)
    if (!seen[static_cast<std::size_t>(id)])
      fail(code, "job " + std::to_string(id) + " not scheduled");
}

}  // namespace

std::int64_t evaluate_schedule(const Schedule& sched, const Instance& inst) {
  std::vector<char> seen(static_cast<std::size_t>(inst.n()) + 1, 0);
  std::int64_t total = 0;
  for (const auto& machine : sched.machines) {
    std::int64_t completion = 0;
    for (const auto& raw : machine) {
      Batch b = recompute(inst, raw.job_ids, seen, Errc::NotAPartition);
      if (b.total_size > inst.capacity)
        fail(Errc::CapacityViolation, "batch size " + std::to_string(b.total_size) +
                                          " > capacity " + std::to_string(inst.capacity));
      completion += b.proc_time;
      total += completion * b.size();
    }
  }
  require_all_seen(inst, seen, Errc::NotAPartition);
  return total;
}

std::vector<Path> schedule_to_path(const Schedule& sched, const Instance& inst) {
  const int n = inst.n();
  if (static_cast<int>(sched.machines.size()) != inst.machines)
    fail(Errc::PartitionMismatch, "schedule machine count differs from instance");
  std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
  std::vector<Path> paths;
  paths.reserve(sched.machines.size());
  for (const auto& machine : sched.machines) {
    int jobs_here = 0;
    for (const auto& b : machine) jobs_here += b.size();
    Path path;
    int pos = 1;
    if (inst.machines > 1) {
      if (jobs_here == 0) {
        path.arcs.push_back(ArcColumn{1, n + 1, Batch{}});
        paths.push_back(std::move(path));
        continue;
      }
      if (jobs_here < n) {
        pos = n - jobs_here + 1;
        path.arcs.push_back(ArcColumn{1, pos, Batch{}});
      }
    } else if (jobs_here != n) {
      fail(Errc::PartitionMismatch, "single-machine schedule must cover all jobs");
    }
    for (const auto& raw : machine) {
      Batch b = recompute(inst, raw.job_ids, seen, Errc::PartitionMismatch);
      int next = pos + b.size();
      path.arcs.push_back(ArcColumn{pos, next, std::move(b)});
      pos = next;
    }
    if (pos != n + 1) fail(Errc::PartitionMismatch, "machine path does not end at node n+1");
    paths.push_back(std::move(path));
  }
  require_all_seen(inst, seen, Errc::PartitionMismatch);
  return paths;
}

namespace {

// Shared structural validation for path operations; returns recomputed
// batches per machine in path order (empty arcs skipped).
std::vector<std::vector<Batch>> walk_paths(const std::vector<Path>& paths, const Instance& inst) {
  const int n = inst.n();
  if (paths.empty()) fail(Errc::PartitionMismatch, "no paths given");
  std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
  std::vector<std::vector<Batch>> result;
  result.reserve(paths.size());
  for (const auto& path : paths) {
    if (path.arcs.empty()) fail(Errc::BrokenChain, "empty path");
    int pos = 1;
    std::vector<Batch> batches;
    for (const auto& arc : path.arcs) {
      if (arc.tail != pos) fail(Errc::BrokenChain, "arc tail does not chain");
      if (arc.head <= arc.tail || arc.head > n + 1)
        fail(Errc::BrokenChain, "arc head out of range");
      if (arc.batch.empty()) {
        if (arc.tail != 1) fail(Errc::BrokenChain, "empty arc not leaving node 1");
      } else {
        if (arc.batch.size() != arc.head - arc.tail)
          fail(Errc::BrokenChain, "batch cardinality does not match arc span");
        batches.push_back(recompute(inst, arc.batch.job_ids, seen, Errc::PartitionMismatch));
      }
      pos = arc.head;
    }
    if (pos != n + 1) fail(Errc::BrokenChain, "path does not reach node n+1");
    result.push_back(std::move(batches));
  }
  require_all_seen(inst, seen, Errc::PartitionMismatch);
  return result;
}

}  // namespace

Schedule path_to_schedule(const std::vector<Path>& paths, const Instance& inst) {
  if (static_cast<int>(paths.size()) != inst.machines)
    fail(Errc::PartitionMismatch, "path count differs from machine count");
  Schedule sched;
  sched.machines = walk_paths(paths, inst);
  return sched;
}

std::int64_t path_cost(const std::vector<Path>& paths, const Instance& inst) {
  walk_paths(paths, inst);
  const int n = inst.n();
  std::int64_t total = 0;
  for (const auto& path : paths)
    for (const auto& arc : path.arcs)
      if (!arc.batch.empty()) {
        Batch b = make_batch(inst, arc.batch.job_ids);
        total += static_cast<std::int64_t>(n - arc.tail + 1) * b.proc_time;
      }
  return total;
}

namespace {

std::vector<int> sorted_ids(const Instance& inst, bool longest_first) {
  std::vector<int> ids(static_cast<std::size_t>(inst.n()));
  std::iota(ids.begin(), ids.end(), 1);
  std::sort(ids.begin(), ids.end(), [&](int a, int b) {
    int pa = inst.job(a).p, pb = inst.job(b).p;
    if (pa != pb) return longest_first ? pa > pb : pa < pb;
    return a < b;
  });
  return ids;
}

}  // namespace

std::vector<int> lpt_order(const Instance& inst) { return sorted_ids(inst, true); }

std::vector<int> spt_order(const Instance& inst) { return sorted_ids(inst, false); }

}  // namespace batchcg
