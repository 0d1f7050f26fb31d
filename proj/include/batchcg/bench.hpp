#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "batchcg/colgen.hpp"
#include "batchcg/model.hpp"

namespace batchcg {

// The four job-size distributions; processing times are always uniform on
// [1, 100].
enum class Sigma : int { S1 = 1, S2 = 2, S3 = 3, S4 = 4 };

struct SigmaRange {
  int lo = 0;
  int hi = 0;
};

Sigma sigma_from_int(int value);  // BadSigma outside 1..4
SigmaRange sigma_range(Sigma sigma);

// Deterministic 64-bit generator; the fixed constants make instance
// streams reproducible across platforms and languages.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [lo, hi] by rejection: draw until the value falls below the
  // largest multiple of the span, then reduce.
  std::uint64_t next_in(std::uint64_t lo, std::uint64_t hi) {
    std::uint64_t span = hi - lo + 1;
    std::uint64_t threshold = (0 - span) % span;  // 2^64 mod span
    std::uint64_t draw;
    do {
      draw = next();
    } while (draw < threshold);
    return lo + draw % span;
  }
};

struct GenSpec {
  int n = 0;
  int m = 1;
  int C = 10;
  Sigma sigma = Sigma::S1;
  std::uint64_t seed = 0;
  int replicas = 10;
};

void validate_spec(const GenSpec& spec);  // BadSpec on impossible combinations

// Deterministic in (seed, replica): generator seeded with seed XOR
// replica, p then s drawn per job in id order.
Instance generate_instance(const GenSpec& spec, int replica_index);

// Text format: line 1 "n m C", then n lines "p_j s_j". ASCII, LF.
Instance read_instance(std::istream& in);
Instance read_instance_file(const std::string& path);
void write_instance(const Instance& inst, std::ostream& out);
void write_instance_file(const Instance& inst, const std::string& path);

// JSON array of {"n","m","C","sigma","seed","replicas"}.
std::vector<GenSpec> read_spec_file(const std::string& path);

struct BenchConfig {
  double ub_time_limit_seconds = 0.0;  // 0 = per-m default (60 s / 180 s)
  int workers = 1;
  std::int64_t branch_node_limit = 10'000'000;
};

struct DetailRow {
  GenSpec spec;
  int replica = 0;
  std::optional<CgResult> result;
  double pr = 0.0;
  bool ratio_violation = false;  // CG-LB fell below PR: investigate, never hide
  std::string error;             // empty on success
};

struct ReportRow {
  GenSpec spec;
  double lb_seconds_avg = 0.0;
  double ub_seconds_avg = 0.0;
  double gap_avg = 0.0, gap_worst = 0.0, gap_best = 0.0;
  double ratio_avg = 0.0, ratio_min = 0.0, ratio_max = 0.0;
  int opt_count = 0;
  int ratio_violations = 0;
  bool partial = false;  // some replica failed or left no usable numbers
};

struct ExperimentReport {
  std::vector<DetailRow> details;
  std::vector<ReportRow> summary;
};

// Runs every (spec, replica) pipeline, optionally on a worker pool; per
// instance wall times are measured inside the single-threaded pipeline.
// Time limits are data, not errors.
ExperimentReport run_experiment(const std::vector<GenSpec>& specs, const BenchConfig& config);

void write_detail_csv(const ExperimentReport& report, std::ostream& out);
void write_summary_csv(const ExperimentReport& report, std::ostream& out);

// Round-trip decimal formatting used by the CSV writers.
std::string csv_double(double value);

}  // namespace batchcg
