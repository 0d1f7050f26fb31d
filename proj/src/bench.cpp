#include "batchcg/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "batchcg/bounds.hpp"

namespace batchcg {

Sigma sigma_from_int(int value) {
  if (value < 1 || value > 4)
    fail(Errc::BadSigma, "sigma must be 1..4, got " + std::to_string(value));
  return static_cast<Sigma>(value);
}

SigmaRange sigma_range(Sigma sigma) {
  switch (sigma) {
    case Sigma::S1: return {1, 10};
    case Sigma::S2: return {2, 8};
    case Sigma::S3: return {3, 10};
    case Sigma::S4: return {1, 5};
  }
  fail(Errc::BadSigma, "unknown sigma");
}

void validate_spec(const GenSpec& spec) {
  if (spec.n < 1) fail(Errc::BadSpec, "n must be >= 1");
  if (spec.m < 1) fail(Errc::BadSpec, "m must be >= 1");
  if (spec.replicas < 1) fail(Errc::BadSpec, "replicas must be >= 1");
  SigmaRange range = sigma_range(spec.sigma);
  if (spec.C < range.hi)
    fail(Errc::BadSpec, "capacity " + std::to_string(spec.C) + " below the sigma size maximum " +
                            std::to_string(range.hi));
}

Instance generate_instance(const GenSpec& spec, int replica_index) {
  validate_spec(spec);
  SplitMix64 rng(spec.seed ^ static_cast<std::uint64_t>(replica_index));
  SigmaRange range = sigma_range(spec.sigma);
  std::vector<std::pair<int, int>> raw;
  raw.reserve(static_cast<std::size_t>(spec.n));
  for (int j = 0; j < spec.n; ++j) {
    int p = static_cast<int>(rng.next_in(1, 100));
    int s = static_cast<int>(rng.next_in(static_cast<std::uint64_t>(range.lo),
                                         static_cast<std::uint64_t>(range.hi)));
    raw.emplace_back(p, s);
  }
  return validate_instance(raw, spec.C, spec.m);
}

Instance read_instance(std::istream& in) {
  std::string line;
  int line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  };
  auto parse_ints = [&](int expected) {
    std::istringstream stream(line);
    std::vector<long long> values;
    long long v;
    while (stream >> v) values.push_back(v);
    if (!stream.eof() || static_cast<int>(values.size()) != expected)
      fail(Errc::ParseError, "line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(expected) + " integers");
    return values;
  };
  if (!next_line()) fail(Errc::ParseError, "line 1: missing header");
  auto header = parse_ints(3);
  long long n = header[0], m = header[1], c = header[2];
  if (n < 1 || n > 1000000 || m < 1 || c < 1)
    fail(Errc::ParseError, "line 1: bad n/m/C values");
  std::vector<std::pair<int, int>> raw;
  raw.reserve(static_cast<std::size_t>(n));
  for (long long j = 0; j < n; ++j) {
    if (!next_line())
      fail(Errc::ParseError, "line " + std::to_string(line_no + 1) + ": missing job line");
    auto vals = parse_ints(2);
    raw.emplace_back(static_cast<int>(vals[0]), static_cast<int>(vals[1]));
  }
  return validate_instance(raw, static_cast<int>(c), static_cast<int>(m));
}

Instance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::IoFailure, "cannot open " + path);
  return read_instance(in);
}

void write_instance(const Instance& inst, std::ostream& out) {
  out << inst.n() << ' ' << inst.machines << ' ' << inst.capacity << '\n';
  for (const Job& job : inst.jobs) out << job.p << ' ' << job.s << '\n';
}

void write_instance_file(const Instance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::IoFailure, "cannot open " + path + " for writing");
  write_instance(inst, out);
  if (!out) fail(Errc::IoFailure, "write failed on " + path);
}

std::vector<GenSpec> read_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::IoFailure, "cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ParseError, std::string("spec file: ") + e.what());
  }
  if (!doc.is_array()) fail(Errc::ParseError, "spec file must be a JSON array");
  std::vector<GenSpec> specs;
  for (const auto& item : doc) {
    GenSpec spec;
    try {
      spec.n = item.at("n").get<int>();
      spec.m = item.value("m", 1);
      spec.C = item.value("C", 10);
      spec.sigma = sigma_from_int(item.value("sigma", 1));
      spec.seed = item.value("seed", 0ull);
      spec.replicas = item.value("replicas", 10);
    } catch (const nlohmann::json::exception& e) {
      fail(Errc::ParseError, std::string("spec entry: ") + e.what());
    }
    validate_spec(spec);
    specs.push_back(spec);
  }
  return specs;
}

std::string csv_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

ExperimentReport run_experiment(const std::vector<GenSpec>& specs, const BenchConfig& config) {
  for (const GenSpec& spec : specs) validate_spec(spec);
  struct Task {
    int spec_index;
    int replica;
  };
  std::vector<Task> tasks;
  for (int s = 0; s < static_cast<int>(specs.size()); ++s)
    for (int r = 0; r < specs[static_cast<std::size_t>(s)].replicas; ++r)
      tasks.push_back(Task{s, r});

  ExperimentReport report;
  report.details.resize(tasks.size());

  auto run_task = [&](const Task& task, DetailRow& row) {
    const GenSpec& spec = specs[static_cast<std::size_t>(task.spec_index)];
    row.spec = spec;
    row.replica = task.replica;
    try {
      Instance inst = generate_instance(spec, task.replica);
      row.pr = pr_bound(inst).value;
      CgConfig cg = CgConfig::defaults_for(spec.m);
      if (config.ub_time_limit_seconds > 0)
        cg.ub_time_limit_seconds = config.ub_time_limit_seconds;
      cg.branch_node_limit = config.branch_node_limit;
      row.result = price_and_branch(inst, cg);
      if (row.result->converged && row.result->cg_lb + 1e-9 < row.pr)
        row.ratio_violation = true;
    } catch (const Error& e) {
      row.error = e.what();
    }
  };

  int workers = std::max(1, config.workers);
  if (workers == 1) {
    for (std::size_t t = 0; t < tasks.size(); ++t) run_task(tasks[t], report.details[t]);
  } else {
    std::atomic<std::size_t> cursor{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&]() {
        while (true) {
          std::size_t t = cursor.fetch_add(1);
          if (t >= tasks.size()) return;
          run_task(tasks[t], report.details[t]);
        }
      });
    for (auto& thread : pool) thread.join();
  }

  // one summary row per spec, aggregated over its replicas
  std::size_t offset = 0;
  for (const GenSpec& spec : specs) {
    ReportRow row;
    row.spec = spec;
    int usable = 0;
    double gap_sum = 0;
    double ratio_sum = 0;
    for (int r = 0; r < spec.replicas; ++r) {
      const DetailRow& detail = report.details[offset + static_cast<std::size_t>(r)];
      const bool ok = detail.error.empty() && detail.result && detail.result->converged &&
                      detail.result->cg_ub && detail.result->gap_percent && detail.pr > 0;
      if (!ok) {
        row.partial = true;
        continue;
      }
      const CgResult& res = *detail.result;
      double gap = *res.gap_percent;
      double ratio = res.cg_lb / detail.pr;
      if (usable == 0) {
        row.gap_worst = row.gap_best = gap;
        row.ratio_min = row.ratio_max = ratio;
      } else {
        row.gap_worst = std::max(row.gap_worst, gap);
        row.gap_best = std::min(row.gap_best, gap);
        row.ratio_min = std::min(row.ratio_min, ratio);
        row.ratio_max = std::max(row.ratio_max, ratio);
      }
      gap_sum += gap;
      ratio_sum += ratio;
      row.lb_seconds_avg += res.lb_seconds;
      row.ub_seconds_avg += res.ub_seconds;
      if (res.certified_optimal) ++row.opt_count;
      if (detail.ratio_violation) ++row.ratio_violations;
      ++usable;
    }
    if (usable > 0) {
      row.gap_avg = gap_sum / usable;
      row.ratio_avg = ratio_sum / usable;
      row.lb_seconds_avg /= usable;
      row.ub_seconds_avg /= usable;
    } else {
      row.partial = true;
    }
    report.summary.push_back(row);
    offset += static_cast<std::size_t>(spec.replicas);
  }
  return report;
}

void write_detail_csv(const ExperimentReport& report, std::ostream& out) {
  out << "n,sigma,C,m,replica,seed,cg_lb,cg_ub,pr_bound,gap_percent,ratio,lb_seconds,ub_seconds,"
         "iterations,columns_initial,columns_generated,bb_nodes,converged,certified_optimal,"
         "time_limit_hit,ratio_violation,error\n";
  for (const DetailRow& row : report.details) {
    out << row.spec.n << ',' << static_cast<int>(row.spec.sigma) << ',' << row.spec.C << ','
        << row.spec.m << ',' << row.replica << ',' << row.spec.seed << ',';
    if (row.result && row.error.empty()) {
      const CgResult& res = *row.result;
      out << (res.converged ? csv_double(res.cg_lb) : "") << ','
          << (res.cg_ub ? std::to_string(*res.cg_ub) : "") << ',' << csv_double(row.pr) << ','
          << (res.gap_percent ? csv_double(*res.gap_percent) : "") << ','
          << (res.converged && row.pr > 0 ? csv_double(res.cg_lb / row.pr) : "") << ','
          << csv_double(res.lb_seconds) << ',' << csv_double(res.ub_seconds) << ','
          << res.iterations << ',' << res.columns_initial << ',' << res.columns_generated << ','
          << res.bb_nodes << ',' << (res.converged ? 1 : 0) << ','
          << (res.certified_optimal ? 1 : 0) << ',' << (res.ub_time_limit_hit ? 1 : 0) << ','
          << (row.ratio_violation ? 1 : 0) << ',';
    } else {
      out << ",," << csv_double(row.pr) << ",,,,,,,,,,,,,";
    }
    out << row.error << '\n';
  }
}

void write_summary_csv(const ExperimentReport& report, std::ostream& out) {
  out << "n,sigma,C,m,replicas,lb_seconds_avg,ub_seconds_avg,gap_avg,gap_worst,gap_best,"
         "ratio_avg,ratio_min,ratio_max,opt_count,ratio_violations,partial\n";
  for (const ReportRow& row : report.summary) {
    out << row.spec.n << ',' << static_cast<int>(row.spec.sigma) << ',' << row.spec.C << ','
        << row.spec.m << ',' << row.spec.replicas << ',' << csv_double(row.lb_seconds_avg) << ','
        << csv_double(row.ub_seconds_avg) << ',' << csv_double(row.gap_avg) << ','
        << csv_double(row.gap_worst) << ',' << csv_double(row.gap_best) << ','
        << csv_double(row.ratio_avg) << ',' << csv_double(row.ratio_min) << ','
        << csv_double(row.ratio_max) << ',' << row.opt_count << ',' << row.ratio_violations
        << ',' << (row.partial ? 1 : 0) << '\n';
  }
}

}  // namespace batchcg
