#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "batchcg/bench.hpp"
#include "batchcg/bounds.hpp"
#include "batchcg/colgen.hpp"
#include "batchcg/oracle.hpp"
#include "batchcg/version.hpp"

namespace {

using nlohmann::json;

batchcg::Instance load_instance(const std::string& path, int machines_override) {
  batchcg::Instance inst = batchcg::read_instance_file(path);
  if (machines_override > 0) inst.machines = machines_override;
  return inst;
}

json schedule_to_json(const batchcg::Schedule& sched) {
  json machines = json::array();
  for (const auto& seq : sched.machines) {
    json batches = json::array();
    for (const auto& batch : seq) batches.push_back(batch.job_ids);
    machines.push_back(batches);
  }
  return machines;
}

json result_to_json(const batchcg::Instance& inst, const batchcg::CgConfig& config,
                    const batchcg::CgResult& result, double pr) {
  json doc;
  doc["solver_version"] = batchcg::kVersion;
  doc["instance"] = {{"n", inst.n()}, {"m", inst.machines}, {"C", inst.capacity}};
  doc["config"] = {{"ub_time_limit_seconds", config.ub_time_limit_seconds},
                   {"eps_neg", config.eps_neg},
                   {"max_cg_iterations", config.max_cg_iterations},
                   {"branch_node_limit", config.branch_node_limit},
                   {"use_parallel_path", config.use_parallel_path}};
  doc["cg_lb"] = result.cg_lb;
  doc["converged"] = result.converged;
  if (result.cg_ub) doc["cg_ub"] = *result.cg_ub;
  if (result.gap_percent) doc["gap_percent"] = *result.gap_percent;
  doc["certified_optimal"] = result.certified_optimal;
  doc["iterations"] = result.iterations;
  doc["columns_initial"] = result.columns_initial;
  doc["columns_generated"] = result.columns_generated;
  doc["lb_seconds"] = result.lb_seconds;
  doc["ub_seconds"] = result.ub_seconds;
  doc["bb_nodes"] = result.bb_nodes;
  doc["ub_time_limit_hit"] = result.ub_time_limit_hit;
  doc["node_limit_hit"] = result.node_limit_hit;
  doc["pr_bound"] = pr;
  if (result.schedule) doc["schedule"] = schedule_to_json(*result.schedule);
  return doc;
}

void emit(const json& doc, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << doc.dump(2) << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) batchcg::fail(batchcg::Errc::IoFailure, "cannot open " + out_path + " for writing");
  out << doc.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Column-generation solver for parallel-batching machine scheduling"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate random instances");
  int gen_n = 20, gen_m = 1, gen_c = 10, gen_sigma = 1, gen_replicas = 1;
  std::uint64_t gen_seed = 0;
  std::string gen_out = "instance.txt";
  gen->add_option("--n", gen_n, "Number of jobs");
  gen->add_option("--machines", gen_m, "Machine count");
  gen->add_option("--capacity", gen_c, "Batch capacity");
  gen->add_option("--sigma", gen_sigma, "Size distribution 1..4");
  gen->add_option("--seed", gen_seed, "Seed");
  gen->add_option("--replicas", gen_replicas, "Instances to generate");
  gen->add_option("--out", gen_out, "Output file (replicas=1) or directory");

  // solve
  auto* solve = app.add_subcommand("solve", "Run price-and-branch on one instance");
  std::string solve_path, solve_out;
  int solve_m = 0;
  double solve_tl = 0;
  double solve_eps = 1e-6;
  bool solve_parallel_path = false;
  std::string solve_dump;
  solve->add_option("instance", solve_path, "Instance file")->required();
  solve->add_option("--machines", solve_m, "Override machine count");
  solve->add_option("--time-limit-ub", solve_tl, "Branch-and-bound time limit (s)");
  solve->add_option("--eps-neg", solve_eps, "Reduced-cost tolerance");
  solve->add_flag("--parallel-path", solve_parallel_path,
                  "Use the multi-commodity formulation even for one machine");
  solve->add_option("--out", solve_out, "Write the JSON result here instead of stdout");
  solve->add_option("--dump-master", solve_dump,
                    "Write the converged master LP in algebraic text form");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Exact optimum by enumeration (small instances)");
  std::string oracle_path, oracle_out;
  int oracle_m = 0;
  bool oracle_all_orders = false;
  oracle->add_option("instance", oracle_path, "Instance file")->required();
  oracle->add_option("--machines", oracle_m, "Override machine count");
  oracle->add_flag("--all-orders", oracle_all_orders, "Try every batch order per machine");
  oracle->add_option("--out", oracle_out, "Write the JSON result here instead of stdout");

  // export-milp
  auto* milp = app.add_subcommand("export-milp", "Write the assignment MILP in LP format");
  std::string milp_path, milp_out = "model.lp";
  std::int64_t milp_bigm = 0;
  milp->add_option("instance", milp_path, "Instance file")->required();
  milp->add_option("--out", milp_out, "Output LP file");
  milp->add_option("--big-m", milp_bigm, "Big-M constant (default: total work)");

  // pr
  auto* pr = app.add_subcommand("pr", "Preemptive relaxation lower bound");
  std::string pr_path;
  int pr_m = 0;
  pr->add_option("instance", pr_path, "Instance file")->required();
  pr->add_option("--machines", pr_m, "Override machine count");

  // bench
  auto* bench = app.add_subcommand("bench", "Run an experiment from a JSON spec file");
  std::string bench_spec, bench_out = ".";
  int bench_jobs = 1;
  double bench_tl = 0;
  bench->add_option("specs", bench_spec, "JSON array of generation specs")->required();
  bench->add_option("--out", bench_out, "Directory for summary.csv and detail.csv");
  bench->add_option("--jobs", bench_jobs, "Worker threads");
  bench->add_option("--time-limit-ub", bench_tl, "Branch-and-bound time limit (s)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*gen) {
      batchcg::GenSpec spec;
      spec.n = gen_n;
      spec.m = gen_m;
      spec.C = gen_c;
      spec.sigma = batchcg::sigma_from_int(gen_sigma);
      spec.seed = gen_seed;
      spec.replicas = gen_replicas;
      batchcg::validate_spec(spec);
      if (gen_replicas == 1) {
        batchcg::write_instance_file(batchcg::generate_instance(spec, 0), gen_out);
        std::cout << gen_out << "\n";
      } else {
        std::filesystem::create_directories(gen_out);
        for (int r = 0; r < gen_replicas; ++r) {
          std::string name = gen_out + "/n" + std::to_string(gen_n) + "_s" +
                             std::to_string(gen_sigma) + "_C" + std::to_string(gen_c) + "_m" +
                             std::to_string(gen_m) + "_r" + std::to_string(r) + ".txt";
          batchcg::write_instance_file(batchcg::generate_instance(spec, r), name);
          std::cout << name << "\n";
        }
      }
    } else if (*solve) {
      batchcg::Instance inst = load_instance(solve_path, solve_m);
      batchcg::CgConfig config = batchcg::CgConfig::defaults_for(inst.machines);
      if (solve_tl > 0) config.ub_time_limit_seconds = solve_tl;
      config.eps_neg = solve_eps;
      config.use_parallel_path = solve_parallel_path;
      batchcg::CgRelaxation relaxation = batchcg::run_cg(inst, config);
      if (!solve_dump.empty()) {
        std::ofstream dump(solve_dump);
        if (!dump)
          batchcg::fail(batchcg::Errc::IoFailure, "cannot open " + solve_dump + " for writing");
        relaxation.master->dump_lp(dump);
      }
      batchcg::CgResult result =
          batchcg::branch_and_bound(std::move(relaxation), inst, config);
      emit(result_to_json(inst, config, result, batchcg::pr_bound(inst).value), solve_out);
    } else if (*oracle) {
      batchcg::Instance inst = load_instance(oracle_path, oracle_m);
      batchcg::OracleResult result = batchcg::exact_optimum(inst, oracle_all_orders);
      json doc;
      doc["optimum"] = result.optimum;
      doc["partitions_explored"] = result.partitions_explored;
      doc["schedule"] = schedule_to_json(result.schedule);
      emit(doc, oracle_out);
    } else if (*milp) {
      batchcg::Instance inst = load_instance(milp_path, 0);
      batchcg::export_milp_file(inst, milp_out, milp_bigm);
      std::cout << milp_out << "\n";
    } else if (*pr) {
      batchcg::Instance inst = load_instance(pr_path, pr_m);
      batchcg::PrBound bound = batchcg::pr_bound(inst);
      json doc;
      doc["pr_bound"] = bound.value;
      doc["relaxation_width"] = bound.machine_count;
      emit(doc, "");
    } else if (*bench) {
      std::vector<batchcg::GenSpec> specs = batchcg::read_spec_file(bench_spec);
      batchcg::BenchConfig config;
      config.workers = bench_jobs;
      config.ub_time_limit_seconds = bench_tl;
      batchcg::ExperimentReport report = batchcg::run_experiment(specs, config);
      std::filesystem::create_directories(bench_out);
      std::ofstream summary(bench_out + "/summary.csv");
      std::ofstream detail(bench_out + "/detail.csv");
      if (!summary || !detail)
        batchcg::fail(batchcg::Errc::IoFailure, "cannot write CSVs under " + bench_out);
      batchcg::write_summary_csv(report, summary);
      batchcg::write_detail_csv(report, detail);
      for (const auto& row : report.details)
        if (row.ratio_violation)
          std::cerr << "warning: CG-LB fell below the PR bound (n=" << row.spec.n << " sigma="
                    << static_cast<int>(row.spec.sigma) << " seed=" << row.spec.seed
                    << " replica=" << row.replica << "); see detail.csv\n";
      std::cout << bench_out << "/summary.csv\n" << bench_out << "/detail.csv\n";
    }
  } catch (const batchcg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
