#include <doctest.h>

#include <fstream>
#include <sstream>

#include "batchcg/bench.hpp"
#include "support.hpp"

using namespace batchcg;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string render_instance(const Instance& inst) {
  std::ostringstream out;
  write_instance(inst, out);
  return out.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  fields.push_back(field);
  return fields;
}

}  // namespace

TEST_CASE("sigma ranges and validation") {
  CHECK(sigma_range(Sigma::S1).lo == 1);
  CHECK(sigma_range(Sigma::S1).hi == 10);
  CHECK(sigma_range(Sigma::S2).lo == 2);
  CHECK(sigma_range(Sigma::S2).hi == 8);
  CHECK(sigma_range(Sigma::S3).lo == 3);
  CHECK(sigma_range(Sigma::S3).hi == 10);
  CHECK(sigma_range(Sigma::S4).lo == 1);
  CHECK(sigma_range(Sigma::S4).hi == 5);
  CHECK_THROWS_AS(sigma_from_int(0), Error);
  CHECK_THROWS_AS(sigma_from_int(5), Error);

  GenSpec bad{.n = 5, .m = 1, .C = 8, .sigma = Sigma::S1, .seed = 1, .replicas = 1};
  CHECK_THROWS_AS(validate_spec(bad), Error);  // sigma1 sizes can exceed C=8
}

TEST_CASE("generation: ranges, determinism, always valid") {
  GenSpec spec{.n = 40, .m = 1, .C = 10, .sigma = Sigma::S4, .seed = 99, .replicas = 25};
  for (int r = 0; r < 25; ++r) {
    Instance inst = generate_instance(spec, r);
    for (const Job& job : inst.jobs) {
      CHECK(job.p >= 1);
      CHECK(job.p <= 100);
      CHECK(job.s >= 1);
      CHECK(job.s <= 5);
    }
  }
  CHECK(render_instance(generate_instance(spec, 7)) ==
        render_instance(generate_instance(spec, 7)));
  CHECK(render_instance(generate_instance(spec, 7)) !=
        render_instance(generate_instance(spec, 8)));
}

TEST_CASE("golden instances are bit-exact") {
  GenSpec g1{.n = 12, .m = 1, .C = 10, .sigma = Sigma::S1, .seed = 1001, .replicas = 1};
  CHECK(render_instance(generate_instance(g1, 0)) ==
        slurp(std::string(BATCHCG_GOLDEN_DIR) + "/g1_n12_s1_C10_m1_seed1001.txt"));
  GenSpec g2{.n = 8, .m = 2, .C = 30, .sigma = Sigma::S2, .seed = 2002, .replicas = 1};
  CHECK(render_instance(generate_instance(g2, 0)) ==
        slurp(std::string(BATCHCG_GOLDEN_DIR) + "/g2_n8_s2_C30_m2_seed2002.txt"));
  GenSpec g3{.n = 20, .m = 1, .C = 10, .sigma = Sigma::S4, .seed = 3003, .replicas = 1};
  CHECK(render_instance(generate_instance(g3, 0)) ==
        slurp(std::string(BATCHCG_GOLDEN_DIR) + "/g3_n20_s4_C10_m1_seed3003.txt"));
}

TEST_CASE("instance io: format, round trip, parse errors") {
  Instance ref = testsupport::i3();
  CHECK(render_instance(ref) == "3 1 10\n5 6\n3 5\n2 4\n");

  SplitMix64 rng(1501);
  for (int round = 0; round < 20; ++round) {
    GenSpec spec{.n = testsupport::rand_int(rng, 1, 30),
                 .m = testsupport::rand_int(rng, 1, 3),
                 .C = 10,
                 .sigma = Sigma::S1,
                 .seed = rng.next(),
                 .replicas = 1};
    Instance inst = generate_instance(spec, 0);
    std::istringstream in(render_instance(inst));
    Instance back = read_instance(in);
    CHECK(render_instance(back) == render_instance(inst));
  }

  auto expect_parse_error = [](const std::string& text) {
    std::istringstream in(text);
    CHECK_THROWS_AS(read_instance(in), Error);
  };
  expect_parse_error("");
  expect_parse_error("2 1\n5 6\n3 5\n");        // short header
  expect_parse_error("2 1 10\n5 6\n");          // missing job line
  expect_parse_error("2 1 10\n5\n3 5\n");       // short job line
  expect_parse_error("2 1 10\n5 6 1\n3 5\n");   // long job line
  expect_parse_error("2 1 10\n5 six\n3 5\n");   // not a number
  expect_parse_error("1 1 10\n5 11\n");         // oversized job surfaces on read
}

TEST_CASE("spec file parsing") {
  std::string path = "/tmp/batchcg_specs_test.json";
  {
    std::ofstream out(path);
    out << R"([{"n": 4, "m": 1, "C": 10, "sigma": 4, "seed": 7, "replicas": 2},
               {"n": 3, "sigma": 2, "C": 12, "seed": 8, "replicas": 1}])";
  }
  auto specs = read_spec_file(path);
  REQUIRE(specs.size() == 2);
  CHECK(specs[0].n == 4);
  CHECK(specs[0].sigma == Sigma::S4);
  CHECK(specs[1].C == 12);
  CHECK(specs[1].m == 1);

  {
    std::ofstream out(path);
    out << R"({"n": 4})";
  }
  CHECK_THROWS_AS(read_spec_file(path), Error);
  CHECK_THROWS_AS(read_spec_file("/nonexistent/specs.json"), Error);
}

TEST_CASE("run_experiment: aggregates recompute from the detail rows") {
  std::vector<GenSpec> specs = {
      GenSpec{.n = 6, .m = 1, .C = 10, .sigma = Sigma::S4, .seed = 42, .replicas = 4},
      GenSpec{.n = 5, .m = 2, .C = 10, .sigma = Sigma::S2, .seed = 43, .replicas = 3}};
  BenchConfig config;
  config.ub_time_limit_seconds = 10.0;
  ExperimentReport report = run_experiment(specs, config);
  REQUIRE(report.details.size() == 7);
  REQUIRE(report.summary.size() == 2);

  std::size_t offset = 0;
  for (std::size_t s = 0; s < specs.size(); ++s) {
    const ReportRow& row = report.summary[s];
    CHECK_FALSE(row.partial);
    double gap_sum = 0, ratio_sum = 0, worst = 0, best = 1e30;
    int opt = 0;
    for (int r = 0; r < specs[s].replicas; ++r) {
      const DetailRow& detail = report.details[offset + static_cast<std::size_t>(r)];
      REQUIRE(detail.error.empty());
      REQUIRE(detail.result.has_value());
      REQUIRE(detail.result->converged);
      double gap = *detail.result->gap_percent;
      gap_sum += gap;
      worst = std::max(worst, gap);
      best = std::min(best, gap);
      ratio_sum += detail.result->cg_lb / detail.pr;
      if (detail.result->certified_optimal) ++opt;
      // tiny instances: CG-LB should dominate the preemptive bound
      CHECK(detail.result->cg_lb >= detail.pr - 1e-6);
    }
    int n = specs[s].replicas;
    CHECK(row.gap_avg == doctest::Approx(gap_sum / n).epsilon(1e-12));
    CHECK(row.gap_worst == doctest::Approx(worst).epsilon(1e-12));
    CHECK(row.gap_best == doctest::Approx(best).epsilon(1e-12));
    CHECK(row.ratio_avg == doctest::Approx(ratio_sum / n).epsilon(1e-12));
    CHECK(row.opt_count == opt);
    offset += static_cast<std::size_t>(specs[s].replicas);
  }

  // CSV schema: header plus one line per detail row / summary row
  std::ostringstream detail_csv;
  write_detail_csv(report, detail_csv);
  std::istringstream detail_in(detail_csv.str());
  std::string line;
  REQUIRE(std::getline(detail_in, line));
  auto header = split_csv_line(line);
  CHECK(header.size() == 22);
  CHECK(header[0] == "n");
  CHECK(header[6] == "cg_lb");
  CHECK(header.back() == "error");
  int rows = 0;
  while (std::getline(detail_in, line)) {
    CHECK(split_csv_line(line).size() == header.size());
    ++rows;
  }
  CHECK(rows == 7);

  std::ostringstream summary_csv;
  write_summary_csv(report, summary_csv);
  std::istringstream summary_in(summary_csv.str());
  REQUIRE(std::getline(summary_in, line));
  CHECK(split_csv_line(line).size() == 16);
  rows = 0;
  while (std::getline(summary_in, line)) ++rows;
  CHECK(rows == 2);
}

TEST_CASE("run_experiment: worker pool matches serial results") {
  std::vector<GenSpec> specs = {
      GenSpec{.n = 5, .m = 1, .C = 10, .sigma = Sigma::S1, .seed = 77, .replicas = 6}};
  BenchConfig serial;
  serial.ub_time_limit_seconds = 10.0;
  BenchConfig pooled = serial;
  pooled.workers = 4;
  ExperimentReport a = run_experiment(specs, serial);
  ExperimentReport b = run_experiment(specs, pooled);
  REQUIRE(a.details.size() == b.details.size());
  for (std::size_t t = 0; t < a.details.size(); ++t) {
    REQUIRE(a.details[t].result.has_value());
    REQUIRE(b.details[t].result.has_value());
    CHECK(a.details[t].result->cg_lb == b.details[t].result->cg_lb);
    CHECK(*a.details[t].result->cg_ub == *b.details[t].result->cg_ub);
  }
}

TEST_CASE("empty spec list yields header-only CSVs") {
  ExperimentReport report = run_experiment({}, BenchConfig{});
  std::ostringstream summary, detail;
  write_summary_csv(report, summary);
  write_detail_csv(report, detail);
  CHECK(summary.str().find('\n') == summary.str().size() - 1);
  CHECK(detail.str().find('\n') == detail.str().size() - 1);
}

TEST_CASE("csv doubles round-trip") {
  SplitMix64 rng(1502);
  for (int round = 0; round < 200; ++round) {
    double value = testsupport::rand_double(rng, -1e6, 1e6);
    CHECK(std::stod(csv_double(value)) == value);
  }
}
