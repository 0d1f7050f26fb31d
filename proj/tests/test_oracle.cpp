#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "batchcg/oracle.hpp"
#include "support.hpp"

using namespace batchcg;
using testsupport::i3;

namespace {

// Independent batch count: recursive inclusion/exclusion with the capacity
// filter, no bitmasks.
int count_batches(const Instance& inst, int job, int size) {
  if (job > inst.n()) return 1;
  int total = count_batches(inst, job + 1, size);  // skip
  if (size + inst.job(job).s <= inst.capacity)
    total += count_batches(inst, job + 1, size + inst.job(job).s);
  return total;
}

}  // namespace

TEST_CASE("enumerate_feasible_batches") {
  Instance ref = i3();
  auto batches = enumerate_feasible_batches(ref);
  CHECK(batches.size() == 5);  // {1},{2},{3},{1,3},{2,3}
  for (const Batch& b : batches) CHECK(b.total_size <= ref.capacity);
  CHECK(std::none_of(batches.begin(), batches.end(), [](const Batch& b) {
    return b.job_ids == std::vector<int>{1, 2};
  }));

  Instance roomy = validate_instance({{1, 1}, {2, 1}, {3, 1}, {4, 1}}, 100, 1);
  CHECK(enumerate_feasible_batches(roomy).size() == 15);  // all 2^4 - 1

  Instance tight = validate_instance({{1, 10}, {2, 10}, {3, 10}}, 10, 1);
  CHECK(enumerate_feasible_batches(tight).size() == 3);  // singletons only

  std::vector<std::pair<int, int>> many(17, {1, 1});
  CHECK_THROWS_AS(enumerate_feasible_batches(validate_instance(many, 20, 1)), Error);

  SplitMix64 rng(1301);
  for (int round = 0; round < 20; ++round) {
    Instance inst = testsupport::random_instance(rng, 1, 9, 12, 1);
    CHECK(static_cast<int>(enumerate_feasible_batches(inst).size()) ==
          count_batches(inst, 1, 0) - 1);  // minus the empty set
  }
}

TEST_CASE("exact_optimum: reference values") {
  OracleResult ref = exact_optimum(i3());
  CHECK(ref.optimum == 14);
  CHECK(evaluate_schedule(ref.schedule, i3()) == 14);
  REQUIRE(ref.schedule.machines.size() == 1);
  REQUIRE(ref.schedule.machines[0].size() == 2);
  CHECK(ref.schedule.machines[0][0].job_ids == std::vector<int>{2, 3});
  CHECK(ref.schedule.machines[0][1].job_ids == std::vector<int>{1});
  CHECK(ref.partitions_explored >= 3);

  Instance one = validate_instance({{7, 1}}, 10, 1);
  CHECK(exact_optimum(one).optimum == 7);

  // two machines: ({2,3}) | ({1}) = 6 + 5
  OracleResult two = exact_optimum(i3(2));
  CHECK(two.optimum == 11);
  CHECK(evaluate_schedule(two.schedule, i3(2)) == 11);
}

TEST_CASE("exact_optimum: size guards") {
  std::vector<std::pair<int, int>> ten(10, {1, 1});
  CHECK_THROWS_AS(exact_optimum(validate_instance(ten, 10, 1)), Error);
  std::vector<std::pair<int, int>> eight(8, {1, 1});
  CHECK_THROWS_AS(exact_optimum(validate_instance(eight, 10, 2)), Error);
  CHECK_THROWS_AS(exact_optimum(validate_instance(eight, 10, 4)), Error);
}

TEST_CASE("property: Smith sequencing agrees with all-orders enumeration (n <= 6)") {
  SplitMix64 rng(1302);
  for (int round = 0; round < 60; ++round) {
    int machines = testsupport::rand_int(rng, 1, 3);
    Instance inst = testsupport::random_instance(rng, 1, 6, 10, machines);
    OracleResult smith = exact_optimum(inst, false);
    OracleResult orders = exact_optimum(inst, true);
    CHECK(smith.optimum == orders.optimum);
    CHECK(evaluate_schedule(smith.schedule, inst) == smith.optimum);
  }
}

TEST_CASE("property: more machines never hurt") {
  SplitMix64 rng(1303);
  for (int round = 0; round < 40; ++round) {
    Instance inst = testsupport::random_instance(rng, 1, 7, 10, 1);
    std::int64_t previous = exact_optimum(inst).optimum;
    for (int m = 2; m <= 3; ++m) {
      Instance wider = inst;
      wider.machines = m;
      std::int64_t value = exact_optimum(wider).optimum;
      CHECK(value <= previous);
      previous = value;
    }
  }
}

TEST_CASE("export_milp: reference structure") {
  std::ostringstream out;
  export_milp(i3(), out);
  std::string text = out.str();
  CHECK(text.find("Minimize") != std::string::npos);
  CHECK(text.find("obj: c_1 + c_2 + c_3") != std::string::npos);
  auto count = [&](const std::string& needle) {
    int hits = 0;
    for (std::size_t at = text.find(needle); at != std::string::npos;
         at = text.find(needle, at + 1))
      ++hits;
    return hits;
  };
  CHECK(count("assign_") == 3);
  CHECK(count("cap_") == 3);
  CHECK(count("ptime_") == 9);
  CHECK(count("chain_") == 3);   // chain_1 plus two links
  CHECK(count("comp_") == 9);
  CHECK(text.find("Binaries") != std::string::npos);
  // M = total work = 10; the big-M rows carry "- 10 x_i_j >= -10"
  CHECK(text.find("- 10 x_1_1 >= -10") != std::string::npos);
  CHECK(count(" x_") >= 18);
  CHECK(text.rfind("End\n") == text.size() - 4);

  // n=1: minimal model with M = p_1
  std::ostringstream single;
  export_milp(validate_instance({{7, 1}}, 10, 1), single);
  CHECK(single.str().find("- 7 x_1_1 >= -7") != std::string::npos);
}

TEST_CASE("export_milp honors an explicit big-M") {
  std::ostringstream out;
  export_milp(i3(), out, 99);
  CHECK(out.str().find("- 99 x_1_1 >= -99") != std::string::npos);
}
