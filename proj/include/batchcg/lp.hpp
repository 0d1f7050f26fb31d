#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace batchcg {

inline constexpr double kLpInfinity = 1e30;

// Column-major sparse LP: min c'x s.t. Ax = b, lower <= x <= upper.
struct LpProblem {
  int rows = 0;
  std::vector<double> rhs;
  std::vector<std::vector<std::pair<int, double>>> cols;  // (row, coefficient)
  std::vector<double> obj;
  std::vector<double> lower;
  std::vector<double> upper;

  int num_cols() const { return static_cast<int>(cols.size()); }
  int add_col(double cost, double lo, double hi, std::vector<std::pair<int, double>> entries) {
    cols.push_back(std::move(entries));
    obj.push_back(cost);
    lower.push_back(lo);
    upper.push_back(hi);
    return num_cols() - 1;
  }
};

enum class LpStatus { Optimal, Infeasible, IterationLimit, Unbounded, NumericalFailure };

enum class VarStatus : std::uint8_t { AtLower, AtUpper, Basic };

// Basis snapshot for warm starts. Basis entries are structural column
// indices, or negative codes for the solver's own artificial columns
// (-1-row for the plus artificial, -1-rows-row for the minus one), so the
// snapshot survives column additions.
struct SimplexState {
  bool valid = false;
  std::vector<int> basis;
  std::vector<VarStatus> col_status;  // structural columns only
};

struct LpResult {
  LpStatus status = LpStatus::NumericalFailure;
  double objective = 0.0;
  std::vector<double> x;  // structural primal values
  std::vector<double> y;  // row duals
  std::int64_t iterations = 0;
};

struct SimplexOptions {
  double feas_tol = 1e-7;
  double opt_tol = 1e-9;
  double pivot_tol = 1e-8;
  std::int64_t max_iterations = 2'000'000;
  int refactor_every = 128;
};

// Seam for swapping in an external LP engine behind the master. The
// built-in engine is a bounded-variable revised simplex with a phase-1
// artificial start, Dantzig pricing and a Bland fallback on stalls.
class LpBackend {
 public:
  virtual ~LpBackend() = default;
  virtual LpResult solve(const LpProblem& problem, SimplexState& state) = 0;
};

class SimplexBackend final : public LpBackend {
 public:
  explicit SimplexBackend(SimplexOptions options = {}) : options_(options) {}
  LpResult solve(const LpProblem& problem, SimplexState& state) override;

 private:
  SimplexOptions options_;
};

}  // namespace batchcg
