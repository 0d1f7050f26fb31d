#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace batchcg {

// Minimal writer for algebraic LP-format text (objective, constraints,
// bounds, binary markers). Shared by the MILP export and the master dump.
class LpWriter {
 public:
  using Terms = std::vector<std::pair<double, std::string>>;

  void set_objective(Terms terms) { objective_ = std::move(terms); }
  void add_constraint(std::string name, Terms terms, char sense, double rhs);
  void add_bound(std::string line) { bounds_.push_back(std::move(line)); }
  void mark_binary(std::string var) { binaries_.push_back(std::move(var)); }

  void write(std::ostream& out) const;

  static std::string format_number(double value);

 private:
  struct Constraint {
    std::string name;
    Terms terms;
    char sense;  // '<', '>', '='
    double rhs;
  };

  Terms objective_;
  std::vector<Constraint> constraints_;
  std::vector<std::string> bounds_;
  std::vector<std::string> binaries_;
};

}  // namespace batchcg
