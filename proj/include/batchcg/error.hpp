#pragma once

#include <stdexcept>
#include <string>

namespace batchcg {

enum class Errc {
  EmptyInstance,
  NonPositive,
  OversizedJob,
  NotAPartition,
  CapacityViolation,
  BrokenChain,
  PartitionMismatch,
  IndexOutOfRange,
  ForeignJob,
  InvalidArc,
  Infeasible,
  NumericalFailure,
  IterationLimit,
  NoIntegerSolution,
  NonPositiveUb,
  TooLarge,
  BadSigma,
  BadSpec,
  ParseError,
  IoFailure,
};

const char* errc_name(Errc code);

// Single exception type for the library; `code` lets callers and tests
// discriminate failures without matching message strings.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace batchcg
