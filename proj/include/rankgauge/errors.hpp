#ifndef RANKGAUGE_ERRORS_HPP
#define RANKGAUGE_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rankgauge {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyInput : Error {
  using Error::Error;
};

struct NonFiniteValue : Error {
  using Error::Error;
};

struct NonPositiveSigma : Error {
  using Error::Error;
};

struct DuplicateId : Error {
  using Error::Error;
};

struct TooFewSamples : Error {
  using Error::Error;
};

struct TooFewItems : Error {
  using Error::Error;
};

struct ConvergenceFailure : Error {
  using Error::Error;
};

/// Raised when a Monte-Carlo calibration cannot be resolved at the requested
/// sample size: the target significance level lies below the quantile
/// resolution floor of the simulated sample (roughly 3/K).  Carrying the
/// offending K and the coverage observed at the floor lets callers report
/// how much larger K would have to be.
struct ResolutionExhausted : Error {
  ResolutionExhausted(const std::string& msg, std::int64_t k, double floor_level,
                      double coverage_at_floor, std::int64_t suggested_k)
      : Error(msg),
        K(k),
        floor_level(floor_level),
        coverage_at_floor(coverage_at_floor),
        suggested_K(suggested_k) {}

  std::int64_t K;
  double floor_level;
  double coverage_at_floor;
  std::int64_t suggested_K;
};

}  // namespace rankgauge

#endif  // RANKGAUGE_ERRORS_HPP
