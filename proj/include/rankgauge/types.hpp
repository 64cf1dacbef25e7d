#ifndef RANKGAUGE_TYPES_HPP
#define RANKGAUGE_TYPES_HPP

#include <cmath>
#include <cstdint>
#include <vector>

namespace rankgauge {

enum class Method { kTukey, kZhang };

/// True rank set [lower, upper] of one mean; equal means share the same set.
struct SetRank {
  int lower = 1;
  int upper = 1;

  friend bool operator==(const SetRank&, const SetRank&) = default;
};

/// Confidence interval [lower, upper] subset of {1..n} for one item's rank.
struct RankInterval {
  int lower = 1;
  int upper = 1;

  int width() const { return upper - lower; }
  bool contains(const SetRank& r) const {
    return lower <= r.lower && r.upper <= upper;
  }

  friend bool operator==(const RankInterval&, const RankInterval&) = default;
};

/// Result of a simultaneous rank-CI construction, reported in the original
/// input order of the observations.
struct RankCiResult {
  Method method = Method::kTukey;
  double alpha_nominal = 0.0;
  /// After rescaling; equals alpha_nominal otherwise.
  double alpha_effective = 0.0;
  std::vector<RankInterval> intervals;
  /// Tukey only: the Studentized-range critical value used.  NaN for Zhang.
  double quantile_used = std::nan("");
  /// Zhang only: the pointwise level selected by the bisection.  NaN for Tukey.
  double beta_used = std::nan("");
  /// Zhang only: estimated joint coverage on the shared simulation matrix.
  double zhang_coverage = std::nan("");
  std::uint64_t seed = 0;
};

/// Monte-Carlo estimate of a simultaneous coverage probability.
struct CoverageEstimate {
  double p_hat = 0.0;
  std::int64_t replicates = 0;
  double std_error = 0.0;
  std::uint64_t seed = 0;
};

inline CoverageEstimate make_coverage_estimate(std::int64_t hits,
                                               std::int64_t replicates,
                                               std::uint64_t seed) {
  const double p = static_cast<double>(hits) / static_cast<double>(replicates);
  return CoverageEstimate{
      p, replicates,
      std::sqrt(p * (1.0 - p) / static_cast<double>(replicates)), seed};
}

}  // namespace rankgauge

#endif  // RANKGAUGE_TYPES_HPP
