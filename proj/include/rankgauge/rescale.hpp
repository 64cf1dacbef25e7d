#ifndef RANKGAUGE_RESCALE_HPP
#define RANKGAUGE_RESCALE_HPP

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "rankgauge/coverage.hpp"
#include "rankgauge/types.hpp"

namespace rankgauge {

enum class SigmaArrangement { kAscending, kTreeMiddleMax, kTreeMiddleMin, kCustom };

/// An assignment of standard deviations to rank positions; permutation[p] is
/// the index into the input sigma whose value sits at position p.
struct SigmaOrdering {
  SigmaArrangement kind = SigmaArrangement::kCustom;
  std::vector<int> permutation;
};

/// The coverage-minimizing arrangement: sigmas ascend from the extremes to a
/// peak at position ceil(n/2), so the smallest sigmas sit at the lowest and
/// highest ranks and the largest in the middle.  Equal sigmas return the
/// identity.
SigmaOrdering worst_case_sigma_ordering(const Eigen::VectorXd& sigma);

SigmaOrdering sigma_ordering(const Eigen::VectorXd& sigma, SigmaArrangement kind);

Eigen::VectorXd apply_ordering(const Eigen::VectorXd& sigma,
                               const SigmaOrdering& ordering);

struct RescaleOptions {
  std::int64_t replicates = 10000;
  /// Bracket tolerance: absolute in alpha for Tukey, relative for Zhang
  /// (whose roots span orders of magnitude and are bisected on a log scale).
  double tol = 0.005;
  /// Fresh-seed replicates for the achieved-coverage report; 0 reuses the
  /// bisection's common-random-number estimate at the returned level.
  std::int64_t verify_replicates = 100000;
  MethodConfig method_cfg;
};

struct RescaleResult {
  double alpha_tilde = 0.0;
  CoverageEstimate achieved;
};

/// Finds the level alpha~ whose worst-case simultaneous coverage equals
/// 1 - alpha: means all zero with assumed distinct ranks 1..n, sigmas in the
/// worst-case arrangement when unequal.  One master seed drives every
/// replicate at every probed level (common random numbers), so the bisected
/// map is a deterministic nonincreasing step function; the returned level is
/// the bracket end whose estimated coverage still reaches 1 - alpha.
/// Tukey searches (alpha, 1), Zhang (0, alpha); Zhang raises
/// ResolutionExhausted when the root lies below the 3/K quantile-resolution
/// floor of its simulated sample.
RescaleResult rescale_alpha(int n, const Eigen::VectorXd& sigma, double alpha,
                            Method method, const RescaleOptions& options,
                            std::uint64_t seed);

/// Exhaustive search over all distinct sigma arrangements (n <= 7; reversal
/// pairs collapse by symmetry): worst-case coverage of each arrangement under
/// common random numbers.  Returns the minimizing permutation.
struct OrderingSearchResult {
  SigmaOrdering worst;
  CoverageEstimate worst_coverage;
  std::int64_t arrangements_checked = 0;
};

OrderingSearchResult brute_force_worst_ordering(const Eigen::VectorXd& sigma,
                                                double alpha, Method method,
                                                std::int64_t replicates,
                                                std::uint64_t seed,
                                                const MethodConfig& cfg = {});

}  // namespace rankgauge

#endif  // RANKGAUGE_RESCALE_HPP
