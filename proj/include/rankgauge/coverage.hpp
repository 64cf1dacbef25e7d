#ifndef RANKGAUGE_COVERAGE_HPP
#define RANKGAUGE_COVERAGE_HPP

#include <Eigen/Core>
#include <cstdint>
#include <utility>
#include <vector>

#include "rankgauge/types.hpp"

namespace rankgauge {

/// Per-method knobs used inside coverage simulations.
struct MethodConfig {
  std::int64_t zhang_K = 10000;
  double zhang_precision = 1e-6;
  int zhang_maxiter = 50;
  std::int64_t tukey_samples = 100000;
};

/// Simultaneous coverage of the method's CIs against explicit truth rank
/// sets: draws R datasets y ~ N(mu, diag(sigma^2)), builds CIs at the given
/// level and counts the event {truth_i subset of CI_i for all i}.
/// Replicate b draws from stream(seed, kCoverageDraw, b) and the method's
/// internal randomness from stream(seed, kMethodInner, b), which makes the
/// estimate independent of the worker count.
CoverageEstimate coverage_with_truth(const Eigen::VectorXd& mu,
                                     const Eigen::VectorXd& sigma,
                                     const std::vector<SetRank>& truth,
                                     double level, Method method,
                                     std::int64_t replicates, std::uint64_t seed,
                                     const MethodConfig& cfg = {});

/// coverage_with_truth with truth = set_ranks(mu).
CoverageEstimate coverage_at(const Eigen::VectorXd& mu,
                             const Eigen::VectorXd& sigma, double level,
                             Method method, std::int64_t replicates,
                             std::uint64_t seed, const MethodConfig& cfg = {});

/// Coverage along the ray eps * mu_base.  At eps = 0 the means tie; the
/// no-ties convention applies and the truth stays the rank sets of mu_base
/// itself (distinct ranks for distinct mu_base).
std::vector<std::pair<double, CoverageEstimate>> epsilon_sweep(
    const Eigen::VectorXd& mu_base, const Eigen::VectorXd& sigma, double level,
    const std::vector<double>& grid, Method method, std::int64_t replicates,
    std::uint64_t seed, const MethodConfig& cfg = {});

}  // namespace rankgauge

#endif  // RANKGAUGE_COVERAGE_HPP
