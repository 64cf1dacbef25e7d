#ifndef RANKGAUGE_ZHANG_HPP
#define RANKGAUGE_ZHANG_HPP

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rankgauge/observations.hpp"
#include "rankgauge/rng.hpp"
#include "rankgauge/types.hpp"

namespace rankgauge {

/// Configuration of the Monte-Carlo simultaneous rank-CI method: K simulated
/// n-samples are shared between the pointwise CI construction and the joint
/// coverage estimate, and the pointwise level beta is bisected over
/// (0, alpha) to the largest value whose estimated joint coverage still
/// reaches 1 - alpha.
struct ZhangConfig {
  double alpha = 0.05;
  std::int64_t K = 10000;
  double precision = 1e-6;
  int maxiter = 50;
  std::uint64_t seed = 42;
};

/// K parametric-bootstrap columns y + sigma .* Z, deterministic per seed and
/// column index (so the matrix is identical under any worker count).
Eigen::MatrixXd simulate_matrix(const Observations& obs, std::int64_t K,
                                std::uint64_t seed);

/// Nearest-order-statistic quantile with ties rounded to even order
/// statistics (Hyndman-Fan type 3); input must be sorted ascending.
double quantile_type3(std::span<const double> sorted_vals, double p);

/// Pointwise rank CIs at level 1 - beta: per simulated column take the ranks
/// of the n entries, then per item the type-3 quantiles of its K simulated
/// ranks at beta/2 and 1 - beta/2.  Returned in the sorted order of obs.
std::vector<RankInterval> spiegelhalter_pointwise(const Observations& obs,
                                                  double beta,
                                                  const Eigen::MatrixXd& sim);

/// Full method: bisects beta, applies the reference fallback to the last
/// passing endpoint, and reports the CIs (original input order) together
/// with beta_used and the joint coverage estimated on the shared matrix.
/// The shared-matrix reuse is a known source of optimism in this method and
/// is preserved deliberately.
RankCiResult zhang_simultaneous_cis(const Observations& obs,
                                    const ZhangConfig& cfg);

namespace zhang_detail {

/// Raw (unclamped) 1-based type-3 order-statistic index for probability p of
/// a sample of size K.  Shared by the public quantile and the compressed
/// fast paths so both make identical tie-to-even decisions.
inline std::int64_t type3_index_raw(std::int64_t K, double p) {
  const double h = static_cast<double>(K) * p - 0.5;
  const double fj = std::floor(h);
  const std::int64_t j = static_cast<std::int64_t>(fj);
  if (h == fj && j % 2 == 0) {
    return j;
  }
  return j + 1;
}

/// Shared bisection driver mirroring the reference algorithm: pass(beta)
/// says whether the estimated joint coverage at pointwise level beta reaches
/// the target.  Stops once the bracket width is at most `precision` or after
/// `maxiter` steps, then falls back to the last passing endpoint if the
/// midpoint candidate fails.
double bisect_beta(double alpha, double precision, int maxiter,
                   const std::function<bool(double)>& pass);

/// Compressed summary of one simulated dataset: enough to replay the beta
/// bisection at any joint level z <= alpha_cap and decide whether a fixed
/// truth vector would have been covered, without keeping the n x K matrix.
/// Requires even K, where the two tail type-3 indices mirror exactly and a
/// single threshold index per column captures coverage.
struct WorstCaseSummary {
  /// Sorted ascending: per column the largest raw lower-quantile index that
  /// still covers the column; truncated to the floor(alpha_cap*K)+2 smallest.
  std::vector<std::uint32_t> column_thresholds;
  std::int64_t K = 0;
  /// Largest joint level the truncated thresholds can serve exactly.
  double level_cap = 0.0;
  /// min_i F_i(l_i) and max_i F_i(u_i - 1) over the truth rank sets.
  std::int64_t truth_a = 0;
  std::int64_t truth_b = 0;
};

/// Builds the summary for data y (+ noise scale sigma) against truth rank
/// sets aligned with y.  Simulation columns come from
/// stream(matrix_seed, kZhangColumn, column), exactly as simulate_matrix.
WorstCaseSummary build_worst_case_summary(const Eigen::VectorXd& y,
                                          const Eigen::VectorXd& sigma,
                                          const std::vector<SetRank>& truth,
                                          std::int64_t K,
                                          std::uint64_t matrix_seed,
                                          double alpha_cap);

/// Replays the method at joint level z on a summary and reports whether the
/// truth was covered by the resulting CIs.  Exact replica of
/// zhang_simultaneous_cis restricted to the coverage indicator.
bool truth_covered_at_level(const WorstCaseSummary& summary, double z,
                            double precision, int maxiter);

}  // namespace zhang_detail

}  // namespace rankgauge

#endif  // RANKGAUGE_ZHANG_HPP
