#ifndef RANKGAUGE_TUKEY_HPP
#define RANKGAUGE_TUKEY_HPP

#include <Eigen/Core>
#include <cstdint>
#include <optional>

#include "rankgauge/observations.hpp"
#include "rankgauge/types.hpp"

namespace rankgauge {

/// Simultaneous confidence intervals for the pairwise mean differences:
/// entry (i,j) is [lower(i,j), upper(i,j)] for mu_i - mu_j, indices in the
/// sorted order of the observations.  The matrix is antisymmetric and the
/// diagonal is fixed to [0, 0] and never consulted.
struct DifferenceCis {
  Eigen::MatrixXd lower;
  Eigen::MatrixXd upper;
};

DifferenceCis difference_cis(const Observations& obs, double q);

struct TukeyConfig {
  std::int64_t quantile_samples = 100000;
  std::uint64_t seed = 42;
  /// When set, skips the quantile computation; used by the rescaler and by
  /// callers that batch many constructions at one level.
  std::optional<double> quantile_override;
};

/// Simultaneous rank CIs from the pairwise honest-significant-difference
/// tests: an item's lower rank counts the items significantly below it, the
/// upper rank discounts the ones significantly above.  Intervals are
/// reported in the original input order.
RankCiResult tukey_rank_cis(const Observations& obs, double alpha,
                            const TukeyConfig& cfg = {});

}  // namespace rankgauge

#endif  // RANKGAUGE_TUKEY_HPP
