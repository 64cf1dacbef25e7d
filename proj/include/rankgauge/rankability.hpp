#ifndef RANKGAUGE_RANKABILITY_HPP
#define RANKGAUGE_RANKABILITY_HPP

#include <Eigen/Core>
#include <span>

#include "rankgauge/types.hpp"

namespace rankgauge {

/// Rankability of a mean vector: one minus the normalized total width of the
/// true rank sets; equivalently the probability that two items picked at
/// random have different ranks.  1 for all-distinct means, 0 for a full tie.
double true_rankability(const Eigen::VectorXd& mu);

struct RankabilityEstimate {
  double estimate = 0.0;
  double ci_lower = 0.0;
  double ci_upper = 1.0;
};

/// Estimated rankability from simultaneous rank CIs at joint level 1-alpha;
/// [estimate, 1] is then a 1-alpha confidence interval for the true
/// rankability.  Simultaneity of the input intervals is the caller's
/// responsibility.
RankabilityEstimate estimated_rankability(std::span<const RankInterval> intervals);

/// Average normalized CI width, 1 - estimated rankability; the efficiency
/// column of the simulation tables (smaller is better).
double efficiency(std::span<const RankInterval> intervals);

}  // namespace rankgauge

#endif  // RANKGAUGE_RANKABILITY_HPP
