#include "rankgauge/rankability.hpp"

#include "rankgauge/errors.hpp"
#include "rankgauge/observations.hpp"

namespace rankgauge {

double true_rankability(const Eigen::VectorXd& mu) {
  const int n = static_cast<int>(mu.size());
  if (n < 2) {
    throw TooFewItems("true_rankability: need n >= 2");
  }
  const std::vector<SetRank> ranks = set_ranks(mu);
  double total_width = 0.0;
  for (const SetRank& r : ranks) {
    total_width += r.upper - r.lower;
  }
  return 1.0 - total_width / (static_cast<double>(n) * (n - 1));
}

RankabilityEstimate estimated_rankability(std::span<const RankInterval> intervals) {
  const int n = static_cast<int>(intervals.size());
  if (n < 2) {
    throw TooFewItems("estimated_rankability: need n >= 2");
  }
  double total_width = 0.0;
  for (const RankInterval& ci : intervals) {
    total_width += ci.width();
  }
  const double estimate = 1.0 - total_width / (static_cast<double>(n) * (n - 1));
  return RankabilityEstimate{estimate, estimate, 1.0};
}

double efficiency(std::span<const RankInterval> intervals) {
  return 1.0 - estimated_rankability(intervals).estimate;
}

}  // namespace rankgauge
