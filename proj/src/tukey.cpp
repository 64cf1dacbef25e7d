#include "rankgauge/tukey.hpp"

#include <cmath>

#include "rankgauge/errors.hpp"
#include "rankgauge/studentized_range.hpp"

namespace rankgauge {

DifferenceCis difference_cis(const Observations& obs, double q) {
  if (q < 0.0) {
    throw Error("difference_cis: q must be >= 0");
  }
  const int n = obs.size();
  const Eigen::VectorXd& y = obs.y();
  const Eigen::VectorXd& s = obs.sigma();
  DifferenceCis cis{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        continue;
      }
      const double diff = y[i] - y[j];
      const double half = std::sqrt(s[i] * s[i] + s[j] * s[j]) * q;
      cis.lower(i, j) = diff - half;
      cis.upper(i, j) = diff + half;
    }
  }
  return cis;
}

RankCiResult tukey_rank_cis(const Observations& obs, double alpha,
                            const TukeyConfig& cfg) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error("tukey_rank_cis: alpha must be in (0,1)");
  }
  if (cfg.quantile_override && *cfg.quantile_override < 0.0) {
    throw Error("tukey_rank_cis: quantile override must be >= 0");
  }
  const int n = obs.size();

  RankCiResult result;
  result.method = Method::kTukey;
  result.alpha_nominal = alpha;
  result.alpha_effective = alpha;
  result.seed = cfg.seed;

  double q = 0.0;
  if (cfg.quantile_override) {
    q = *cfg.quantile_override;
  } else if (n > 1) {
    QuantileRequest req;
    req.sigma = obs.sigma();
    req.alpha = alpha;
    req.samples = cfg.quantile_samples;
    req.seed = cfg.seed;
    q = studentized_range_quantile(req);
  }
  result.quantile_used = q;

  const Eigen::VectorXd& y = obs.y();
  const Eigen::VectorXd& s = obs.sigma();
  result.intervals.assign(n, RankInterval{1, n});
  for (int i = 0; i < n; ++i) {
    int below = 0;
    int above = 0;
    for (int j = 0; j < n; ++j) {
      const double spread = std::sqrt(s[i] * s[i] + s[j] * s[j]) * q;
      const double diff = y[i] - y[j];
      // Strict inequalities: a statistic exactly at the critical value is
      // not a rejection.
      if (diff - spread > 0.0) {
        ++below;
      }
      if (diff + spread < 0.0) {
        ++above;
      }
    }
    result.intervals[obs.sort_order()[i]] = RankInterval{1 + below, n - above};
  }
  return result;
}

}  // namespace rankgauge
