#ifndef RANKGAUGE_STUDENTIZED_RANGE_HPP
#define RANKGAUGE_STUDENTIZED_RANGE_HPP

#include <Eigen/Core>
#include <cstdint>

namespace rankgauge {

enum class QuantileMethod { kMonteCarlo, kExactEqualSigma, kAuto };

/// Request for the 1-alpha quantile of max_{i<j} |Y_i - Y_j| /
/// sqrt(sigma_i^2 + sigma_j^2) over independent centered Gaussians Y with
/// the given standard deviations.
struct QuantileRequest {
  Eigen::VectorXd sigma;
  double alpha = 0.05;
  std::int64_t samples = 100000;
  std::uint64_t seed = 42;
  QuantileMethod method = QuantileMethod::kAuto;
};

/// Monte-Carlo quantile: the order statistic of rank ceil((1-alpha)*B) of B
/// simulated range statistics.  Bit-identical for a fixed request no matter
/// how many workers run the loop.  n = 1 returns 0 by convention.
double quantile_mc(const QuantileRequest& req);

/// Equal-sigma quantile by quadrature: solves P(range of n iid standard
/// normals < w) = 1 - alpha and returns w / sqrt(2).
double quantile_exact_equal_sigma(int n, double alpha);

/// P(range of n iid standard normals < w); the integrand of the classic
/// order-statistics identity, evaluated by adaptive quadrature.
double normal_range_cdf(int n, double w);

/// Dispatch: exact path when all sigmas are equal (or forced), Monte Carlo
/// otherwise.
double studentized_range_quantile(const QuantileRequest& req);

}  // namespace rankgauge

#endif  // RANKGAUGE_STUDENTIZED_RANGE_HPP
