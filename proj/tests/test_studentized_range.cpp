#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "rankgauge/errors.hpp"
#include "rankgauge/studentized_range.hpp"

using namespace rankgauge;

namespace {

QuantileRequest mc_request(int n, double alpha, std::int64_t samples,
                           std::uint64_t seed) {
  QuantileRequest req;
  req.sigma = Eigen::VectorXd::Ones(n);
  req.alpha = alpha;
  req.samples = samples;
  req.seed = seed;
  req.method = QuantileMethod::kMonteCarlo;
  return req;
}

// Asymptotic standard error of the empirical quantile, with the density
// taken from the quadrature CDF.
double mc_se(int n, double alpha, double q, std::int64_t samples) {
  const double w = q * std::sqrt(2.0);
  const double h = 1e-4;
  const double density_w =
      (normal_range_cdf(n, w + h) - normal_range_cdf(n, w - h)) / (2.0 * h);
  const double density_q = density_w * std::sqrt(2.0);
  return std::sqrt(alpha * (1.0 - alpha) / static_cast<double>(samples)) / density_q;
}

}  // namespace

TEST_CASE("equal-sigma quantile closed forms at n=2") {
  // Two centered normals: the statistic is |N(0,1)|.
  CHECK(quantile_exact_equal_sigma(2, 0.05) ==
        doctest::Approx(1.9599639845).epsilon(1e-7));
  CHECK(quantile_exact_equal_sigma(2, 0.5) ==
        doctest::Approx(0.6744897502).epsilon(1e-7));
}

TEST_CASE("equal-sigma quantile regression values") {
  CHECK(quantile_exact_equal_sigma(10, 0.05) ==
        doctest::Approx(3.16368358).epsilon(1e-6));
  CHECK(quantile_exact_equal_sigma(10, 0.1) ==
        doctest::Approx(2.91988884).epsilon(1e-6));
  CHECK(quantile_exact_equal_sigma(30, 0.1) ==
        doctest::Approx(3.53349239).epsilon(1e-6));
}

TEST_CASE("monte-carlo quantile agrees with the |N(0,1)| law at n=2") {
  const double q = quantile_mc(mc_request(2, 0.05, 1000000, 31));
  CHECK(std::abs(q - 1.9599639845) < 3.0 * mc_se(2, 0.05, 1.9599639845, 1000000));

  const double q99 = quantile_mc(mc_request(2, 0.99, 1000000, 32));
  CHECK(std::abs(q99 - 0.0125334695) < 3.0 * mc_se(2, 0.99, 0.0125334695, 1000000));
}

TEST_CASE("monte-carlo and quadrature paths agree at n=10" * doctest::timeout(120)) {
  const double exact = quantile_exact_equal_sigma(10, 0.05);
  const double mc = quantile_mc(mc_request(10, 0.05, 10000000, 77));
  CHECK(std::abs(mc - exact) < 3.0 * mc_se(10, 0.05, exact, 10000000));
}

TEST_CASE("quantile is monotone in alpha and n") {
  CHECK(quantile_exact_equal_sigma(10, 0.01) > quantile_exact_equal_sigma(10, 0.05));
  CHECK(quantile_exact_equal_sigma(10, 0.05) > quantile_exact_equal_sigma(10, 0.2));
  CHECK(quantile_exact_equal_sigma(20, 0.1) > quantile_exact_equal_sigma(10, 0.1));
  CHECK(quantile_exact_equal_sigma(10, 0.1) > quantile_exact_equal_sigma(5, 0.1));
}

TEST_CASE("monte-carlo quantile is exactly scale-free given the seed") {
  QuantileRequest req = mc_request(5, 0.1, 20000, 91);
  req.sigma << 0.5, 1.25, 2.0, 0.75, 3.0;
  const double q1 = quantile_mc(req);
  req.sigma *= 4.0;  // power of two: bit-identical arithmetic
  const double q4 = quantile_mc(req);
  CHECK(q1 == q4);
}

TEST_CASE("quantile request validation and conventions") {
  CHECK(quantile_mc(mc_request(1, 0.1, 10000, 1)) == 0.0);
  CHECK(quantile_exact_equal_sigma(1, 0.1) == 0.0);
  CHECK_THROWS_AS(quantile_mc(mc_request(3, 0.1, 999, 1)), TooFewSamples);
  QuantileRequest bad = mc_request(2, 0.1, 10000, 1);
  bad.sigma << 1.0, -1.0;
  CHECK_THROWS_AS(quantile_mc(bad), NonPositiveSigma);

  QuantileRequest unequal = mc_request(2, 0.1, 10000, 1);
  unequal.sigma << 1.0, 2.0;
  unequal.method = QuantileMethod::kExactEqualSigma;
  CHECK_THROWS_AS(studentized_range_quantile(unequal), Error);

  // Auto picks the quadrature path for equal sigmas.
  QuantileRequest eq = mc_request(7, 0.1, 10000, 1);
  eq.method = QuantileMethod::kAuto;
  CHECK(studentized_range_quantile(eq) ==
        doctest::Approx(quantile_exact_equal_sigma(7, 0.1)).epsilon(1e-12));
}

TEST_CASE("monte-carlo quantile is identical under any worker count") {
  const QuantileRequest req = mc_request(4, 0.1, 50000, 2718);
  setenv("RANKGAUGE_THREADS", "1", 1);
  const double serial = quantile_mc(req);
  setenv("RANKGAUGE_THREADS", "7", 1);
  const double threaded = quantile_mc(req);
  unsetenv("RANKGAUGE_THREADS");
  CHECK(serial == threaded);
}
