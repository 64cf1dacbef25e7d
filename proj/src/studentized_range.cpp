#include "rankgauge/studentized_range.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rankgauge/errors.hpp"
#include "rankgauge/parallel.hpp"
#include "rankgauge/rng.hpp"
#include "rankgauge/stats.hpp"

namespace rankgauge {
namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error("alpha must be in (0,1)");
  }
}

bool all_equal(const Eigen::VectorXd& sigma) {
  for (Eigen::Index i = 1; i < sigma.size(); ++i) {
    if (sigma[i] != sigma[0]) {
      return false;
    }
  }
  return true;
}

}  // namespace

double quantile_mc(const QuantileRequest& req) {
  check_alpha(req.alpha);
  const int n = static_cast<int>(req.sigma.size());
  if (n == 0) {
    throw EmptyInput("quantile_mc: empty sigma");
  }
  if (n == 1) {
    return 0.0;  // statistic undefined; callers short-circuit to [1,1]
  }
  if (req.samples < 1000) {
    throw TooFewSamples("quantile_mc: need at least 1000 samples");
  }
  for (int i = 0; i < n; ++i) {
    if (!(req.sigma[i] > 0.0) || !std::isfinite(req.sigma[i])) {
      throw NonPositiveSigma("quantile_mc: sigma must be positive and finite");
    }
  }

  // Pairwise denominators hoisted out of the replicate loop.
  Eigen::MatrixXd inv_scale(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      inv_scale(i, j) =
          1.0 / std::sqrt(req.sigma[i] * req.sigma[i] + req.sigma[j] * req.sigma[j]);
    }
  }

  const std::int64_t B = req.samples;
  std::vector<double> w(B);
  parallel_chunks(B, [&](std::int64_t begin, std::int64_t end) {
    std::vector<double> draw(n);
    for (std::int64_t b = begin; b < end; ++b) {
      Rng rng(req.seed, StreamSalt::kQuantile, static_cast<std::uint64_t>(b));
      for (int i = 0; i < n; ++i) {
        draw[i] = req.sigma[i] * rng.next_normal();
      }
      double best = 0.0;
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          const double v = std::abs(draw[i] - draw[j]) * inv_scale(i, j);
          best = std::max(best, v);
        }
      }
      w[b] = best;
    }
  });

  // Upper order statistic ceil((1-alpha)B): errs on the conservative side.
  std::int64_t rank = static_cast<std::int64_t>(
      std::ceil((1.0 - req.alpha) * static_cast<double>(B)));
  rank = std::clamp<std::int64_t>(rank, 1, B);
  std::nth_element(w.begin(), w.begin() + (rank - 1), w.end());
  return w[rank - 1];
}

double normal_range_cdf(int n, double w) {
  if (w <= 0.0) {
    return 0.0;
  }
  const auto integrand = [n, w](double z) {
    const double inner = normal_cdf(z) - normal_cdf(z - w);
    return normal_pdf(z) * std::pow(inner, n - 1);
  };
  // phi(z) kills the integrand beyond |z| ~ 14 far below the tolerance.
  return static_cast<double>(n) * integrate(integrand, -14.0, 14.0 + 0.0, 1e-10);
}

double quantile_exact_equal_sigma(int n, double alpha) {
  check_alpha(alpha);
  if (n < 1) {
    throw EmptyInput("quantile_exact_equal_sigma: n must be >= 1");
  }
  if (n == 1) {
    return 0.0;
  }

  double hi = 2.0;
  int grow = 0;
  while (normal_range_cdf(n, hi) < 1.0 - alpha) {
    hi *= 2.0;
    if (++grow > 10) {
      throw ConvergenceFailure("quantile_exact_equal_sigma: bracket failed");
    }
  }
  const double w =
      bisect_monotone([n](double x) { return normal_range_cdf(n, x); },
                      1.0 - alpha, 0.0, hi, 1e-8);
  constexpr double kInvSqrt2 = 0.7071067811865476;
  return w * kInvSqrt2;
}

double studentized_range_quantile(const QuantileRequest& req) {
  const int n = static_cast<int>(req.sigma.size());
  switch (req.method) {
    case QuantileMethod::kExactEqualSigma:
      if (!all_equal(req.sigma)) {
        throw Error("ExactEqualSigma requires all sigmas equal");
      }
      return quantile_exact_equal_sigma(n, req.alpha);
    case QuantileMethod::kMonteCarlo:
      return quantile_mc(req);
    case QuantileMethod::kAuto:
      if (n >= 1 && all_equal(req.sigma)) {
        return quantile_exact_equal_sigma(n, req.alpha);
      }
      return quantile_mc(req);
  }
  throw Error("unreachable quantile method");
}

}  // namespace rankgauge
