#include "rankgauge/coverage.hpp"

#include <cmath>
#include <vector>

#include "rankgauge/errors.hpp"
#include "rankgauge/observations.hpp"
#include "rankgauge/parallel.hpp"
#include "rankgauge/rng.hpp"
#include "rankgauge/studentized_range.hpp"
#include "rankgauge/zhang.hpp"

namespace rankgauge {
namespace {

// Tukey coverage indicator without building Observations: the counting
// construction is order-free, so the draw can stay in item order.
bool tukey_covers(const Eigen::VectorXd& y, const Eigen::VectorXd& sigma,
                  double q, const std::vector<SetRank>& truth) {
  const int n = static_cast<int>(y.size());
  for (int i = 0; i < n; ++i) {
    int below = 0;
    int above = 0;
    for (int j = 0; j < n; ++j) {
      const double spread =
          std::sqrt(sigma[i] * sigma[i] + sigma[j] * sigma[j]) * q;
      const double diff = y[i] - y[j];
      below += (diff - spread > 0.0) ? 1 : 0;
      above += (diff + spread < 0.0) ? 1 : 0;
    }
    if (1 + below > truth[i].lower || n - above < truth[i].upper) {
      return false;
    }
  }
  return true;
}

}  // namespace

CoverageEstimate coverage_with_truth(const Eigen::VectorXd& mu,
                                     const Eigen::VectorXd& sigma,
                                     const std::vector<SetRank>& truth,
                                     double level, Method method,
                                     std::int64_t replicates, std::uint64_t seed,
                                     const MethodConfig& cfg) {
  const int n = static_cast<int>(mu.size());
  if (n == 0 || sigma.size() != mu.size() ||
      truth.size() != static_cast<size_t>(n)) {
    throw Error("coverage: mu/sigma/truth size mismatch");
  }
  if (replicates < 100) {
    throw TooFewSamples("coverage: need at least 100 replicates");
  }
  if (!(level > 0.0 && level < 1.0)) {
    throw Error("coverage: level must be in (0,1)");
  }

  double tukey_q = 0.0;
  if (method == Method::kTukey && n > 1) {
    QuantileRequest req;
    req.sigma = sigma;
    req.alpha = level;
    req.samples = cfg.tukey_samples;
    req.seed = derive_seed(seed, StreamSalt::kQuantile);
    tukey_q = studentized_range_quantile(req);
  }

  const bool zhang_fast = (method == Method::kZhang) && (cfg.zhang_K % 2 == 0);

  std::vector<unsigned char> hit(replicates, 0);
  parallel_chunks(replicates, [&](std::int64_t begin, std::int64_t end) {
    Eigen::VectorXd y(n);
    for (std::int64_t r = begin; r < end; ++r) {
      Rng rng(seed, StreamSalt::kCoverageDraw, static_cast<std::uint64_t>(r));
      for (int i = 0; i < n; ++i) {
        y[i] = mu[i] + sigma[i] * rng.next_normal();
      }
      bool covered = false;
      const std::uint64_t method_seed =
          derive_seed(seed, StreamSalt::kMethodInner, static_cast<std::uint64_t>(r));
      if (method == Method::kTukey) {
        covered = tukey_covers(y, sigma, tukey_q, truth);
      } else if (zhang_fast) {
        // Matrix stream chosen to match zhang_simultaneous_cis(seed=method_seed).
        const auto summary = zhang_detail::build_worst_case_summary(
            y, sigma, truth, cfg.zhang_K,
            derive_seed(method_seed, StreamSalt::kMethodInner), level);
        covered = zhang_detail::truth_covered_at_level(
            summary, level, cfg.zhang_precision, cfg.zhang_maxiter);
      } else {
        ZhangConfig zc;
        zc.alpha = level;
        zc.K = cfg.zhang_K;
        zc.precision = cfg.zhang_precision;
        zc.maxiter = cfg.zhang_maxiter;
        zc.seed = method_seed;
        const RankCiResult res =
            zhang_simultaneous_cis(Observations::from_values(y, sigma), zc);
        covered = true;
        // from_values keeps input order, so interval i belongs to item i.
        for (int i = 0; i < n && covered; ++i) {
          covered = res.intervals[i].contains(truth[i]);
        }
      }
      hit[r] = covered ? 1 : 0;
    }
  });

  std::int64_t hits = 0;
  for (std::int64_t r = 0; r < replicates; ++r) {
    hits += hit[r];
  }
  return make_coverage_estimate(hits, replicates, seed);
}

CoverageEstimate coverage_at(const Eigen::VectorXd& mu,
                             const Eigen::VectorXd& sigma, double level,
                             Method method, std::int64_t replicates,
                             std::uint64_t seed, const MethodConfig& cfg) {
  return coverage_with_truth(mu, sigma, set_ranks(mu), level, method, replicates,
                             seed, cfg);
}

std::vector<std::pair<double, CoverageEstimate>> epsilon_sweep(
    const Eigen::VectorXd& mu_base, const Eigen::VectorXd& sigma, double level,
    const std::vector<double>& grid, Method method, std::int64_t replicates,
    std::uint64_t seed, const MethodConfig& cfg) {
  if (grid.empty()) {
    throw EmptyInput("epsilon_sweep: empty grid");
  }
  const std::vector<SetRank> base_truth = set_ranks(mu_base);
  std::vector<std::pair<double, CoverageEstimate>> out;
  out.reserve(grid.size());
  for (size_t g = 0; g < grid.size(); ++g) {
    const double eps = grid[g];
    const Eigen::VectorXd mu = eps * mu_base;
    const std::vector<SetRank> truth = (eps == 0.0) ? base_truth : set_ranks(mu);
    out.emplace_back(eps, coverage_with_truth(
                              mu, sigma, truth, level, method, replicates,
                              derive_seed(seed, StreamSalt::kSweepPoint, g), cfg));
  }
  return out;
}

}  // namespace rankgauge
