#include "rankgauge/rescale.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rankgauge/errors.hpp"
#include "rankgauge/parallel.hpp"
#include "rankgauge/rng.hpp"
#include "rankgauge/studentized_range.hpp"
#include "rankgauge/zhang.hpp"

namespace rankgauge {
namespace {

bool all_equal(const Eigen::VectorXd& v) {
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (v[i] != v[0]) {
      return false;
    }
  }
  return true;
}

std::vector<int> indices_sorted_by_value(const Eigen::VectorXd& sigma,
                                         bool ascending) {
  std::vector<int> idx(sigma.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return ascending ? sigma[a] < sigma[b] : sigma[a] > sigma[b];
  });
  return idx;
}

// Ends-inward fill: consume the given value order, alternating right end
// then left end, so the last-consumed values meet at position ceil(n/2).
std::vector<int> ends_inward_fill(const std::vector<int>& by_value) {
  const int n = static_cast<int>(by_value.size());
  std::vector<int> perm(n);
  int left = 0;
  int right = n - 1;
  bool take_right = true;
  for (int s = 0; s < n; ++s) {
    if (take_right) {
      perm[right--] = by_value[s];
    } else {
      perm[left++] = by_value[s];
    }
    take_right = !take_right;
  }
  return perm;
}

std::vector<SetRank> identity_truth(int n) {
  std::vector<SetRank> truth(n);
  for (int i = 0; i < n; ++i) {
    truth[i] = SetRank{i + 1, i + 1};
  }
  return truth;
}

bool tukey_covers_identity(const Eigen::VectorXd& y, const Eigen::VectorXd& sigma,
                           double q) {
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
    if (below > i || above > n - 1 - i) {
      return false;
    }
  }
  return true;
}

struct TukeyRescaleState {
  Eigen::MatrixXd draws;  // replicates x n, common random numbers
  Eigen::VectorXd sigma;
  bool equal_sigma = false;
  std::int64_t tukey_samples = 0;
  std::uint64_t seed = 0;

  double quantile(double z) const {
    const int n = static_cast<int>(sigma.size());
    if (equal_sigma) {
      return quantile_exact_equal_sigma(n, z);
    }
    QuantileRequest req;
    req.sigma = sigma;
    req.alpha = z;
    req.samples = tukey_samples;
    req.seed = derive_seed(seed, StreamSalt::kQuantile);
    return quantile_mc(req);
  }

  std::int64_t hits(double z) const {
    const double q = quantile(z);
    const std::int64_t R = draws.rows();
    std::vector<unsigned char> hit(R, 0);
    parallel_for(R, [&](std::int64_t r) {
      hit[r] = tukey_covers_identity(draws.row(r).transpose(), sigma, q) ? 1 : 0;
    });
    std::int64_t total = 0;
    for (auto h : hit) {
      total += h;
    }
    return total;
  }
};

std::vector<zhang_detail::WorstCaseSummary> build_zhang_summaries(
    const Eigen::VectorXd& sigma, const std::vector<SetRank>& truth,
    std::int64_t K, std::int64_t replicates, std::uint64_t seed,
    double alpha_cap) {
  const int n = static_cast<int>(sigma.size());
  std::vector<zhang_detail::WorstCaseSummary> summaries(replicates);
  parallel_chunks(replicates, [&](std::int64_t begin, std::int64_t end) {
    Eigen::VectorXd y(n);
    for (std::int64_t r = begin; r < end; ++r) {
      Rng rng(seed, StreamSalt::kCoverageDraw, static_cast<std::uint64_t>(r));
      for (int i = 0; i < n; ++i) {
        y[i] = sigma[i] * rng.next_normal();
      }
      const std::uint64_t method_seed =
          derive_seed(seed, StreamSalt::kMethodInner, static_cast<std::uint64_t>(r));
      summaries[r] = zhang_detail::build_worst_case_summary(
          y, sigma, truth, K, derive_seed(method_seed, StreamSalt::kMethodInner),
          alpha_cap);
    }
  });
  return summaries;
}

std::int64_t zhang_hits(const std::vector<zhang_detail::WorstCaseSummary>& summaries,
                        double z, const MethodConfig& cfg) {
  const std::int64_t R = static_cast<std::int64_t>(summaries.size());
  std::vector<unsigned char> hit(R, 0);
  parallel_for(R, [&](std::int64_t r) {
    hit[r] = zhang_detail::truth_covered_at_level(summaries[r], z,
                                                  cfg.zhang_precision,
                                                  cfg.zhang_maxiter)
                 ? 1
                 : 0;
  });
  std::int64_t total = 0;
  for (auto h : hit) {
    total += h;
  }
  return total;
}

RescaleResult finish(int n, const Eigen::VectorXd& sigma, double alpha_tilde,
                     Method method, const RescaleOptions& options,
                     std::uint64_t seed, std::int64_t crn_hits,
                     std::int64_t crn_replicates) {
  RescaleResult result;
  result.alpha_tilde = alpha_tilde;
  if (options.verify_replicates > 0) {
    result.achieved = coverage_with_truth(
        Eigen::VectorXd::Zero(n), sigma, identity_truth(n), alpha_tilde, method,
        options.verify_replicates, derive_seed(seed, StreamSalt::kVerify),
        options.method_cfg);
  } else {
    result.achieved = make_coverage_estimate(crn_hits, crn_replicates, seed);
  }
  return result;
}

RescaleResult rescale_tukey(int n, const Eigen::VectorXd& sigma, double alpha,
                            const RescaleOptions& options, std::uint64_t seed) {
  TukeyRescaleState state;
  state.sigma = sigma;
  state.equal_sigma = all_equal(sigma);
  state.tukey_samples = options.method_cfg.tukey_samples;
  state.seed = seed;
  state.draws.resize(options.replicates, n);
  parallel_chunks(options.replicates, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t r = begin; r < end; ++r) {
      Rng rng(seed, StreamSalt::kCoverageDraw, static_cast<std::uint64_t>(r));
      for (int i = 0; i < n; ++i) {
        state.draws(r, i) = sigma[i] * rng.next_normal();
      }
    }
  });

  const std::int64_t R = options.replicates;
  const auto passes = [&](std::int64_t hits) {
    return static_cast<double>(hits) / static_cast<double>(R) >= 1.0 - alpha;
  };

  double z_lo = alpha;
  std::int64_t hits_lo = state.hits(z_lo);
  if (!passes(hits_lo)) {
    // Conservative by construction; an estimate below target at the nominal
    // level is Monte-Carlo noise on the boundary.
    return finish(n, sigma, alpha, Method::kTukey, options, seed, hits_lo, R);
  }
  double z_hi = 1.0 - 1.0 / 1048576.0;
  const std::int64_t hits_hi = state.hits(z_hi);
  if (passes(hits_hi)) {
    return finish(n, sigma, z_hi, Method::kTukey, options, seed, hits_hi, R);
  }
  while (z_hi - z_lo > options.tol) {
    const double mid = 0.5 * (z_lo + z_hi);
    const std::int64_t h = state.hits(mid);
    if (passes(h)) {
      z_lo = mid;
      hits_lo = h;
    } else {
      z_hi = mid;
    }
  }
  return finish(n, sigma, z_lo, Method::kTukey, options, seed, hits_lo, R);
}

RescaleResult rescale_zhang(int n, const Eigen::VectorXd& sigma, double alpha,
                            const RescaleOptions& options, std::uint64_t seed) {
  const std::int64_t K = options.method_cfg.zhang_K;
  if (K % 2 != 0) {
    throw Error("rescale_alpha: zhang rescaling requires even K");
  }
  const double z_floor = 3.0 / static_cast<double>(K);
  if (alpha <= z_floor) {
    throw ResolutionExhausted(
        "rescale_alpha: alpha itself is below the quantile resolution 3/K", K,
        z_floor, 0.0, 100 * K);
  }

  const MethodConfig& cfg = options.method_cfg;
  const std::int64_t R = options.replicates;
  const auto pass_fraction = [alpha](std::int64_t hits, std::int64_t reps) {
    return static_cast<double>(hits) / static_cast<double>(reps) >= 1.0 - alpha;
  };

  // Phase 1: coarse localization on a replicate prefix with the full level
  // range available, so the heavy per-replicate summaries of phase 2 can be
  // truncated to a narrow bracket.
  const std::int64_t R1 = std::min<std::int64_t>(R, 256);
  {
    const auto summaries =
        build_zhang_summaries(sigma, identity_truth(n), K, R1, seed, alpha);
    const std::int64_t floor_hits = zhang_hits(summaries, z_floor, cfg);
    if (!pass_fraction(floor_hits, R1)) {
      const double cov = static_cast<double>(floor_hits) / static_cast<double>(R1);
      throw ResolutionExhausted(
          "rescale_alpha: worst-case coverage at the resolution floor 3/K is "
          "below target; increase K",
          K, z_floor, cov, 100 * K);
    }
    const std::int64_t nominal_hits = zhang_hits(summaries, alpha, cfg);
    if (pass_fraction(nominal_hits, R1)) {
      // No rescaling needed at this resolution.
      return finish(n, sigma, alpha, Method::kZhang, options, seed, nominal_hits, R1);
    }
    double lo = z_floor;
    double hi = alpha;
    while (hi / lo > 4.0) {
      const double mid = std::sqrt(lo * hi);
      if (pass_fraction(zhang_hits(summaries, mid, cfg), R1)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    // Widened bracket for phase 2; the endpoints are re-tested there.
    const double lo2 = std::max(z_floor, lo / 4.0);
    const double hi2 = std::min(alpha, hi * 4.0);

    const auto refined =
        build_zhang_summaries(sigma, identity_truth(n), K, R, seed, hi2);
    double rlo = lo2;
    double rhi = hi2;
    std::int64_t hits_lo = zhang_hits(refined, rlo, cfg);
    while (!pass_fraction(hits_lo, R)) {
      // Phase-1 noise put the bracket too high; walk down within the cap.
      rhi = rlo;
      rlo = std::max(z_floor, rlo / 4.0);
      hits_lo = zhang_hits(refined, rlo, cfg);
      if (rlo == z_floor && !pass_fraction(hits_lo, R)) {
        const double cov = static_cast<double>(hits_lo) / static_cast<double>(R);
        throw ResolutionExhausted(
            "rescale_alpha: worst-case coverage at the resolution floor 3/K is "
            "below target; increase K",
            K, z_floor, cov, 100 * K);
      }
    }
    if (pass_fraction(zhang_hits(refined, rhi, cfg), R)) {
      // Root above the phase-1 bracket; fall back to the full range cap.
      if (rhi >= alpha) {
        const std::int64_t h = zhang_hits(refined, alpha, cfg);
        return finish(n, sigma, alpha, Method::kZhang, options, seed, h, R);
      }
      throw ConvergenceFailure("rescale_alpha: bracket drift between phases");
    }
    while (rhi / rlo - 1.0 > options.tol) {
      const double mid = std::sqrt(rlo * rhi);
      const std::int64_t h = zhang_hits(refined, mid, cfg);
      if (pass_fraction(h, R)) {
        rlo = mid;
        hits_lo = h;
      } else {
        rhi = mid;
      }
    }
    return finish(n, sigma, rlo, Method::kZhang, options, seed, hits_lo, R);
  }
}

}  // namespace

SigmaOrdering sigma_ordering(const Eigen::VectorXd& sigma, SigmaArrangement kind) {
  SigmaOrdering ordering;
  ordering.kind = kind;
  switch (kind) {
    case SigmaArrangement::kAscending:
      ordering.permutation = indices_sorted_by_value(sigma, true);
      break;
    case SigmaArrangement::kTreeMiddleMax:
      ordering.permutation = ends_inward_fill(indices_sorted_by_value(sigma, true));
      break;
    case SigmaArrangement::kTreeMiddleMin:
      ordering.permutation = ends_inward_fill(indices_sorted_by_value(sigma, false));
      break;
    case SigmaArrangement::kCustom:
      ordering.permutation.resize(sigma.size());
      std::iota(ordering.permutation.begin(), ordering.permutation.end(), 0);
      break;
  }
  return ordering;
}

SigmaOrdering worst_case_sigma_ordering(const Eigen::VectorXd& sigma) {
  if (sigma.size() == 0) {
    throw EmptyInput("worst_case_sigma_ordering: empty sigma");
  }
  if (all_equal(sigma)) {
    SigmaOrdering ordering;
    ordering.kind = SigmaArrangement::kTreeMiddleMax;
    ordering.permutation.resize(sigma.size());
    std::iota(ordering.permutation.begin(), ordering.permutation.end(), 0);
    return ordering;
  }
  return sigma_ordering(sigma, SigmaArrangement::kTreeMiddleMax);
}

Eigen::VectorXd apply_ordering(const Eigen::VectorXd& sigma,
                               const SigmaOrdering& ordering) {
  if (ordering.permutation.size() != static_cast<size_t>(sigma.size())) {
    throw Error("apply_ordering: permutation size mismatch");
  }
  Eigen::VectorXd out(sigma.size());
  for (Eigen::Index p = 0; p < sigma.size(); ++p) {
    out[p] = sigma[ordering.permutation[p]];
  }
  return out;
}

RescaleResult rescale_alpha(int n, const Eigen::VectorXd& sigma, double alpha,
                            Method method, const RescaleOptions& options,
                            std::uint64_t seed) {
  if (n < 2) {
    throw TooFewItems("rescale_alpha: need n >= 2");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error("rescale_alpha: alpha must be in (0,1)");
  }
  if (!(options.tol > 0.0)) {
    throw Error("rescale_alpha: tol must be > 0");
  }
  if (options.replicates < 100) {
    throw TooFewSamples("rescale_alpha: need at least 100 replicates");
  }

  Eigen::VectorXd sig;
  if (sigma.size() == 0) {
    sig = Eigen::VectorXd::Ones(n);
  } else if (sigma.size() == n) {
    sig = sigma;
    for (int i = 0; i < n; ++i) {
      if (!(sig[i] > 0.0) || !std::isfinite(sig[i])) {
        throw NonPositiveSigma("rescale_alpha: sigma must be positive and finite");
      }
    }
    if (!all_equal(sig)) {
      sig = apply_ordering(sig, worst_case_sigma_ordering(sig));
    }
  } else {
    throw Error("rescale_alpha: sigma must be empty or length n");
  }

  return method == Method::kTukey ? rescale_tukey(n, sig, alpha, options, seed)
                                  : rescale_zhang(n, sig, alpha, options, seed);
}

OrderingSearchResult brute_force_worst_ordering(const Eigen::VectorXd& sigma,
                                                double alpha, Method method,
                                                std::int64_t replicates,
                                                std::uint64_t seed,
                                                const MethodConfig& cfg) {
  const int n = static_cast<int>(sigma.size());
  if (n < 2) {
    throw TooFewItems("brute_force_worst_ordering: need n >= 2");
  }
  if (n > 7) {
    throw Error("brute_force_worst_ordering: n must be <= 7");
  }

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);

  OrderingSearchResult best;
  best.worst_coverage.p_hat = 2.0;
  do {
    // Reversal symmetry: y -> -y maps an arrangement onto its reverse.
    std::vector<int> reversed(perm.rbegin(), perm.rend());
    if (std::lexicographical_compare(reversed.begin(), reversed.end(),
                                     perm.begin(), perm.end())) {
      continue;
    }
    Eigen::VectorXd arranged(n);
    for (int p = 0; p < n; ++p) {
      arranged[p] = sigma[perm[p]];
    }
    const CoverageEstimate cov =
        coverage_with_truth(Eigen::VectorXd::Zero(n), arranged, identity_truth(n),
                            alpha, method, replicates, seed, cfg);
    ++best.arrangements_checked;
    if (cov.p_hat < best.worst_coverage.p_hat) {
      best.worst_coverage = cov;
      best.worst = SigmaOrdering{SigmaArrangement::kCustom, perm};
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace rankgauge
