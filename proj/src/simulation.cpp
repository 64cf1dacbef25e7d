#include "rankgauge/simulation.hpp"

#include <cmath>
#include <map>
#include <tuple>

#include "rankgauge/coverage.hpp"
#include "rankgauge/errors.hpp"
#include "rankgauge/observations.hpp"
#include "rankgauge/parallel.hpp"
#include "rankgauge/rankability.hpp"
#include "rankgauge/rescale.hpp"
#include "rankgauge/rng.hpp"
#include "rankgauge/studentized_range.hpp"
#include "rankgauge/tukey.hpp"
#include "rankgauge/zhang.hpp"

namespace rankgauge {
namespace {

double compute_rescaled_level(const SimulationSpec& spec) {
  RescaleOptions options;
  options.replicates = spec.rescale_replicates;
  options.tol = spec.method == Method::kTukey ? 0.005 : 0.05;
  options.verify_replicates = 0;
  options.method_cfg.zhang_K = spec.zhang_K;
  options.method_cfg.tukey_samples = spec.tukey_B;
  const RescaleResult res =
      rescale_alpha(spec.n, Eigen::VectorXd(), spec.alpha, spec.method, options,
                    derive_seed(spec.seed, StreamSalt::kRescale));
  return res.alpha_tilde;
}

}  // namespace

CellResult run_cell(const SimulationSpec& spec,
                    std::optional<double> alpha_effective) {
  CellResult cell;
  cell.spec = spec;
  if (spec.n < 2 || spec.tau <= 0.0 || spec.center_draws < 1 ||
      spec.alpha <= 0.0 || spec.alpha >= 1.0) {
    throw Error("run_cell: invalid simulation spec");
  }

  double level = spec.alpha;
  if (spec.rescaled) {
    try {
      level = alpha_effective ? *alpha_effective : compute_rescaled_level(spec);
    } catch (const ResolutionExhausted& e) {
      cell.infeasible = true;
      cell.error = e.what();
      return cell;
    }
  }
  cell.alpha_effective = level;

  const int n = spec.n;
  const Eigen::VectorXd sigma = Eigen::VectorXd::Ones(n);

  double tukey_q = 0.0;
  if (spec.method == Method::kTukey) {
    tukey_q = quantile_exact_equal_sigma(n, level);
  }

  const std::int64_t draws = spec.center_draws;
  std::vector<unsigned char> hit(draws, 0);
  std::vector<double> eff(draws, 0.0);

  parallel_chunks(draws, [&](std::int64_t begin, std::int64_t end) {
    Eigen::VectorXd mu(n);
    Eigen::VectorXd y(n);
    for (std::int64_t d = begin; d < end; ++d) {
      Rng center_rng(spec.seed, StreamSalt::kCenterDraw,
                     static_cast<std::uint64_t>(d));
      for (int i = 0; i < n; ++i) {
        mu[i] = spec.tau * center_rng.next_normal();
      }
      Rng data_rng(spec.seed, StreamSalt::kDataDraw, static_cast<std::uint64_t>(d));
      for (int i = 0; i < n; ++i) {
        y[i] = mu[i] + data_rng.next_normal();
      }

      const std::vector<SetRank> truth = set_ranks(mu);
      const Observations obs = Observations::from_values(y, sigma);

      RankCiResult cis;
      if (spec.method == Method::kTukey) {
        TukeyConfig tc;
        tc.quantile_override = tukey_q;
        tc.seed = spec.seed;
        cis = tukey_rank_cis(obs, level, tc);
      } else {
        ZhangConfig zc;
        zc.alpha = level;
        zc.K = spec.zhang_K;
        zc.seed = derive_seed(spec.seed, StreamSalt::kMethodInner,
                              static_cast<std::uint64_t>(d));
        cis = zhang_simultaneous_cis(obs, zc);
      }

      bool covered = true;
      for (int i = 0; i < n && covered; ++i) {
        covered = cis.intervals[i].contains(truth[i]);
      }
      hit[d] = covered ? 1 : 0;
      eff[d] = efficiency(cis.intervals);
    }
  });

  std::int64_t hits = 0;
  for (std::int64_t d = 0; d < draws; ++d) {
    hits += hit[d];
  }
  cell.coverage = make_coverage_estimate(hits, draws, spec.seed);

  double mean = 0.0;
  for (std::int64_t d = 0; d < draws; ++d) {
    mean += eff[d];
  }
  mean /= static_cast<double>(draws);
  double var = 0.0;
  for (std::int64_t d = 0; d < draws; ++d) {
    var += (eff[d] - mean) * (eff[d] - mean);
  }
  var = draws > 1 ? var / static_cast<double>(draws - 1) : 0.0;
  cell.efficiency = mean;
  cell.efficiency_se = std::sqrt(var / static_cast<double>(draws));
  return cell;
}

SweepResult run_sweep(const SweepSpec& spec) {
  SweepResult result;
  result.spec = spec;
  if (spec.n < 2 || spec.epsilon_grid.empty()) {
    throw Error("run_sweep: invalid sweep spec");
  }

  Eigen::VectorXd mu_base = spec.mu_base;
  if (mu_base.size() == 0) {
    mu_base = Eigen::VectorXd::LinSpaced(spec.n, 1.0, static_cast<double>(spec.n));
  }
  Eigen::VectorXd sigma =
      spec.sigma.size() == 0 ? Eigen::VectorXd::Ones(spec.n) : spec.sigma;
  if (mu_base.size() != spec.n || sigma.size() != spec.n) {
    throw Error("run_sweep: mu_base/sigma must have length n");
  }
  if (spec.ordering != SigmaArrangement::kCustom) {
    sigma = apply_ordering(sigma, sigma_ordering(sigma, spec.ordering));
  }

  MethodConfig cfg;
  cfg.zhang_K = spec.zhang_K;
  cfg.tukey_samples = spec.tukey_B;

  double level = spec.alpha;
  if (spec.rescaled) {
    RescaleOptions options;
    options.replicates = spec.rescale_replicates;
    options.tol = spec.method == Method::kTukey ? 0.005 : 0.05;
    options.verify_replicates = 0;
    options.method_cfg = cfg;
    try {
      level = rescale_alpha(spec.n, sigma, spec.alpha, spec.method, options,
                            derive_seed(spec.seed, StreamSalt::kRescale))
                  .alpha_tilde;
    } catch (const ResolutionExhausted& e) {
      result.infeasible = true;
      result.error = e.what();
      return result;
    }
  }
  result.alpha_effective = level;
  result.points = epsilon_sweep(mu_base, sigma, level, spec.epsilon_grid,
                                spec.method, spec.replicates, spec.seed, cfg);
  return result;
}

TableReport run_table(std::span<const SimulationSpec> grid) {
  TableReport report;
  report.cells.reserve(grid.size());
  // Rescaled levels are shared across cells with one calibration per
  // (method, n, alpha, K, B, replicates).
  std::map<std::tuple<int, int, double, std::int64_t, std::int64_t, std::int64_t>,
           std::optional<double>>
      level_cache;
  for (const SimulationSpec& spec : grid) {
    try {
      std::optional<double> level;
      if (spec.rescaled) {
        const auto key = std::make_tuple(
            static_cast<int>(spec.method), spec.n, spec.alpha, spec.zhang_K,
            spec.tukey_B, spec.rescale_replicates);
        const auto found = level_cache.find(key);
        if (found != level_cache.end()) {
          if (!found->second.has_value()) {
            CellResult cell;
            cell.spec = spec;
            cell.infeasible = true;
            cell.error = "rescaled level infeasible at this K";
            report.cells.push_back(std::move(cell));
            continue;
          }
          level = found->second;
        } else {
          try {
            level = compute_rescaled_level(spec);
            level_cache[key] = level;
          } catch (const ResolutionExhausted& e) {
            level_cache[key] = std::nullopt;
            CellResult cell;
            cell.spec = spec;
            cell.infeasible = true;
            cell.error = e.what();
            report.cells.push_back(std::move(cell));
            continue;
          }
        }
      }
      report.cells.push_back(run_cell(spec, level));
    } catch (const Error& e) {
      CellResult cell;
      cell.spec = spec;
      cell.error = e.what();
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

}  // namespace rankgauge
