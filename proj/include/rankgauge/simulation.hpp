#ifndef RANKGAUGE_SIMULATION_HPP
#define RANKGAUGE_SIMULATION_HPP

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rankgauge/rescale.hpp"
#include "rankgauge/types.hpp"

namespace rankgauge {

/// One cell of the coverage study: centers mu ~ N(0, tau^2 I_n), one
/// observation vector y ~ N(mu, I_n) per center draw, CIs at alpha (or at
/// the worst-case rescaled level), coverage checked against the rank sets
/// of mu and efficiency averaged over draws.
struct SimulationSpec {
  double tau = 1.0;
  int n = 10;
  double alpha = 0.1;
  Method method = Method::kTukey;
  bool rescaled = false;
  std::int64_t center_draws = 1000;
  std::uint64_t seed = 42;
  std::int64_t zhang_K = 10000;
  std::int64_t tukey_B = 100000;
  /// Replicates used when the rescaled level has to be computed.
  std::int64_t rescale_replicates = 10000;
};

struct CellResult {
  SimulationSpec spec;
  CoverageEstimate coverage;
  double efficiency = 0.0;
  double efficiency_se = 0.0;
  double alpha_effective = 0.0;
  bool infeasible = false;
  std::string error;
};

/// Runs one cell.  A precomputed rescaled level may be supplied to share the
/// worst-case calibration across cells with the same (n, method, alpha).
CellResult run_cell(const SimulationSpec& spec,
                    std::optional<double> alpha_effective = std::nullopt);

struct TableReport {
  std::vector<CellResult> cells;
};

/// Maps run_cell over the grid, caching rescaled levels per
/// (method, n, alpha, K) and isolating per-cell failures: an infeasible
/// rescale marks its cell and the rest of the grid still completes.
TableReport run_table(std::span<const SimulationSpec> grid);

/// Coverage-versus-separation series: the data behind the coverage-curve
/// figures.  mu_base defaults to (1..n), sigma to ones; `ordering`
/// rearranges sigma before the sweep.
struct SweepSpec {
  std::string name = "sweep";
  int n = 10;
  double alpha = 0.1;
  Method method = Method::kTukey;
  bool rescaled = false;
  std::int64_t replicates = 2000;
  std::uint64_t seed = 42;
  std::vector<double> epsilon_grid;
  Eigen::VectorXd mu_base;
  Eigen::VectorXd sigma;
  SigmaArrangement ordering = SigmaArrangement::kCustom;
  std::int64_t zhang_K = 10000;
  std::int64_t tukey_B = 100000;
  std::int64_t rescale_replicates = 10000;
};

struct SweepResult {
  SweepSpec spec;
  double alpha_effective = 0.0;
  bool infeasible = false;
  std::string error;
  std::vector<std::pair<double, CoverageEstimate>> points;
};

SweepResult run_sweep(const SweepSpec& spec);

}  // namespace rankgauge

#endif  // RANKGAUGE_SIMULATION_HPP
