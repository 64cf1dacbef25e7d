// rankgauge: simultaneous confidence intervals for ranks of Gaussian means.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "rankgauge/coverage.hpp"
#include "rankgauge/errors.hpp"
#include "rankgauge/io.hpp"
#include "rankgauge/observations.hpp"
#include "rankgauge/rescale.hpp"
#include "rankgauge/rng.hpp"
#include "rankgauge/simulation.hpp"
#include "rankgauge/svg.hpp"
#include "rankgauge/tukey.hpp"
#include "rankgauge/zhang.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitInfeasible = 3;

rankgauge::Method parse_method_flag(const std::string& name) {
  if (name == "tukey") {
    return rankgauge::Method::kTukey;
  }
  if (name == "zhang") {
    return rankgauge::Method::kZhang;
  }
  throw CLI::ValidationError("--method", "must be 'tukey' or 'zhang'");
}

void report_infeasible(const rankgauge::ResolutionExhausted& e) {
  std::fprintf(stderr,
               "infeasible: %s\n"
               "  K=%lld resolves levels only down to 3/K = %g; the required "
               "level lies below that.\n"
               "  Rerun with a larger simulation size, e.g. --zhang-K %lld or "
               "more.\n",
               e.what(), static_cast<long long>(e.K), e.floor_level,
               static_cast<long long>(e.suggested_K));
}

struct RanksArgs {
  std::string csv_path;
  std::string method = "tukey";
  double alpha = 0.1;
  bool rescale = false;
  std::uint64_t seed = 42;
  std::int64_t mc_samples = 100000;
  std::int64_t zhang_k = 10000;
  std::int64_t rescale_replicates = 10000;
  std::string out = "json";
  std::string plot_path;
};

int cmd_ranks(const RanksArgs& args) {
  std::ifstream in(args.csv_path);
  if (!in) {
    std::fprintf(stderr, "error: cannot open '%s'\n", args.csv_path.c_str());
    return kExitInput;
  }
  std::vector<rankgauge::ObservationRow> rows;
  std::optional<rankgauge::Observations> parsed;
  try {
    rows = rankgauge::read_observations_csv(in);
    parsed = rankgauge::validate_observations(rows);
  } catch (const rankgauge::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  }
  const rankgauge::Observations& obs = *parsed;

  const rankgauge::Method method = parse_method_flag(args.method);
  double level = args.alpha;
  if (args.rescale && obs.size() >= 2) {
    rankgauge::RescaleOptions options;
    options.replicates = args.rescale_replicates;
    options.tol = method == rankgauge::Method::kTukey ? 0.005 : 0.05;
    options.verify_replicates = 0;
    options.method_cfg.zhang_K = args.zhang_k;
    options.method_cfg.tukey_samples = args.mc_samples;
    try {
      level = rankgauge::rescale_alpha(
                  obs.size(), obs.sigma(), args.alpha, method, options,
                  rankgauge::derive_seed(args.seed, rankgauge::StreamSalt::kRescale))
                  .alpha_tilde;
    } catch (const rankgauge::ResolutionExhausted& e) {
      report_infeasible(e);
      return kExitInfeasible;
    }
  }

  rankgauge::RankCiResult result;
  if (method == rankgauge::Method::kTukey) {
    rankgauge::TukeyConfig cfg;
    cfg.quantile_samples = args.mc_samples;
    cfg.seed = args.seed;
    result = rankgauge::tukey_rank_cis(obs, level, cfg);
  } else {
    rankgauge::ZhangConfig cfg;
    cfg.alpha = level;
    cfg.K = args.zhang_k;
    cfg.seed = args.seed;
    result = rankgauge::zhang_simultaneous_cis(obs, cfg);
  }
  result.alpha_nominal = args.alpha;
  result.alpha_effective = level;

  if (args.out == "json") {
    std::cout << rankgauge::ranks_result_json(rows, result).dump(2) << "\n";
  } else if (args.out == "tsv") {
    std::cout << rankgauge::ranks_result_tsv(rows, result);
  } else {
    std::fprintf(stderr, "error: --out must be 'json' or 'tsv'\n");
    return kExitInput;
  }

  if (!args.plot_path.empty()) {
    std::ofstream plot(args.plot_path, std::ios::binary);
    if (!plot) {
      std::fprintf(stderr, "error: cannot write '%s'\n", args.plot_path.c_str());
      return kExitInput;
    }
    plot << rankgauge::render_rank_intervals_svg(rows, result);
  }
  return kExitOk;
}

struct RescaleArgs {
  int n = 0;
  bool equal_sigma = false;
  std::string sigma_file;
  double alpha = 0.1;
  std::string method = "tukey";
  std::int64_t replicates = 10000;
  std::uint64_t seed = 42;
  std::int64_t zhang_k = 10000;
  std::int64_t mc_samples = 100000;
  std::int64_t verify_replicates = -1;
  double tol = 0.0;
};

int cmd_rescale(const RescaleArgs& args) {
  Eigen::VectorXd sigma;
  int n = args.n;
  if (!args.sigma_file.empty()) {
    std::ifstream in(args.sigma_file);
    if (!in) {
      std::fprintf(stderr, "error: cannot open '%s'\n", args.sigma_file.c_str());
      return kExitInput;
    }
    std::vector<double> values;
    double v = 0.0;
    while (in >> v) {
      values.push_back(v);
    }
    if (values.empty()) {
      std::fprintf(stderr, "error: '%s' holds no values\n", args.sigma_file.c_str());
      return kExitInput;
    }
    sigma = Eigen::Map<Eigen::VectorXd>(values.data(), values.size());
    if (n == 0) {
      n = static_cast<int>(values.size());
    } else if (n != static_cast<int>(values.size())) {
      std::fprintf(stderr, "error: --n disagrees with the sigma file length\n");
      return kExitInput;
    }
  } else if (n == 0) {
    std::fprintf(stderr, "error: give --n with --equal-sigma\n");
    return kExitInput;
  }

  const rankgauge::Method method = parse_method_flag(args.method);
  rankgauge::RescaleOptions options;
  options.replicates = args.replicates;
  options.tol = args.tol > 0.0
                    ? args.tol
                    : (method == rankgauge::Method::kTukey ? 0.005 : 0.05);
  options.verify_replicates =
      args.verify_replicates >= 0
          ? args.verify_replicates
          : (method == rankgauge::Method::kTukey ? 100000 : 0);
  options.method_cfg.zhang_K = args.zhang_k;
  options.method_cfg.tukey_samples = args.mc_samples;

  try {
    const rankgauge::RescaleResult res = rankgauge::rescale_alpha(
        n, sigma, args.alpha, method, options, args.seed);
    std::printf("method: %s\n", rankgauge::method_name(method).c_str());
    std::printf("target joint level: %.6g\n", 1.0 - args.alpha);
    std::printf("rescaled alpha: %.8g\n", res.alpha_tilde);
    std::printf("achieved worst-case coverage: %.6g (se %.3g, replicates %lld)\n",
                res.achieved.p_hat, res.achieved.std_error,
                static_cast<long long>(res.achieved.replicates));
    return kExitOk;
  } catch (const rankgauge::ResolutionExhausted& e) {
    report_infeasible(e);
    return kExitInfeasible;
  }
}

struct SimulateArgs {
  std::string config_path;
  std::string out_dir = ".";
};

int cmd_simulate(const SimulateArgs& args) {
  std::ifstream in(args.config_path);
  if (!in) {
    std::fprintf(stderr, "error: cannot open '%s'\n", args.config_path.c_str());
    return kExitInput;
  }
  rankgauge::SimulationConfig config;
  try {
    config = rankgauge::parse_simulation_config(in);
  } catch (const rankgauge::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  }
  if (config.cells.empty() && config.sweeps.empty()) {
    return kExitOk;
  }

  std::error_code ec;
  std::filesystem::create_directories(args.out_dir, ec);
  if (ec) {
    std::fprintf(stderr, "error: cannot create '%s'\n", args.out_dir.c_str());
    return kExitInput;
  }
  const std::filesystem::path out_dir(args.out_dir);

  if (!config.cells.empty()) {
    const rankgauge::TableReport report = rankgauge::run_table(config.cells);
    std::ofstream tsv(out_dir / "table.tsv", std::ios::binary);
    tsv << rankgauge::table_report_tsv(report);
    std::ofstream json(out_dir / "table.json", std::ios::binary);
    json << rankgauge::table_report_json(report).dump(2) << "\n";
    for (const rankgauge::CellResult& cell : report.cells) {
      if (cell.infeasible) {
        std::printf("cell tau=%g n=%d %s rescaled: infeasible\n", cell.spec.tau,
                    cell.spec.n, rankgauge::method_name(cell.spec.method).c_str());
      } else if (!cell.error.empty()) {
        std::printf("cell tau=%g n=%d %s: error: %s\n", cell.spec.tau, cell.spec.n,
                    rankgauge::method_name(cell.spec.method).c_str(),
                    cell.error.c_str());
      } else {
        std::printf(
            "cell tau=%g n=%d %s%s: coverage %.3f (se %.3f), efficiency %.3f\n",
            cell.spec.tau, cell.spec.n,
            rankgauge::method_name(cell.spec.method).c_str(),
            cell.spec.rescaled ? " rescaled" : "", cell.coverage.p_hat,
            cell.coverage.std_error, cell.efficiency);
      }
    }
  }

  for (const rankgauge::SweepSpec& spec : config.sweeps) {
    const rankgauge::SweepResult result = rankgauge::run_sweep(spec);
    std::ofstream csv(out_dir / (spec.name + ".csv"), std::ios::binary);
    csv << rankgauge::sweep_result_csv(result);
    if (result.infeasible) {
      std::printf("sweep %s: infeasible: %s\n", spec.name.c_str(),
                  result.error.c_str());
    } else {
      std::printf("sweep %s: %zu points written\n", spec.name.c_str(),
                  result.points.size());
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simultaneous confidence intervals for ranks of Gaussian means"};
  app.require_subcommand(1);

  RanksArgs ranks;
  CLI::App* ranks_cmd =
      app.add_subcommand("ranks", "Rank CIs and rankability for a CSV of id,y,sigma");
  ranks_cmd->add_option("csv", ranks.csv_path, "input CSV path")->required();
  ranks_cmd->add_option("--method", ranks.method, "tukey|zhang");
  ranks_cmd->add_option("--alpha", ranks.alpha, "joint significance level")
      ->check(CLI::Range(1e-9, 0.999999));
  ranks_cmd->add_flag("--rescale", ranks.rescale,
                      "rescale the level to the worst-case configuration");
  ranks_cmd->add_option("--seed", ranks.seed, "master seed");
  ranks_cmd->add_option("--mc-samples", ranks.mc_samples,
                        "samples for the critical-value Monte Carlo");
  ranks_cmd->add_option("--zhang-K", ranks.zhang_k, "simulated samples for zhang");
  ranks_cmd->add_option("--rescale-replicates", ranks.rescale_replicates,
                        "coverage replicates per rescale bisection step");
  ranks_cmd->add_option("--out", ranks.out, "json|tsv (stdout)");
  ranks_cmd->add_option("--plot", ranks.plot_path, "write an SVG interval chart");

  RescaleArgs rescale;
  CLI::App* rescale_cmd =
      app.add_subcommand("rescale", "Worst-case rescaled significance level");
  rescale_cmd->add_option("--n", rescale.n, "number of items");
  rescale_cmd->add_flag("--equal-sigma", rescale.equal_sigma,
                        "all standard deviations equal");
  rescale_cmd->add_option("--sigma-file", rescale.sigma_file,
                          "file with one sigma per line");
  rescale_cmd->add_option("--alpha", rescale.alpha, "target significance level")
      ->check(CLI::Range(1e-9, 0.999999));
  rescale_cmd->add_option("--method", rescale.method, "tukey|zhang");
  rescale_cmd->add_option("--replicates", rescale.replicates,
                          "coverage replicates per bisection step");
  rescale_cmd->add_option("--seed", rescale.seed, "master seed");
  rescale_cmd->add_option("--zhang-K", rescale.zhang_k,
                          "simulated samples for zhang");
  rescale_cmd->add_option("--mc-samples", rescale.mc_samples,
                          "samples for the critical-value Monte Carlo");
  rescale_cmd->add_option("--verify-replicates", rescale.verify_replicates,
                          "fresh replicates for the achieved-coverage report");
  rescale_cmd->add_option("--tol", rescale.tol, "bracket tolerance");

  SimulateArgs simulate;
  CLI::App* simulate_cmd =
      app.add_subcommand("simulate", "Run a coverage study from a config file");
  simulate_cmd->add_option("config", simulate.config_path, "config path")->required();
  simulate_cmd->add_option("--out-dir", simulate.out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (ranks_cmd->parsed()) {
      return cmd_ranks(ranks);
    }
    if (rescale_cmd->parsed()) {
      return cmd_rescale(rescale);
    }
    if (simulate_cmd->parsed()) {
      return cmd_simulate(simulate);
    }
  } catch (const rankgauge::ResolutionExhausted& e) {
    report_infeasible(e);
    return kExitInfeasible;
  } catch (const rankgauge::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 1;
  }
  return kExitOk;
}
