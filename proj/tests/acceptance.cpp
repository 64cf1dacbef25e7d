// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Heavier than the unit tests; expect several minutes end to end.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rankgauge/coverage.hpp"
#include "rankgauge/errors.hpp"
#include "rankgauge/observations.hpp"
#include "rankgauge/rankability.hpp"
#include "rankgauge/rescale.hpp"
#include "rankgauge/rng.hpp"
#include "rankgauge/simulation.hpp"
#include "rankgauge/studentized_range.hpp"
#include "rankgauge/tukey.hpp"
#include "rankgauge/zhang.hpp"

using namespace rankgauge;

namespace {

int g_failures = 0;
std::chrono::steady_clock::time_point g_t0;

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t)
      .count();
}

void report(int criterion, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion,
              detail.c_str());
  std::fflush(stdout);
  if (!ok) {
    ++g_failures;
  }
}

template <typename... Args>
std::string fmt(const char* pattern, Args... values) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), pattern, values...);
  return buf;
}

// --- criterion 1: full-null exactness --------------------------------------

void criterion_1() {
  const auto t = std::chrono::steady_clock::now();
  const int n = 10;
  const CoverageEstimate est =
      coverage_at(Eigen::VectorXd::Zero(n), Eigen::VectorXd::Ones(n), 0.1,
                  Method::kTukey, 100000, 20250801);
  const bool ok = est.p_hat >= 0.897 && est.p_hat <= 0.903;
  report(1, ok,
         fmt("full-null coverage %.4f (se %.4f) in [0.897, 0.903], %.1fs",
             est.p_hat, est.std_error, seconds_since(t)));
}

// --- criterion 2: rescaled levels, pairwise method -------------------------

double tukey_alpha_tilde(int n, double alpha, std::uint64_t seed) {
  RescaleOptions options;
  options.replicates = 10000;
  options.tol = 0.004;
  options.verify_replicates = 0;
  return rescale_alpha(n, Eigen::VectorXd(), alpha, Method::kTukey, options, seed)
      .alpha_tilde;
}

void criterion_2(double& tukey_a10) {
  const auto t = std::chrono::steady_clock::now();
  const double a10 = tukey_alpha_tilde(10, 0.1, 111);
  const double a10_95 = tukey_alpha_tilde(10, 0.05, 112);
  const double a30 = tukey_alpha_tilde(30, 0.1, 113);
  tukey_a10 = a10;
  const bool ok = std::abs(a10 - 0.285) <= 0.02 &&
                  std::abs(a10_95 - 0.158) <= 0.02 &&
                  std::abs(a30 - 0.491) <= 0.03;
  report(2, ok,
         fmt("rescaled levels (tukey) n=10: %.4f (0.285+-0.02), n=10@95%%: %.4f "
             "(0.158+-0.02), n=30: %.4f (0.491+-0.03), %.1fs",
             a10, a10_95, a30, seconds_since(t)));
}

// --- criterion 3: rescaled levels, simulation method -----------------------

void criterion_3() {
  const auto t = std::chrono::steady_clock::now();

  RescaleOptions big;
  big.replicates = 400;
  big.tol = 0.03;
  big.verify_replicates = 0;
  big.method_cfg.zhang_K = 1000000;
  const double a10 =
      rescale_alpha(10, Eigen::VectorXd(), 0.1, Method::kZhang, big, 211)
          .alpha_tilde;
  const bool ok10 = a10 >= 0.0015 / 2.0 && a10 <= 0.0015 * 2.0;

  bool infeasible_small_k = false;
  double floor_seen = 0.0;
  try {
    RescaleOptions small;
    small.replicates = 2000;
    small.tol = 0.05;
    small.verify_replicates = 0;
    small.method_cfg.zhang_K = 10000;
    rescale_alpha(30, Eigen::VectorXd(), 0.1, Method::kZhang, small, 212);
  } catch (const ResolutionExhausted& e) {
    infeasible_small_k = true;
    floor_seen = e.floor_level;
  }

  const double a30 =
      rescale_alpha(30, Eigen::VectorXd(), 0.1, Method::kZhang, big, 213)
          .alpha_tilde;
  const bool ok30 = a30 >= 4.6e-5 / 2.0 && a30 <= 4.6e-5 * 2.0;

  report(3, ok10 && infeasible_small_k && ok30,
         fmt("rescaled levels (zhang) n=10@K=1e6: %.3g (0.0015 x/2), n=30@K=1e4: "
             "%s (floor %.2g), n=30@K=1e6: %.3g (4.6e-5 x/2), %.0fs",
             a10, infeasible_small_k ? "infeasible" : "NOT infeasible", floor_seen,
             a30, seconds_since(t)));
}

// --- criteria 4 and 5: coverage study cells ---------------------------------

SimulationSpec cell_spec(double tau, int n, Method method, bool rescaled) {
  SimulationSpec spec;
  spec.tau = tau;
  spec.n = n;
  spec.alpha = 0.1;
  spec.method = method;
  spec.rescaled = rescaled;
  spec.center_draws = 1000;
  spec.seed = 20250804;
  spec.zhang_K = 10000;
  return spec;
}

void criterion_4(double tukey_a10) {
  const auto t = std::chrono::steady_clock::now();
  const CellResult tukey_nr = run_cell(cell_spec(0.5, 10, Method::kTukey, false));
  const CellResult zhang_nr10 = run_cell(cell_spec(0.5, 10, Method::kZhang, false));
  const CellResult zhang_nr30 = run_cell(cell_spec(0.5, 30, Method::kZhang, false));
  const CellResult tukey_r =
      run_cell(cell_spec(0.5, 10, Method::kTukey, true), tukey_a10);

  const bool cov_ok = std::abs(tukey_nr.coverage.p_hat - 0.998) <= 0.005 &&
                      std::abs(zhang_nr10.coverage.p_hat - 0.468) <= 0.05 &&
                      std::abs(zhang_nr30.coverage.p_hat - 0.027) <= 0.02 &&
                      std::abs(tukey_r.coverage.p_hat - 0.961) <= 0.02;
  const bool eff_ok = std::abs(tukey_nr.efficiency - 0.990) <= 0.02 &&
                      std::abs(zhang_nr10.efficiency - 0.789) <= 0.02 &&
                      std::abs(zhang_nr30.efficiency - 0.740) <= 0.02 &&
                      std::abs(tukey_r.efficiency - 0.971) <= 0.02;
  report(4, cov_ok && eff_ok,
         fmt("tau=0.5 cells: tukey cov %.3f/eff %.3f (0.998/0.990), zhang n=10 "
             "cov %.3f/eff %.3f (0.468/0.789), zhang n=30 cov %.3f/eff %.3f "
             "(0.027/0.740), tukey rescaled cov %.3f/eff %.3f (0.961/0.971), "
             "%.0fs",
             tukey_nr.coverage.p_hat, tukey_nr.efficiency,
             zhang_nr10.coverage.p_hat, zhang_nr10.efficiency,
             zhang_nr30.coverage.p_hat, zhang_nr30.efficiency,
             tukey_r.coverage.p_hat, tukey_r.efficiency, seconds_since(t)));
}

void criterion_5(double tukey_a10) {
  const auto t = std::chrono::steady_clock::now();
  const CellResult nr = run_cell(cell_spec(2.0, 10, Method::kTukey, false));
  const CellResult r = run_cell(cell_spec(2.0, 10, Method::kTukey, true), tukey_a10);
  const bool ok = std::abs(nr.efficiency - 0.811) <= 0.03 &&
                  std::abs(r.efficiency - 0.734) <= 0.03;
  report(5, ok,
         fmt("tau=2 n=10 tukey efficiency %.3f (0.811+-0.03), rescaled %.3f "
             "(0.734+-0.03), %.1fs",
             nr.efficiency, r.efficiency, seconds_since(t)));
}

// --- criterion 6: coverage-curve shape --------------------------------------

bool min_at_zero(const std::vector<std::pair<double, CoverageEstimate>>& curve,
                 std::string& detail) {
  const auto zero = std::find_if(curve.begin(), curve.end(),
                                 [](const auto& p) { return p.first == 0.0; });
  if (zero == curve.end()) {
    detail += " [no eps=0 point]";
    return false;
  }
  bool ok = true;
  for (const auto& [eps, est] : curve) {
    if (eps == 0.0) {
      continue;
    }
    const double se = std::hypot(est.std_error, zero->second.std_error);
    if (zero->second.p_hat > est.p_hat + 3.0 * se) {
      ok = false;
      detail += fmt(" [min violated at eps=%.2f]", eps);
    }
  }
  return ok;
}

bool stays_at_target(const std::vector<std::pair<double, CoverageEstimate>>& curve,
                     double target, std::string& detail) {
  bool ok = true;
  for (const auto& [eps, est] : curve) {
    if (est.p_hat < target - 3.0 * est.std_error) {
      ok = false;
      detail += fmt(" [dip %.4f at eps=%.2f]", est.p_hat, eps);
    }
  }
  return ok;
}

void criterion_6(double tukey_a10) {
  const auto t = std::chrono::steady_clock::now();
  const int n = 10;
  const Eigen::VectorXd mu_base = Eigen::VectorXd::LinSpaced(n, 1.0, 10.0);
  const Eigen::VectorXd sigma = Eigen::VectorXd::Ones(n);
  const std::vector<double> grid9{-1.0, -0.75, -0.5, -0.25, 0.0,
                                  0.25, 0.5,   0.75, 1.0};
  const std::vector<double> grid5{-1.0, -0.5, 0.0, 0.5, 1.0};

  std::string detail;
  MethodConfig cfg;

  const auto tukey_curve =
      epsilon_sweep(mu_base, sigma, 0.1, grid9, Method::kTukey, 4000, 611, cfg);
  bool ok = min_at_zero(tukey_curve, detail);

  const auto zhang_curve =
      epsilon_sweep(mu_base, sigma, 0.1, grid9, Method::kZhang, 1500, 612, cfg);
  ok = min_at_zero(zhang_curve, detail) && ok;

  // Rescaled levels calibrated at the K each curve actually runs with.
  RescaleOptions zopt;
  zopt.replicates = 4000;
  zopt.tol = 0.05;
  zopt.verify_replicates = 0;
  const double zhang_a10 =
      rescale_alpha(n, Eigen::VectorXd(), 0.1, Method::kZhang, zopt, 613)
          .alpha_tilde;

  const auto tukey_rescaled = epsilon_sweep(mu_base, sigma, tukey_a10, grid5,
                                            Method::kTukey, 4000, 614, cfg);
  ok = stays_at_target(tukey_rescaled, 0.9, detail) && ok;
  const auto zhang_rescaled = epsilon_sweep(mu_base, sigma, zhang_a10, grid5,
                                            Method::kZhang, 3000, 615, cfg);
  ok = stays_at_target(zhang_rescaled, 0.9, detail) && ok;

  report(6, ok,
         fmt("coverage curves: minima at eps=0 and rescaled curves at target "
             "(zhang alpha~=%.2g)%s, %.0fs",
             zhang_a10, detail.empty() ? ", clean" : detail.c_str(),
             seconds_since(t)));
}

// --- criterion 7: worst sigma arrangement -----------------------------------

void criterion_7() {
  const auto t = std::chrono::steady_clock::now();
  const int n = 10;
  Eigen::VectorXd ladder(n);
  for (int j = 0; j < n; ++j) {
    ladder[j] = 1.0 / static_cast<double>(n - j);
  }
  std::vector<SetRank> truth(n);
  for (int i = 0; i < n; ++i) {
    truth[i] = SetRank{i + 1, i + 1};
  }
  MethodConfig cfg;
  cfg.tukey_samples = 2000000;

  const auto coverage_under = [&](SigmaArrangement kind) {
    const Eigen::VectorXd arranged =
        apply_ordering(ladder, sigma_ordering(ladder, kind));
    return coverage_with_truth(Eigen::VectorXd::Zero(n), arranged, truth, 0.1,
                               Method::kTukey, 100000, 711, cfg);
  };
  const CoverageEstimate asc = coverage_under(SigmaArrangement::kAscending);
  const CoverageEstimate peak = coverage_under(SigmaArrangement::kTreeMiddleMax);
  const CoverageEstimate valley = coverage_under(SigmaArrangement::kTreeMiddleMin);

  const double se_pa = std::hypot(peak.std_error, asc.std_error);
  const double se_pv = std::hypot(peak.std_error, valley.std_error);
  const bool ok = peak.p_hat <= asc.p_hat + 3.0 * se_pa &&
                  peak.p_hat <= valley.p_hat + 3.0 * se_pv;
  report(7, ok,
         fmt("sigma arrangements at eps=0: middle-peak %.4f <= ascending %.4f "
             "and <= middle-valley %.4f (3se), %.1fs",
             peak.p_hat, asc.p_hat, valley.p_hat, seconds_since(t)));
}

// --- criterion 8: tukey counting equals the difference-CI construction ------

void criterion_8() {
  const auto t = std::chrono::steady_clock::now();
  Rng rng(801);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 7);
    Eigen::VectorXd y(n);
    Eigen::VectorXd s(n);
    for (int i = 0; i < n; ++i) {
      y[i] = 3.0 * rng.next_normal();
      s[i] = 0.2 + 2.0 * rng.next_unit_positive();
    }
    const auto obs = Observations::from_values(y, s);
    const double q = 3.0 * rng.next_unit_positive();

    TukeyConfig cfg;
    cfg.quantile_override = q;
    const RankCiResult fast = tukey_rank_cis(obs, 0.1, cfg);

    const DifferenceCis cis = difference_cis(obs, q);
    for (int i = 0; i < n; ++i) {
      int positive = 0;
      int negative = 0;
      for (int j = 0; j < n; ++j) {
        if (j == i) {
          continue;
        }
        positive += cis.lower(i, j) > 0.0 ? 1 : 0;
        negative += cis.upper(i, j) < 0.0 ? 1 : 0;
      }
      const RankInterval expect{1 + positive, n - negative};
      if (!(fast.intervals[obs.sort_order()[i]] == expect)) {
        ++mismatches;
      }
    }
  }
  report(8, mismatches == 0,
         fmt("1000 random instances, counting vs difference-CI construction: %d "
             "mismatches, %.1fs",
             mismatches, seconds_since(t)));
}

// --- criterion 9: byte-identical outputs under any worker count -------------

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void criterion_9() {
  const auto t = std::chrono::steady_clock::now();
  const std::string cli = RANKGAUGE_CLI_PATH;
  const std::string dir = "acceptance_artifacts";
  bool ok = std::system(("rm -rf " + dir + " && mkdir -p " + dir).c_str()) == 0;

  {
    std::ofstream csv(dir + "/input.csv");
    csv << "id,y,sigma\n";
    Rng rng(901);
    for (int i = 0; i < 12; ++i) {
      csv << "inst-" << i << ',' << 0.8 * rng.next_normal() << ','
          << 0.5 + rng.next_unit_positive() << "\n";
    }
  }
  {
    std::ofstream cfg(dir + "/mini.cfg");
    cfg << "[defaults]\nalpha = 0.1\nseed = 902\n\n[cell]\ntau = 1\nn = 5\n"
           "method = tukey\ncenter_draws = 200\n\n[sweep]\nname = mini\nn = 5\n"
           "method = tukey\nreplicates = 200\nepsilon_min = -0.5\n"
           "epsilon_max = 0.5\nepsilon_step = 0.5\n";
  }

  const auto shell = [&ok](const std::string& cmd) {
    ok = ok && std::system(cmd.c_str()) == 0;
  };
  for (const auto& [threads, tag] :
       std::vector<std::pair<std::string, std::string>>{{"1", "serial"},
                                                        {"3", "threaded"}}) {
    const std::string base = dir + "/" + tag;
    const std::string env = "RANKGAUGE_THREADS=" + threads + " ";
    shell(env + cli + " ranks " + dir + "/input.csv --method zhang --zhang-K " +
          "2000 --alpha 0.1 --seed 31 --out json > " + base + ".json 2>/dev/null");
    shell(env + cli + " ranks " + dir + "/input.csv --alpha 0.1 --seed 31 " +
          "--out tsv --plot " + base + ".svg > " + base + ".tsv 2>/dev/null");
    shell(env + cli + " simulate " + dir + "/mini.cfg --out-dir " + base +
          "_sim > /dev/null 2>&1");
  }

  ok = ok && slurp(dir + "/serial.json") == slurp(dir + "/threaded.json");
  ok = ok && slurp(dir + "/serial.tsv") == slurp(dir + "/threaded.tsv");
  ok = ok && slurp(dir + "/serial.svg") == slurp(dir + "/threaded.svg");
  ok = ok && !slurp(dir + "/serial.json").empty();
  ok = ok && slurp(dir + "/serial_sim/table.tsv") ==
                 slurp(dir + "/threaded_sim/table.tsv");
  ok = ok && slurp(dir + "/serial_sim/mini.csv") ==
                 slurp(dir + "/threaded_sim/mini.csv");
  ok = ok && !slurp(dir + "/serial_sim/table.tsv").empty();

  report(9, ok,
         fmt("cli artifacts byte-identical for RANKGAUGE_THREADS=1 vs 3, %.1fs",
             seconds_since(t)));
}

// --- criterion 10: rankability ----------------------------------------------

void criterion_10() {
  const auto t = std::chrono::steady_clock::now();
  Eigen::VectorXd distinct = Eigen::VectorXd::LinSpaced(6, 1.0, 6.0);
  bool ok = true_rankability(distinct) == 1.0 &&
            true_rankability(Eigen::VectorXd::Zero(6)) == 0.0;
  ok = ok &&
       estimated_rankability(std::vector<RankInterval>(6, RankInterval{1, 6}))
               .estimate == 0.0;
  std::vector<RankInterval> singletons;
  for (int i = 1; i <= 6; ++i) {
    singletons.push_back(RankInterval{i, i});
  }
  ok = ok && estimated_rankability(singletons).estimate == 1.0;

  // Underestimation frequency over fresh replications at n=10, alpha=0.1.
  const int n = 10;
  Eigen::VectorXd mu(n);
  mu << 0.0, 0.0, 0.0, 0.7, 0.7, 1.4, 1.4, 2.1, 2.8, 3.5;
  const double truth = true_rankability(mu);
  const double alpha = 0.1;
  const double q = quantile_exact_equal_sigma(n, alpha);
  const Eigen::VectorXd sigma = Eigen::VectorXd::Ones(n);

  const std::int64_t reps = 10000;
  std::int64_t under = 0;
  for (std::int64_t r = 0; r < reps; ++r) {
    Rng rng(20251010, StreamSalt::kCoverageDraw, static_cast<std::uint64_t>(r));
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
      y[i] = mu[i] + rng.next_normal();
    }
    TukeyConfig cfg;
    cfg.quantile_override = q;
    const auto cis = tukey_rank_cis(Observations::from_values(y, sigma), alpha, cfg);
    under += estimated_rankability(cis.intervals).estimate <= truth ? 1 : 0;
  }
  const double p = static_cast<double>(under) / static_cast<double>(reps);
  const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(reps));
  ok = ok && p >= 1.0 - alpha - 3.0 * se;
  report(10, ok,
         fmt("rankability: edge cases exact, underestimation freq %.4f >= "
             "%.4f, %.1fs",
             p, 1.0 - alpha - 3.0 * se, seconds_since(t)));
}

}  // namespace

int main() {
  g_t0 = std::chrono::steady_clock::now();
  double tukey_a10 = 0.285;
  criterion_1();
  criterion_2(tukey_a10);
  criterion_3();
  criterion_4(tukey_a10);
  criterion_5(tukey_a10);
  criterion_6(tukey_a10);
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::printf("%s: %d criterion(s) failed, total %.0fs\n",
              g_failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED",
              g_failures, seconds_since(g_t0));
  return g_failures == 0 ? 0 : 1;
}
