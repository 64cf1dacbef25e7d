#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "rankgauge/errors.hpp"
#include "rankgauge/rng.hpp"
#include "rankgauge/studentized_range.hpp"
#include "rankgauge/tukey.hpp"

using namespace rankgauge;

namespace {

Observations make_obs(std::initializer_list<double> ys,
                      std::initializer_list<double> sigmas) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(ys.size()));
  Eigen::VectorXd s(static_cast<Eigen::Index>(sigmas.size()));
  Eigen::Index i = 0;
  for (double v : ys) {
    y[i++] = v;
  }
  i = 0;
  for (double v : sigmas) {
    s[i++] = v;
  }
  return Observations::from_values(y, s);
}

// Independent route: build the full pairwise-difference CI matrix and count
// sign-definite intervals per row.
std::vector<RankInterval> rank_cis_from_differences(const Observations& obs,
                                                    double q) {
  const DifferenceCis cis = difference_cis(obs, q);
  const int n = obs.size();
  std::vector<RankInterval> out(n);
  for (int i = 0; i < n; ++i) {
    int entirely_negative = 0;  // CI for mu_i - mu_j below 0: j above i
    int entirely_positive = 0;
    for (int j = 0; j < n; ++j) {
      if (j == i) {
        continue;
      }
      if (cis.lower(i, j) > 0.0) {
        ++entirely_positive;
      }
      if (cis.upper(i, j) < 0.0) {
        ++entirely_negative;
      }
    }
    out[obs.sort_order()[i]] =
        RankInterval{1 + entirely_positive, n - entirely_negative};
  }
  return out;
}

Observations random_obs(Rng& rng, int n) {
  Eigen::VectorXd y(n);
  Eigen::VectorXd s(n);
  for (int i = 0; i < n; ++i) {
    y[i] = 3.0 * rng.next_normal();
    s[i] = 0.2 + 2.0 * rng.next_unit_positive();
  }
  return Observations::from_values(y, s);
}

}  // namespace

TEST_CASE("difference CIs at q=0 collapse to the observed differences") {
  const auto obs = make_obs({1.0, 3.5, -2.0}, {1.0, 2.0, 0.5});
  const DifferenceCis cis = difference_cis(obs, 0.0);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i == j) {
        CHECK(cis.lower(i, i) == 0.0);
        CHECK(cis.upper(i, i) == 0.0);
        continue;
      }
      CHECK(cis.lower(i, j) == obs.y()[i] - obs.y()[j]);
      CHECK(cis.upper(i, j) == obs.y()[i] - obs.y()[j]);
    }
  }
}

TEST_CASE("difference CIs are antisymmetric") {
  Rng rng(11);
  const auto obs = random_obs(rng, 6);
  const DifferenceCis cis = difference_cis(obs, 1.7);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      CHECK(cis.lower(i, j) == doctest::Approx(-cis.upper(j, i)).epsilon(1e-14));
    }
  }
  CHECK_THROWS_AS(difference_cis(obs, -0.5), Error);
}

TEST_CASE("three institutions: one clear leader, two entangled") {
  // Gaps 6 and 2 against a 90% equal-sigma halfwidth sqrt(2)*q ~ 2.9.
  const auto obs = make_obs({0.0, 6.0, 8.0}, {1.0, 1.0, 1.0});
  const RankCiResult res = tukey_rank_cis(obs, 0.1);
  CHECK(res.intervals[0] == RankInterval{1, 1});
  CHECK(res.intervals[1] == RankInterval{2, 3});
  CHECK(res.intervals[2] == RankInterval{2, 3});
  CHECK(res.quantile_used == doctest::Approx(2.05229273).epsilon(1e-6));
  CHECK(res.alpha_effective == 0.1);
}

TEST_CASE("huge quantile rejects nothing") {
  const auto obs = make_obs({0.0, 6.0, 8.0}, {1.0, 1.0, 1.0});
  TukeyConfig cfg;
  cfg.quantile_override = 1e9;
  const RankCiResult res = tukey_rank_cis(obs, 0.1, cfg);
  for (const auto& ci : res.intervals) {
    CHECK(ci == RankInterval{1, 3});
  }
}

TEST_CASE("single item gets the trivial interval") {
  const auto obs = make_obs({4.2}, {1.0});
  const RankCiResult res = tukey_rank_cis(obs, 0.1);
  CHECK(res.intervals.size() == 1);
  CHECK(res.intervals[0] == RankInterval{1, 1});
  CHECK(res.quantile_used == 0.0);
}

TEST_CASE("rank CIs equal the difference-CI counting construction") {
  Rng rng(42);
  for (int trial = 0; trial < 400; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 7);
    const auto obs = random_obs(rng, n);
    const double q = 3.0 * rng.next_unit_positive();
    TukeyConfig cfg;
    cfg.quantile_override = q;
    const RankCiResult fast = tukey_rank_cis(obs, 0.1, cfg);
    const auto oracle = rank_cis_from_differences(obs, q);
    REQUIRE(fast.intervals.size() == oracle.size());
    for (size_t i = 0; i < oracle.size(); ++i) {
      CHECK(fast.intervals[i] == oracle[i]);
    }
  }
}

TEST_CASE("sorted positions are always contained in their interval") {
  Rng rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 10);
    const auto obs = random_obs(rng, n);
    TukeyConfig cfg;
    cfg.quantile_override = 2.0 * rng.next_unit_positive();
    const RankCiResult res = tukey_rank_cis(obs, 0.1, cfg);
    for (int pos = 0; pos < n; ++pos) {
      const RankInterval& ci = res.intervals[obs.sort_order()[pos]];
      CHECK(ci.lower <= pos + 1);
      CHECK(ci.upper >= pos + 1);
    }
  }
}

TEST_CASE("intervals are nested as alpha decreases") {
  Rng rng(44);
  for (int trial = 0; trial < 20; ++trial) {
    const auto obs = random_obs(rng, 8);
    TukeyConfig cfg;
    cfg.seed = 1000 + trial;
    const RankCiResult wide = tukey_rank_cis(obs, 0.02, cfg);
    const RankCiResult narrow = tukey_rank_cis(obs, 0.2, cfg);
    for (int i = 0; i < 8; ++i) {
      CHECK(wide.intervals[i].lower <= narrow.intervals[i].lower);
      CHECK(wide.intervals[i].upper >= narrow.intervals[i].upper);
    }
  }
}

TEST_CASE("equal sigmas give monotone bounds along the sorted order") {
  Rng rng(45);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + static_cast<int>(rng.next_u64() % 8);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
      y[i] = 2.0 * rng.next_normal();
    }
    const auto obs = Observations::from_values(y, Eigen::VectorXd::Ones(n));
    TukeyConfig cfg;
    cfg.quantile_override = 1.5;
    const RankCiResult res = tukey_rank_cis(obs, 0.1, cfg);
    for (int pos = 1; pos < n; ++pos) {
      const RankInterval& prev = res.intervals[obs.sort_order()[pos - 1]];
      const RankInterval& cur = res.intervals[obs.sort_order()[pos]];
      CHECK(prev.lower <= cur.lower);
      CHECK(prev.upper <= cur.upper);
    }
  }
}

TEST_CASE("intervals are invariant under shift and common rescale") {
  Rng rng(46);
  const int n = 7;
  Eigen::VectorXd y(n);
  Eigen::VectorXd s(n);
  for (int i = 0; i < n; ++i) {
    y[i] = rng.next_normal();
    s[i] = 0.5 + rng.next_unit_positive();
  }
  TukeyConfig cfg;
  cfg.seed = 7;
  const auto base = tukey_rank_cis(Observations::from_values(y, s), 0.1, cfg);
  const auto shifted = tukey_rank_cis(
      Observations::from_values((y.array() + 11.5).matrix(), s), 0.1, cfg);
  // Power-of-two scale keeps every comparison bit-identical.
  const auto scaled =
      tukey_rank_cis(Observations::from_values(4.0 * y, 4.0 * s), 0.1, cfg);
  for (int i = 0; i < n; ++i) {
    CHECK(base.intervals[i] == shifted.intervals[i]);
    CHECK(base.intervals[i] == scaled.intervals[i]);
  }
}
