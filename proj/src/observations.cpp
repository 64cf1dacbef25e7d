#include "rankgauge/observations.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_set>

#include "rankgauge/errors.hpp"

namespace rankgauge {

Observations validate_observations(const std::vector<ObservationRow>& rows) {
  if (rows.empty()) {
    throw EmptyInput("no observations given");
  }
  std::unordered_set<std::string> seen;
  seen.reserve(rows.size());
  for (const ObservationRow& row : rows) {
    if (!std::isfinite(row.y)) {
      throw NonFiniteValue("non-finite y for id '" + row.id + "'");
    }
    if (!std::isfinite(row.sigma)) {
      throw NonFiniteValue("non-finite sigma for id '" + row.id + "'");
    }
    if (row.sigma <= 0.0) {
      throw NonPositiveSigma("sigma must be > 0 for id '" + row.id + "'");
    }
    if (!seen.insert(row.id).second) {
      throw DuplicateId("duplicate id '" + row.id + "'");
    }
  }

  const int n = static_cast<int>(rows.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  // Ties in y are broken by original input position; downstream results then
  // depend on the input order of the tied rows.
  std::stable_sort(order.begin(), order.end(),
                   [&rows](int a, int b) { return rows[a].y < rows[b].y; });

  Observations obs;
  obs.y_.resize(n);
  obs.sigma_.resize(n);
  obs.ids_.reserve(n);
  obs.sort_order_ = order;
  obs.input_to_sorted_.assign(n, 0);
  for (int pos = 0; pos < n; ++pos) {
    const ObservationRow& row = rows[order[pos]];
    obs.y_[pos] = row.y;
    obs.sigma_[pos] = row.sigma;
    obs.ids_.push_back(row.id);
    obs.input_to_sorted_[order[pos]] = pos;
  }
  return obs;
}

Observations Observations::from_values(const Eigen::VectorXd& y,
                                       const Eigen::VectorXd& sigma) {
  std::vector<ObservationRow> rows;
  rows.reserve(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    rows.push_back({std::to_string(i + 1), y[i], sigma[i]});
  }
  return validate_observations(rows);
}

std::vector<SetRank> set_ranks(const Eigen::VectorXd& mu) {
  const int n = static_cast<int>(mu.size());
  if (n == 0) {
    throw EmptyInput("set_ranks: empty mean vector");
  }
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(mu[i])) {
      throw NonFiniteValue("set_ranks: non-finite mean");
    }
  }

  // Counting through the sorted order gives O(n log n) instead of O(n^2):
  // for a block of exactly equal means spanning sorted positions [a, b],
  // every member has lower rank a+1 and upper rank b+1 (0-based a, b).
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&mu](int a, int b) { return mu[a] < mu[b]; });

  std::vector<SetRank> ranks(n);
  int block_start = 0;
  while (block_start < n) {
    int block_end = block_start;
    while (block_end + 1 < n && mu[order[block_end + 1]] == mu[order[block_start]]) {
      ++block_end;
    }
    for (int pos = block_start; pos <= block_end; ++pos) {
      ranks[order[pos]] = SetRank{block_start + 1, block_end + 1};
    }
    block_start = block_end + 1;
  }
  return ranks;
}

}  // namespace rankgauge
