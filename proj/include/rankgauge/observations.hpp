#ifndef RANKGAUGE_OBSERVATIONS_HPP
#define RANKGAUGE_OBSERVATIONS_HPP

#include <Eigen/Core>
#include <string>
#include <vector>

#include "rankgauge/types.hpp"

namespace rankgauge {

struct ObservationRow {
  std::string id;
  double y = 0.0;
  double sigma = 1.0;
};

/// Validated sample: measurements with known standard deviations, stored
/// sorted ascending by y (ties broken by original input position).
/// Immutable after construction and safe to share across threads.
class Observations {
 public:
  int size() const { return static_cast<int>(y_.size()); }

  /// Sorted ascending.
  const Eigen::VectorXd& y() const { return y_; }
  /// Aligned with the sorted y.
  const Eigen::VectorXd& sigma() const { return sigma_; }
  /// Ids aligned with the sorted y.
  const std::vector<std::string>& ids() const { return ids_; }
  /// Maps sorted position -> original input index.
  const std::vector<int>& sort_order() const { return sort_order_; }
  /// Maps original input index -> sorted position.
  const std::vector<int>& rank_of_input() const { return input_to_sorted_; }

  friend Observations validate_observations(const std::vector<ObservationRow>& rows);

  /// Convenience constructor for already-positional data: ids "1".."n",
  /// values taken as given (still re-sorted internally).
  static Observations from_values(const Eigen::VectorXd& y,
                                  const Eigen::VectorXd& sigma);

 private:
  Observations() = default;

  Eigen::VectorXd y_;
  Eigen::VectorXd sigma_;
  std::vector<std::string> ids_;
  std::vector<int> sort_order_;
  std::vector<int> input_to_sorted_;
};

/// Checks finiteness, positive sigmas, unique ids and non-emptiness, then
/// returns the sorted sample.
Observations validate_observations(const std::vector<ObservationRow>& rows);

/// Tie-aware true ranks of a mean vector: lower rank counts the strictly
/// smaller means, upper rank discounts the strictly larger ones, so tied
/// means share one rank set.
std::vector<SetRank> set_ranks(const Eigen::VectorXd& mu);

}  // namespace rankgauge

#endif  // RANKGAUGE_OBSERVATIONS_HPP
