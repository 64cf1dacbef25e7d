#ifndef RANKGAUGE_STATS_HPP
#define RANKGAUGE_STATS_HPP

#include <cmath>
#include <functional>

namespace rankgauge {

inline double normal_pdf(double x) {
  constexpr double kInvSqrt2Pi = 0.3989422804014327;
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

inline double normal_cdf(double x) {
  constexpr double kInvSqrt2 = 0.7071067811865476;
  return 0.5 * std::erfc(-x * kInvSqrt2);
}

/// Adaptive Simpson quadrature with absolute tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol);

/// Bisection root of a monotone nondecreasing function on [lo, hi] with
/// f(lo) <= target <= f(hi); returns x with f(x) = target to within x_tol.
double bisect_monotone(const std::function<double(double)>& f, double target,
                       double lo, double hi, double x_tol, int max_iter = 200);

}  // namespace rankgauge

#endif  // RANKGAUGE_STATS_HPP
