#include "rankgauge/rng.hpp"

#include <cmath>

namespace rankgauge {
namespace {

// 256-layer ziggurat for the standard normal (Marsaglia & Tsang layout).
// Layer 0 carries the tail beyond kTailStart; the equal-area recursion fills
// the remaining rectangles.  Tables are built once at first use.
constexpr int kLayerCount = 256;
constexpr double kTailStart = 3.6541528853610088;
constexpr double kBlockArea = 0.00492867323399;
constexpr double kM = 4503599627370496.0;  // 2^52

struct ZigguratTables {
  std::array<std::uint64_t, kLayerCount> k;
  std::array<double, kLayerCount> w;
  std::array<double, kLayerCount> f;

  ZigguratTables() {
    const auto density = [](double x) { return std::exp(-0.5 * x * x); };
    double dn = kTailStart;
    double tn = kTailStart;
    const double q = kBlockArea / density(dn);

    k[0] = static_cast<std::uint64_t>((dn / q) * kM);
    k[1] = 0;
    w[0] = q / kM;
    w[kLayerCount - 1] = dn / kM;
    f[0] = 1.0;
    f[kLayerCount - 1] = density(dn);

    for (int i = kLayerCount - 2; i >= 1; --i) {
      dn = std::sqrt(-2.0 * std::log(kBlockArea / dn + density(dn)));
      k[i + 1] = static_cast<std::uint64_t>((dn / tn) * kM);
      tn = dn;
      f[i] = density(dn);
      w[i] = dn / kM;
    }
  }
};

const ZigguratTables& tables() {
  static const ZigguratTables t;
  return t;
}

}  // namespace

double Rng::next_normal() {
  const ZigguratTables& t = tables();
  for (;;) {
    const std::uint64_t bits = next_u64();
    const int idx = static_cast<int>(bits & 0xFF);
    const bool negative = (bits >> 8) & 1;
    const std::uint64_t rabs = (bits >> 9) & 0xFFFFFFFFFFFFFULL;
    const double x = static_cast<double>(rabs) * t.w[idx];
    if (rabs < t.k[idx]) {
      return negative ? -x : x;
    }
    if (idx == 0) {
      // Marsaglia tail: exponential rejection beyond kTailStart.
      double xx;
      double yy;
      do {
        xx = -std::log(next_unit_positive()) / kTailStart;
        yy = -std::log(next_unit_positive());
      } while (yy + yy < xx * xx);
      return negative ? -(kTailStart + xx) : kTailStart + xx;
    }
    if (t.f[idx] + next_unit() * (t.f[idx - 1] - t.f[idx]) <
        std::exp(-0.5 * x * x)) {
      return negative ? -x : x;
    }
  }
}

}  // namespace rankgauge
