#include "rankgauge/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace rankgauge {
namespace {

std::string f2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_rank_intervals_svg(const std::vector<ObservationRow>& rows,
                                      const RankCiResult& result) {
  const int n = static_cast<int>(rows.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&rows](int a, int b) { return rows[a].y < rows[b].y; });

  const double margin_left = 110.0;
  const double margin_right = 20.0;
  const double margin_top = 30.0;
  const double margin_bottom = 40.0;
  const double row_height = 18.0;
  const double plot_width = 560.0;
  const double width = margin_left + plot_width + margin_right;
  const double height = margin_top + n * row_height + margin_bottom;

  const auto rank_x = [&](double rank) {
    if (n == 1) {
      return margin_left + 0.5 * plot_width;
    }
    return margin_left + (rank - 1.0) / (n - 1.0) * plot_width;
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f2(width)
      << "\" height=\"" << f2(height) << "\" viewBox=\"0 0 " << f2(width) << ' '
      << f2(height) << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << f2(margin_left) << "\" y=\"18\" font-family=\"sans-serif\" "
         "font-size=\"13\">simultaneous rank intervals (joint level "
      << f2(100.0 * (1.0 - result.alpha_nominal)) << "%)</text>\n";

  // Vertical grid and axis labels on integer ranks; thinned when n is large.
  const int label_stride = n > 30 ? (n + 29) / 30 : 1;
  for (int r = 1; r <= n; ++r) {
    const double x = rank_x(r);
    svg << "<line x1=\"" << f2(x) << "\" y1=\"" << f2(margin_top) << "\" x2=\""
        << f2(x) << "\" y2=\"" << f2(margin_top + n * row_height)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    if ((r - 1) % label_stride == 0 || r == n) {
      svg << "<text x=\"" << f2(x) << "\" y=\""
          << f2(margin_top + n * row_height + 18.0)
          << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">"
          << r << "</text>\n";
    }
  }

  for (int pos = 0; pos < n; ++pos) {
    const int idx = order[pos];
    const RankInterval& ci = result.intervals[idx];
    // Lowest y at the bottom row.
    const double yc = margin_top + (n - 1 - pos) * row_height + 0.5 * row_height;
    const double x1 = rank_x(ci.lower);
    const double x2 = rank_x(ci.upper);
    svg << "<line x1=\"" << f2(x1) << "\" y1=\"" << f2(yc) << "\" x2=\"" << f2(x2)
        << "\" y2=\"" << f2(yc)
        << "\" stroke=\"#2b6cb0\" stroke-width=\"6\" stroke-linecap=\"round\"/>\n";
    svg << "<text x=\"" << f2(margin_left - 8.0) << "\" y=\"" << f2(yc + 4.0)
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
        << escape(rows[idx].id) << "</text>\n";
  }

  svg << "<text x=\"" << f2(margin_left + 0.5 * plot_width) << "\" y=\""
      << f2(height - 8.0)
      << "\" font-family=\"sans-serif\" font-size=\"12\" "
         "text-anchor=\"middle\">rank</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace rankgauge
