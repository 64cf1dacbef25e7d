#ifndef RANKGAUGE_SVG_HPP
#define RANKGAUGE_SVG_HPP

#include <string>
#include <vector>

#include "rankgauge/observations.hpp"
#include "rankgauge/types.hpp"

namespace rankgauge {

/// Static interval chart: one horizontal bar per item spanning its rank CI,
/// items sorted by y from the bottom, x axis the ranks 1..n.  Output is a
/// self-contained SVG document, byte-deterministic for identical inputs.
std::string render_rank_intervals_svg(const std::vector<ObservationRow>& rows,
                                      const RankCiResult& result);

}  // namespace rankgauge

#endif  // RANKGAUGE_SVG_HPP
