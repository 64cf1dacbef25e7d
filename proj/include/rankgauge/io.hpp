#ifndef RANKGAUGE_IO_HPP
#define RANKGAUGE_IO_HPP

#include <istream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rankgauge/observations.hpp"
#include "rankgauge/rankability.hpp"
#include "rankgauge/simulation.hpp"
#include "rankgauge/types.hpp"

namespace rankgauge {

/// Parsed simulation configuration: [defaults] apply to the sections that
/// follow; [cell] sections become SimulationSpec entries and [sweep]
/// sections coverage-curve series.
struct SimulationConfig {
  std::vector<SimulationSpec> cells;
  std::vector<SweepSpec> sweeps;
};

/// CSV with header `id,y,sigma`, UTF-8, '.' decimal point, rows in any
/// order.  Throws Error with a line reference on malformed input.
std::vector<ObservationRow> read_observations_csv(std::istream& in);

/// Plain-text key=value sections; '#' starts a comment.
SimulationConfig parse_simulation_config(std::istream& in);

std::string method_name(Method method);

/// JSON document for a rank-CI run: method, levels, seed, per-item rows in
/// the original input order and the rankability interval (nulls at n = 1).
nlohmann::ordered_json ranks_result_json(const std::vector<ObservationRow>& rows,
                                         const RankCiResult& result);

std::string ranks_result_tsv(const std::vector<ObservationRow>& rows,
                             const RankCiResult& result);

std::string table_report_tsv(const TableReport& report);
nlohmann::ordered_json table_report_json(const TableReport& report);

std::string sweep_result_csv(const SweepResult& result);

}  // namespace rankgauge

#endif  // RANKGAUGE_IO_HPP
