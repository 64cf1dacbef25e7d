#include "rankgauge/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "rankgauge/errors.hpp"

namespace rankgauge {
namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) {
    return "";
  }
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string::size_type start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_double(const std::string& raw, const std::string& context) {
  const std::string s = trim(raw);
  double value = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(context + ": cannot parse number '" + raw + "'");
  }
  return value;
}

std::int64_t parse_int(const std::string& raw, const std::string& context) {
  const std::string s = trim(raw);
  std::int64_t value = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(context + ": cannot parse integer '" + raw + "'");
  }
  return value;
}

bool parse_bool(const std::string& raw, const std::string& context) {
  const std::string s = trim(raw);
  if (s == "true" || s == "1" || s == "yes") {
    return true;
  }
  if (s == "false" || s == "0" || s == "no") {
    return false;
  }
  throw Error(context + ": cannot parse boolean '" + raw + "'");
}

Method parse_method(const std::string& raw, const std::string& context) {
  const std::string s = trim(raw);
  if (s == "tukey") {
    return Method::kTukey;
  }
  if (s == "zhang") {
    return Method::kZhang;
  }
  throw Error(context + ": unknown method '" + raw + "' (tukey|zhang)");
}

SigmaArrangement parse_ordering(const std::string& raw, const std::string& context) {
  const std::string s = trim(raw);
  if (s == "custom") {
    return SigmaArrangement::kCustom;
  }
  if (s == "ascending") {
    return SigmaArrangement::kAscending;
  }
  if (s == "tree_middle_max") {
    return SigmaArrangement::kTreeMiddleMax;
  }
  if (s == "tree_middle_min") {
    return SigmaArrangement::kTreeMiddleMin;
  }
  throw Error(context + ": unknown ordering '" + raw + "'");
}

Eigen::VectorXd parse_vector(const std::string& raw, const std::string& context) {
  const auto parts = split(raw, ',');
  Eigen::VectorXd v(parts.size());
  for (size_t i = 0; i < parts.size(); ++i) {
    v[i] = parse_double(parts[i], context);
  }
  return v;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string fmt_exact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

using Section = std::map<std::string, std::string>;

SimulationSpec cell_from_section(const Section& sec) {
  SimulationSpec spec;
  for (const auto& [key, value] : sec) {
    const std::string ctx = "[cell] " + key;
    if (key == "tau") {
      spec.tau = parse_double(value, ctx);
    } else if (key == "n") {
      spec.n = static_cast<int>(parse_int(value, ctx));
    } else if (key == "alpha") {
      spec.alpha = parse_double(value, ctx);
    } else if (key == "method") {
      spec.method = parse_method(value, ctx);
    } else if (key == "rescaled") {
      spec.rescaled = parse_bool(value, ctx);
    } else if (key == "center_draws") {
      spec.center_draws = parse_int(value, ctx);
    } else if (key == "seed") {
      spec.seed = static_cast<std::uint64_t>(parse_int(value, ctx));
    } else if (key == "zhang_K") {
      spec.zhang_K = parse_int(value, ctx);
    } else if (key == "tukey_B") {
      spec.tukey_B = parse_int(value, ctx);
    } else if (key == "rescale_replicates") {
      spec.rescale_replicates = parse_int(value, ctx);
    } else if (key == "name" || key == "replicates" || key == "epsilon_min" ||
               key == "epsilon_max" || key == "epsilon_step" ||
               key == "epsilon_list" || key == "mu_base" || key == "sigma" ||
               key == "ordering") {
      // sweep-only keys allowed in [defaults]; ignored for cells
    } else {
      throw Error("[cell]: unknown key '" + key + "'");
    }
  }
  return spec;
}

SweepSpec sweep_from_section(const Section& sec) {
  SweepSpec spec;
  double eps_min = -1.0;
  double eps_max = 1.0;
  double eps_step = 0.25;
  bool have_list = false;
  for (const auto& [key, value] : sec) {
    const std::string ctx = "[sweep] " + key;
    if (key == "name") {
      spec.name = trim(value);
    } else if (key == "n") {
      spec.n = static_cast<int>(parse_int(value, ctx));
    } else if (key == "alpha") {
      spec.alpha = parse_double(value, ctx);
    } else if (key == "method") {
      spec.method = parse_method(value, ctx);
    } else if (key == "rescaled") {
      spec.rescaled = parse_bool(value, ctx);
    } else if (key == "replicates") {
      spec.replicates = parse_int(value, ctx);
    } else if (key == "seed") {
      spec.seed = static_cast<std::uint64_t>(parse_int(value, ctx));
    } else if (key == "epsilon_min") {
      eps_min = parse_double(value, ctx);
    } else if (key == "epsilon_max") {
      eps_max = parse_double(value, ctx);
    } else if (key == "epsilon_step") {
      eps_step = parse_double(value, ctx);
    } else if (key == "epsilon_list") {
      spec.epsilon_grid.clear();
      for (const auto& part : split(value, ',')) {
        spec.epsilon_grid.push_back(parse_double(part, ctx));
      }
      have_list = true;
    } else if (key == "mu_base") {
      spec.mu_base = parse_vector(value, ctx);
    } else if (key == "sigma") {
      if (trim(value) != "equal") {
        spec.sigma = parse_vector(value, ctx);
      }
    } else if (key == "ordering") {
      spec.ordering = parse_ordering(value, ctx);
    } else if (key == "zhang_K") {
      spec.zhang_K = parse_int(value, ctx);
    } else if (key == "tukey_B") {
      spec.tukey_B = parse_int(value, ctx);
    } else if (key == "rescale_replicates") {
      spec.rescale_replicates = parse_int(value, ctx);
    } else if (key == "tau" || key == "center_draws") {
      // cell-only keys allowed in [defaults]; ignored for sweeps
    } else {
      throw Error("[sweep]: unknown key '" + key + "'");
    }
  }
  if (!have_list) {
    if (eps_step <= 0.0) {
      throw Error("[sweep]: epsilon_step must be > 0");
    }
    // Index-based grid so a symmetric range hits 0 exactly.
    const std::int64_t steps =
        static_cast<std::int64_t>(std::llround((eps_max - eps_min) / eps_step));
    for (std::int64_t i = 0; i <= steps; ++i) {
      const double eps = eps_min + static_cast<double>(i) * eps_step;
      spec.epsilon_grid.push_back(std::abs(eps) < 1e-12 ? 0.0 : eps);
    }
  }
  return spec;
}

}  // namespace

std::vector<ObservationRow> read_observations_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw EmptyInput("csv: empty file");
  }
  {
    const auto header = split(trim(line), ',');
    if (header.size() != 3 || trim(header[0]) != "id" || trim(header[1]) != "y" ||
        trim(header[2]) != "sigma") {
      throw Error("csv: header must be 'id,y,sigma'");
    }
  }
  std::vector<ObservationRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) {
      continue;
    }
    const auto fields = split(t, ',');
    if (fields.size() != 3) {
      throw Error("csv line " + std::to_string(lineno) + ": expected 3 fields");
    }
    ObservationRow row;
    row.id = trim(fields[0]);
    if (row.id.empty()) {
      throw Error("csv line " + std::to_string(lineno) + ": empty id");
    }
    row.y = parse_double(fields[1], "csv line " + std::to_string(lineno));
    row.sigma = parse_double(fields[2], "csv line " + std::to_string(lineno));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw EmptyInput("csv: no data rows");
  }
  return rows;
}

SimulationConfig parse_simulation_config(std::istream& in) {
  SimulationConfig config;
  Section defaults;
  Section current;
  std::string kind;

  const auto flush = [&]() {
    if (kind == "cell") {
      config.cells.push_back(cell_from_section(current));
    } else if (kind == "sweep") {
      config.sweeps.push_back(sweep_from_section(current));
    } else if (kind == "defaults") {
      defaults = current;
    }
    current.clear();
  };

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    const auto hash = t.find('#');
    if (hash != std::string::npos) {
      t = trim(t.substr(0, hash));
    }
    if (t.empty()) {
      continue;
    }
    if (t.front() == '[') {
      if (t.back() != ']') {
        throw Error("config line " + std::to_string(lineno) + ": bad section");
      }
      flush();
      kind = trim(t.substr(1, t.size() - 2));
      if (kind != "defaults" && kind != "cell" && kind != "sweep") {
        throw Error("config line " + std::to_string(lineno) + ": unknown section [" +
                    kind + "]");
      }
      if (kind != "defaults") {
        current = defaults;
      }
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error("config line " + std::to_string(lineno) + ": expected key=value");
    }
    if (kind.empty()) {
      throw Error("config line " + std::to_string(lineno) + ": key outside section");
    }
    current[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  flush();
  return config;
}

std::string method_name(Method method) {
  return method == Method::kTukey ? "tukey" : "zhang";
}

nlohmann::ordered_json ranks_result_json(const std::vector<ObservationRow>& rows,
                                         const RankCiResult& result) {
  nlohmann::ordered_json doc;
  doc["method"] = method_name(result.method);
  doc["alpha_nominal"] = result.alpha_nominal;
  doc["alpha_effective"] = result.alpha_effective;
  doc["seed"] = result.seed;
  doc["items"] = nlohmann::ordered_json::array();
  for (size_t i = 0; i < rows.size(); ++i) {
    nlohmann::ordered_json item;
    item["id"] = rows[i].id;
    item["y"] = rows[i].y;
    item["sigma"] = rows[i].sigma;
    item["rank_lower"] = result.intervals[i].lower;
    item["rank_upper"] = result.intervals[i].upper;
    doc["items"].push_back(std::move(item));
  }
  nlohmann::ordered_json rank;
  if (rows.size() >= 2) {
    const RankabilityEstimate est = estimated_rankability(result.intervals);
    rank["estimate"] = est.estimate;
    rank["ci_lower"] = est.ci_lower;
    rank["ci_upper"] = est.ci_upper;
  } else {
    rank["estimate"] = nullptr;
    rank["ci_lower"] = nullptr;
    rank["ci_upper"] = nullptr;
  }
  doc["rankability"] = std::move(rank);
  return doc;
}

std::string ranks_result_tsv(const std::vector<ObservationRow>& rows,
                             const RankCiResult& result) {
  std::ostringstream out;
  out << "# method=" << method_name(result.method)
      << " alpha_nominal=" << fmt(result.alpha_nominal)
      << " alpha_effective=" << fmt(result.alpha_effective)
      << " seed=" << result.seed;
  if (rows.size() >= 2) {
    out << " rankability=" << fmt(estimated_rankability(result.intervals).estimate);
  }
  out << "\n";
  out << "id\ty\tsigma\trank_lower\trank_upper\n";
  for (size_t i = 0; i < rows.size(); ++i) {
    out << rows[i].id << '\t' << fmt_exact(rows[i].y) << '\t'
        << fmt_exact(rows[i].sigma) << '\t' << result.intervals[i].lower << '\t'
        << result.intervals[i].upper << '\n';
  }
  return out.str();
}

std::string table_report_tsv(const TableReport& report) {
  std::ostringstream out;
  out << "tau\tn\tmethod\trescaled\talpha\talpha_effective\tcoverage\t"
         "coverage_se\tefficiency\tefficiency_se\tstatus\n";
  for (const CellResult& cell : report.cells) {
    const SimulationSpec& s = cell.spec;
    out << fmt(s.tau) << '\t' << s.n << '\t' << method_name(s.method) << '\t'
        << (s.rescaled ? "yes" : "no") << '\t' << fmt(s.alpha) << '\t';
    if (cell.infeasible || !cell.error.empty()) {
      out << "-\t-\t-\t-\t-\t" << (cell.infeasible ? "infeasible" : "error") << '\n';
    } else {
      out << fmt(cell.alpha_effective) << '\t' << fmt(cell.coverage.p_hat) << '\t'
          << fmt(cell.coverage.std_error) << '\t' << fmt(cell.efficiency) << '\t'
          << fmt(cell.efficiency_se) << '\t' << "ok" << '\n';
    }
  }
  return out.str();
}

nlohmann::ordered_json table_report_json(const TableReport& report) {
  nlohmann::ordered_json doc;
  doc["cells"] = nlohmann::ordered_json::array();
  for (const CellResult& cell : report.cells) {
    const SimulationSpec& s = cell.spec;
    nlohmann::ordered_json c;
    c["tau"] = s.tau;
    c["n"] = s.n;
    c["method"] = method_name(s.method);
    c["rescaled"] = s.rescaled;
    c["alpha"] = s.alpha;
    c["center_draws"] = s.center_draws;
    c["seed"] = s.seed;
    c["zhang_K"] = s.zhang_K;
    if (cell.infeasible) {
      c["status"] = "infeasible";
      c["error"] = cell.error;
    } else if (!cell.error.empty()) {
      c["status"] = "error";
      c["error"] = cell.error;
    } else {
      c["status"] = "ok";
      c["alpha_effective"] = cell.alpha_effective;
      c["coverage"] = cell.coverage.p_hat;
      c["coverage_se"] = cell.coverage.std_error;
      c["efficiency"] = cell.efficiency;
      c["efficiency_se"] = cell.efficiency_se;
    }
    doc["cells"].push_back(std::move(c));
  }
  return doc;
}

std::string sweep_result_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "# name=" << result.spec.name << " method=" << method_name(result.spec.method)
      << " n=" << result.spec.n << " alpha=" << fmt(result.spec.alpha)
      << " rescaled=" << (result.spec.rescaled ? "yes" : "no")
      << " alpha_effective=" << fmt(result.alpha_effective)
      << " replicates=" << result.spec.replicates << " seed=" << result.spec.seed
      << "\n";
  if (result.infeasible) {
    out << "# infeasible: " << result.error << "\n";
    return out.str();
  }
  out << "epsilon,coverage,se\n";
  for (const auto& [eps, cov] : result.points) {
    out << fmt(eps) << ',' << fmt(cov.p_hat) << ',' << fmt(cov.std_error) << '\n';
  }
  return out.str();
}

}  // namespace rankgauge
