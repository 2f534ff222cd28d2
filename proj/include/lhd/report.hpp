#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "lhd/bench.hpp"

namespace lhd {

/// "q10" for 0.1, "q25" for 0.25, "q975" for 0.975.
inline std::string quantile_key(double alpha) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", alpha * 100.0);
  std::string digits = buf;
  std::erase(digits, '.');
  return "q" + digits;
}

/// Report document: {config, rows: [{d, n, q.., se: {q..}, time_*, r_star?}]}.
/// Timing fields are wall-clock measurements; leave them out to get output
/// that is identical across runs with the same seed.
inline nlohmann::json to_json(const BenchReport& report, bool include_timing = true) {
  const auto& c = report.config;
  nlohmann::json doc;
  doc["config"] = {{"dims", c.dims},
                   {"points_per_dim", c.points_per_dim},
                   {"replications", c.replications},
                   {"quantiles", c.quantiles},
                   {"seed", c.seed},
                   {"generator", std::string(to_string(c.generator))},
                   {"averaging", c.pooled ? "pooled" : "per_design"}};
  if (c.generator == Generator::slhd) {
    doc["config"]["schedule"] = {{"steps", c.schedule.steps},
                                 {"increment", c.schedule.increment},
                                 {"estimate_replications", c.schedule.estimate_replications},
                                 {"restarts", c.schedule.base.restarts},
                                 {"max_attempts_per_point", c.schedule.base.max_attempts_per_point},
                                 {"r_decrement", c.schedule.base.r_decrement},
                                 {"center_band", c.schedule.base.center_band}};
  }
  auto rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json r;
    r["d"] = row.d;
    r["n"] = row.n;
    nlohmann::json se;
    for (const auto& q : row.quantiles) {
      r[quantile_key(q.alpha)] = q.mean;
      se[quantile_key(q.alpha)] = q.se;
    }
    r["se"] = se;
    if (include_timing) {
      r["time_mean_s"] = row.time_mean_s;
      r["time_median_s"] = row.time_median_s;
      r["time_max_s"] = row.time_max_s;
    }
    if (c.generator == Generator::slhd) {
      r["failures"] = row.failures;
      r["mean_r"] = row.mean_r;
      r["mean_maximin"] = row.mean_maximin;
    }
    if (row.r_star) r["r_star"] = *row.r_star;
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  return doc;
}

/// One column per dimension, one line per quantile, plus r* where known.
inline void write_table_csv(const BenchReport& report, std::ostream& out) {
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return std::string(buf);
  };
  out << "d";
  for (const auto& row : report.rows) out << ',' << row.d;
  out << '\n';
  for (const double alpha : report.config.quantiles) {
    out << quantile_key(alpha);
    for (const auto& row : report.rows) out << ',' << num(row.quantile(alpha));
    out << '\n';
  }
  out << "r_star";
  for (const auto& row : report.rows) out << ',' << (row.r_star ? num(*row.r_star) : "-");
  out << '\n';
}

inline nlohmann::json to_json(const ComparisonRow& row) {
  nlohmann::json r = {{"d", row.d},
                      {"n", row.n},
                      {"random_q25", row.random_q25},
                      {"random_q75", row.random_q75},
                      {"slhd_q10", row.slhd_q10},
                      {"dominates_q75", row.dominates_q75},
                      {"dominates_q25", row.dominates_q25}};
  if (row.r_star) r["r_star"] = *row.r_star;
  return r;
}

}  // namespace lhd
