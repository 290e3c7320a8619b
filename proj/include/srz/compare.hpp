#pragma once

#include <string>
#include <vector>

#include "srz/domain.hpp"
#include "srz/fuel_metrics.hpp"
#include "srz/sim_engine.hpp"

namespace srz {

struct ComparisonCell {
  ControllerKind controller;
  double volume;
  MetricsReport aggregate;                 // across replications
  std::vector<MetricsReport> replications; // per-replication reports
};

// 3 controllers x configured volumes, common random numbers: within a
// volume all controllers replay the same arrival schedules
// (seed_i = base_seed + i).
struct ComparisonTable {
  std::vector<double> volumes;
  std::vector<ComparisonCell> cells;

  const ComparisonCell* find(ControllerKind controller, double volume) const;
};

ComparisonTable run_comparison(const SimConfig& base,
                               const std::vector<double>& volumes = {1620.0, 1800.0,
                                                                     1980.0});

// Percentage improvement of Optimal vs. the alternative: (alt - opt)/alt.
double improvement(double alternative, double optimal);

std::string comparison_csv(const ComparisonTable& table);
std::string comparison_json(const ComparisonTable& table);
std::string comparison_summary(const ComparisonTable& table);

}  // namespace srz
