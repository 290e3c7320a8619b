#pragma once

#include <optional>
#include <span>
#include <vector>

#include "srz/domain.hpp"
#include "srz/errors.hpp"

namespace srz {

// One time sample of a vehicle trace, for fuel integration.
struct TraceSample {
  double t;
  double v;
  double u;
};

struct VehicleRow {
  int id = 0;
  double t_entry = 0.0;
  double t_exit = 0.0;
  double travel_time_s = 0.0;
  double fuel = 0.0;
  double min_gap_m = 0.0;
  double distance_m = 0.0;
};

struct MetricsReport {
  std::vector<VehicleRow> rows;
  double mean_travel_time_s = 0.0;
  double mean_fuel_per_vehicle = 0.0;
  double throughput_vph = 0.0;
  // 95% confidence half-widths across replications; absent for a single
  // replication.
  std::optional<double> ci95_travel_time_s;
  std::optional<double> ci95_fuel_per_vehicle;
  std::optional<double> ci95_throughput_vph;
};

// Instantaneous fuel rate: cruise polynomial plus acceleration term,
// floored at zero (the metamodel goes negative under strong
// deceleration at low speed).
double fuel_rate(double v, double u, const FuelModelConfig& cfg);

// Trapezoidal integration of fuel_rate over a strictly increasing
// sample sequence. Throws EmptyTrace for fewer than 2 samples.
double trip_fuel(std::span<const TraceSample> samples, const FuelModelConfig& cfg);

// Mean and 95% t-interval half-width per metric across replications.
MetricsReport summarize(const std::vector<MetricsReport>& replication_reports);

std::string per_vehicle_csv(const MetricsReport& report);
std::string aggregate_json(const MetricsReport& report);

}  // namespace srz
