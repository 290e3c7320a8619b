#pragma once

#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "srz/domain.hpp"
#include "srz/errors.hpp"
#include "srz/fuel_metrics.hpp"
#include "srz/optimal_control.hpp"

namespace srz {

struct Arrival {
  double t;   // [s]
  double v0;  // entry speed [m/s]
};

struct ArrivalSchedule {
  std::vector<Arrival> arrivals;
};

struct Event {
  double t;
  std::string kind;
  int id;
  std::string detail;
};

struct TraceRow {
  double t;
  int id;
  Phase phase;
  double p, v, u, gap, fuel_rate;
};

// One simulated vehicle plus its controller bookkeeping.
struct SimVehicle {
  VehicleState s;
  std::optional<TrajectoryCoefficients> plan;
  double delta_frozen = 0.0;
  bool entry_hold = false;  // decelerating until gap >= delta (Remark 3)
  bool fallback = false;    // no admissible plan; follows car-following law
  double fuel = 0.0;
  double prev_fuel_rate = 0.0;
  double min_gap = std::numeric_limits<double>::infinity();
  double prev_srz_gap = -1.0;  // gap when both in SRZ, for drift monitoring
};

struct MeasurementSample {
  double t;
  double speed_sum;
  int count;
};

struct WorldState {
  double clock = 0.0;
  long step_count = 0;
  // Front of the lane queue (index 0) is the most downstream vehicle.
  std::vector<SimVehicle> queue;
  std::vector<SimVehicle> done;
  ArrivalSchedule schedule;
  std::size_t next_arrival = 0;
  bool admit_arrivals = true;
  int next_id = 1;
  std::vector<Event> events;
  std::deque<MeasurementSample> upstream_speed_window;  // for SPD-HARM s_m
  std::vector<TraceRow> trace;
  bool record_trace = false;
};

// Shifted-exponential headways (mean 3600/volume, shift = minimum safe
// entry headway delta(v0)/v0) with truncated-normal entry speeds.
// Deterministic given the seed. Throws InfeasibleVolume when the mean
// headway cannot cover the safety shift.
ArrivalSchedule spawn_arrivals(const SimConfig& config, std::uint64_t seed);

WorldState make_world(ArrivalSchedule schedule, bool record_trace = false);

// Advance the world by one dt: admit due arrivals, dispatch controllers
// by zone phase, integrate (semi-implicit Euler), retire exited
// vehicles, and record monitoring events. Never throws: anomalies are
// logged events.
void step(WorldState& world, const SimConfig& config);

struct ScenarioResult {
  MetricsReport report;
  std::vector<Event> events;
  std::vector<TraceRow> trace;
};

// One replication: spawn, run for config.duration, then drain until all
// admitted vehicles exit. Throughput is windowed to the configured
// duration.
ScenarioResult run_scenario(const SimConfig& config, std::uint64_t seed,
                            bool record_trace = false);

std::string events_text(const std::vector<Event>& events);
std::string trace_csv(const std::vector<TraceRow>& rows);

}  // namespace srz
