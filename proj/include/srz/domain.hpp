#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace srz {

// Corridor layout. Positions are measured in meters from the corridor
// entry, increasing downstream. The control zone of length L sits right
// before the speed reduction zone of length S, which terminates the
// corridor.
struct ZoneGeometry {
  double corridor_length = 2000.0;
  double upstream_length = 1400.0;
  double control_zone_length = 300.0;  // L
  double srz_length = 300.0;           // S
  double v_srz = 15.6;                 // imposed speed inside the SRZ [m/s]

  double control_zone_start() const { return upstream_length; }
  double srz_start() const { return upstream_length + control_zone_length; }
};

// Actuation limits shared by all vehicles.
struct ControlParams {
  double u_min = -4.5;  // max deceleration [m/s^2], negative
  double u_max = 4.5;   // max acceleration [m/s^2]
  double v_min = 10.0;  // [m/s]
  double v_max = 35.0;  // [m/s]
};

// Minimum safe following distance: delta(v) = c0 + c1 * v.
struct SafetyParams {
  double c0 = 1.5;  // standstill distance [m]
  double c1 = 1.2;  // headway time [s]
};

enum class Phase { Upstream, ControlZone, SpeedReductionZone, Exited };

const char* to_string(Phase phase);

struct VehicleState {
  int id = 0;
  double t = 0.0;  // [s]
  double p = 0.0;  // [m], 0 at corridor entry
  double v = 0.0;  // [m/s]
  double u = 0.0;  // [m/s^2]
  Phase phase = Phase::Upstream;
  std::optional<double> t_entry_corridor;
  std::optional<double> t0;  // control-zone entry
  std::optional<double> tm;  // assigned SRZ-entry time (absolute)
  std::optional<double> tf;  // SRZ exit time
};

// Endpoint states for the closed-form coefficient solve.
struct BoundaryConditions {
  double t0 = 0.0;
  double p0 = 0.0;
  double v0 = 0.0;
  double tm = 0.0;
  double pm = 0.0;
  double vm = 0.0;
};

// Integration constants of the energy-optimal cubic, in absolute time:
//   u(t) = a*t + b
//   v(t) = a*t^2/2 + b*t + c
//   p(t) = a*t^3/6 + b*t^2/2 + c*t + d
struct TrajectoryCoefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double valid_from = 0.0;
  double valid_to = 0.0;
};

// Polynomial fuel metamodel: rate = cruise(v) + u * accel(v).
// The vehicle metadata (mass 1200 kg, C_D 0.32, air density 1.184,
// frontal area 2.5 m^2, rolling resistance 0.015) is documentation of
// the calibration the coefficients came from; the polynomial subsumes
// it. The shipped defaults are illustrative, not ground truth: all
// fuel comparisons are ratios between controllers under identical
// coefficients.
struct FuelModelConfig {
  std::array<double, 4> w = {0.1569, 0.0245, -7.415e-4, 5.975e-5};
  std::array<double, 3> n = {0.07224, 0.09681, 0.001075};
};

// Car-following baseline (intelligent-driver law). Defaults tuned so
// simulated single-lane capacity lands near 1800 veh/h.
struct CarFollowingParams {
  double desired_speed = 25.0;    // [m/s]
  double time_headway = 1.5;      // [s]
  double min_spacing = 2.0;       // [m]
  double max_accel = 1.4;         // [m/s^2]
  double comfortable_decel = 2.0; // [m/s^2], positive
  double accel_exponent = 4.0;
  // Time headway human drivers keep while following inside the reduced-speed
  // zone. Field capacities of reduced-speed work zones are well below
  // open-road capacity (HCM reports ~1300-1600 veh/h/ln), a drop a single
  // time-headway car-following law cannot reproduce on its own; this headway
  // is calibrated so the zone entrance discharges ~1450 veh/h.
  double srz_time_headway = 2.4;  // [s]
};

// Vehicular speed-harmonization law: linear speed ramp from the
// upstream measured speed s_m down to the downstream target s_n over
// dx_mn meters.
struct SpdHarmParams {
  double s_m = 25.0;               // upstream measured speed [m/s]
  double s_n = 15.6;               // downstream target speed [m/s]
  double dx_mn = 300.0;            // [m]
  double measurement_window = 60.0;  // [s]
};

enum class ControllerKind { Baseline, SpdHarm, Optimal };

const char* to_string(ControllerKind kind);
std::optional<ControllerKind> controller_from_string(const std::string& name);

struct SimConfig {
  ZoneGeometry geometry;
  ControlParams control;
  SafetyParams safety;
  FuelModelConfig fuel;
  CarFollowingParams car_following;
  SpdHarmParams spdharm;
  double volume = 1800.0;   // [veh/h]
  double duration = 1000.0; // [s]
  double dt = 0.1;          // [s]
  std::uint64_t seed = 1;
  int replications = 5;
  ControllerKind controller = ControllerKind::Optimal;
  double entry_speed_mean = 25.0;   // [m/s]
  double entry_speed_stddev = 2.0;  // [m/s]
};

struct ValidationResult {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Total: every config yields either ok or a non-empty violation list
// with field paths; never throws, never partially accepts.
ValidationResult validate_config(const SimConfig& config);

}  // namespace srz
