#pragma once

#include <optional>

#include "srz/domain.hpp"

namespace srz {

// Intelligent-driver car-following acceleration (stands in for the
// human-driver baseline). Free-road law when no leader. gap <= 0 yields
// maximum braking; the simulator logs it as a collision event.
double baseline_accel(const VehicleState& follower,
                      const std::optional<VehicleState>& leader,
                      const CarFollowingParams& params,
                      const ControlParams& lim);

// Desired spacing s* of the car-following law, exposed for tests.
double desired_spacing(double v, double dv, const CarFollowingParams& params);

// Speed-harmonization command at x_rel meters past the measurement
// point: linear interpolation from s_m down to s_n, clamped to the
// admissible speed range.
double spdharm_speed(double x_rel, const SpdHarmParams& params,
                     const ControlParams& lim);

// Proportional tracking of a commanded speed (tau = 1 s), clamped to
// the actuation limits.
double spdharm_accel(double current_v, double commanded_v,
                     const ControlParams& lim, double dt);

}  // namespace srz
