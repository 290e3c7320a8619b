#include "srz/comparators.hpp"

#include <algorithm>
#include <cmath>

namespace srz {

double desired_spacing(double v, double dv, const CarFollowingParams& params) {
  const double dynamic = v * dv /
      (2.0 * std::sqrt(params.max_accel * params.comfortable_decel));
  return params.min_spacing + std::max(0.0, v * params.time_headway + dynamic);
}

double baseline_accel(const VehicleState& follower,
                      const std::optional<VehicleState>& leader,
                      const CarFollowingParams& params,
                      const ControlParams& lim) {
  const double v = std::max(0.0, follower.v);
  const double free_term = std::pow(v / params.desired_speed, params.accel_exponent);
  double interaction = 0.0;
  if (leader.has_value()) {
    const double gap = leader->p - follower.p;
    if (gap <= 0.0) return lim.u_min;
    const double s_star = desired_spacing(v, v - leader->v, params);
    interaction = (s_star / gap) * (s_star / gap);
  }
  const double u = params.max_accel * (1.0 - free_term - interaction);
  return std::clamp(u, lim.u_min, lim.u_max);
}

double spdharm_speed(double x_rel, const SpdHarmParams& params,
                     const ControlParams& lim) {
  const double frac = std::clamp(x_rel / params.dx_mn, 0.0, 1.0);
  const double s = params.s_m + (params.s_n - params.s_m) * frac;
  return std::clamp(s, lim.v_min, lim.v_max);
}

double spdharm_accel(double current_v, double commanded_v,
                     const ControlParams& lim, double dt) {
  (void)dt;
  constexpr double kTrackingTau = 1.0;  // [s]
  const double u = (commanded_v - current_v) / kTrackingTau;
  return std::clamp(u, lim.u_min, lim.u_max);
}

}  // namespace srz
