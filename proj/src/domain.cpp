#include "srz/domain.hpp"

#include <cmath>

namespace srz {

const char* to_string(Phase phase) {
  switch (phase) {
    case Phase::Upstream: return "Upstream";
    case Phase::ControlZone: return "ControlZone";
    case Phase::SpeedReductionZone: return "SpeedReductionZone";
    case Phase::Exited: return "Exited";
  }
  return "?";
}

const char* to_string(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::Baseline: return "Baseline";
    case ControllerKind::SpdHarm: return "SpdHarm";
    case ControllerKind::Optimal: return "Optimal";
  }
  return "?";
}

std::optional<ControllerKind> controller_from_string(const std::string& name) {
  if (name == "Baseline") return ControllerKind::Baseline;
  if (name == "SpdHarm") return ControllerKind::SpdHarm;
  if (name == "Optimal") return ControllerKind::Optimal;
  return std::nullopt;
}

ValidationResult validate_config(const SimConfig& config) {
  ValidationResult result;
  auto fail = [&result](const std::string& msg) { result.violations.push_back(msg); };

  const ZoneGeometry& g = config.geometry;
  if (!(g.control_zone_length > 0)) fail("geometry.control_zone_length: must be > 0");
  if (!(g.srz_length > 0)) fail("geometry.srz_length: must be > 0");
  if (!(g.v_srz > 0)) fail("geometry.v_srz: must be > 0");
  if (!(g.upstream_length >= 0)) fail("geometry.upstream_length: must be >= 0");
  if (std::abs(g.upstream_length + g.control_zone_length + g.srz_length -
               g.corridor_length) > 1e-9) {
    fail("geometry: upstream_length + control_zone_length + srz_length must equal corridor_length");
  }

  const ControlParams& c = config.control;
  if (!(c.u_min < 0)) fail("control.u_min: must be < 0");
  if (!(c.u_max > 0)) fail("control.u_max: must be > 0");
  if (!(c.v_min > 0)) fail("control.v_min: must be > 0");
  if (!(c.v_min < c.v_max)) fail("control.v_min: must be < control.v_max");
  if (g.v_srz > 0 && c.v_min > 0 && c.v_min < c.v_max &&
      !(g.v_srz >= c.v_min && g.v_srz <= c.v_max)) {
    fail("geometry.v_srz: must lie within [control.v_min, control.v_max]");
  }

  const SafetyParams& s = config.safety;
  if (!(s.c0 >= 0)) fail("safety.c0: must be >= 0");
  if (!(s.c1 >= 0)) fail("safety.c1: must be >= 0");
  if (s.c0 == 0 && s.c1 == 0) fail("safety: c0 and c1 must not both be zero");

  // Cruise polynomial must stay non-negative over the admissible speed range.
  if (c.v_min > 0 && c.v_min < c.v_max) {
    const auto& w = config.fuel.w;
    for (int k = 0; k <= 100; ++k) {
      double v = c.v_min + (c.v_max - c.v_min) * k / 100.0;
      double rate = w[0] + w[1] * v + w[2] * v * v + w[3] * v * v * v;
      if (rate < 0) {
        fail("fuel.w: cruise fuel rate negative at v = " + std::to_string(v));
        break;
      }
    }
  }

  const CarFollowingParams& cf = config.car_following;
  if (!(cf.desired_speed > 0)) fail("car_following.desired_speed: must be > 0");
  if (!(cf.time_headway > 0)) fail("car_following.time_headway: must be > 0");
  if (!(cf.min_spacing > 0)) fail("car_following.min_spacing: must be > 0");
  if (!(cf.max_accel > 0)) fail("car_following.max_accel: must be > 0");
  if (!(cf.comfortable_decel > 0)) fail("car_following.comfortable_decel: must be > 0");
  if (!(cf.accel_exponent > 0)) fail("car_following.accel_exponent: must be > 0");
  if (!(cf.srz_time_headway > 0)) fail("car_following.srz_time_headway: must be > 0");

  const SpdHarmParams& sh = config.spdharm;
  if (!(sh.dx_mn > 0)) fail("spdharm.dx_mn: must be > 0");
  if (!(sh.measurement_window > 0)) fail("spdharm.measurement_window: must be > 0");
  if (c.v_min > 0 && c.v_min < c.v_max) {
    if (!(sh.s_n >= c.v_min && sh.s_n <= c.v_max)) {
      fail("spdharm.s_n: must lie within [control.v_min, control.v_max]");
    }
  }

  if (!(config.volume > 0)) fail("volume: must be > 0");
  if (!(config.duration >= 0)) fail("duration: must be >= 0");
  if (!(config.dt > 0)) fail("dt: must be > 0");
  if (!(config.replications >= 1)) fail("replications: must be >= 1");
  if (!(config.entry_speed_mean > 0)) fail("entry_speed_mean: must be > 0");
  if (!(config.entry_speed_stddev >= 0)) fail("entry_speed_stddev: must be >= 0");

  return result;
}

}  // namespace srz
