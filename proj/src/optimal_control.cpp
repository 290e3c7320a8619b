#include "srz/optimal_control.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace srz {

const char* to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::SpeedHigh: return "SpeedHigh";
    case BoundKind::SpeedLow: return "SpeedLow";
    case BoundKind::AccelHigh: return "AccelHigh";
    case BoundKind::AccelLow: return "AccelLow";
  }
  return "?";
}

TrajectoryCoefficients solve_coefficients(const BoundaryConditions& bc) {
  const double horizon = bc.tm - bc.t0;
  if (horizon <= kHorizonEpsilon) {
    throw DegenerateHorizon("solve_coefficients: horizon " + std::to_string(horizon) +
                            " s is below " + std::to_string(kHorizonEpsilon));
  }

  // In the shifted frame tau = t - t0 the boundary system is
  //   p(0) = p0, v(0) = v0, p(T) = pm, v(T) = vm,
  // whose explicit inverse gives
  //   a = 6 (v0 + vm) / T^2 - 12 dp / T^3
  //   b = 6 dp / T^2 - (4 v0 + 2 vm) / T
  //   c = v0, d = p0.
  const double T = horizon;
  const double dp = bc.pm - bc.p0;
  const double a = 6.0 * (bc.v0 + bc.vm) / (T * T) - 12.0 * dp / (T * T * T);
  const double b = 6.0 * dp / (T * T) - (4.0 * bc.v0 + 2.0 * bc.vm) / T;
  const double c = bc.v0;
  const double d = bc.p0;

  // Translate back to absolute time. Extended precision keeps the
  // large t0 powers from eroding the small shifted coefficients.
  const long double t0 = bc.t0;
  const long double al = a, bl = b, cl = c, dl = d;
  TrajectoryCoefficients out;
  out.a = a;
  out.b = static_cast<double>(bl - al * t0);
  out.c = static_cast<double>(cl - bl * t0 + 0.5L * al * t0 * t0);
  out.d = static_cast<double>(dl - cl * t0 + 0.5L * bl * t0 * t0 -
                              al * t0 * t0 * t0 / 6.0L);
  out.valid_from = bc.t0;
  out.valid_to = bc.tm;
  return out;
}

EvalResult eval_trajectory(const TrajectoryCoefficients& coeffs, double t) {
  if (t < coeffs.valid_from - 1e-12 || t > coeffs.valid_to + 1e-12) {
    throw OutOfInterval("eval_trajectory: t = " + std::to_string(t) +
                        " outside [" + std::to_string(coeffs.valid_from) + ", " +
                        std::to_string(coeffs.valid_to) + "]");
  }
  // Evaluate in local time: reconstructing the shifted coefficients
  // cancels the large absolute-time terms and keeps endpoint residuals
  // at machine precision even for trajectories planned late in a run.
  const long double s = coeffs.valid_from;
  const long double a = coeffs.a, b = coeffs.b, c = coeffs.c, d = coeffs.d;
  const long double tau = static_cast<long double>(t) - s;
  const long double b_l = b + a * s;
  const long double c_l = c + s * (b + 0.5L * a * s);
  const long double d_l = d + s * (c + s * (0.5L * b + a * s / 6.0L));
  EvalResult r;
  r.u = static_cast<double>(a * tau + b_l);
  r.v = static_cast<double>((0.5L * a * tau + b_l) * tau + c_l);
  r.p = static_cast<double>(((a * tau / 6.0L + 0.5L * b_l) * tau + c_l) * tau + d_l);
  return r;
}

TrajectoryCoefficients replan(const VehicleState& current, double tm, double pm,
                              double vm) {
  BoundaryConditions bc;
  bc.t0 = current.t;
  bc.p0 = current.p;
  bc.v0 = current.v;
  bc.tm = tm;
  bc.pm = pm;
  bc.vm = vm;
  return solve_coefficients(bc);
}

namespace {

double eval_speed(const TrajectoryCoefficients& c, double t) {
  return 0.5 * c.a * t * t + c.b * t + c.c;
}

// First t in [ta, tb] where the quadratic speed exceeds the limit in the
// given direction (above = true checks v > limit). Assumes a violation
// exists somewhere in the interval.
double first_speed_crossing(const TrajectoryCoefficients& c, double limit,
                            bool above, double ta, double tb) {
  auto violated = [&](double t) {
    double v = eval_speed(c, t);
    return above ? v > limit : v < limit;
  };
  if (violated(ta)) return ta;
  // Roots of a/2 t^2 + b t + (c - limit) = 0.
  const double qa = 0.5 * c.a;
  const double qb = c.b;
  const double qc = c.c - limit;
  std::vector<double> roots;
  if (std::abs(qa) < 1e-15) {
    if (std::abs(qb) > 1e-15) roots.push_back(-qc / qb);
  } else {
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc >= 0) {
      const double sq = std::sqrt(disc);
      roots.push_back((-qb - sq) / (2.0 * qa));
      roots.push_back((-qb + sq) / (2.0 * qa));
    }
  }
  std::sort(roots.begin(), roots.end());
  for (double r : roots) {
    if (r >= ta && r <= tb) {
      // Violation begins at the crossing if it holds just past it.
      const double probe = std::min(tb, r + 1e-9 * std::max(1.0, tb - ta));
      if (violated(probe) || violated(std::min(tb, 0.5 * (r + tb)))) return r;
    }
  }
  return ta;  // unreachable when a violation exists past ta
}

}  // namespace

std::vector<BoundViolation> check_bounds(const TrajectoryCoefficients& coeffs,
                                         const ControlParams& limits) {
  std::vector<BoundViolation> out;
  const double ta = coeffs.valid_from;
  const double tb = coeffs.valid_to;

  // u(t) = a t + b is affine: extremes at the endpoints.
  const double u_a = coeffs.a * ta + coeffs.b;
  const double u_b = coeffs.a * tb + coeffs.b;
  const double u_hi = std::max(u_a, u_b);
  const double u_lo = std::min(u_a, u_b);
  if (u_hi > limits.u_max) {
    double t_first = ta;
    if (u_a <= limits.u_max && std::abs(coeffs.a) > 1e-15) {
      t_first = (limits.u_max - coeffs.b) / coeffs.a;
    }
    out.push_back({BoundKind::AccelHigh, t_first, u_hi});
  }
  if (u_lo < limits.u_min) {
    double t_first = ta;
    if (u_a >= limits.u_min && std::abs(coeffs.a) > 1e-15) {
      t_first = (limits.u_min - coeffs.b) / coeffs.a;
    }
    out.push_back({BoundKind::AccelLow, t_first, u_lo});
  }

  // v(t) is quadratic: extremes at the endpoints and at the interior
  // stationary point t = -b/a.
  std::vector<double> candidates = {ta, tb};
  if (std::abs(coeffs.a) > 1e-15) {
    const double t_star = -coeffs.b / coeffs.a;
    if (t_star > ta && t_star < tb) candidates.push_back(t_star);
  }
  double v_hi = -1e300, v_lo = 1e300, t_hi = ta, t_lo = ta;
  for (double t : candidates) {
    const double v = eval_speed(coeffs, t);
    if (v > v_hi) { v_hi = v; t_hi = t; }
    if (v < v_lo) { v_lo = v; t_lo = t; }
  }
  if (v_hi > limits.v_max) {
    out.push_back({BoundKind::SpeedHigh,
                   first_speed_crossing(coeffs, limits.v_max, true, ta, tb), v_hi});
    (void)t_hi;
  }
  if (v_lo < limits.v_min) {
    out.push_back({BoundKind::SpeedLow,
                   first_speed_crossing(coeffs, limits.v_min, false, ta, tb), v_lo});
    (void)t_lo;
  }
  return out;
}

}  // namespace srz
