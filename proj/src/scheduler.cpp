#include "srz/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace srz {

double safe_distance(double v_ave, const SafetyParams& sp) {
  return sp.c0 + sp.c1 * v_ave;
}

double assign_terminal_time(double entry_v, const std::optional<LeaderInfo>& leader,
                            double delta, const ZoneGeometry& geo,
                            const ControlParams& lim,
                            std::optional<double> external_t1m) {
  const double L = geo.control_zone_length;
  const double t_fast = L / lim.v_max;
  const double t_slow = L / lim.v_min;
  const double v = std::clamp(entry_v, lim.v_min, lim.v_max);

  if (!leader.has_value()) {
    if (external_t1m.has_value()) return *external_t1m;
    return std::clamp(L / v, t_fast, t_slow);
  }

  const double inner = std::min(leader->tm_prev + delta / leader->v_at_tm, t_slow);
  const double tm = std::max({inner, L / v, t_fast});
  if (tm > t_slow + kHorizonEpsilon) {
    throw std::logic_error("assign_terminal_time: result exceeds L/v_min");
  }
  return tm;
}

namespace {

// Right-hand side of the rear-end certificate on (0, tm]. Derived from
// the gap cubic g with g(0) = l, g'(0) = dv, g(tm) = delta, g'(tm) = 0:
//   g(t) - delta = (l - delta) (2t + tm)(t - tm)^2 / tm^3
//                + dv t (t - tm)^2 / tm^2,
// so g >= delta on (0, tm] iff dv >= -(l - delta)(2t + tm)/(t tm) for
// all t. The bound is increasing in t; its supremum -3(l - delta)/tm is
// attained at t = tm.
double certificate_bound(double l, double delta, double t, double tm) {
  return -(l - delta) * (2.0 * t + tm) / (t * tm);
}

// Real roots of a3 x^3 + a2 x^2 + a1 x + a0 = 0 (trigonometric/Cardano).
std::vector<double> solve_cubic_real(double a3, double a2, double a1, double a0) {
  std::vector<double> roots;
  if (std::abs(a3) < 1e-14) {
    if (std::abs(a2) < 1e-14) {
      if (std::abs(a1) > 1e-14) roots.push_back(-a0 / a1);
      return roots;
    }
    const double disc = a1 * a1 - 4.0 * a2 * a0;
    if (disc >= 0) {
      const double sq = std::sqrt(disc);
      roots.push_back((-a1 - sq) / (2.0 * a2));
      roots.push_back((-a1 + sq) / (2.0 * a2));
    }
    return roots;
  }
  const double p = a1 / a3 - a2 * a2 / (3.0 * a3 * a3);
  const double q = 2.0 * a2 * a2 * a2 / (27.0 * a3 * a3 * a3) -
                   a2 * a1 / (3.0 * a3 * a3) + a0 / a3;
  const double shift = -a2 / (3.0 * a3);
  const double disc = q * q / 4.0 + p * p * p / 27.0;
  if (disc > 0) {
    const double sq = std::sqrt(disc);
    const double u = std::cbrt(-q / 2.0 + sq);
    const double v = std::cbrt(-q / 2.0 - sq);
    roots.push_back(u + v + shift);
  } else if (std::abs(disc) <= 1e-18) {
    const double u = std::cbrt(-q / 2.0);
    roots.push_back(2.0 * u + shift);
    roots.push_back(-u + shift);
  } else {
    const double r = std::sqrt(-p * p * p / 27.0);
    const double phi = std::acos(std::clamp(-q / (2.0 * r), -1.0, 1.0));
    const double m = 2.0 * std::sqrt(-p / 3.0);
    for (int k = 0; k < 3; ++k) {
      roots.push_back(m * std::cos((phi + 2.0 * M_PI * k) / 3.0) + shift);
    }
  }
  return roots;
}

}  // namespace

SafetyVerdict theorem1_condition(double l, double delta, double dv, double tm) {
  if (l < delta) {
    throw HypothesisViolated("theorem1_condition: l = " + std::to_string(l) +
                             " < delta = " + std::to_string(delta));
  }
  if (!(tm > 0)) {
    throw std::invalid_argument("theorem1_condition: tm must be > 0");
  }

  // l == delta annihilates the bound.
  if (l == delta) {
    return {dv >= 0.0, tm, dv};
  }

  // Seed with a 256-point grid over (0, tm], then refine by golden
  // section between the best point's neighbors. The bound diverges to
  // -inf at t -> 0+ and is finite at t = tm, where its supremum sits.
  constexpr int kGrid = 256;
  const double margin_t = tm * 1e-9;
  double best_t = tm;
  double best_f = -1e300;
  std::vector<double> ts(kGrid);
  for (int k = 0; k < kGrid; ++k) {
    ts[k] = margin_t + (tm - margin_t) * (k + 1.0) / kGrid;
    const double f = certificate_bound(l, delta, ts[k], tm);
    if (f > best_f) { best_f = f; best_t = ts[k]; }
  }
  double lo = std::max(margin_t, best_t - (tm - margin_t) / kGrid);
  double hi = std::min(tm, best_t + (tm - margin_t) / kGrid);

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = certificate_bound(l, delta, x1, tm);
  double f2 = certificate_bound(l, delta, x2, tm);
  while (hi - lo > 1e-8) {
    if (f1 < f2) {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = certificate_bound(l, delta, x2, tm);
    } else {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = certificate_bound(l, delta, x1, tm);
    }
  }
  double t_s = 0.5 * (lo + hi);
  double f_s = certificate_bound(l, delta, t_s, tm);
  // The supremum lives on the closed right end; never report less.
  const double f_end = certificate_bound(l, delta, tm, tm);
  if (f_end >= f_s) {
    t_s = tm;
    f_s = f_end;
  }
  return {dv >= f_s, t_s, dv - f_s};
}

std::pair<double, double> min_gap(const TrajectoryCoefficients& lead,
                                  const TrajectoryCoefficients& follow,
                                  double t_a, double t_b) {
  const double da = lead.a - follow.a;
  const double db = lead.b - follow.b;
  const double dc = lead.c - follow.c;
  const double dd = lead.d - follow.d;
  auto gap = [&](double t) {
    return da * t * t * t / 6.0 + 0.5 * db * t * t + dc * t + dd;
  };

  double t_min = t_a;
  double g_min = gap(t_a);
  auto consider = [&](double t) {
    const double g = gap(t);
    if (g < g_min) { g_min = g; t_min = t; }
  };
  consider(t_b);

  // g'(t) = da t^2 / 2 + db t + dc.
  if (std::abs(da) < 1e-15) {
    if (std::abs(db) > 1e-15) {
      const double r = -dc / db;
      if (r > t_a && r < t_b) consider(r);
    }
  } else {
    const double disc = db * db - 2.0 * da * dc;
    if (disc >= 0) {
      const double sq = std::sqrt(disc);
      for (double r : {(-db - sq) / da, (-db + sq) / da}) {
        if (r > t_a && r < t_b) consider(r);
      }
    }
  }
  return {t_min, g_min};
}

double certificate_min_gap(double l, double delta, double dv, double tm,
                           double v_follow0) {
  // Proof boundary data: follower (0, 0, v0) -> (tm, X, v_t); leader
  // (0, l, v0 + dv) -> (tm, X + delta, v_t). The gap cubic depends only
  // on the differences, so X, v0 and the common terminal speed drop out.
  const double X = 300.0;
  const double v_t = v_follow0;
  TrajectoryCoefficients follow =
      solve_coefficients({0.0, 0.0, v_follow0, tm, X, v_t});
  TrajectoryCoefficients lead =
      solve_coefficients({0.0, l, v_follow0 + dv, tm, X + delta, v_t});
  return min_gap(lead, follow, 0.0, tm).second;
}

double corrected_pair_min_gap(double l, double delta, double dv, double tm_lead,
                              double tm_follow, double v_follow0) {
  const double X = 300.0;
  TrajectoryCoefficients follow =
      solve_coefficients({0.0, 0.0, v_follow0, tm_follow, X, v_follow0});
  TrajectoryCoefficients lead =
      solve_coefficients({0.0, l, v_follow0 + dv, tm_lead, X + delta, v_follow0});

  const double seg_end = std::min(tm_lead, tm_follow);
  double worst = min_gap(lead, follow, 0.0, seg_end).second;
  if (tm_follow > tm_lead) {
    // Leader cruises at its terminal speed past tm_lead.
    const EvalResult end = eval_trajectory(lead, tm_lead);
    TrajectoryCoefficients cruise;
    cruise.c = v_follow0;
    cruise.d = end.p - v_follow0 * tm_lead;
    cruise.valid_from = tm_lead;
    cruise.valid_to = tm_follow;
    worst = std::min(worst, min_gap(cruise, follow, tm_lead, tm_follow).second);
  }
  return worst;
}

double correct_terminal_time(double l, double delta, double dv, double t_s,
                             double tm_current, double tm_max) {
  if (theorem1_condition(l, delta, dv, tm_current).holds &&
      certificate_min_gap(l, delta, dv, tm_current) >= delta - 1e-6) {
    return tm_current;
  }

  // Cubic inequality in tm, used as a root seed only: the printed form
  // has ambiguous parenthesization, so the gap oracle re-verifies.
  const double zeta = dv;
  const double q = l - delta;
  const double a3 = t_s * zeta + q;
  const double a2 = -2.0 * t_s * t_s * zeta;
  const double a1 = 3.0 * t_s * t_s * q + t_s * t_s * t_s * zeta;
  const double a0 = -2.0 * q * t_s * t_s * t_s;

  double candidate = tm_current;
  std::vector<double> roots = solve_cubic_real(a3, a2, a1, a0);
  std::sort(roots.begin(), roots.end());
  for (double r : roots) {
    if (r >= tm_current) { candidate = r; break; }
  }

  auto passes = [&](double tm) {
    return corrected_pair_min_gap(l, delta, dv, tm_current, tm) >= delta - 1e-6;
  };
  for (double tm = candidate; tm <= tm_max + 1e-12; tm += 0.1) {
    if (passes(tm)) return tm;
  }
  if (passes(tm_max)) return tm_max;
  throw NoFeasibleTime("correct_terminal_time: no feasible terminal time up to " +
                       std::to_string(tm_max));
}

double enforce_entry_feasibility(const VehicleState& state, double gap,
                                 double delta, const ControlParams& lim,
                                 double dt) {
  if (gap >= delta) return 0.0;
  if (state.v <= lim.v_min) return 0.0;
  // Brake hard, but never undershoot v_min within one step.
  const double u_floor = (lim.v_min - state.v) / dt;
  return std::clamp(lim.u_min, u_floor, 0.0);
}

bool theorem2_check(const VehicleState& lead, const VehicleState& follow,
                    const ZoneGeometry& geo) {
  constexpr double kTol = 1e-9;
  return std::abs(lead.v - geo.v_srz) <= kTol &&
         std::abs(follow.v - geo.v_srz) <= kTol;
}

}  // namespace srz
