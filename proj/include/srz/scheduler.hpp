#pragma once

#include <optional>
#include <utility>

#include "srz/domain.hpp"
#include "srz/errors.hpp"
#include "srz/optimal_control.hpp"

namespace srz {

// What a vehicle learns about its predecessor when entering the control
// zone. tm_prev is expressed relative to this vehicle's own entry clock
// (t0 = 0).
struct LeaderInfo {
  double tm_prev;  // predecessor's SRZ-entry time, relative to own t0 [s]
  double v_at_tm;  // predecessor speed at its tm (= v_srz) [m/s]
  double gap_now;  // current spacing l [m]
  double v_now;    // predecessor current speed [m/s]
};

struct SafetyVerdict {
  bool holds;
  double t_star;  // maximizer of the rear-end certificate bound [s]
  double margin;  // dv - f(t_star); >= 0 iff holds [m/s]
};

// delta(v_ave) = c0 + c1 * v_ave.
double safe_distance(double v_ave, const SafetyParams& sp);

// SRZ-entry time recursion. All times relative to the vehicle's own t0.
// First vehicle: external assignment if given, else cruise time clamped
// to [L/v_max, L/v_min]. Otherwise
//   tm = max{ min{ tm_prev + delta/v_srz, L/v_min }, L/entry_v, L/v_max }.
double assign_terminal_time(double entry_v, const std::optional<LeaderInfo>& leader,
                            double delta, const ZoneGeometry& geo,
                            const ControlParams& lim,
                            std::optional<double> external_t1m = std::nullopt);

// Rear-end certificate: the constraint stays inactive on (0, tm] iff
//   dv >= f(t) = -(l - delta) (2t + tm) / (t tm)
// for all t. f is increasing, so its supremum -3(l - delta)/tm sits at
// t = tm; the maximizer t_s is located by a seeded golden-section
// search over (0, tm]. Throws HypothesisViolated when l < delta.
SafetyVerdict theorem1_condition(double l, double delta, double dv, double tm);

// Exact minimum of the cubic gap p_lead - p_follow over [t_a, t_b]:
// endpoint values plus real roots of the quadratic derivative.
std::pair<double, double> min_gap(const TrajectoryCoefficients& lead,
                                  const TrajectoryCoefficients& follow,
                                  double t_a, double t_b);

// Smallest terminal time >= tm_current whose rebuilt trajectory pair
// passes the exact gap oracle. The leader keeps its original terminal
// time tm_current and cruises at v_srz afterwards; only the follower is
// re-solved at the candidate time. The cubic from the certificate
// algebra seeds the search; the gap oracle is the final authority.
// Throws NoFeasibleTime past tm_max.
double correct_terminal_time(double l, double delta, double dv, double t_s,
                             double tm_current, double tm_max);

// Deceleration command for a vehicle whose entry gap is below delta:
// brake at u_min, scaled back so the speed never undershoots v_min.
double enforce_entry_feasibility(const VehicleState& state, double gap,
                                 double delta, const ControlParams& lim,
                                 double dt);

// Runtime assertion that two SRZ vehicles both cruise at v_srz (under
// which the entry gap is preserved exactly).
bool theorem2_check(const VehicleState& lead, const VehicleState& follow,
                    const ZoneGeometry& geo);

// Builds the certificate's trajectory pair from (l, delta, dv, tm) and
// returns the exact minimum gap over (0, tm]. Shared by the scheduler
// and its tests.
double certificate_min_gap(double l, double delta, double dv, double tm,
                           double v_follow0 = 15.6);

// Gap oracle for the corrected pair: leader on its original-tm proof
// trajectory (then cruising at v_srz), follower re-solved to tm_follow.
double corrected_pair_min_gap(double l, double delta, double dv, double tm_lead,
                              double tm_follow, double v_follow0 = 15.6);

}  // namespace srz
