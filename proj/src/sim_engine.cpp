#include "srz/sim_engine.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "srz/comparators.hpp"
#include "srz/scheduler.hpp"

namespace srz {

ArrivalSchedule spawn_arrivals(const SimConfig& config, std::uint64_t seed) {
  ArrivalSchedule schedule;
  const double mean_headway = 3600.0 / config.volume;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> speed_dist(config.entry_speed_mean,
                                              config.entry_speed_stddev);
  std::exponential_distribution<double> exp_dist(1.0);

  double t = 0.0;
  bool first = true;
  while (true) {
    // Truncated normal entry speed.
    double v0 = config.entry_speed_mean;
    if (config.entry_speed_stddev > 0.0) {
      do {
        v0 = speed_dist(rng);
      } while (v0 < config.control.v_min || v0 > config.control.v_max);
    }
    const double shift = safe_distance(v0, config.safety) / v0;
    if (mean_headway <= shift) {
      throw InfeasibleVolume(
          "spawn_arrivals: mean headway " + std::to_string(mean_headway) +
          " s below minimum safe entry headway " + std::to_string(shift) + " s");
    }
    if (first) {
      first = false;
    } else {
      t += shift + (mean_headway - shift) * exp_dist(rng);
    }
    if (t >= config.duration) break;
    schedule.arrivals.push_back({t, v0});
  }
  return schedule;
}

WorldState make_world(ArrivalSchedule schedule, bool record_trace) {
  WorldState world;
  world.schedule = std::move(schedule);
  world.record_trace = record_trace;
  return world;
}

namespace {

constexpr double kCollisionSeparation = 0.5;  // [m] hard floor between vehicles

double control_zone_v_ave(const WorldState& world, const SimConfig& config) {
  double sum = 0.0;
  int count = 0;
  for (const auto& veh : world.queue) {
    if (veh.s.phase == Phase::ControlZone) {
      sum += veh.s.v;
      ++count;
    }
  }
  return count > 0 ? sum / count : config.geometry.v_srz;
}

// Leader trajectory over the candidate's horizon: its current plan while
// it lasts, then (or when the leader is already in the SRZ) a constant
// v_srz cruise.
double planned_pair_min_gap(const SimVehicle& leader,
                            const TrajectoryCoefficients& candidate,
                            const SimConfig& config) {
  double worst = std::numeric_limits<double>::infinity();
  const double t_a = candidate.valid_from;
  const double t_b = candidate.valid_to;

  double linear_from = t_a;
  double linear_p0 = leader.s.p;
  double linear_v = leader.s.v;

  if (leader.plan.has_value() && leader.plan->valid_to > t_a) {
    const double seg_end = std::min(leader.plan->valid_to, t_b);
    worst = std::min(worst, min_gap(*leader.plan, candidate, t_a, seg_end).second);
    if (seg_end >= t_b) return worst;
    linear_from = leader.plan->valid_to;
    const EvalResult end = eval_trajectory(*leader.plan, leader.plan->valid_to);
    linear_p0 = end.p;
    linear_v = config.geometry.v_srz;
  } else if (leader.s.phase == Phase::SpeedReductionZone ||
             leader.s.phase == Phase::Exited) {
    linear_v = config.geometry.v_srz;
  }

  TrajectoryCoefficients cruise;
  cruise.a = 0.0;
  cruise.b = 0.0;
  cruise.c = linear_v;
  cruise.d = linear_p0 - linear_v * linear_from;
  cruise.valid_from = linear_from;
  cruise.valid_to = t_b;
  worst = std::min(worst, min_gap(cruise, candidate, linear_from, t_b).second);
  return worst;
}

// Terminal-time assignment at control-zone entry: Eq.-5 recursion,
// rear-end certificate (with correction), exact planned-pair gap
// verification, and bound admissibility. Falls back to car following
// when no admissible terminal time exists by L/v_min.
void assign_plan(WorldState& world, std::size_t k, const SimConfig& config) {
  SimVehicle& veh = world.queue[k];
  const ZoneGeometry& geo = config.geometry;
  const ControlParams& lim = config.control;
  const double t0_abs = veh.s.t;
  const double t_slow = geo.control_zone_length / lim.v_min;

  veh.delta_frozen = safe_distance(control_zone_v_ave(world, config), config.safety);
  veh.s.t0 = t0_abs;

  std::optional<LeaderInfo> leader_info;
  const SimVehicle* leader = (k > 0) ? &world.queue[k - 1] : nullptr;
  if (leader != nullptr) {
    const double gap = leader->s.p - veh.s.p;
    if (gap < veh.delta_frozen) {
      // Remark-3: infeasible entry state; decelerate until the gap
      // recovers, then plan.
      veh.entry_hold = true;
      world.events.push_back({t0_abs, "remark3_cz_hold", veh.s.id,
                              "gap=" + std::to_string(gap) +
                                  " delta=" + std::to_string(veh.delta_frozen)});
      return;
    }
    double leader_tm_rel;
    if (leader->s.tm.has_value()) {
      leader_tm_rel = *leader->s.tm - t0_abs;
    } else {
      // Unplanned leader (fallback or non-optimal): estimate its SRZ
      // entry from a constant-speed projection.
      const double dist = std::max(0.0, geo.srz_start() - leader->s.p);
      leader_tm_rel = dist / std::max(leader->s.v, lim.v_min);
    }
    leader_info = LeaderInfo{leader_tm_rel, geo.v_srz, gap, leader->s.v};
  }

  double tm_rel;
  try {
    tm_rel = assign_terminal_time(veh.s.v, leader_info, veh.delta_frozen, geo, lim);
  } catch (const std::logic_error&) {
    tm_rel = t_slow;
  }

  // Rear-end certificate against the proof's trajectory pair; correct
  // the terminal time when it fails.
  if (leader != nullptr) {
    const double l = leader->s.p - veh.s.p;
    const double dv = leader->s.v - veh.s.v;
    try {
      const SafetyVerdict verdict =
          theorem1_condition(l, veh.delta_frozen, dv, tm_rel);
      if (!verdict.holds) {
        const double corrected = correct_terminal_time(
            l, veh.delta_frozen, dv, verdict.t_star, tm_rel, t_slow);
        world.events.push_back({t0_abs, "tm_corrected", veh.s.id,
                                std::to_string(tm_rel) + "->" +
                                    std::to_string(corrected)});
        tm_rel = corrected;
      }
    } catch (const NoFeasibleTime&) {
      veh.fallback = true;
      world.events.push_back({t0_abs, "fallback", veh.s.id, "no feasible terminal time"});
      return;
    } catch (const HypothesisViolated&) {
      veh.entry_hold = true;
      world.events.push_back({t0_abs, "remark3_cz_hold", veh.s.id, "hypothesis"});
      return;
    }
  }

  // Admissibility loop: stretch tm by 5% on bound violations and by
  // 0.1 s on planned-pair gap shortfalls, up to L/v_min.
  const double pm = geo.srz_start();
  while (true) {
    TrajectoryCoefficients candidate;
    try {
      candidate = solve_coefficients(
          {t0_abs, veh.s.p, veh.s.v, t0_abs + tm_rel, pm, geo.v_srz});
    } catch (const DegenerateHorizon&) {
      veh.fallback = true;
      world.events.push_back({t0_abs, "fallback", veh.s.id, "degenerate horizon"});
      return;
    }
    if (!check_bounds(candidate, lim).empty()) {
      if (tm_rel >= t_slow - 1e-9) {
        veh.fallback = true;
        world.events.push_back({t0_abs, "fallback", veh.s.id, "bounds inadmissible"});
        return;
      }
      tm_rel = std::min(tm_rel * 1.05, t_slow);
      world.events.push_back({t0_abs, "tm_stretched", veh.s.id, "bounds"});
      continue;
    }
    if (leader != nullptr &&
        planned_pair_min_gap(*leader, candidate, config) <
            veh.delta_frozen - 1e-6) {
      if (tm_rel >= t_slow - 1e-9) {
        veh.fallback = true;
        world.events.push_back({t0_abs, "fallback", veh.s.id, "gap inadmissible"});
        return;
      }
      tm_rel = std::min(tm_rel + 0.1, t_slow);
      world.events.push_back({t0_abs, "tm_stretched", veh.s.id, "gap"});
      continue;
    }
    veh.plan = candidate;
    veh.s.tm = t0_abs + tm_rel;
    return;
  }
}

// Tracking command that lands exactly on the target speed when it is
// reachable within one step.
double track_speed(double v, double target, const ControlParams& lim, double dt) {
  return std::clamp((target - v) / dt, lim.u_min, lim.u_max);
}

double spdharm_measured_speed(const WorldState& world, const SimConfig& config) {
  double sum = 0.0;
  int count = 0;
  for (const auto& s : world.upstream_speed_window) {
    sum += s.speed_sum;
    count += s.count;
  }
  return count > 0 ? sum / count : config.entry_speed_mean;
}

double dispatch_control(WorldState& world, std::size_t k, const SimConfig& config) {
  SimVehicle& veh = world.queue[k];
  const ControlParams& lim = config.control;
  const ZoneGeometry& geo = config.geometry;
  const double dt = config.dt;

  std::optional<VehicleState> leader;
  if (k > 0) leader = world.queue[k - 1].s;

  switch (veh.s.phase) {
    case Phase::Upstream:
      // All scenarios share the upstream car-following dynamics.
      return baseline_accel(veh.s, leader, config.car_following, lim);

    case Phase::ControlZone: {
      if (config.controller == ControllerKind::Baseline || veh.fallback) {
        return baseline_accel(veh.s, leader, config.car_following, lim);
      }
      if (config.controller == ControllerKind::SpdHarm) {
        SpdHarmParams params = config.spdharm;
        params.s_m = spdharm_measured_speed(world, config);
        params.s_n = geo.v_srz;
        params.dx_mn = geo.control_zone_length;
        const double cmd =
            spdharm_speed(veh.s.p - geo.control_zone_start(), params, lim);
        double u = spdharm_accel(veh.s.v, cmd, lim, dt);
        if (leader.has_value()) {
          u = std::min(u, baseline_accel(veh.s, leader, config.car_following, lim));
        }
        return u;
      }
      // Optimal controller.
      if (veh.entry_hold) {
        const double gap = leader.has_value() ? leader->p - veh.s.p
                                              : std::numeric_limits<double>::infinity();
        if (gap < veh.delta_frozen) {
          return enforce_entry_feasibility(veh.s, gap, veh.delta_frozen, lim, dt);
        }
        veh.entry_hold = false;
        assign_plan(world, k, config);
        if (veh.entry_hold || veh.fallback) {
          return dispatch_control(world, k, config);
        }
      }
      if (!veh.s.tm.has_value()) {
        // Plan was never assigned (e.g. spawned directly in the zone).
        assign_plan(world, k, config);
        if (veh.entry_hold || veh.fallback || !veh.s.tm.has_value()) {
          return dispatch_control(world, k, config);
        }
      }
      const double tm_abs = *veh.s.tm;
      if (tm_abs - veh.s.t <= 2.0 * dt) {
        return track_speed(veh.s.v, geo.v_srz, lim, dt);
      }
      // Feedback: re-solve from the current state every step.
      try {
        veh.plan = replan(veh.s, tm_abs, geo.srz_start(), geo.v_srz);
      } catch (const DegenerateHorizon&) {
        return track_speed(veh.s.v, geo.v_srz, lim, dt);
      }
      return veh.plan->a * veh.s.t + veh.plan->b;
    }

    case Phase::SpeedReductionZone: {
      if (config.controller == ControllerKind::Optimal && !veh.fallback) {
        return 0.0;  // cruising exactly at v_srz
      }
      double u = track_speed(veh.s.v, geo.v_srz, lim, dt);
      if (leader.has_value()) {
        // Human drivers keep longer headways in the reduced-speed zone,
        // which is what makes its entrance the corridor bottleneck.
        CarFollowingParams zone_params = config.car_following;
        zone_params.time_headway = zone_params.srz_time_headway;
        u = std::min(u, baseline_accel(veh.s, leader, zone_params, lim));
      }
      return u;
    }

    case Phase::Exited:
      return 0.0;
  }
  return 0.0;
}

void admit_arrivals(WorldState& world, const SimConfig& config) {
  while (world.next_arrival < world.schedule.arrivals.size()) {
    const Arrival& arr = world.schedule.arrivals[world.next_arrival];
    if (arr.t > world.clock) break;
    if (!world.admit_arrivals) {
      ++world.next_arrival;  // drained runs drop unadmitted arrivals
      continue;
    }
    double entry_v = arr.v0;
    if (!world.queue.empty()) {
      const SimVehicle& back = world.queue.back();
      const double gap = back.s.p;
      if (gap < safe_distance(config.control.v_min, config.safety)) {
        // Boundary hold: even the slowest admissible entry is unsafe.
        if (world.events.empty() ||
            world.events.back().kind != "remark3_entry_hold" ||
            world.events.back().id != world.next_id) {
          world.events.push_back({world.clock, "remark3_entry_hold", world.next_id,
                                  "gap=" + std::to_string(gap)});
        }
        break;
      }
      // Insert at a safe speed: honor the entry safety distance and a
      // comfortable-stopping bound relative to the vehicle ahead, so a
      // fast arrival behind a slow one does not brake hard immediately.
      const double v_delta = (gap - config.safety.c0) / config.safety.c1;
      const double v_kin = std::sqrt(std::max(
          0.0, back.s.v * back.s.v +
                   2.0 * config.car_following.comfortable_decel *
                       (gap - config.car_following.min_spacing)));
      entry_v = std::clamp(std::min({entry_v, v_delta, v_kin}),
                           config.control.v_min, config.control.v_max);
    }
    SimVehicle veh;
    veh.s.id = world.next_id++;
    veh.s.t = world.clock;
    veh.s.p = 0.0;
    veh.s.v = entry_v;
    veh.s.phase = config.geometry.upstream_length > 0.0 ? Phase::Upstream
                                                        : Phase::ControlZone;
    veh.s.t_entry_corridor = world.clock;
    veh.prev_fuel_rate = fuel_rate(entry_v, 0.0, config.fuel);
    world.queue.push_back(std::move(veh));
    ++world.next_arrival;
    if (world.queue.back().s.phase == Phase::ControlZone &&
        config.controller == ControllerKind::Optimal) {
      assign_plan(world, world.queue.size() - 1, config);
    }
  }
}

void record_upstream_measurement(WorldState& world, const SimConfig& config) {
  const double seg_start = std::max(0.0, config.geometry.control_zone_start() - 300.0);
  const double seg_end = config.geometry.control_zone_start();
  double sum = 0.0;
  int count = 0;
  for (const auto& veh : world.queue) {
    if (veh.s.p >= seg_start && veh.s.p < seg_end) {
      sum += veh.s.v;
      ++count;
    }
  }
  if (count > 0) world.upstream_speed_window.push_back({world.clock, sum, count});
  const double horizon = world.clock - config.spdharm.measurement_window;
  while (!world.upstream_speed_window.empty() &&
         world.upstream_speed_window.front().t < horizon) {
    world.upstream_speed_window.pop_front();
  }
}

}  // namespace

void step(WorldState& world, const SimConfig& config) {
  const double dt = config.dt;
  const ZoneGeometry& geo = config.geometry;

  admit_arrivals(world, config);
  record_upstream_measurement(world, config);

  // Controller dispatch from current states, front to back.
  std::vector<double> commands(world.queue.size(), 0.0);
  for (std::size_t k = 0; k < world.queue.size(); ++k) {
    commands[k] = dispatch_control(world, k, config);
  }

  // Semi-implicit Euler integration, front to back so the overtaking
  // guard sees the leader's updated position.
  const double t_new = world.clock + dt;
  for (std::size_t k = 0; k < world.queue.size(); ++k) {
    SimVehicle& veh = world.queue[k];
    const double v_old = veh.s.v;
    double v_new = std::max(0.0, v_old + commands[k] * dt);
    double p_new = veh.s.p + v_new * dt;

    if (k > 0) {
      const SimVehicle& ahead = world.queue[k - 1];
      if (ahead.s.phase != Phase::Exited &&
          p_new > ahead.s.p - kCollisionSeparation) {
        world.events.push_back({t_new, "collision", veh.s.id,
                                "leader=" + std::to_string(ahead.s.id)});
        p_new = ahead.s.p - kCollisionSeparation;
        v_new = std::min(v_new, ahead.s.v);
      }
    }

    const double u_real = (v_new - v_old) / dt;
    veh.s.t = t_new;
    veh.s.p = p_new;
    veh.s.v = v_new;
    veh.s.u = u_real;

    // Phase transitions.
    if (veh.s.phase == Phase::Upstream && p_new >= geo.control_zone_start()) {
      veh.s.phase = Phase::ControlZone;
      if (config.controller == ControllerKind::Optimal) {
        assign_plan(world, k, config);
      } else {
        veh.s.t0 = t_new;
        veh.delta_frozen =
            safe_distance(control_zone_v_ave(world, config), config.safety);
      }
    }
    if (veh.s.phase == Phase::ControlZone && p_new >= geo.srz_start()) {
      veh.s.phase = Phase::SpeedReductionZone;
      if (!veh.s.tm.has_value()) veh.s.tm = t_new;
      if (config.controller == ControllerKind::Optimal && !veh.fallback) {
        veh.s.v = geo.v_srz;  // imposed SRZ cruise speed
        veh.s.u = 0.0;
      }
    }
    if (veh.s.phase == Phase::SpeedReductionZone && p_new >= geo.corridor_length) {
      veh.s.phase = Phase::Exited;
      veh.s.tf = t_new;
    }

    // Fuel accumulation (trapezoidal on the realized trace).
    const double rate = fuel_rate(veh.s.v, veh.s.u, config.fuel);
    veh.fuel += 0.5 * (veh.prev_fuel_rate + rate) * dt;
    veh.prev_fuel_rate = rate;
  }

  // Monitoring: gap tracking, rear-end events, SRZ gap drift.
  for (std::size_t k = 1; k < world.queue.size(); ++k) {
    SimVehicle& veh = world.queue[k];
    const SimVehicle& ahead = world.queue[k - 1];
    if (ahead.s.phase == Phase::Exited || veh.s.phase == Phase::Exited) continue;
    const double gap = ahead.s.p - veh.s.p;
    veh.min_gap = std::min(veh.min_gap, gap);

    const bool in_controlled_zones = veh.s.phase == Phase::ControlZone ||
                                     veh.s.phase == Phase::SpeedReductionZone;
    if (config.controller == ControllerKind::Optimal && in_controlled_zones &&
        !veh.fallback && !veh.entry_hold && veh.delta_frozen > 0.0 &&
        gap < veh.delta_frozen - 0.01) {
      world.events.push_back({t_new, "rearend_violation", veh.s.id,
                              "gap=" + std::to_string(gap) +
                                  " delta=" + std::to_string(veh.delta_frozen)});
    }

    if (veh.s.phase == Phase::SpeedReductionZone &&
        ahead.s.phase == Phase::SpeedReductionZone &&
        config.controller == ControllerKind::Optimal && !veh.fallback &&
        !ahead.fallback) {
      if (veh.prev_srz_gap >= 0.0 && std::abs(gap - veh.prev_srz_gap) > 1e-9) {
        world.events.push_back({t_new, "srz_gap_drift", veh.s.id,
                                std::to_string(gap - veh.prev_srz_gap)});
      }
      veh.prev_srz_gap = gap;
    } else {
      veh.prev_srz_gap = -1.0;
    }
  }

  if (world.record_trace) {
    for (std::size_t k = 0; k < world.queue.size(); ++k) {
      const SimVehicle& veh = world.queue[k];
      const double gap = (k > 0 && world.queue[k - 1].s.phase != Phase::Exited)
                             ? world.queue[k - 1].s.p - veh.s.p
                             : std::numeric_limits<double>::infinity();
      world.trace.push_back({t_new, veh.s.id, veh.s.phase, veh.s.p, veh.s.v,
                             veh.s.u, gap, veh.prev_fuel_rate});
    }
  }

  // Retire exited vehicles.
  while (!world.queue.empty() && world.queue.front().s.phase == Phase::Exited) {
    world.done.push_back(std::move(world.queue.front()));
    world.queue.erase(world.queue.begin());
  }

  world.clock = t_new;
  ++world.step_count;
}

ScenarioResult run_scenario(const SimConfig& config, std::uint64_t seed,
                            bool record_trace) {
  ScenarioResult result;
  if (config.duration <= 0.0) {
    return result;
  }
  WorldState world = make_world(spawn_arrivals(config, seed), record_trace);

  while (world.clock < config.duration - 1e-9) {
    step(world, config);
  }
  world.admit_arrivals = false;
  const double drain_cap = config.duration + 3600.0;
  while (!world.queue.empty() && world.clock < drain_cap) {
    step(world, config);
  }

  MetricsReport report;
  int exited_in_window = 0;
  double tt_sum = 0.0, fuel_sum = 0.0;
  for (const auto& veh : world.done) {
    VehicleRow row;
    row.id = veh.s.id;
    row.t_entry = veh.s.t_entry_corridor.value_or(0.0);
    row.t_exit = veh.s.tf.value_or(world.clock);
    row.travel_time_s = row.t_exit - row.t_entry;
    row.fuel = veh.fuel;
    row.min_gap_m = std::isfinite(veh.min_gap) ? veh.min_gap : -1.0;
    row.distance_m = veh.s.p;
    report.rows.push_back(row);
    tt_sum += row.travel_time_s;
    fuel_sum += row.fuel;
    if (row.t_exit <= config.duration) ++exited_in_window;
  }
  if (!report.rows.empty()) {
    report.mean_travel_time_s = tt_sum / report.rows.size();
    report.mean_fuel_per_vehicle = fuel_sum / report.rows.size();
  }
  report.throughput_vph = exited_in_window * 3600.0 / config.duration;

  result.report = std::move(report);
  result.events = std::move(world.events);
  result.trace = std::move(world.trace);
  return result;
}

std::string events_text(const std::vector<Event>& events) {
  std::ostringstream os;
  os.precision(10);
  for (const auto& e : events) {
    os << e.t << ',' << e.kind << ',' << e.id << ',' << e.detail << '\n';
  }
  return os.str();
}

std::string trace_csv(const std::vector<TraceRow>& rows) {
  std::ostringstream os;
  os.precision(10);
  os << "t,id,phase,p,v,u,gap,fuel_rate\n";
  for (const auto& r : rows) {
    os << r.t << ',' << r.id << ',' << to_string(r.phase) << ',' << r.p << ','
       << r.v << ',' << r.u << ',' << r.gap << ',' << r.fuel_rate << '\n';
  }
  return os.str();
}

}  // namespace srz
