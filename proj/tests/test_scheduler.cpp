#include <doctest.h>

#include <cmath>
#include <random>

#include "srz/scheduler.hpp"

using namespace srz;

namespace {

const ZoneGeometry kGeo;      // L = 300, v_srz = 15.6
const ControlParams kLim;     // Table-1 limits
const SafetyParams kSafety;   // c0 = 1.5, c1 = 1.2

}  // namespace

TEST_CASE("safe distance") {
  CHECK(safe_distance(0.0, kSafety) == doctest::Approx(1.5));
  CHECK(safe_distance(15.6, kSafety) == doctest::Approx(20.22));
  CHECK(safe_distance(10.0, SafetyParams{0.0, 1.0}) == doctest::Approx(10.0));
}

TEST_CASE("terminal-time recursion") {
  // Leader constraint is dominated by the cruise time L/entry_v.
  LeaderInfo leader{10.0, 15.6, 55.0, 20.0};
  const double tm1 = assign_terminal_time(25.0, leader, 20.22, kGeo, kLim);
  CHECK(std::abs(tm1 - 12.0) <= 1e-9);

  // Leader constraint dominates.
  leader.tm_prev = 20.0;
  const double tm2 = assign_terminal_time(35.0, leader, 20.22, kGeo, kLim);
  CHECK(std::abs(tm2 - (20.0 + 20.22 / 15.6)) <= 1e-9);

  // First vehicle: external assignment passes through.
  const double tm3 =
      assign_terminal_time(25.0, std::nullopt, 20.22, kGeo, kLim, 19.23);
  CHECK(tm3 == doctest::Approx(19.23));

  // First vehicle without external assignment cruises.
  const double tm4 = assign_terminal_time(25.0, std::nullopt, 20.22, kGeo, kLim);
  CHECK(tm4 == doctest::Approx(12.0));
}

TEST_CASE("terminal time stays within the admissible window") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> speed(10.0, 35.0);
  std::uniform_real_distribution<double> tm_prev(-5.0, 60.0);
  std::uniform_real_distribution<double> gap(0.0, 300.0);
  const double t_fast = 300.0 / 35.0;
  const double t_slow = 300.0 / 10.0;
  for (int k = 0; k < 2000; ++k) {
    LeaderInfo leader{tm_prev(rng), 15.6, gap(rng), speed(rng)};
    const double tm = assign_terminal_time(speed(rng), leader, 20.22, kGeo, kLim);
    CHECK(tm >= t_fast - 1e-12);
    CHECK(tm <= t_slow + 1e-12);
  }
}

TEST_CASE("terminal time is weakly monotone in the leader's time") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> speed(10.0, 35.0);
  std::uniform_real_distribution<double> tm_prev(0.0, 40.0);
  for (int k = 0; k < 1000; ++k) {
    const double v = speed(rng);
    const double t1 = tm_prev(rng);
    const double t2 = t1 + tm_prev(rng) * 0.2;
    LeaderInfo a{t1, 15.6, 100.0, v};
    LeaderInfo b{t2, 15.6, 100.0, v};
    CHECK(assign_terminal_time(v, a, 20.22, kGeo, kLim) <=
          assign_terminal_time(v, b, 20.22, kGeo, kLim) + 1e-12);
  }
}

TEST_CASE("certificate: equal gap and safe distance reduces to dv >= 0") {
  const SafetyVerdict yes = theorem1_condition(20.22, 20.22, 0.0, 15.0);
  CHECK(yes.holds);
  const SafetyVerdict no = theorem1_condition(20.22, 20.22, -0.5, 15.0);
  CHECK_FALSE(no.holds);
}

TEST_CASE("certificate: generous gap with matched speeds holds") {
  const SafetyVerdict verdict = theorem1_condition(50.0, 20.22, 0.0, 15.0);
  CHECK(verdict.holds);
  CHECK(verdict.margin > 0.0);
  CHECK(verdict.t_star > 0.0);
  CHECK(verdict.t_star <= 15.0);
  // Exact oracle agrees.
  CHECK(certificate_min_gap(50.0, 20.22, 0.0, 15.0) >= 20.22 - 1e-6);
}

TEST_CASE("certificate hypothesis violation") {
  CHECK_THROWS_AS(theorem1_condition(10.0, 20.22, 0.0, 15.0), HypothesisViolated);
}

TEST_CASE("min gap: pure translation is constant") {
  TrajectoryCoefficients lead = solve_coefficients({0, 30, 18, 15, 330, 15.6});
  TrajectoryCoefficients follow = lead;
  follow.d -= 30.0;
  const auto [t_min, g_min] = min_gap(lead, follow, 0.0, 15.0);
  CHECK(g_min == doctest::Approx(30.0));
  CHECK(t_min == doctest::Approx(0.0));
}

TEST_CASE("min gap: adversarial closing pair agrees with the certificate") {
  // Leader much slower and barely beyond the safe distance.
  const double l = 20.3, delta = 20.22, dv = -5.0, tm = 15.0;
  const SafetyVerdict verdict = theorem1_condition(l, delta, dv, tm);
  CHECK_FALSE(verdict.holds);
  CHECK(certificate_min_gap(l, delta, dv, tm) < delta);
}

TEST_CASE("certificate and gap oracle agree over randomized instances") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> extra(0.0, 200.0);
  std::uniform_real_distribution<double> dv_dist(-10.0, 10.0);
  std::uniform_real_distribution<double> tm_dist(300.0 / 35.0, 300.0 / 10.0);
  const double delta = 20.22;
  int checked = 0;
  for (int k = 0; k < 3000; ++k) {
    const double l = delta + extra(rng);
    const double dv = dv_dist(rng);
    const double tm = tm_dist(rng);
    const SafetyVerdict verdict = theorem1_condition(l, delta, dv, tm);
    const double g = certificate_min_gap(l, delta, dv, tm);
    // Safe pairs touch the safe distance exactly at tm, so the oracle
    // minimum equals delta up to rounding; skip only the genuinely
    // ambiguous sliver just below it.
    if (g > delta - 1e-6 && g < delta - 1e-12) continue;
    CHECK(verdict.holds == (g >= delta - 1e-6));
    ++checked;
  }
  CHECK(checked > 2500);
}

TEST_CASE("terminal-time correction is a no-op for passing instances") {
  const SafetyVerdict v = theorem1_condition(50.0, 20.22, 0.0, 15.0);
  REQUIRE(v.holds);
  CHECK(correct_terminal_time(50.0, 20.22, 0.0, v.t_star, 15.0, 30.0) == 15.0);
}

TEST_CASE("terminal-time correction repairs a failing instance") {
  // Fails the certificate at tm = 20, but the gap recovers once the
  // follower is slowed down while the leader keeps its schedule.
  const double l = 30.0, delta = 20.22, dv = -5.0, tm = 20.0;
  const SafetyVerdict verdict = theorem1_condition(l, delta, dv, tm);
  REQUIRE_FALSE(verdict.holds);
  const double corrected =
      correct_terminal_time(l, delta, dv, verdict.t_star, tm, 30.0);
  CHECK(corrected >= tm);
  CHECK(corrected <= 30.0);
  CHECK(corrected_pair_min_gap(l, delta, dv, tm, corrected) >= delta - 1e-6);
}

TEST_CASE("terminal-time correction saturates") {
  // Gap already at the safe distance with a strongly closing leader:
  // the gap dips below delta immediately for any terminal time.
  const double l = 20.22, delta = 20.22, dv = -8.0;
  const double t_slow = 30.0;
  CHECK_THROWS_AS(correct_terminal_time(l, delta, dv, 5.0, t_slow, t_slow),
                  NoFeasibleTime);
}

TEST_CASE("entry-feasibility enforcement") {
  VehicleState state;
  state.v = 20.0;

  CHECK(enforce_entry_feasibility(state, 20.22, 20.22, kLim, 0.1) == 0.0);
  CHECK(enforce_entry_feasibility(state, 15.22, 20.22, kLim, 0.1) ==
        doctest::Approx(-4.5));

  state.v = kLim.v_min;
  CHECK(enforce_entry_feasibility(state, 15.22, 20.22, kLim, 0.1) == 0.0);

  // Never undershoots v_min within one step.
  state.v = kLim.v_min + 0.2;
  const double u = enforce_entry_feasibility(state, 10.0, 20.22, kLim, 0.1);
  CHECK(state.v + u * 0.1 >= kLim.v_min - 1e-12);
}

TEST_CASE("SRZ cruise assertion") {
  VehicleState lead, follow;
  lead.v = 15.6;
  follow.v = 15.6;
  CHECK(theorem2_check(lead, follow, kGeo));
  lead.v = 14.6;
  CHECK_FALSE(theorem2_check(lead, follow, kGeo));
}
