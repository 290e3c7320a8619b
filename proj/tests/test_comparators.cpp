#include <doctest.h>

#include <cmath>
#include <random>

#include "srz/comparators.hpp"

using namespace srz;

namespace {

const ControlParams kLim;
const CarFollowingParams kCf;

VehicleState at(double p, double v) {
  VehicleState s;
  s.p = p;
  s.v = v;
  return s;
}

}  // namespace

TEST_CASE("car-following free road") {
  // At the desired speed with no leader the command vanishes.
  CHECK(baseline_accel(at(0, kCf.desired_speed), std::nullopt, kCf, kLim) ==
        doctest::Approx(0.0).epsilon(1e-9));
  // Standing start approaches full acceleration.
  CHECK(baseline_accel(at(0, 0.0), std::nullopt, kCf, kLim) ==
        doctest::Approx(kCf.max_accel));
}

TEST_CASE("car-following equilibrium spacing") {
  // A follower at the desired-speed-free equilibrium gap holds steady.
  const double v = 15.0;
  const double s_star = desired_spacing(v, 0.0, kCf);
  const double free_frac =
      1.0 - std::pow(v / kCf.desired_speed, kCf.accel_exponent);
  // Gap s with (s*/s)^2 == free_frac balances exactly.
  const double s_eq = s_star / std::sqrt(free_frac);
  const VehicleState leader = at(s_eq, v);
  const double u = baseline_accel(at(0, v), leader, kCf, kLim);
  CHECK(std::abs(u) <= 1e-9);
}

TEST_CASE("car-following brakes hard on contact") {
  const VehicleState leader = at(0.0, 10.0);  // gap <= 0
  CHECK(baseline_accel(at(0, 10.0), leader, kCf, kLim) ==
        doctest::Approx(kLim.u_min));
}

TEST_CASE("car-following respects actuation limits") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> pos(0.0, 200.0);
  std::uniform_real_distribution<double> speed(0.0, 35.0);
  for (int k = 0; k < 2000; ++k) {
    const VehicleState f = at(0, speed(rng));
    const VehicleState l = at(pos(rng), speed(rng));
    const double u = baseline_accel(f, l, kCf, kLim);
    CHECK(u >= kLim.u_min);
    CHECK(u <= kLim.u_max);
  }
}

TEST_CASE("harmonization speed profile") {
  SpdHarmParams hp;
  hp.s_m = 30.0;
  hp.s_n = 15.6;
  hp.dx_mn = 300.0;
  CHECK(spdharm_speed(0.0, hp, kLim) == doctest::Approx(30.0));
  CHECK(spdharm_speed(300.0, hp, kLim) == doctest::Approx(15.6));
  CHECK(spdharm_speed(150.0, hp, kLim) == doctest::Approx(22.8));
  // Clamped beyond the segment.
  CHECK(spdharm_speed(400.0, hp, kLim) == doctest::Approx(15.6));
  CHECK(spdharm_speed(-50.0, hp, kLim) == doctest::Approx(30.0));
}

TEST_CASE("harmonization speed clamps to admissible range") {
  SpdHarmParams hp;
  hp.s_m = 50.0;  // above v_max
  hp.s_n = 5.0;   // below v_min
  hp.dx_mn = 300.0;
  CHECK(spdharm_speed(0.0, hp, kLim) == doctest::Approx(kLim.v_max));
  CHECK(spdharm_speed(300.0, hp, kLim) == doctest::Approx(kLim.v_min));
}

TEST_CASE("harmonization profile is monotone toward the bottleneck") {
  SpdHarmParams hp;
  hp.s_m = 28.0;
  hp.s_n = 15.6;
  hp.dx_mn = 300.0;
  double prev = spdharm_speed(0.0, hp, kLim);
  for (int i = 1; i <= 60; ++i) {
    const double cur = spdharm_speed(i * 5.0, hp, kLim);
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
}

TEST_CASE("harmonization tracking command") {
  CHECK(spdharm_accel(20.0, 20.0, kLim, 0.1) == doctest::Approx(0.0));
  CHECK(spdharm_accel(20.0, 18.0, kLim, 0.1) == doctest::Approx(-2.0));
  // Saturates at the limits.
  CHECK(spdharm_accel(10.0, 30.0, kLim, 0.1) == doctest::Approx(kLim.u_max));
  CHECK(spdharm_accel(30.0, 10.0, kLim, 0.1) == doctest::Approx(kLim.u_min));
}

TEST_CASE("degenerate harmonization segment commands the downstream speed") {
  SpdHarmParams hp;
  hp.s_m = 22.0;
  hp.s_n = 22.0;
  hp.dx_mn = 300.0;
  for (double x : {0.0, 120.0, 300.0}) {
    CHECK(spdharm_speed(x, hp, kLim) == doctest::Approx(22.0));
  }
}
