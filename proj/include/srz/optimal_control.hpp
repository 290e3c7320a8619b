#pragma once

#include <vector>

#include "srz/domain.hpp"
#include "srz/errors.hpp"

namespace srz {

enum class BoundKind { SpeedHigh, SpeedLow, AccelHigh, AccelLow };

const char* to_string(BoundKind kind);

struct BoundViolation {
  BoundKind kind;
  double t_first;        // first time the limit is crossed [s]
  double extremal_value; // worst value attained [m/s or m/s^2]
};

struct EvalResult {
  double p;
  double v;
  double u;
};

// Horizon below which the coefficient system is treated as singular.
inline constexpr double kHorizonEpsilon = 1e-6;

// Solve the four integration constants of the energy-optimal cubic from
// endpoint states. The time variable is shifted to tau = t - t0 before
// applying the explicit inverse (determinant (tm - t0)^4 / 12), then the
// coefficients are translated back to absolute time.
// Throws DegenerateHorizon when tm - t0 <= kHorizonEpsilon.
TrajectoryCoefficients solve_coefficients(const BoundaryConditions& bc);

// Evaluate (p, v, u) at absolute time t. Throws OutOfInterval outside
// [valid_from, valid_to].
EvalResult eval_trajectory(const TrajectoryCoefficients& coeffs, double t);

// Re-solve toward the same terminal condition from the current state.
// Idempotent along an existing optimal trajectory.
TrajectoryCoefficients replan(const VehicleState& current, double tm, double pm,
                              double vm);

// Exact extremal analysis of u (affine) and v (quadratic) against the
// actuation limits. Empty result means the unconstrained closed form is
// admissible.
std::vector<BoundViolation> check_bounds(const TrajectoryCoefficients& coeffs,
                                         const ControlParams& limits);

}  // namespace srz
