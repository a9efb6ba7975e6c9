// Copyright 2026 The gdmp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GDMP_GDMP_HPP_
#define GDMP_GDMP_HPP_

#include <Eigen/Core>
#include <vector>

#include "gdmp/curvefit.hpp"
#include "gdmp/phaseprofile.hpp"
#include "gdmp/types.hpp"

namespace gdmp {

/// Second-order transformation system driven by a geometric curve and an
/// arbitrary phase profile. Immutable after construction.
struct GdmpSystem {
  ParametricCurve curve;
  Eigen::VectorXd alpha;      ///< per-axis damping gain [1/s], > 0
  Eigen::VectorXd beta;       ///< per-axis stiffness ratio, > 0 (alpha/4 = critical)
  Eigen::VectorXd goal;       ///< g [m]
  Eigen::VectorXd start;      ///< y0 [m]
  Eigen::VectorXd ref_goal;   ///< curve goal g_r [m]
  Eigen::VectorXd ref_start;  ///< curve start [m]
  Eigen::VectorXd scaling;    ///< per-axis goal scaling (diagonal of E)
  std::vector<int> degenerate_axes;  ///< axes where scaling fell back to 1

  int dims() const { return static_cast<int>(goal.size()); }
  /// Position commanded at phase s under exact tracking:
  /// g + E (y*(s) - g_r).
  Eigen::VectorXd executed_point(double s) const;
};

struct DmpState {
  Eigen::VectorXd y;   ///< position [m]
  Eigen::VectorXd yd;  ///< velocity [m/s]
};

/// A spherical obstacle field adding a repulsive acceleration
/// k * (1/d - 1/d0) / d^2 * grad(d) inside the influence radius d0.
struct Obstacle {
  Eigen::VectorXd center;
  double influence_radius = 0.0;  ///< d0 [m], > 0
  double gain = 0.0;              ///< k, >= 0
};

struct ObstacleField {
  std::vector<Obstacle> obstacles;
  Eigen::VectorXd acceleration(const Eigen::VectorXd& y) const;
};

/// Time series produced by a rollout.
struct RolloutTrace {
  double dt = 0.0;
  Eigen::VectorXd t;
  Eigen::VectorXd s, sd;
  Eigen::MatrixXd y, yd, ydd;  // rows per step

  int steps() const { return static_cast<int>(t.size()); }
};

/// Build a system with per-axis scaling (g - y0) / (g_r - ref_start).
/// Axes whose reference displacement is below eps_goal get scaling 1 and
/// are listed in degenerate_axes. ref_goal/ref_start default to the curve
/// evaluated at its domain ends so that the forcing term vanishes exactly
/// at (s_f, 0, 0).
GdmpSystem make_system(ParametricCurve curve, const Eigen::VectorXd& alpha,
                       const Eigen::VectorXd& beta, const Eigen::VectorXd& goal,
                       const Eigen::VectorXd& start, double eps_goal = 1e-6);

/// Forcing term E [ y*'' sd^2 + y*' sdd + A y*' sd + A B (y*(s) - g_r) ]
/// using the analytic curve derivatives.
Eigen::VectorXd forcing_term(const GdmpSystem& sys, double s, double sd, double sdd);

/// Matched initial state: y = g + E (y*(s0) - g_r), yd = E y*'(s0) sd0.
DmpState matched_init(const GdmpSystem& sys, const PhaseProfile& phase);

/// Integrate ydd = -A yd - A B (y - g) + f(s(t)) with fixed-step RK4.
/// The phase profile is held at its boundary values outside its horizon.
/// Throws Divergence on the first non-finite step.
RolloutTrace rollout(const GdmpSystem& sys, const PhaseProfile& phase, double dt,
                     const DmpState& init, double duration = -1.0);

/// Same dynamics plus the repulsive field acceleration.
RolloutTrace rollout_with_obstacles(const GdmpSystem& sys, const PhaseProfile& phase,
                                    double dt, const DmpState& init,
                                    const ObstacleField& field,
                                    double duration = -1.0);

/// Classic discrete movement primitive: exponential canonical system
/// s' = -delta_cs s / tau and forcing f(s) = sum_i w_i phi_i(s) s (g - y0).
struct ClassicDmp {
  double tau = 1.0;       ///< time constant [s]
  double delta_cs = 2.0;  ///< canonical decay rate
  Eigen::VectorXd alpha, beta;
  RbfBasis basis;            ///< centers over the phase interval (s_min, 1]
  Eigen::MatrixXd weights;   ///< d x N
  Eigen::VectorXd goal, start;

  int dims() const { return static_cast<int>(goal.size()); }
  Eigen::VectorXd forcing(double s) const;
  Eigen::VectorXd forcing(double s, const Eigen::VectorXd& g,
                          const Eigen::VectorXd& y0) const;
};

/// Fit the classic baseline by locally weighted regression on the
/// demonstration's differentiated profiles. Velocities and accelerations
/// come from central differences with one-sided end stencils. Throws
/// DegenerateModulation when an axis has zero start-goal displacement.
ClassicDmp classic_fit(const TimedTrajectory& traj, int n_basis, double tau = 1.0,
                       double delta_cs = 2.0, double alpha = 40.0,
                       double beta = 10.0);

struct ClassicRolloutOptions {
  double tau = -1.0;  ///< override; < 0 keeps the fitted value
  Eigen::VectorXd goal, start;  ///< empty keeps the fitted values
};

/// Integrate the classic system for `duration` seconds with RK4.
RolloutTrace classic_rollout(const ClassicDmp& dmp, double dt, double duration,
                             const ClassicRolloutOptions& opts = {});

}  // namespace gdmp

#endif  // GDMP_GDMP_HPP_
