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

#ifndef GDMP_PHASEOPT_HPP_
#define GDMP_PHASEOPT_HPP_

#include <Eigen/Core>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "gdmp/curvefit.hpp"
#include "gdmp/phaseprofile.hpp"
#include "gdmp/types.hpp"

namespace gdmp {

/// Kinematic bounds for the minimum-time problem. Absent optionals
/// disable the corresponding family. Task-space bounds apply to the
/// goal-scaled curve; `task_per_axis` switches them from the Euclidean
/// norm to a per-axis reading.
struct ConstraintSet {
  std::optional<double> sd_max;    ///< phase velocity [m/s]
  std::optional<double> sdd_max;   ///< phase acceleration [m/s^2]
  std::optional<double> sddd_max;  ///< phase jerk [m/s^3]; enables smoothing
  std::optional<double> yd_max;    ///< task velocity [m/s]
  std::optional<double> ydd_max;   ///< task acceleration [m/s^2]
  std::optional<Eigen::VectorXd> qd_max;   ///< per-joint velocity [rad/s]
  std::optional<Eigen::VectorXd> qdd_max;  ///< per-joint acceleration [rad/s^2]
  bool task_per_axis = false;

  bool has_velocity_bound() const { return sd_max || yd_max || qd_max; }
  bool has_acceleration_bound() const { return sdd_max || ydd_max || qdd_max; }
};

/// Normalized constraint usage of a profile, evaluated on the dense
/// output grid (never the solver grid). 1.0 means a bound is exactly
/// reached; feasible profiles stay <= 1.01.
struct SaturationReport {
  double dt = 0.0;
  std::map<std::string, Eigen::VectorXd> values;  ///< per family, per grid point
  std::map<std::string, double> family_max;
  double saturation_fraction = 0.0;  ///< share of grid with max value >= 0.99
  double max_value = 0.0;
  bool feasible = true;              ///< max_value <= 1.01
  double stage2_window = 0.0;        ///< seconds excluded at each end [s]
  double stage2_inflation = 0.0;     ///< relative duration cost of smoothing
};

/// Compute the minimum-duration phase profile along `curve` under `cons`.
///
/// Stage 1 performs exact time-optimal path parameterization in squared-
/// velocity space: per-point velocity ceilings, then a maximal-
/// acceleration forward pass and a maximal-deceleration backward pass.
/// Stage 2 (only when sddd_max is set) convolves the velocity profile
/// with a box filter sized to bound the jerk, then re-verifies all
/// constraints on the dense grid and dilates time if needed; the duration
/// cost is reported, never hidden.
///
/// `joint_curve` supplies q(s) for the joint-space family and must be
/// present when qd_max/qdd_max are set.
///
/// Throws Infeasible (with the arc-length location) when the admissible
/// acceleration set collapses, RegularityViolation when the curve tangent
/// drops below 0.5.
std::pair<PhaseProfile, SaturationReport> min_time_phase(
    const ParametricCurve& curve, const Eigen::VectorXd& scaling,
    const ConstraintSet& cons, int grid = 2000,
    const ParametricCurve* joint_curve = nullptr);

/// Evaluate the normalized constraint values of an arbitrary profile.
SaturationReport saturation_check(const PhaseProfile& profile,
                                  const ParametricCurve& curve,
                                  const Eigen::VectorXd& scaling,
                                  const ConstraintSet& cons,
                                  const ParametricCurve* joint_curve = nullptr);

/// Reconstruct a phase profile from the demonstrated timing law with a
/// monotone (Fritsch-Carlson) cubic interpolant, resampled at dt.
/// Zero-motion intervals recorded in the law are pinned flat so that
/// sd = 0 across them.
PhaseProfile phase_from_timing_law(const TimingLaw& law, double dt);

}  // namespace gdmp

#endif  // GDMP_PHASEOPT_HPP_
