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

#ifndef GDMP_KINEMATICS_HPP_
#define GDMP_KINEMATICS_HPP_

#include <Eigen/Core>
#include <array>
#include <vector>

#include "gdmp/curvefit.hpp"
#include "gdmp/types.hpp"

namespace gdmp {

/// Planar two-revolute-joint arm with analytic forward and inverse
/// kinematics. Elbow-up means a positive knee angle.
struct PlanarArm {
  double l1 = 0.5;  ///< [m]
  double l2 = 0.5;  ///< [m]
  bool elbow_up = true;
  Eigen::Vector2d q_min{-M_PI, -M_PI};  ///< joint limits [rad]
  Eigen::Vector2d q_max{M_PI, M_PI};
};

/// Joint samples along a spatial path, branch-consistent.
struct JointPath {
  Eigen::VectorXd arclengths;   ///< s_k [m]
  Eigen::MatrixXd joints;       ///< (M+1) x 2 [rad]
  std::vector<int> near_singular;  ///< sample indices close to the reach boundary
};

/// End-effector position for joint angles q.
Eigen::Vector2d forward(const PlanarArm& arm, const Eigen::Vector2d& q);

/// 2x2 geometric Jacobian at q.
Eigen::Matrix2d jacobian(const PlanarArm& arm, const Eigen::Vector2d& q);

/// Analytic inverse kinematics on the arm's configured elbow branch.
/// Throws Unreachable (with the distance deficit) when the target lies
/// outside the reachable annulus [|l1-l2|+eps, l1+l2-eps], eps = 1e-9.
Eigen::Vector2d inverse(const PlanarArm& arm, const Eigen::Vector2d& p);

/// Inverse kinematics per path sample with nearest-branch continuity:
/// the first sample uses the configured branch, later samples pick the
/// branch closest to the previous solution. `plane_dims` selects the two
/// Cartesian columns of the path. Joint-limit violations and
/// unreachable samples throw, carrying the sample index and arc length.
JointPath joint_path(const PlanarArm& arm, const SpatialPath& path,
                     const std::array<int, 2>& plane_dims = {0, 1});

/// Fit the joint trajectory q(s) along an executed Cartesian curve so it
/// can be differentiated analytically for joint-space constraints.
/// `executed` maps arc length to the 2-D point the arm tracks (already
/// goal-scaled). Samples every `spacing` meters of arc length.
ParametricCurve fit_joint_curve(const PlanarArm& arm,
                                const std::vector<Eigen::Vector2d>& points,
                                const Eigen::VectorXd& abscissae, int n_basis,
                                double ridge = 1e-8);

}  // namespace gdmp

#endif  // GDMP_KINEMATICS_HPP_
