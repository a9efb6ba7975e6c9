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

#include "gdmp/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gdmp/errors.hpp"

namespace gdmp {
namespace {

constexpr double kReachEps = 1e-9;
constexpr double kSingularMargin = 1e-3;  // warn when this close to the boundary

double wrap_pi(double a) {
  while (a > M_PI) a -= 2.0 * M_PI;
  while (a < -M_PI) a += 2.0 * M_PI;
  return a;
}

void check_reach(const PlanarArm& arm, double r) {
  const double r_min = std::abs(arm.l1 - arm.l2) + kReachEps;
  const double r_max = arm.l1 + arm.l2 - kReachEps;
  if (r < r_min)
    throw Unreachable("inverse: target inside inner workspace boundary", r_min - r);
  if (r > r_max)
    throw Unreachable("inverse: target beyond outer workspace boundary", r - r_max);
}

Eigen::Vector2d ik_branch(const PlanarArm& arm, const Eigen::Vector2d& p, bool up) {
  const double r2 = p.squaredNorm();
  check_reach(arm, std::sqrt(r2));
  const double c2 =
      std::clamp((r2 - arm.l1 * arm.l1 - arm.l2 * arm.l2) / (2.0 * arm.l1 * arm.l2),
                 -1.0, 1.0);
  const double q2 = up ? std::acos(c2) : -std::acos(c2);
  const double q1 = std::atan2(p.y(), p.x()) -
                    std::atan2(arm.l2 * std::sin(q2), arm.l1 + arm.l2 * std::cos(q2));
  return {wrap_pi(q1), q2};
}

}  // namespace

Eigen::Vector2d forward(const PlanarArm& arm, const Eigen::Vector2d& q) {
  return {arm.l1 * std::cos(q(0)) + arm.l2 * std::cos(q(0) + q(1)),
          arm.l1 * std::sin(q(0)) + arm.l2 * std::sin(q(0) + q(1))};
}

Eigen::Matrix2d jacobian(const PlanarArm& arm, const Eigen::Vector2d& q) {
  const double s1 = std::sin(q(0)), c1 = std::cos(q(0));
  const double s12 = std::sin(q(0) + q(1)), c12 = std::cos(q(0) + q(1));
  Eigen::Matrix2d j;
  j << -arm.l1 * s1 - arm.l2 * s12, -arm.l2 * s12,
        arm.l1 * c1 + arm.l2 * c12,  arm.l2 * c12;
  return j;
}

Eigen::Vector2d inverse(const PlanarArm& arm, const Eigen::Vector2d& p) {
  return ik_branch(arm, p, arm.elbow_up);
}

JointPath joint_path(const PlanarArm& arm, const SpatialPath& path,
                     const std::array<int, 2>& plane_dims) {
  const int m = path.sample_count();
  if (plane_dims[0] < 0 || plane_dims[0] >= path.dims() || plane_dims[1] < 0 ||
      plane_dims[1] >= path.dims() || plane_dims[0] == plane_dims[1])
    throw InvalidParameter("joint_path: bad plane dims");

  JointPath jp;
  jp.arclengths = path.arclengths;
  jp.joints.resize(m, 2);

  const double r_min = std::abs(arm.l1 - arm.l2);
  const double r_max = arm.l1 + arm.l2;

  Eigen::Vector2d prev;
  for (int k = 0; k < m; ++k) {
    const Eigen::Vector2d p(path.points(k, plane_dims[0]),
                            path.points(k, plane_dims[1]));
    Eigen::Vector2d q;
    try {
      if (k == 0) {
        q = ik_branch(arm, p, arm.elbow_up);
      } else {
        const Eigen::Vector2d qa = ik_branch(arm, p, true);
        const Eigen::Vector2d qb = ik_branch(arm, p, false);
        const auto dist = [&prev](const Eigen::Vector2d& cand) {
          return std::abs(wrap_pi(cand(0) - prev(0))) +
                 std::abs(wrap_pi(cand(1) - prev(1)));
        };
        q = dist(qa) <= dist(qb) ? qa : qb;
        // Keep q1 on the branch continuous with the previous sample.
        q(0) = prev(0) + wrap_pi(q(0) - prev(0));
      }
    } catch (const Unreachable& e) {
      throw Unreachable("joint_path: sample " + std::to_string(k) + " at s=" +
                            std::to_string(path.arclengths(k)) + " unreachable",
                        e.deficit);
    }
    for (int j = 0; j < 2; ++j) {
      if (q(j) < arm.q_min(j) - 1e-12 || q(j) > arm.q_max(j) + 1e-12)
        throw InvalidParameter("joint_path: joint " + std::to_string(j + 1) +
                               " limit violated at sample " + std::to_string(k));
    }
    const double r = p.norm();
    if (r > r_max - kSingularMargin || r < r_min + kSingularMargin)
      jp.near_singular.push_back(k);
    jp.joints.row(k) = q.transpose();
    prev = q;
  }
  return jp;
}

ParametricCurve fit_joint_curve(const PlanarArm& arm,
                                const std::vector<Eigen::Vector2d>& points,
                                const Eigen::VectorXd& abscissae, int n_basis,
                                double ridge) {
  if (static_cast<Eigen::Index>(points.size()) != abscissae.size())
    throw InvalidParameter("fit_joint_curve: points/abscissae size mismatch");
  Eigen::MatrixXd q(points.size(), 2);
  Eigen::Vector2d prev;
  for (size_t k = 0; k < points.size(); ++k) {
    Eigen::Vector2d qk;
    if (k == 0) {
      qk = ik_branch(arm, points[k], arm.elbow_up);
    } else {
      const Eigen::Vector2d qa = ik_branch(arm, points[k], true);
      const Eigen::Vector2d qb = ik_branch(arm, points[k], false);
      const auto dist = [&prev](const Eigen::Vector2d& cand) {
        return std::abs(wrap_pi(cand(0) - prev(0))) +
               std::abs(wrap_pi(cand(1) - prev(1)));
      };
      qk = dist(qa) <= dist(qb) ? qa : qb;
      qk(0) = prev(0) + wrap_pi(qk(0) - prev(0));
    }
    q.row(static_cast<Eigen::Index>(k)) = qk.transpose();
    prev = qk;
  }
  return fit_curve(abscissae, q, n_basis, 1.0, ridge);
}

}  // namespace gdmp
