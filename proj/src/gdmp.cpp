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

#include "gdmp/gdmp.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "gdmp/errors.hpp"

namespace gdmp {
namespace {

void check_gains(const Eigen::VectorXd& alpha, const Eigen::VectorXd& beta, int d) {
  if (alpha.size() != d || beta.size() != d)
    throw InvalidParameter("gdmp: alpha/beta dimension mismatch");
  if ((alpha.array() <= 0.0).any() || (beta.array() <= 0.0).any())
    throw InvalidParameter("gdmp: alpha and beta must be positive");
}

}  // namespace

Eigen::VectorXd GdmpSystem::executed_point(double s) const {
  return goal + (scaling.array() * (curve.eval(s) - ref_goal).array()).matrix();
}

GdmpSystem make_system(ParametricCurve curve, const Eigen::VectorXd& alpha,
                       const Eigen::VectorXd& beta, const Eigen::VectorXd& goal,
                       const Eigen::VectorXd& start, double eps_goal) {
  const int d = curve.dims();
  if (goal.size() != d || start.size() != d)
    throw InvalidParameter("make_system: goal/start dimension mismatch with curve");
  check_gains(alpha, beta, d);

  GdmpSystem sys;
  sys.ref_start = curve.eval(0.0);
  sys.ref_goal = curve.eval(curve.s_f);
  sys.curve = std::move(curve);
  sys.alpha = alpha;
  sys.beta = beta;
  sys.goal = goal;
  sys.start = start;
  sys.scaling = Eigen::VectorXd::Ones(d);
  for (int i = 0; i < d; ++i) {
    const double ref_disp = sys.ref_goal(i) - sys.ref_start(i);
    if (std::abs(ref_disp) > eps_goal)
      sys.scaling(i) = (goal(i) - start(i)) / ref_disp;
    else
      sys.degenerate_axes.push_back(i);
  }
  return sys;
}

Eigen::VectorXd forcing_term(const GdmpSystem& sys, double s, double sd, double sdd) {
  if (!std::isfinite(s) || !std::isfinite(sd) || !std::isfinite(sdd))
    throw InvalidParameter("forcing_term: non-finite phase state");
  Eigen::VectorXd y, d1, d2;
  sys.curve.eval_all(s, y, d1, d2);
  const auto& a = sys.alpha.array();
  const auto& b = sys.beta.array();
  Eigen::ArrayXd f = d2.array() * (sd * sd) + d1.array() * sdd +
                     a * d1.array() * sd + a * b * (y - sys.ref_goal).array();
  return (sys.scaling.array() * f).matrix();
}

DmpState matched_init(const GdmpSystem& sys, const PhaseProfile& phase) {
  double s0, sd0, sdd0;
  phase.eval(phase.t.size() ? phase.t(0) : 0.0, s0, sd0, sdd0);
  DmpState st;
  st.y = sys.executed_point(s0);
  st.yd = (sys.scaling.array() * sys.curve.eval_d1(s0).array() * sd0).matrix();
  return st;
}

namespace {

// Shared RK4 driver for the transformation system; `extra` adds optional
// coupling accelerations (e.g. obstacle repulsion).
template <typename ExtraAccel>
RolloutTrace integrate(const GdmpSystem& sys, const PhaseProfile& phase, double dt,
                       const DmpState& init, double duration, ExtraAccel&& extra) {
  if (dt <= 0.0) throw InvalidParameter("rollout: dt must be > 0");
  const int d = sys.dims();
  if (init.y.size() != d || init.yd.size() != d)
    throw InvalidParameter("rollout: initial state dimension mismatch");
  if (duration < 0.0) duration = phase.total_duration();
  const int n = static_cast<int>(std::llround(duration / dt)) + 1;
  if (n < 2) throw InvalidParameter("rollout: horizon shorter than one step");

  RolloutTrace tr;
  tr.dt = dt;
  tr.t.resize(n);
  tr.s.resize(n);
  tr.sd.resize(n);
  tr.y.resize(n, d);
  tr.yd.resize(n, d);
  tr.ydd.resize(n, d);

  const auto accel = [&](double time, const Eigen::VectorXd& y,
                         const Eigen::VectorXd& v) -> Eigen::VectorXd {
    double s, sd, sdd;
    phase.eval(time, s, sd, sdd);
    Eigen::ArrayXd a = -sys.alpha.array() * v.array() -
                       sys.alpha.array() * sys.beta.array() * (y - sys.goal).array();
    return a.matrix() + forcing_term(sys, s, sd, sdd) + extra(y);
  };

  Eigen::VectorXd y = init.y, v = init.yd;
  for (int k = 0; k < n; ++k) {
    const double time = k * dt;
    double s, sd, sdd;
    phase.eval(time, s, sd, sdd);
    tr.t(k) = time;
    tr.s(k) = s;
    tr.sd(k) = sd;
    tr.y.row(k) = y.transpose();
    tr.yd.row(k) = v.transpose();
    tr.ydd.row(k) = accel(time, y, v).transpose();
    if (!y.allFinite() || !v.allFinite())
      throw Divergence("rollout: non-finite state at step " + std::to_string(k), k, time);
    if (k + 1 == n) break;

    const Eigen::VectorXd k1y = v;
    const Eigen::VectorXd k1v = accel(time, y, v);
    const Eigen::VectorXd k2y = v + 0.5 * dt * k1v;
    const Eigen::VectorXd k2v = accel(time + 0.5 * dt, y + 0.5 * dt * k1y, k2y);
    const Eigen::VectorXd k3y = v + 0.5 * dt * k2v;
    const Eigen::VectorXd k3v = accel(time + 0.5 * dt, y + 0.5 * dt * k2y, k3y);
    const Eigen::VectorXd k4y = v + dt * k3v;
    const Eigen::VectorXd k4v = accel(time + dt, y + dt * k3y, k4y);
    y += dt / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  }
  return tr;
}

}  // namespace

Eigen::VectorXd ObstacleField::acceleration(const Eigen::VectorXd& y) const {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(y.size());
  for (const Obstacle& o : obstacles) {
    if (o.gain == 0.0) continue;
    const Eigen::VectorXd diff = y - o.center;
    const double dist = diff.norm();
    if (dist >= o.influence_radius || dist < 1e-12) continue;
    a += o.gain * (1.0 / dist - 1.0 / o.influence_radius) / (dist * dist) *
         (diff / dist);
  }
  return a;
}

RolloutTrace rollout(const GdmpSystem& sys, const PhaseProfile& phase, double dt,
                     const DmpState& init, double duration) {
  const int d = sys.dims();
  return integrate(sys, phase, dt, init, duration,
                   [d](const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(d); });
}

RolloutTrace rollout_with_obstacles(const GdmpSystem& sys, const PhaseProfile& phase,
                                    double dt, const DmpState& init,
                                    const ObstacleField& field, double duration) {
  return integrate(sys, phase, dt, init, duration,
                   [&field](const Eigen::VectorXd& y) { return field.acceleration(y); });
}

Eigen::VectorXd ClassicDmp::forcing(double s) const { return forcing(s, goal, start); }

Eigen::VectorXd ClassicDmp::forcing(double s, const Eigen::VectorXd& g,
                                    const Eigen::VectorXd& y0) const {
  const Eigen::VectorXd p = basis.phi(s);
  return ((weights * p).array() * s * (g - y0).array()).matrix();
}

ClassicDmp classic_fit(const TimedTrajectory& traj, int n_basis, double tau,
                       double delta_cs, double alpha, double beta) {
  if (tau <= 0.0 || delta_cs <= 0.0)
    throw InvalidParameter("classic_fit: tau and delta_cs must be > 0");
  const int n = traj.sample_count();
  const int d = traj.dims();
  if (n < 3) throw InvalidParameter("classic_fit: need at least 3 samples to difference twice");
  const double dt = traj.period;
  const double t_final = traj.duration();

  const Eigen::VectorXd goal = traj.points.row(n - 1).transpose();
  const Eigen::VectorXd start = traj.points.row(0).transpose();
  for (int i = 0; i < d; ++i)
    if (std::abs(goal(i) - start(i)) < 1e-12)
      throw DegenerateModulation("classic_fit: goal equals start on axis " +
                                 std::to_string(i));

  // Central differences, one-sided at the ends.
  Eigen::MatrixXd vel(n, d), acc(n, d);
  for (int k = 0; k < n; ++k) {
    if (k == 0)
      vel.row(k) = (traj.points.row(1) - traj.points.row(0)) / dt;
    else if (k == n - 1)
      vel.row(k) = (traj.points.row(n - 1) - traj.points.row(n - 2)) / dt;
    else
      vel.row(k) = (traj.points.row(k + 1) - traj.points.row(k - 1)) / (2.0 * dt);
  }
  for (int k = 0; k < n; ++k) {
    if (k == 0)
      acc.row(k) = (traj.points.row(2) - 2.0 * traj.points.row(1) + traj.points.row(0)) /
                   (dt * dt);
    else if (k == n - 1)
      acc.row(k) = (traj.points.row(n - 1) - 2.0 * traj.points.row(n - 2) +
                    traj.points.row(n - 3)) /
                   (dt * dt);
    else
      acc.row(k) = (traj.points.row(k + 1) - 2.0 * traj.points.row(k) +
                    traj.points.row(k - 1)) /
                   (dt * dt);
  }

  ClassicDmp dmp;
  dmp.tau = tau;
  dmp.delta_cs = delta_cs;
  dmp.alpha = Eigen::VectorXd::Constant(d, alpha);
  dmp.beta = Eigen::VectorXd::Constant(d, beta);
  dmp.goal = goal;
  dmp.start = start;

  const double s_min = std::exp(-delta_cs * t_final / tau);
  dmp.basis.centers = Eigen::VectorXd::LinSpaced(n_basis, s_min, 1.0);
  const double spacing = (1.0 - s_min) / (n_basis - 1);
  dmp.basis.width = spacing * spacing;

  // Per-basis scalar weighted regression of the nominal forcing term
  // tau^2 ydd_r + alpha tau yd_r + alpha beta (y_r - g) on s (g - y0).
  Eigen::VectorXd phase(n);
  for (int k = 0; k < n; ++k) phase(k) = std::exp(-delta_cs * (k * dt) / tau);
  Eigen::MatrixXd phis(n, n_basis);
  for (int k = 0; k < n; ++k) phis.row(k) = dmp.basis.phi(phase(k)).transpose();

  dmp.weights.resize(d, n_basis);
  for (int axis = 0; axis < d; ++axis) {
    const double mod = goal(axis) - start(axis);
    for (int i = 0; i < n_basis; ++i) {
      double num = 0.0, den = 0.0;
      for (int k = 0; k < n; ++k) {
        const double xi = phase(k) * mod;
        const double fr = tau * tau * acc(k, axis) + alpha * tau * vel(k, axis) +
                          alpha * beta * (traj.points(k, axis) - goal(axis));
        num += phis(k, i) * xi * fr;
        den += phis(k, i) * xi * xi;
      }
      dmp.weights(axis, i) = (den > 0.0) ? num / den : 0.0;
    }
  }
  return dmp;
}

RolloutTrace classic_rollout(const ClassicDmp& dmp, double dt, double duration,
                             const ClassicRolloutOptions& opts) {
  if (dt <= 0.0 || duration <= 0.0)
    throw InvalidParameter("classic_rollout: dt and duration must be > 0");
  const int d = dmp.dims();
  const double tau = opts.tau > 0.0 ? opts.tau : dmp.tau;
  const Eigen::VectorXd g = opts.goal.size() ? opts.goal : dmp.goal;
  const Eigen::VectorXd y0 = opts.start.size() ? opts.start : dmp.start;

  const int n = static_cast<int>(std::llround(duration / dt)) + 1;
  RolloutTrace tr;
  tr.dt = dt;
  tr.t.resize(n);
  tr.s.resize(n);
  tr.sd.resize(n);
  tr.y.resize(n, d);
  tr.yd.resize(n, d);
  tr.ydd.resize(n, d);

  // State: (y, z, s) with tau z' = alpha (beta (g - y) - z) + f(s),
  // tau y' = z, tau s' = -delta_cs s.
  Eigen::VectorXd y = y0, z = Eigen::VectorXd::Zero(d);
  double s = 1.0;

  const auto deriv = [&](const Eigen::VectorXd& yk, const Eigen::VectorXd& zk, double sk,
                         Eigen::VectorXd& dy, Eigen::VectorXd& dz, double& ds) {
    dz = (dmp.alpha.array() * (dmp.beta.array() * (g - yk).array() - zk.array()) +
          dmp.forcing(sk, g, y0).array())
             .matrix() /
         tau;
    dy = zk / tau;
    ds = -dmp.delta_cs * sk / tau;
  };

  Eigen::VectorXd k1y(d), k1z(d), k2y(d), k2z(d), k3y(d), k3z(d), k4y(d), k4z(d);
  double k1s, k2s, k3s, k4s;
  for (int k = 0; k < n; ++k) {
    tr.t(k) = k * dt;
    tr.s(k) = s;
    tr.sd(k) = -dmp.delta_cs * s / tau;
    tr.y.row(k) = y.transpose();
    tr.yd.row(k) = (z / tau).transpose();
    Eigen::VectorXd dy, dz;
    double ds;
    deriv(y, z, s, dy, dz, ds);
    tr.ydd.row(k) = (dz / tau).transpose();
    if (!y.allFinite() || !z.allFinite())
      throw Divergence("classic_rollout: non-finite state at step " + std::to_string(k),
                       k, tr.t(k));
    if (k + 1 == n) break;

    deriv(y, z, s, k1y, k1z, k1s);
    deriv(y + 0.5 * dt * k1y, z + 0.5 * dt * k1z, s + 0.5 * dt * k1s, k2y, k2z, k2s);
    deriv(y + 0.5 * dt * k2y, z + 0.5 * dt * k2z, s + 0.5 * dt * k2s, k3y, k3z, k3s);
    deriv(y + dt * k3y, z + dt * k3z, s + dt * k3s, k4y, k4z, k4s);
    y += dt / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    z += dt / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
    s += dt / 6.0 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s);
  }
  return tr;
}

}  // namespace gdmp
