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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gdmp/curvefit.hpp"
#include "gdmp/errors.hpp"
#include "gdmp/gdmp.hpp"
#include "gdmp/sampling.hpp"
#include "test_support.hpp"

using namespace gdmp;
using namespace testsupport;

namespace {

ParametricCurve fit_from(const std::function<Eigen::VectorXd(double)>& f,
                         double duration, double delta, int n_basis) {
  const auto traj = sample_curve(f, duration, 0.002);
  return fit_curve(spatial_sample(traj, delta), n_basis, 1.0, 1e-8);
}

GdmpSystem unit_system(ParametricCurve curve, double alpha = 40.0) {
  const int d = curve.dims();
  const Eigen::VectorXd a = Eigen::VectorXd::Constant(d, alpha);
  const Eigen::VectorXd b = a / 4.0;
  const Eigen::VectorXd goal = curve.eval(curve.s_f);
  const Eigen::VectorXd start = curve.eval(0.0);
  return make_system(std::move(curve), a, b, goal, start);
}

ParametricCurve straight_line_curve(double length = 1.0) {
  return fit_from(
      [](double t) {
        Eigen::VectorXd p(2);
        p << t, 0.0;
        return p;
      },
      length, length / 100.0, 20);
}

double max_tracking_error(const GdmpSystem& sys, const RolloutTrace& tr) {
  double worst = 0.0;
  for (int k = 0; k < tr.steps(); ++k) {
    const Eigen::VectorXd want = sys.executed_point(tr.s(k));
    worst = std::max(worst, (tr.y.row(k).transpose() - want).norm());
  }
  return worst;
}

}  // namespace

TEST_CASE("forcing term equilibrium and symbolic line case") {
  ParametricCurve curve = straight_line_curve();
  GdmpSystem sys = unit_system(curve);

  SUBCASE("zero rates at the goal give a zero forcing term") {
    const Eigen::VectorXd f = forcing_term(sys, sys.curve.s_f, 0.0, 0.0);
    CHECK(f.norm() <= 1e-9);
  }

  SUBCASE("unit-speed line matches the symbolic expansion") {
    // y*(s) = y0 + u s with u = (1, 0): f = u (sdd + alpha sd) + alpha
    // beta (y*(s) - g_r), up to fitting error in y*', y*''
    const double s = 0.4, sd = 0.7, sdd = -2.0;
    const Eigen::VectorXd f = forcing_term(sys, s, sd, sdd);
    Eigen::VectorXd expect(2);
    const double alpha = sys.alpha(0), beta = sys.beta(0);
    expect << (sdd + alpha * sd) + alpha * beta * (s - sys.curve.s_f), 0.0;
    CHECK((f - expect).norm() <= alpha * beta * 2e-3);
  }

  SUBCASE("forcing is linear in the scaling") {
    GdmpSystem doubled = sys;
    doubled.scaling *= 2.0;
    const Eigen::VectorXd f1 = forcing_term(sys, 0.3, 0.5, 0.1);
    const Eigen::VectorXd f2 = forcing_term(doubled, 0.3, 0.5, 0.1);
    CHECK((f2 - 2.0 * f1).norm() <= 1e-12);
  }
}

TEST_CASE("degenerate scaling axes fall back to one") {
  // straight line along x: the y axis has zero reference displacement
  ParametricCurve curve = straight_line_curve();
  const Eigen::VectorXd a = Eigen::VectorXd::Constant(2, 40.0);
  Eigen::VectorXd goal(2), start(2);
  goal << 2.0, 0.5;
  start << 0.0, 0.0;
  const GdmpSystem sys = make_system(curve, a, a / 4, goal, start);
  REQUIRE(sys.degenerate_axes.size() == 1);
  CHECK(sys.degenerate_axes[0] == 1);
  CHECK(sys.scaling(1) == 1.0);
  CHECK(sys.scaling(0) == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("exact tracking under matched initial conditions") {
  for (unsigned seed : {10u, 11u, 12u}) {
    ParametricCurve curve = fit_from(random_smooth_curve(seed), 6.0, 0.005, 120);
    GdmpSystem sys = unit_system(curve);
    const PhaseProfile phase = min_jerk_phase(sys.curve.s_f, 3.0, 1e-3);
    const RolloutTrace tr = rollout(sys, phase, 1e-3, matched_init(sys, phase));
    CHECK(max_tracking_error(sys, tr) <= 1e-3);
  }
}

TEST_CASE("exact tracking with scaled goals") {
  ParametricCurve curve = fit_from(random_smooth_curve(21), 6.0, 0.005, 120);
  const int d = curve.dims();
  const Eigen::VectorXd a = Eigen::VectorXd::Constant(d, 40.0);
  Eigen::VectorXd goal = curve.eval(curve.s_f);
  Eigen::VectorXd start = curve.eval(0.0);
  goal(0) += 0.4;
  goal(1) -= 0.2;
  start(2) += 0.1;
  const GdmpSystem sys = make_system(curve, a, a / 4, goal, start);
  const PhaseProfile phase = min_jerk_phase(sys.curve.s_f, 4.0, 1e-3);
  const RolloutTrace tr = rollout(sys, phase, 1e-3, matched_init(sys, phase));
  CHECK(max_tracking_error(sys, tr) <= 1e-3);
  CHECK((tr.y.row(tr.steps() - 1).transpose() - goal).norm() <= 2e-3);
}

TEST_CASE("reversed phase retraces the path") {
  ParametricCurve curve = fit_from(random_smooth_curve(31), 6.0, 0.005, 120);
  GdmpSystem sys = unit_system(curve);
  const PhaseProfile fwd = min_jerk_phase(sys.curve.s_f, 3.0, 1e-3);
  const PhaseProfile bwd = fwd.reversed();
  const RolloutTrace tf = rollout(sys, fwd, 1e-3, matched_init(sys, fwd));
  const RolloutTrace tb = rollout(sys, bwd, 1e-3, matched_init(sys, bwd));
  CHECK(max_tracking_error(sys, tb) <= 1e-3);
  // positions visited forward are revisited backward
  const int n = tf.steps();
  for (int k = 0; k < n; k += 50) {
    const Eigen::VectorXd fwd_pt = tf.y.row(k).transpose();
    const Eigen::VectorXd bwd_pt = tb.y.row(n - 1 - k).transpose();
    CHECK((fwd_pt - bwd_pt).norm() <= 1e-3);
  }
}

TEST_CASE("held phase converges to the goal") {
  ParametricCurve curve = straight_line_curve();
  GdmpSystem sys = unit_system(curve);
  // freeze the phase at s_f from the start; critically damped poles sit
  // at -alpha/2, so 40/alpha seconds reach the 1e-6 ball from 1 m away
  PhaseProfile frozen;
  frozen.dt = 1.0;
  frozen.t = Eigen::VectorXd::LinSpaced(2, 0.0, 1.0);
  frozen.s = Eigen::VectorXd::Constant(2, sys.curve.s_f);
  frozen.sd = Eigen::VectorXd::Zero(2);
  frozen.sdd = Eigen::VectorXd::Zero(2);
  DmpState init;
  init.y = sys.start;
  init.yd = Eigen::VectorXd::Zero(2);
  const double horizon = 40.0 / 40.0;
  const RolloutTrace tr = rollout(sys, frozen, 1e-3, init, horizon);
  CHECK((tr.y.row(tr.steps() - 1).transpose() - sys.goal).norm() <= 1e-6);
}

TEST_CASE("scaling homeomorphism between two goal sets") {
  ParametricCurve curve = fit_from(random_smooth_curve(41), 6.0, 0.005, 120);
  const int d = curve.dims();
  const Eigen::VectorXd a = Eigen::VectorXd::Constant(d, 40.0);
  const Eigen::VectorXd g_old = curve.eval(curve.s_f);
  const Eigen::VectorXd y0 = curve.eval(0.0);
  Eigen::VectorXd g_new = g_old;
  g_new(0) += 0.3;
  g_new(2) -= 0.15;

  const GdmpSystem sys_old = make_system(curve, a, a / 4, g_old, y0);
  const GdmpSystem sys_new = make_system(curve, a, a / 4, g_new, y0);
  const PhaseProfile phase = min_jerk_phase(curve.s_f, 3.0, 1e-3);
  const RolloutTrace to = rollout(sys_old, phase, 1e-3, matched_init(sys_old, phase));
  const RolloutTrace tn = rollout(sys_new, phase, 1e-3, matched_init(sys_new, phase));
  for (int k = 0; k < to.steps(); k += 100) {
    const Eigen::VectorXd mapped =
        g_new + (sys_new.scaling.array() / sys_old.scaling.array() *
                 (to.y.row(k).transpose() - g_old).array())
                    .matrix();
    CHECK((tn.y.row(k).transpose() - mapped).norm() <= 1e-6);
  }
}

TEST_CASE("rk4 order: halving dt cuts tracking error by 8x or better") {
  ParametricCurve curve = fit_from(random_smooth_curve(51), 6.0, 0.01, 60);
  GdmpSystem sys = unit_system(curve, 20.0);
  // fast phase to make integration error visible
  const PhaseProfile phase = min_jerk_phase(sys.curve.s_f, 0.4, 1e-4);
  const RolloutTrace coarse = rollout(sys, phase, 4e-3, matched_init(sys, phase));
  const RolloutTrace fine = rollout(sys, phase, 2e-3, matched_init(sys, phase));
  const double e_coarse = max_tracking_error(sys, coarse);
  const double e_fine = max_tracking_error(sys, fine);
  CHECK(e_coarse / std::max(e_fine, 1e-300) >= 8.0);
}

TEST_CASE("obstacle coupling") {
  ParametricCurve curve = straight_line_curve();
  GdmpSystem sys = unit_system(curve);
  const PhaseProfile phase = min_jerk_phase(sys.curve.s_f, 2.0, 1e-3);
  const DmpState init = matched_init(sys, phase);
  const RolloutTrace plain = rollout(sys, phase, 1e-3, init, 3.0);

  SUBCASE("zero gain is the identity") {
    ObstacleField field;
    Eigen::VectorXd c(2);
    c << 0.5, 0.01;
    field.obstacles.push_back({c, 0.2, 0.0});
    const RolloutTrace with = rollout_with_obstacles(sys, phase, 1e-3, init, field, 3.0);
    CHECK((with.y - plain.y).cwiseAbs().maxCoeff() <= 1e-12);
  }

  SUBCASE("distant obstacle is inactive") {
    ObstacleField field;
    Eigen::VectorXd c(2);
    c << 0.5, 5.0;
    field.obstacles.push_back({c, 0.2, 1.0});
    const RolloutTrace with = rollout_with_obstacles(sys, phase, 1e-3, init, field, 3.0);
    CHECK((with.y - plain.y).cwiseAbs().maxCoeff() <= 1e-12);
  }

  SUBCASE("near obstacle is cleared while endpoints hold") {
    ObstacleField field;
    Eigen::VectorXd c(2);
    c << 0.5, 0.01;
    field.obstacles.push_back({c, 0.2, 0.02});
    const RolloutTrace with = rollout_with_obstacles(sys, phase, 1e-3, init, field, 3.0);
    double clearance = 1e9;
    for (int k = 0; k < with.steps(); ++k)
      clearance = std::min(clearance, (with.y.row(k).transpose() - c).norm());
    double clearance_plain = 1e9;
    for (int k = 0; k < plain.steps(); ++k)
      clearance_plain = std::min(clearance_plain, (plain.y.row(k).transpose() - c).norm());
    CHECK(clearance >= 0.05);
    CHECK(clearance > clearance_plain);
    CHECK((with.y.row(0).transpose() - sys.start).norm() <= 1e-9);
    CHECK((with.y.row(with.steps() - 1).transpose() - sys.goal).norm() <= 1e-3);
  }
}

TEST_CASE("classic dmp reproduces a minimum-jerk demonstration") {
  // 1-D minimum jerk 0 -> 1 over 1 s
  const auto traj = sample_curve(
      [](double t) {
        Eigen::VectorXd p(1);
        p << min_jerk(std::min(1.0, t));
        return p;
      },
      1.0, 1.0 / 200.0);
  const ClassicDmp dmp = classic_fit(traj, 30, 1.0, 2.0);

  SUBCASE("oracle: integrating the raw forcing target recovers the demo") {
    // independent of the basis fit: integrate tau^2 ydd + alpha tau yd +
    // alpha beta (y - g) = f_r(t) with f_r from the differenced data
    const int n = traj.sample_count();
    const double dt = traj.period;
    Eigen::VectorXd fr(n);
    for (int k = 0; k < n; ++k) {
      double vel, acc;
      if (k == 0) {
        vel = (traj.points(1, 0) - traj.points(0, 0)) / dt;
        acc = (traj.points(2, 0) - 2 * traj.points(1, 0) + traj.points(0, 0)) / (dt * dt);
      } else if (k == n - 1) {
        vel = (traj.points(n - 1, 0) - traj.points(n - 2, 0)) / dt;
        acc = (traj.points(n - 1, 0) - 2 * traj.points(n - 2, 0) +
               traj.points(n - 3, 0)) /
              (dt * dt);
      } else {
        vel = (traj.points(k + 1, 0) - traj.points(k - 1, 0)) / (2 * dt);
        acc = (traj.points(k + 1, 0) - 2 * traj.points(k, 0) + traj.points(k - 1, 0)) /
              (dt * dt);
      }
      fr(k) = acc + 40.0 * vel + 400.0 * (traj.points(k, 0) - 1.0);
    }
    const auto fr_at = [&](double t) {
      const double x = std::clamp(t / dt, 0.0, double(n - 1));
      const int i = std::min(n - 2, (int)x);
      const double u = x - i;
      return fr(i) + u * (fr(i + 1) - fr(i));
    };
    double y = 0.0, v = 0.0;
    const double h = dt / 4.0;
    double worst = 0.0;
    for (double t = 0.0; t < 1.0 - 1e-12; t += h) {
      const auto acc = [&](double tt, double yy, double vv) {
        return fr_at(tt) - 40.0 * vv - 400.0 * (yy - 1.0);
      };
      const double k1v = acc(t, y, v), k1y = v;
      const double k2v = acc(t + h / 2, y + h / 2 * k1y, v + h / 2 * k1v),
                   k2y = v + h / 2 * k1v;
      const double k3v = acc(t + h / 2, y + h / 2 * k2y, v + h / 2 * k2v),
                   k3y = v + h / 2 * k2v;
      const double k4v = acc(t + h, y + h * k3y, v + h * k3v), k4y = v + h * k3v;
      y += h / 6 * (k1y + 2 * k2y + 2 * k3y + k4y);
      v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
      const int k_demo = (int)std::round((t + h) / dt);
      if (k_demo < n) worst = std::max(worst, std::abs(y - traj.points(k_demo, 0)));
    }
    CHECK(worst <= 5e-3);  // raw-target integration is nearly exact
  }

  SUBCASE("fitted rollout stays within the reproduction tolerance") {
    const RolloutTrace tr = classic_rollout(dmp, 1e-3, 1.0);
    double sq = 0.0;
    int count = 0;
    for (int k = 0; k < tr.steps(); ++k) {
      const double t = tr.t(k);
      const int demo_k = (int)std::round(t / traj.period);
      if (demo_k >= traj.sample_count()) break;
      sq += std::pow(tr.y(k, 0) - traj.points(demo_k, 0), 2);
      ++count;
    }
    CHECK(std::sqrt(sq / count) <= 2e-2);
    CHECK(std::abs(tr.y(tr.steps() - 1, 0) - 1.0) <= 2e-2);
  }

  SUBCASE("forcing vanishes with the phase") {
    double fmax = 0.0;
    for (double s = 1.0; s > 1e-4; s *= 0.99)
      fmax = std::max(fmax, dmp.forcing(s).norm());
    CHECK(dmp.forcing(1e-4).norm() <= 1e-3 * fmax);
  }

  SUBCASE("zero forcing is a pure point attractor") {
    ClassicDmp plain = dmp;
    plain.weights.setZero();
    const RolloutTrace tr = classic_rollout(plain, 1e-3, 2.0);
    CHECK(std::abs(tr.y(tr.steps() - 1, 0) - 1.0) <= 1e-6);
  }
}

TEST_CASE("classic dmp: doubling tau doubles duration, keeps geometry") {
  // 2-D curved demonstration
  const auto traj = sample_curve(
      [](double t) {
        const double p = min_jerk(std::min(1.0, t));
        Eigen::VectorXd v(2);
        v << p, 0.3 * std::sin(M_PI * p) + 0.5 * p;
        return v;
      },
      1.0, 1.0 / 200.0);
  const ClassicDmp dmp = classic_fit(traj, 30, 1.0, 2.0);
  ClassicRolloutOptions slow;
  slow.tau = 2.0;
  const RolloutTrace fast = classic_rollout(dmp, 1e-3, 1.0);
  const RolloutTrace half = classic_rollout(dmp, 1e-3, 2.0, slow);

  // time scaling: half-speed trace at 2t matches the fast trace at t
  double worst_scale = 0.0;
  for (int k = 0; k < fast.steps(); k += 20) {
    const int k2 = 2 * k;
    if (k2 >= half.steps()) break;
    worst_scale = std::max(worst_scale, (fast.y.row(k) - half.y.row(k2)).norm());
  }
  CHECK(worst_scale <= 1e-2);

  // geometric comparison after arc-length alignment
  TimedTrajectory fast_t, half_t;
  fast_t.period = 1e-3;
  fast_t.points = fast.y;
  half_t.period = 1e-3;
  half_t.points = half.y;
  const SpatialPath fast_p = spatial_sample(fast_t, 0.01);
  const SpatialPath half_p = spatial_sample(half_t, 0.01);
  const int m = std::min(fast_p.sample_count(), half_p.sample_count());
  for (int k = 0; k < m; ++k)
    CHECK((fast_p.points.row(k) - half_p.points.row(k)).norm() <= 1e-2);
}

TEST_CASE("classic fit rejects zero-displacement axes") {
  const auto traj = sample_curve(
      [](double t) {
        Eigen::VectorXd p(2);
        p << min_jerk(std::min(1.0, t)), 0.0;  // flat second axis
        return p;
      },
      1.0, 1.0 / 100.0);
  CHECK_THROWS_AS(classic_fit(traj, 20, 1.0, 2.0), DegenerateModulation);
}

TEST_CASE("divergence is reported with the failing step") {
  ParametricCurve curve = straight_line_curve();
  GdmpSystem sys = unit_system(curve);
  sys.alpha = Eigen::VectorXd::Constant(2, -20.0);  // unstable on purpose
  const PhaseProfile phase = min_jerk_phase(sys.curve.s_f, 2.0, 1e-3);
  DmpState init;
  init.y = sys.start + Eigen::VectorXd::Constant(2, 0.1);
  init.yd = Eigen::VectorXd::Zero(2);
  CHECK_THROWS_AS(rollout(sys, phase, 1e-3, init, 50.0), Divergence);
}
