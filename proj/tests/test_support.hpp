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

// Shared fixtures and independent oracles for the test suites. Oracles
// here never call the code paths they are used to check.

#ifndef GDMP_TESTS_TEST_SUPPORT_HPP_
#define GDMP_TESTS_TEST_SUPPORT_HPP_

#include <Eigen/Core>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "gdmp/phaseprofile.hpp"
#include "gdmp/types.hpp"

namespace testsupport {

inline gdmp::TimedTrajectory make_traj(double period,
                                       const std::vector<Eigen::VectorXd>& pts) {
  gdmp::TimedTrajectory traj;
  traj.period = period;
  traj.points.resize(static_cast<Eigen::Index>(pts.size()), pts.front().size());
  for (size_t k = 0; k < pts.size(); ++k)
    traj.points.row(static_cast<Eigen::Index>(k)) = pts[k].transpose();
  return traj;
}

/// Sample an analytic curve y(t), t in [0, duration], at `period`.
inline gdmp::TimedTrajectory sample_curve(
    const std::function<Eigen::VectorXd(double)>& f, double duration, double period) {
  const int n = static_cast<int>(std::llround(duration / period)) + 1;
  gdmp::TimedTrajectory traj;
  traj.period = period;
  traj.points.resize(n, f(0.0).size());
  for (int k = 0; k < n; ++k) traj.points.row(k) = f(k * period).transpose();
  return traj;
}

/// Brute-force resampling oracle: walk a densely re-sampled polyline and
/// accumulate chord distance from the last emitted point, emitting at
/// delta. Independent of the production implementation (no quadratic
/// solve; relies on a fine time grid instead).
struct OracleSample {
  double t;
  Eigen::VectorXd p;
};

inline std::vector<OracleSample> dense_resample_oracle(
    const gdmp::TimedTrajectory& traj, double delta, double fine_dt = 1e-5) {
  std::vector<OracleSample> out;
  const double t_end = traj.duration();
  const auto interp = [&](double t) -> Eigen::VectorXd {
    const double x = t / traj.period;
    const int i = std::min<int>(traj.sample_count() - 2,
                                static_cast<int>(std::floor(x)));
    const double u = x - i;
    return traj.points.row(i).transpose() +
           u * (traj.points.row(i + 1) - traj.points.row(i)).transpose();
  };
  Eigen::VectorXd last = interp(0.0);
  out.push_back({0.0, last});
  const int n_fine = static_cast<int>(std::ceil(t_end / fine_dt));
  for (int k = 1; k <= n_fine; ++k) {
    const double t = std::min(t_end, k * fine_dt);
    const Eigen::VectorXd p = interp(t);
    if ((p - last).norm() >= delta) {
      // refine the crossing time by bisection on the fine segment
      double lo = (k - 1) * fine_dt, hi = t;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((interp(mid) - last).norm() >= delta)
          hi = mid;
        else
          lo = mid;
      }
      const double tc = 0.5 * (lo + hi);
      last = interp(tc);
      out.push_back({tc, last});
    }
  }
  return out;
}

/// Deterministic smooth random 3-D curve built from a few Fourier modes.
/// Speed can approach zero, so the arc-length path may carry sharp
/// features; good for stressing the resampler, not for fitting tests.
inline std::function<Eigen::VectorXd(double)> random_fourier_curve(unsigned seed,
                                                                   int modes = 3,
                                                                   double scale = 0.3) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> amp(0.05, scale);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  struct Mode {
    double a, ph;
  };
  std::vector<std::vector<Mode>> m(3);
  for (int axis = 0; axis < 3; ++axis)
    for (int k = 0; k < modes; ++k) m[axis].push_back({amp(rng) / (k + 1), phase(rng)});
  return [m, modes](double t) {
    Eigen::VectorXd p(3);
    for (int axis = 0; axis < 3; ++axis) {
      double v = 0.0;
      for (int k = 0; k < modes; ++k)
        v += m[axis][k].a * std::sin((k + 1) * t + m[axis][k].ph);
      p(axis) = v;
    }
    return p;
  };
}

/// Random 3-D curve with a dominant drift term: speed stays above
/// ~0.4 m/s and the curvature radius above ~0.3 m, so the arc-length
/// path is smooth at basis-resolution scale.
inline std::function<Eigen::VectorXd(double)> random_smooth_curve(unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> amp(0.08, 0.25);
  std::uniform_real_distribution<double> freq(0.4, 1.0);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * M_PI);
  const double a1 = amp(rng), w1 = freq(rng), p1 = ph(rng);
  const double a2 = amp(rng), w2 = freq(rng), p2 = ph(rng);
  std::uniform_real_distribution<double> amp3(0.02, 0.06);
  const double a3 = amp3(rng), w3 = freq(rng) * 1.2, p3 = ph(rng);
  return [=](double t) {
    Eigen::VectorXd p(3);
    p << 0.5 * t + a3 * std::sin(w3 * t + p3), a1 * std::sin(w1 * t + p1),
        a2 * std::sin(w2 * t + p2);
    return p;
  };
}

/// Minimum-jerk scalar profile from 0 to 1 over [0, 1].
inline double min_jerk(double u) {
  return u * u * u * (10.0 - 15.0 * u + 6.0 * u * u);
}

/// Smooth monotone phase profile s: [0,T] -> [0, s_f] with zero boundary
/// rates, sampled on a uniform grid (analytic derivatives).
inline gdmp::PhaseProfile min_jerk_phase(double s_f, double duration, double dt) {
  const int n = static_cast<int>(std::llround(duration / dt)) + 1;
  gdmp::PhaseProfile prof;
  prof.dt = dt;
  prof.t.resize(n);
  prof.s.resize(n);
  prof.sd.resize(n);
  prof.sdd.resize(n);
  for (int k = 0; k < n; ++k) {
    const double t = k * dt;
    const double u = std::min(1.0, t / duration);
    prof.t(k) = t;
    prof.s(k) = s_f * min_jerk(u);
    prof.sd(k) = s_f * (30.0 * u * u - 60.0 * u * u * u + 30.0 * u * u * u * u) /
                 duration;
    prof.sdd(k) =
        s_f * (60.0 * u - 180.0 * u * u + 120.0 * u * u * u) / (duration * duration);
  }
  return prof;
}

}  // namespace testsupport

#endif  // GDMP_TESTS_TEST_SUPPORT_HPP_
