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

#ifndef GDMP_HILSIM_HPP_
#define GDMP_HILSIM_HPP_

#include <Eigen/Core>
#include <complex>

#include "gdmp/gdmp.hpp"

namespace gdmp {

/// Synthetic operator closing the loop on the delayed robot output.
///
/// impedance: F_h = -stiffness (y_m - anchor) - damping yd_m, a passive
/// spring-damper holding the end-effector where it started (plus an
/// optional seeded tremor force). With positive gains this is the
/// negative-feedback closure whose loop gain the stability analyzer
/// evaluates.
///
/// intent: F_h = k_p (y_ref - y_m) - k_d yd_m, where y_ref tracks the
/// executed curve at a reference phase advancing at `rate` toward
/// `s_goal`; drives the task to completion autonomously.
struct HumanModel {
  enum class Kind { impedance, intent };
  Kind kind = Kind::impedance;
  double stiffness = 300.0;  ///< K_h [N/m]
  double damping = 20.0;     ///< B_h [N s/m]
  double s_goal = 0.0;       ///< intent target phase [m]
  double k_p = 200.0;        ///< intent stiffness [N/m]
  double k_d = 10.0;         ///< intent damping [N s/m]
  double rate = 0.2;         ///< intent reference speed [m/s]
  double tremor = 0.0;       ///< tremor force amplitude [N]
  unsigned seed = 0;
};

struct HilConfig {
  double mass = 2.0;       ///< m [kg]
  double damping = 17.0;   ///< b [N s/m]
  double delay = 0.0;      ///< t0, robot tracking delay [s]
  HumanModel human;
  double dt = 1e-3;        ///< [s]
  double duration = 10.0;  ///< [s]
  double s_start = 0.0;    ///< initial phase [m]
  double sd_start = 0.0;   ///< initial phase velocity (perturbation) [m/s]
};

/// Full record of a closed-loop simulation. `storage` is the energy
/// S = ek1 + eu + ek2 built on the tracking-error coordinates;
/// `residual` is the analytic dS/dt minus the port power yd_m' F_h.
struct SimTrace {
  double dt = 0.0;
  Eigen::VectorXd t, s, sd, sdd;
  Eigen::MatrixXd y, yd;    // transformation-system output
  Eigen::MatrixXd ym, ymd;  // delayed robot position/velocity
  Eigen::MatrixXd fh;       // human force [N]
  Eigen::VectorXd f_tau;    // tangential force [N]
  Eigen::VectorXd p_tau;    // F_tau * sd [W]
  Eigen::VectorXd p_port;   // yd_m' F_h [W]
  Eigen::VectorXd storage, ek1, eu, ek2;  // [J]
  Eigen::VectorXd residual;               // [W]
  int diverged_at = -1;  ///< first non-finite step, -1 when clean

  int steps() const { return static_cast<int>(t.size()); }
  bool diverged() const { return diverged_at >= 0; }
};

struct PassivityReport {
  double max_gap = 0.0;        ///< max |analytic dS/dt - centered dS/dt| [W]
  double max_residual = 0.0;   ///< max (dS/dt - port power) [W]
  int violations = 0;          ///< steps with residual > 1e-6 W
  bool passive = true;
};

struct StabilityResult {
  double margin_deg = 0.0;  ///< phase margin; +inf when no gain crossover
  double crossover = 0.0;   ///< gain-crossover frequency [rad/s]
  bool stable = true;       ///< margin > 0 or no crossover
};

struct Metrics {
  double cos_theta_rms = 0.0;       ///< NaN sentinel when no force was applied
  double sd_rmsd = 0.0;             ///< oscillation magnitude of sd
  double e_norm_mean = 0.0;         ///< mean tracking gap ||y - y_m||
  double f_nontangential_mean = 0.0;///< mean (||F_h|| - |F_tau|)
};

/// Tangential projection (E y*'(s))' F_h of the human force.
double project_force(const ParametricCurve& curve, const Eigen::VectorXd& scaling,
                     double s, const Eigen::VectorXd& human_force);

/// Integrate the coupled phase/transformation dynamics
///   m sdd + b sd = F_tau,   ydd = -A yd - A B (y - g) + f(s, sd, sdd) + F_h
/// with RK4; the robot output is delayed by cfg.delay through a ring
/// buffer (y_m = y while t < delay). Divergence is a legitimate outcome
/// for unstable parameter sets: the trace is truncated and flagged, not
/// thrown.
SimTrace simulate(const GdmpSystem& sys, const HilConfig& cfg);

/// Check the analytic storage derivative against a centered numeric one
/// and count violations of dS/dt <= port power.
PassivityReport passivity_monitor(const SimTrace& trace, const GdmpSystem& sys,
                                  const HilConfig& cfg);

/// Loop gain G(jw) = [(B_h jw + K_h)/jw] e^{-jw t0} / (m jw + b).
std::complex<double> loop_gain(double mass, double damping, double k_h, double b_h,
                               double delay, double omega);

/// Unwrapped loop-gain phase [rad] at omega (continuous in omega).
double loop_phase(double mass, double damping, double k_h, double b_h, double delay,
                  double omega);

/// Phase margin of the loop gain: 180 deg plus the unwrapped phase at the
/// largest gain crossover found on a log sweep of [1e-3, 1e5] rad/s.
StabilityResult phase_margin(double mass, double damping, double k_h, double b_h,
                             double delay);

/// Element-wise phase margins over a (mass, damping) grid; row i holds
/// mass_grid(i).
Eigen::MatrixXd stability_map(const Eigen::VectorXd& mass_grid,
                              const Eigen::VectorXd& damping_grid, double k_h,
                              double b_h, double delay, int jobs = 1);

/// Interaction metrics over a trace; `window` [s] sizes the moving
/// average used by sd_rmsd.
Metrics metrics(const SimTrace& trace, double window = 0.5);

}  // namespace gdmp

#endif  // GDMP_HILSIM_HPP_
