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

#include "gdmp/hilsim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>
#include <vector>

#include "gdmp/errors.hpp"

namespace gdmp {

double project_force(const ParametricCurve& curve, const Eigen::VectorXd& scaling,
                     double s, const Eigen::VectorXd& human_force) {
  const Eigen::VectorXd tangent =
      (scaling.array() * curve.eval_d1(s).array()).matrix();
  return tangent.dot(human_force);
}

namespace {

struct LoopState {
  Eigen::VectorXd y, v;
  double s = 0.0, sd = 0.0;
};

// Human force generators, evaluated on the (possibly delayed) robot state.
class Human {
 public:
  Human(const HumanModel& model, const GdmpSystem& sys, const HilConfig& cfg)
      : model_(model), sys_(sys), rng_(model.seed), noise_(-1.0, 1.0) {
    anchor_ = sys.executed_point(cfg.s_start);
    s_ref0_ = cfg.s_start;
  }

  Eigen::VectorXd force(double t, const Eigen::VectorXd& ym,
                        const Eigen::VectorXd& ymd) const {
    Eigen::VectorXd f(ym.size());
    switch (model_.kind) {
      case HumanModel::Kind::impedance:
        f = -model_.stiffness * (ym - anchor_) - model_.damping * ymd;
        break;
      case HumanModel::Kind::intent: {
        const double dir = model_.s_goal >= s_ref0_ ? 1.0 : -1.0;
        double s_ref = s_ref0_ + dir * model_.rate * t;
        if ((dir > 0 && s_ref > model_.s_goal) || (dir < 0 && s_ref < model_.s_goal))
          s_ref = model_.s_goal;
        const Eigen::VectorXd y_ref = sys_.executed_point(s_ref);
        f = model_.k_p * (y_ref - ym) - model_.k_d * ymd;
        break;
      }
    }
    return f;
  }

  // Tremor is sampled once per control step, held across RK4 stages.
  Eigen::VectorXd tremor_sample(int dims) {
    if (model_.tremor == 0.0) return Eigen::VectorXd::Zero(dims);
    Eigen::VectorXd n(dims);
    for (int i = 0; i < dims; ++i) n(i) = model_.tremor * noise_(rng_);
    return n;
  }

 private:
  const HumanModel& model_;
  const GdmpSystem& sys_;
  Eigen::VectorXd anchor_;
  double s_ref0_;
  std::mt19937 rng_;
  std::uniform_real_distribution<double> noise_;
};

}  // namespace

SimTrace simulate(const GdmpSystem& sys, const HilConfig& cfg) {
  if (cfg.mass <= 0.0 || cfg.damping <= 0.0)
    throw InvalidParameter("simulate: mass and damping must be > 0");
  if (cfg.dt <= 0.0 || cfg.duration <= 0.0)
    throw InvalidParameter("simulate: dt and duration must be > 0");
  if (cfg.delay < 0.0) throw InvalidParameter("simulate: delay must be >= 0");
  if (cfg.delay > 0.0 && cfg.dt > cfg.delay + 1e-15)
    throw InvalidParameter("simulate: dt must not exceed the delay");

  const int d = sys.dims();
  const int n = static_cast<int>(std::llround(cfg.duration / cfg.dt)) + 1;
  const int delay_steps =
      cfg.delay > 0.0 ? std::max(1, static_cast<int>(std::llround(cfg.delay / cfg.dt)))
                      : 0;

  SimTrace tr;
  tr.dt = cfg.dt;
  tr.t.resize(n);
  tr.s.resize(n);
  tr.sd.resize(n);
  tr.sdd.resize(n);
  tr.y.resize(n, d);
  tr.yd.resize(n, d);
  tr.ym.resize(n, d);
  tr.ymd.resize(n, d);
  tr.fh.resize(n, d);
  tr.f_tau.resize(n);
  tr.p_tau.resize(n);
  tr.p_port.resize(n);
  tr.storage.resize(n);
  tr.ek1.resize(n);
  tr.eu.resize(n);
  tr.ek2.resize(n);
  tr.residual.resize(n);

  Human human(cfg.human, sys, cfg);

  LoopState x;
  x.s = cfg.s_start;
  x.sd = cfg.sd_start;
  x.y = sys.executed_point(cfg.s_start);
  x.v = (sys.scaling.array() * sys.curve.eval_d1(cfg.s_start).array() * cfg.sd_start)
            .matrix();

  // Delayed robot output, linearly interpolated between stored steps.
  const auto delayed = [&](double stage_time, int base_step,
                           const Eigen::VectorXd& y_now, const Eigen::VectorXd& v_now,
                           Eigen::VectorXd& ym, Eigen::VectorXd& ymd) {
    if (delay_steps == 0 || stage_time < cfg.delay) {
      ym = y_now;
      ymd = v_now;
      return;
    }
    const double tgt = stage_time - cfg.delay;
    const double x_idx = tgt / cfg.dt;
    int i0 = std::min(base_step, static_cast<int>(std::floor(x_idx)));
    i0 = std::max(0, i0);
    const int i1 = std::min(base_step, i0 + 1);
    const double u = std::clamp(x_idx - i0, 0.0, 1.0);
    ym = tr.y.row(i0).transpose() + u * (tr.y.row(i1) - tr.y.row(i0)).transpose();
    ymd = tr.yd.row(i0).transpose() + u * (tr.yd.row(i1) - tr.yd.row(i0)).transpose();
  };

  struct Deriv {
    Eigen::VectorXd dy, dv;
    double ds, dsd;
  };

  Eigen::VectorXd tremor = Eigen::VectorXd::Zero(d);

  const auto dynamics = [&](double stage_time, int base_step, const LoopState& st,
                            Deriv& out, Eigen::VectorXd* fh_out, double* ftau_out,
                            Eigen::VectorXd* ym_out, Eigen::VectorXd* ymd_out) {
    Eigen::VectorXd ym, ymd;
    delayed(stage_time, base_step, st.y, st.v, ym, ymd);
    Eigen::VectorXd fh = human.force(stage_time, ym, ymd) + tremor;
    const double ftau = project_force(sys.curve, sys.scaling, st.s, fh);
    const double sdd = (ftau - cfg.damping * st.sd) / cfg.mass;
    out.dy = st.v;
    out.dv = (-sys.alpha.array() * st.v.array() -
              sys.alpha.array() * sys.beta.array() * (st.y - sys.goal).array())
                 .matrix() +
             forcing_term(sys, st.s, st.sd, sdd) + fh;
    out.ds = st.sd;
    out.dsd = sdd;
    if (fh_out) *fh_out = fh;
    if (ftau_out) *ftau_out = ftau;
    if (ym_out) *ym_out = ym;
    if (ymd_out) *ymd_out = ymd;
  };

  const auto record = [&](int k) {
    const double time = k * cfg.dt;
    Deriv dv;
    Eigen::VectorXd fh, ym, ymd;
    double ftau;
    dynamics(time, k, x, dv, &fh, &ftau, &ym, &ymd);
    tr.t(k) = time;
    tr.s(k) = x.s;
    tr.sd(k) = x.sd;
    tr.sdd(k) = dv.dsd;
    tr.y.row(k) = x.y.transpose();
    tr.yd.row(k) = x.v.transpose();
    tr.ym.row(k) = ym.transpose();
    tr.ymd.row(k) = ymd.transpose();
    tr.fh.row(k) = fh.transpose();
    tr.f_tau(k) = ftau;
    tr.p_tau(k) = ftau * x.sd;
    tr.p_port(k) = ymd.dot(fh);

    // Energies on the tracking-error coordinates.
    Eigen::VectorXd yc, d1, d2;
    sys.curve.eval_all(x.s, yc, d1, d2);
    const Eigen::VectorXd ytil =
        x.y - sys.goal - (sys.scaling.array() * (yc - sys.ref_goal).array()).matrix();
    const Eigen::VectorXd ytil_d =
        x.v - (sys.scaling.array() * d1.array() * x.sd).matrix();
    tr.ek1(k) = 0.5 * ytil_d.squaredNorm();
    tr.eu(k) = 0.5 * (ytil.array() * sys.alpha.array() * sys.beta.array() *
                      ytil.array())
                         .sum();
    tr.ek2(k) = 0.5 * cfg.mass * x.sd * x.sd;
    tr.storage(k) = tr.ek1(k) + tr.eu(k) + tr.ek2(k);
    const double s_dot_analytic =
        -(ytil_d.array() * sys.alpha.array() * ytil_d.array()).sum() +
        x.v.dot(fh) - cfg.damping * x.sd * x.sd;
    tr.residual(k) = s_dot_analytic - tr.p_port(k);
  };

  const auto truncate = [&](int k) {
    tr.t.conservativeResize(k);
    tr.s.conservativeResize(k);
    tr.sd.conservativeResize(k);
    tr.sdd.conservativeResize(k);
    tr.y.conservativeResize(k, d);
    tr.yd.conservativeResize(k, d);
    tr.ym.conservativeResize(k, d);
    tr.ymd.conservativeResize(k, d);
    tr.fh.conservativeResize(k, d);
    tr.f_tau.conservativeResize(k);
    tr.p_tau.conservativeResize(k);
    tr.p_port.conservativeResize(k);
    tr.storage.conservativeResize(k);
    tr.ek1.conservativeResize(k);
    tr.eu.conservativeResize(k);
    tr.ek2.conservativeResize(k);
    tr.residual.conservativeResize(k);
  };

  for (int k = 0; k < n; ++k) {
    if (!x.y.allFinite() || !x.v.allFinite() || !std::isfinite(x.s) ||
        !std::isfinite(x.sd)) {
      tr.diverged_at = k;
      truncate(k);
      return tr;
    }
    tremor = human.tremor_sample(d);
    record(k);
    if (k + 1 == n) break;

    const double t0 = k * cfg.dt;
    Deriv k1, k2, k3, k4;
    dynamics(t0, k, x, k1, nullptr, nullptr, nullptr, nullptr);
    LoopState s2{x.y + 0.5 * cfg.dt * k1.dy, x.v + 0.5 * cfg.dt * k1.dv,
                 x.s + 0.5 * cfg.dt * k1.ds, x.sd + 0.5 * cfg.dt * k1.dsd};
    dynamics(t0 + 0.5 * cfg.dt, k, s2, k2, nullptr, nullptr, nullptr, nullptr);
    LoopState s3{x.y + 0.5 * cfg.dt * k2.dy, x.v + 0.5 * cfg.dt * k2.dv,
                 x.s + 0.5 * cfg.dt * k2.ds, x.sd + 0.5 * cfg.dt * k2.dsd};
    dynamics(t0 + 0.5 * cfg.dt, k, s3, k3, nullptr, nullptr, nullptr, nullptr);
    LoopState s4{x.y + cfg.dt * k3.dy, x.v + cfg.dt * k3.dv, x.s + cfg.dt * k3.ds,
                 x.sd + cfg.dt * k3.dsd};
    dynamics(t0 + cfg.dt, k, s4, k4, nullptr, nullptr, nullptr, nullptr);

    x.y += cfg.dt / 6.0 * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy);
    x.v += cfg.dt / 6.0 * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv);
    x.s += cfg.dt / 6.0 * (k1.ds + 2.0 * k2.ds + 2.0 * k3.ds + k4.ds);
    x.sd += cfg.dt / 6.0 * (k1.dsd + 2.0 * k2.dsd + 2.0 * k3.dsd + k4.dsd);
  }
  return tr;
}

PassivityReport passivity_monitor(const SimTrace& trace, const GdmpSystem& sys,
                                  const HilConfig& cfg) {
  (void)sys;
  (void)cfg;
  PassivityReport rep;
  const int n = trace.steps();
  for (int k = 1; k + 1 < n; ++k) {
    const double numeric =
        (trace.storage(k + 1) - trace.storage(k - 1)) / (2.0 * trace.dt);
    const double analytic = trace.residual(k) + trace.p_port(k);
    rep.max_gap = std::max(rep.max_gap, std::abs(analytic - numeric));
  }
  for (int k = 0; k < n; ++k) {
    rep.max_residual = std::max(rep.max_residual, trace.residual(k));
    if (trace.residual(k) > 1e-6) ++rep.violations;
  }
  rep.passive = rep.violations == 0;
  return rep;
}

std::complex<double> loop_gain(double mass, double damping, double k_h, double b_h,
                               double delay, double omega) {
  if (omega <= 0.0) throw InvalidParameter("loop_gain: omega must be > 0 (integrator pole)");
  const std::complex<double> jw(0.0, omega);
  return (b_h * jw + k_h) / jw * std::exp(-jw * delay) / (mass * jw + damping);
}

double loop_phase(double mass, double damping, double k_h, double b_h, double delay,
                  double omega) {
  // Every factor's phase is continuous in omega, so this sum is already
  // unwrapped: arg(B_h jw + K_h) - pi/2 - w t0 - arg(m jw + b).
  return std::atan2(b_h * omega, k_h) - M_PI / 2.0 - omega * delay -
         std::atan2(mass * omega, damping);
}

StabilityResult phase_margin(double mass, double damping, double k_h, double b_h,
                             double delay) {
  if (mass <= 0.0 || damping <= 0.0 || delay < 0.0 || k_h < 0.0 || b_h < 0.0)
    throw InvalidParameter("phase_margin: bad loop parameters");

  const auto log_mag = [&](double w) { return std::abs(loop_gain(mass, damping, k_h, b_h, delay, w)) - 1.0; };

  constexpr int kSweep = 2000;
  const double w_lo = 1e-3, w_hi = 1e5;
  double prev_w = w_lo, prev_v = log_mag(w_lo);
  double cross = -1.0;
  for (int i = 1; i < kSweep; ++i) {
    const double w = w_lo * std::pow(w_hi / w_lo, static_cast<double>(i) / (kSweep - 1));
    const double v = log_mag(w);
    if (prev_v == 0.0) cross = prev_w;
    if (prev_v * v < 0.0) {
      double a = prev_w, b = w, va = prev_v;
      for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        const double vm = log_mag(m);
        if (std::abs(vm) < 1e-9) { a = b = m; break; }
        if (va * vm < 0.0)
          b = m;
        else {
          a = m;
          va = vm;
        }
      }
      cross = 0.5 * (a + b);  // keep scanning: the largest crossover wins
    }
    prev_w = w;
    prev_v = v;
  }

  StabilityResult res;
  if (cross < 0.0) {
    res.margin_deg = std::numeric_limits<double>::infinity();
    res.crossover = 0.0;
    res.stable = true;
    return res;
  }
  res.crossover = cross;
  res.margin_deg =
      180.0 + loop_phase(mass, damping, k_h, b_h, delay, cross) * 180.0 / M_PI;
  res.stable = res.margin_deg > 0.0;
  return res;
}

Eigen::MatrixXd stability_map(const Eigen::VectorXd& mass_grid,
                              const Eigen::VectorXd& damping_grid, double k_h,
                              double b_h, double delay, int jobs) {
  if (mass_grid.size() == 0 || damping_grid.size() == 0)
    throw InvalidParameter("stability_map: empty grid");
  Eigen::MatrixXd map(mass_grid.size(), damping_grid.size());
  const auto fill_row = [&](int i) {
    for (Eigen::Index j = 0; j < damping_grid.size(); ++j)
      map(i, j) = phase_margin(mass_grid(i), damping_grid(j), k_h, b_h, delay).margin_deg;
  };
  if (jobs <= 1 || mass_grid.size() == 1) {
    for (Eigen::Index i = 0; i < mass_grid.size(); ++i) fill_row(static_cast<int>(i));
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    const int workers = std::min<int>(jobs, static_cast<int>(mass_grid.size()));
    for (int wk = 0; wk < workers; ++wk)
      pool.emplace_back([&]() {
        const int rows = static_cast<int>(mass_grid.size());
        for (int i = next.fetch_add(1); i < rows; i = next.fetch_add(1)) fill_row(i);
      });
    for (auto& th : pool) th.join();
  }
  return map;
}

Metrics metrics(const SimTrace& trace, double window) {
  const int n = trace.steps();
  if (n == 0 || window <= trace.dt)
    throw InvalidParameter("metrics: empty trace or window <= dt");
  Metrics m;

  double cos_sq = 0.0;
  int cos_count = 0;
  double e_sum = 0.0, f_nt = 0.0;
  for (int k = 0; k < n; ++k) {
    const double fn = trace.fh.row(k).norm();
    if (fn > 1e-6) {
      const double c = trace.f_tau(k) / fn;
      cos_sq += c * c;
      ++cos_count;
    }
    e_sum += (trace.y.row(k) - trace.ym.row(k)).norm();
    f_nt += fn - std::abs(trace.f_tau(k));
  }
  m.cos_theta_rms = cos_count ? std::sqrt(cos_sq / cos_count)
                              : std::numeric_limits<double>::quiet_NaN();
  m.e_norm_mean = e_sum / n;
  m.f_nontangential_mean = f_nt / n;

  const int half = std::max(1, static_cast<int>(std::llround(window / (2.0 * trace.dt))));
  double dev_sq = 0.0;
  for (int k = 0; k < n; ++k) {
    const int a = std::max(0, k - half), b = std::min(n - 1, k + half);
    const double avg = trace.sd.segment(a, b - a + 1).mean();
    const double dev = trace.sd(k) - avg;
    dev_sq += dev * dev;
  }
  m.sd_rmsd = std::sqrt(dev_sq / n);
  return m;
}

}  // namespace gdmp
