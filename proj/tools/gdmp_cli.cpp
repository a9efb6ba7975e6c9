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

// Command-line front end: ingest demonstrations, resample them at
// constant arc length, fit the geometric curve, and run the downstream
// branches (original timing law, minimum-time optimization, simulated
// co-manipulation, stability maps). Each command writes plot-ready CSV
// plus a run manifest and the effective configuration.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gdmp/config.hpp"
#include "gdmp/errors.hpp"
#include "gdmp/gdmp.hpp"
#include "gdmp/hilsim.hpp"
#include "gdmp/io.hpp"
#include "gdmp/kinematics.hpp"
#include "gdmp/phaseopt.hpp"
#include "gdmp/sampling.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

enum ExitCode { kOk = 0, kInputError = 2, kInfeasibleError = 3, kDivergenceError = 4 };

int log_level() {
  const char* env = std::getenv("GDMP_LOG");
  if (!env) return 1;
  const std::string v = env;
  if (v == "error") return 0;
  if (v == "debug") return 2;
  return 1;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[gdmp] " << msg << "\n";
}

struct RunContext {
  std::string command;
  std::vector<std::string> inputs;
  std::string out_dir;
  gdmp::PipelineConfig cfg;
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

  void prepare() const { fs::create_directories(out_dir); }

  std::string path(const std::string& name) const {
    return (fs::path(out_dir) / name).string();
  }

  void finish() const {
    const json effective = gdmp::config_to_json(cfg);
    gdmp::write_json(path("config.effective.json"), effective);
    json manifest;
    manifest["command"] = command;
    manifest["inputs"] = inputs;
    manifest["config_hash"] = gdmp::fnv1a_hex(effective.dump());
    manifest["versions"]["gdmp"] = "0.1.0";
    manifest["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
            .count();
    gdmp::write_json(path("run_manifest.json"), manifest);
  }
};

gdmp::PipelineConfig load_config(const std::string& config_path) {
  if (config_path.empty()) return {};
  return gdmp::config_from_json(gdmp::load_json(config_path));
}

gdmp::GdmpSystem build_system(const gdmp::ParametricCurve& curve,
                              const gdmp::PipelineConfig& cfg) {
  const int d = curve.dims();
  const Eigen::VectorXd alpha = Eigen::VectorXd::Constant(d, cfg.alpha);
  const Eigen::VectorXd beta = Eigen::VectorXd::Constant(d, cfg.beta);
  const Eigen::VectorXd goal = cfg.goal ? *cfg.goal : curve.goal;
  const Eigen::VectorXd start = cfg.start ? *cfg.start : curve.start;
  return gdmp::make_system(curve, alpha, beta, goal, start);
}

// Joint trajectory q(s) along the executed (goal-scaled) curve, fitted
// with the same basis machinery so it can be differentiated analytically.
gdmp::ParametricCurve build_joint_curve(const gdmp::GdmpSystem& sys,
                                        const gdmp::PipelineConfig& cfg) {
  const double spacing = sys.curve.delta > 0.0 ? sys.curve.delta : sys.curve.s_f / 200.0;
  const int m = static_cast<int>(std::llround(sys.curve.s_f / spacing)) + 1;
  Eigen::VectorXd abscissae(m);
  std::vector<Eigen::Vector2d> pts(static_cast<size_t>(m));
  for (int k = 0; k < m; ++k) {
    const double s = std::min(sys.curve.s_f, k * spacing);
    abscissae(k) = s;
    const Eigen::VectorXd p = sys.executed_point(s);
    pts[static_cast<size_t>(k)] =
        Eigen::Vector2d(p(cfg.plane_dims[0]), p(cfg.plane_dims[1]));
  }
  return gdmp::fit_joint_curve(cfg.arm, pts, abscissae, cfg.joint_n_basis, cfg.ridge);
}

int cmd_resample(RunContext& ctx, const std::string& in_csv, double delta_override) {
  ctx.prepare();
  if (delta_override > 0.0) ctx.cfg.delta = delta_override;
  const gdmp::TimedTrajectory traj = gdmp::read_timed_trajectory(in_csv);
  const gdmp::SpatialPath path =
      gdmp::spatial_sample(traj, ctx.cfg.delta, ctx.cfg.position_dims);
  const gdmp::TimingLaw law = gdmp::timing_law(path);

  gdmp::write_spatial_path(ctx.path("path.csv"), path);
  gdmp::write_timing_law(ctx.path("timing_law.csv"), law);

  json summary;
  summary["delta"] = path.delta;
  summary["samples"] = path.sample_count();
  summary["segments"] = path.sample_count() - 1;
  summary["length"] = path.total_length();
  summary["residual"] = path.residual;
  summary["pause_intervals"] = path.pauses.size();
  json pauses = json::array();
  for (const auto& p : path.pauses)
    pauses.push_back({{"t_begin", p.t_begin}, {"t_end", p.t_end}, {"s", p.s}});
  summary["pauses"] = pauses;
  json goal_last = json::array(), goal_demo = json::array();
  for (int i = 0; i < path.dims(); ++i) {
    goal_last.push_back(path.points(path.sample_count() - 1, i));
    goal_demo.push_back(path.demo_end(i));
  }
  summary["goal_last_sample"] = goal_last;
  summary["goal_demo_end"] = goal_demo;
  gdmp::write_json(ctx.path("summary.json"), summary);
  log_info("resampled " + std::to_string(path.sample_count()) + " samples, residual " +
           gdmp::format_double(path.residual));
  ctx.finish();
  return kOk;
}

int cmd_fit(RunContext& ctx, const std::string& in_csv) {
  ctx.prepare();
  const gdmp::SpatialPath path = gdmp::read_spatial_path(in_csv);
  const gdmp::ParametricCurve curve =
      gdmp::fit_curve(path, ctx.cfg.n_basis, ctx.cfg.width_scale, ctx.cfg.ridge);
  gdmp::save_curve(ctx.path("curve.json"), curve);
  json summary;
  summary["fit_rms"] = curve.fit_rms;
  summary["n_basis"] = curve.basis.size();
  summary["s_f"] = curve.s_f;
  gdmp::write_json(ctx.path("summary.json"), summary);
  log_info("fit rms " + gdmp::format_double(curve.fit_rms));
  ctx.finish();
  return kOk;
}

int cmd_rollout(RunContext& ctx, const std::string& curve_path,
                const std::string& phase_mode, const std::string& law_path,
                const std::string& profile_path, double dt) {
  ctx.prepare();
  const gdmp::ParametricCurve curve = gdmp::load_curve(curve_path);
  const gdmp::GdmpSystem sys = build_system(curve, ctx.cfg);

  gdmp::PhaseProfile profile;
  if (phase_mode == "original") {
    if (law_path.empty())
      throw gdmp::InvalidParameter("rollout: --phase original requires --law");
    gdmp::TimingLaw law = gdmp::read_timing_law(law_path);
    profile = gdmp::phase_from_timing_law(law, dt);
  } else if (phase_mode == "profile") {
    if (profile_path.empty())
      throw gdmp::InvalidParameter("rollout: --phase profile requires --profile");
    profile = gdmp::read_phase_profile(profile_path);
  } else {
    throw gdmp::InvalidParameter("rollout: --phase must be 'original' or 'profile'");
  }

  const gdmp::DmpState init = gdmp::matched_init(sys, profile);
  const gdmp::RolloutTrace trace = gdmp::rollout(sys, profile, dt, init);
  gdmp::write_rollout_trace(ctx.path("trace.csv"), trace);
  json summary;
  summary["duration"] = trace.t(trace.steps() - 1);
  summary["steps"] = trace.steps();
  gdmp::write_json(ctx.path("summary.json"), summary);
  ctx.finish();
  return kOk;
}

int cmd_optimize(RunContext& ctx, const std::string& curve_path, int grid_override) {
  ctx.prepare();
  if (grid_override > 0) ctx.cfg.grid = grid_override;
  const gdmp::ParametricCurve curve = gdmp::load_curve(curve_path);
  const gdmp::GdmpSystem sys = build_system(curve, ctx.cfg);

  gdmp::ParametricCurve joint_curve;
  const gdmp::ParametricCurve* joint_ptr = nullptr;
  if (ctx.cfg.constraints.qd_max || ctx.cfg.constraints.qdd_max ||
      ctx.cfg.use_joint_constraints) {
    joint_curve = build_joint_curve(sys, ctx.cfg);
    joint_ptr = &joint_curve;
  }

  auto [profile, report] = gdmp::min_time_phase(sys.curve, sys.scaling,
                                                ctx.cfg.constraints, ctx.cfg.grid,
                                                joint_ptr);
  gdmp::write_phase_profile(ctx.path("profile.csv"), profile);
  gdmp::write_json(ctx.path("saturation.json"), gdmp::saturation_to_json(report));
  json summary;
  summary["duration"] = profile.total_duration();
  summary["saturation_fraction"] = report.saturation_fraction;
  summary["feasible"] = report.feasible;
  gdmp::write_json(ctx.path("summary.json"), summary);
  log_info("optimal duration " + gdmp::format_double(profile.total_duration()) + " s");
  ctx.finish();
  return kOk;
}

int cmd_simulate(RunContext& ctx, const std::string& curve_path) {
  ctx.prepare();
  const gdmp::ParametricCurve curve = gdmp::load_curve(curve_path);
  const gdmp::GdmpSystem sys = build_system(curve, ctx.cfg);
  gdmp::HilConfig hil = ctx.cfg.hil;
  hil.human.seed = ctx.cfg.seed;

  const gdmp::SimTrace trace = gdmp::simulate(sys, hil);
  gdmp::write_sim_trace(ctx.path("trace.csv"), trace);

  json summary;
  summary["diverged"] = trace.diverged();
  summary["diverged_at"] = trace.diverged_at;
  if (trace.steps() > 2) {
    const gdmp::Metrics m = gdmp::metrics(trace);
    summary["cos_theta_rms"] = m.cos_theta_rms;
    summary["sd_rmsd"] = m.sd_rmsd;
    summary["e_norm_mean"] = m.e_norm_mean;
    summary["f_nontangential_mean"] = m.f_nontangential_mean;
    const gdmp::PassivityReport rep = gdmp::passivity_monitor(trace, sys, hil);
    summary["passivity"]["max_gap"] = rep.max_gap;
    summary["passivity"]["max_residual"] = rep.max_residual;
    summary["passivity"]["violations"] = rep.violations;
    summary["passivity"]["passive"] = rep.passive;
  }
  gdmp::write_json(ctx.path("metrics.json"), summary);
  ctx.finish();
  return trace.diverged() ? kDivergenceError : kOk;
}

int cmd_stability(RunContext& ctx, double t0, int cells, int jobs) {
  ctx.prepare();
  const Eigen::VectorXd m_grid = Eigen::VectorXd::LinSpaced(cells, 0.2, 4.0);
  const Eigen::VectorXd b_grid = Eigen::VectorXd::LinSpaced(cells, 1.7, 34.0);
  const Eigen::MatrixXd map =
      gdmp::stability_map(m_grid, b_grid, ctx.cfg.hil.human.stiffness,
                          ctx.cfg.hil.human.damping, t0, jobs);

  std::vector<std::string> header;
  for (int j = 0; j < cells; ++j) header.push_back("b" + std::to_string(j + 1));
  gdmp::write_csv(ctx.path("margin_map.csv"), header, map);
  json axes;
  axes["t0"] = t0;
  axes["K_h"] = ctx.cfg.hil.human.stiffness;
  axes["B_h"] = ctx.cfg.hil.human.damping;
  json mg = json::array(), bg = json::array();
  for (int i = 0; i < cells; ++i) {
    mg.push_back(m_grid(i));
    bg.push_back(b_grid(i));
  }
  axes["m_grid"] = mg;
  axes["b_grid"] = bg;
  gdmp::write_json(ctx.path("axes.json"), axes);
  ctx.finish();
  return kOk;
}

void emit_error(const std::string& kind, const std::string& message) {
  json err;
  err["error"] = kind;
  err["message"] = message;
  std::cerr << err.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometric motion-primitive toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_dir, in_path, curve_path, law_path, profile_path;
  std::string phase_mode = "original";
  double delta = -1.0, dt = 1e-3, t0 = 0.0;
  int grid = -1, cells = 5, jobs = 1;
  unsigned seed = 0;

  app.add_option("--config", config_path, "pipeline configuration JSON");
  app.add_option("--seed", seed, "seed for tremor noise (default 0)");

  auto* resample = app.add_subcommand("resample", "constant arc-length resampling");
  resample->add_option("--in", in_path, "demonstration CSV (t,x1..xd[,a1..am])")
      ->required();
  resample->add_option("--delta", delta, "spatial period [m]");
  resample->add_option("--out", out_dir, "output directory")->required();

  auto* fit = app.add_subcommand("fit", "fit the geometric curve");
  fit->add_option("--in", in_path, "spatial path CSV")->required();
  fit->add_option("--out", out_dir, "output directory")->required();

  auto* rollout = app.add_subcommand("rollout", "integrate the motion generator");
  rollout->add_option("--curve", curve_path, "curve JSON")->required();
  rollout->add_option("--phase", phase_mode, "original | profile");
  rollout->add_option("--law", law_path, "timing-law CSV (for --phase original)");
  rollout->add_option("--profile", profile_path, "phase-profile CSV");
  rollout->add_option("--dt", dt, "integration step [s]");
  rollout->add_option("--out", out_dir, "output directory")->required();

  auto* optimize = app.add_subcommand("optimize", "minimum-time phase profile");
  optimize->add_option("--curve", curve_path, "curve JSON")->required();
  optimize->add_option("--grid", grid, "arc-length grid size");
  optimize->add_option("--out", out_dir, "output directory")->required();

  auto* simulate = app.add_subcommand("simulate", "human-in-the-loop simulation");
  simulate->add_option("--curve", curve_path, "curve JSON")->required();
  simulate->add_option("--out", out_dir, "output directory")->required();

  auto* stability = app.add_subcommand("stability", "phase-margin map");
  stability->add_option("--t0", t0, "robot tracking delay [s]");
  stability->add_option("--cells", cells, "grid cells per axis (default 5)");
  stability->add_option("--jobs", jobs, "parallel rows (default 1)");
  stability->add_option("--out", out_dir, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  RunContext ctx;
  ctx.out_dir = out_dir;
  try {
    ctx.cfg = load_config(config_path);
    ctx.cfg.seed = seed;
    if (!config_path.empty()) ctx.inputs.push_back(config_path);

    if (app.got_subcommand(resample)) {
      ctx.command = "resample";
      ctx.inputs.push_back(in_path);
      return cmd_resample(ctx, in_path, delta);
    }
    if (app.got_subcommand(fit)) {
      ctx.command = "fit";
      ctx.inputs.push_back(in_path);
      return cmd_fit(ctx, in_path);
    }
    if (app.got_subcommand(rollout)) {
      ctx.command = "rollout";
      ctx.inputs.push_back(curve_path);
      if (!law_path.empty()) ctx.inputs.push_back(law_path);
      if (!profile_path.empty()) ctx.inputs.push_back(profile_path);
      return cmd_rollout(ctx, curve_path, phase_mode, law_path, profile_path, dt);
    }
    if (app.got_subcommand(optimize)) {
      ctx.command = "optimize";
      ctx.inputs.push_back(curve_path);
      return cmd_optimize(ctx, curve_path, grid);
    }
    if (app.got_subcommand(simulate)) {
      ctx.command = "simulate";
      ctx.inputs.push_back(curve_path);
      return cmd_simulate(ctx, curve_path);
    }
    if (app.got_subcommand(stability)) {
      ctx.command = "stability";
      return cmd_stability(ctx, t0, cells, jobs);
    }
  } catch (const gdmp::Divergence& e) {
    emit_error("divergence", e.what());
    return kDivergenceError;
  } catch (const gdmp::DegeneratePath& e) {
    emit_error("degenerate_path", e.what());
    return kInfeasibleError;
  } catch (const gdmp::Infeasible& e) {
    emit_error("infeasible", e.what());
    return kInfeasibleError;
  } catch (const gdmp::Unreachable& e) {
    emit_error("unreachable", e.what());
    return kInfeasibleError;
  } catch (const gdmp::RegularityViolation& e) {
    emit_error("regularity", e.what());
    return kInfeasibleError;
  } catch (const gdmp::Error& e) {
    emit_error("input", e.what());
    return kInputError;
  } catch (const std::exception& e) {
    emit_error("internal", e.what());
    return kInputError;
  }
  return kOk;
}
