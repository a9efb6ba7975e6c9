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

#include "gdmp/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gdmp/errors.hpp"

namespace gdmp {
namespace {

// Relative slack on the emission test so that a segment endpoint landing
// exactly at chord distance delta is still emitted.
constexpr double kEmitSlack = 1e-12;

Eigen::VectorXd select_dims(const Eigen::VectorXd& v, const std::vector<int>& dims) {
  Eigen::VectorXd out(dims.size());
  for (size_t i = 0; i < dims.size(); ++i) out(static_cast<Eigen::Index>(i)) = v(dims[i]);
  return out;
}

void renormalize_quaternions(Eigen::VectorXd& aux_row, const std::vector<int>& blocks) {
  for (int off : blocks) {
    if (off < 0 || off + 4 > aux_row.size()) continue;
    const double n = aux_row.segment<4>(off).norm();
    if (n > 0.0) aux_row.segment<4>(off) /= n;
  }
}

}  // namespace

SpatialPath spatial_sample(const TimedTrajectory& traj, double delta,
                           const std::vector<int>& position_dims) {
  if (delta <= 0.0) throw InvalidParameter("spatial_sample: delta must be > 0");
  const int n_pts = traj.sample_count();
  const int d = traj.dims();
  if (n_pts < 2) throw InvalidParameter("spatial_sample: trajectory needs >= 2 points");
  if (traj.period <= 0.0) throw InvalidParameter("spatial_sample: sampling period must be > 0");
  if (traj.aux.rows() > 0 && traj.aux.rows() != n_pts)
    throw InvalidParameter("spatial_sample: aux length differs from points");

  std::vector<int> dims = position_dims;
  if (dims.empty()) {
    dims.resize(d);
    for (int i = 0; i < d; ++i) dims[i] = i;
  }
  for (int k : dims)
    if (k < 0 || k >= d) throw InvalidParameter("spatial_sample: position dim out of range");

  const bool has_aux = traj.aux.cols() > 0;
  const double emit_threshold = delta * (1.0 - kEmitSlack);
  const double pause_eps = 1e-9 * delta;  // motion below this counts as standing still

  std::vector<Eigen::VectorXd> out_points;
  std::vector<Eigen::VectorXd> out_aux;
  std::vector<double> out_times;
  std::vector<PauseInterval> pauses;

  // First sample: first input point, time forced to zero.
  out_points.push_back(traj.points.row(0).transpose());
  out_times.push_back(0.0);
  if (has_aux) out_aux.push_back(traj.aux.row(0).transpose());

  Eigen::VectorXd yc = select_dims(traj.points.row(0).transpose(), dims);

  int pause_start = -1;  // input index where the current zero-motion run began

  for (int i = 0; i + 1 < n_pts; ++i) {
    const Eigen::VectorXd p0 = select_dims(traj.points.row(i).transpose(), dims);
    const Eigen::VectorXd p1 = select_dims(traj.points.row(i + 1).transpose(), dims);
    const Eigen::VectorXd seg = p1 - p0;
    const double seg_len = seg.norm();

    if (seg_len <= pause_eps) {
      if (pause_start < 0) pause_start = i;
    } else if (pause_start >= 0) {
      pauses.push_back({traj.time_at(pause_start), traj.time_at(i),
                        delta * static_cast<double>(out_points.size() - 1)});
      pause_start = -1;
    }

    while ((p1 - yc).norm() >= emit_threshold) {
      // || p0 + u*seg - yc || = delta, take the larger (forward) root.
      const Eigen::VectorXd w = p0 - yc;
      const double a = seg.squaredNorm();
      if (a == 0.0) break;  // degenerate segment, chord can never grow
      const double b = 2.0 * seg.dot(w);
      const double c = w.squaredNorm() - delta * delta;
      const double disc = std::max(0.0, b * b - 4.0 * a * c);
      double u = (-b + std::sqrt(disc)) / (2.0 * a);
      u = std::clamp(u, 0.0, 1.0);

      const double t_emit = traj.period * (i + u);
      Eigen::VectorXd full = traj.points.row(i).transpose() +
                             u * (traj.points.row(i + 1) - traj.points.row(i)).transpose();
      out_points.push_back(full);
      out_times.push_back(t_emit);
      if (has_aux) {
        Eigen::VectorXd arow = traj.aux.row(i).transpose() +
                               u * (traj.aux.row(i + 1) - traj.aux.row(i)).transpose();
        renormalize_quaternions(arow, traj.quaternion_blocks);
        out_aux.push_back(arow);
      }
      yc = p0 + u * seg;
      if (u >= 1.0 - 1e-15) break;  // segment fully consumed
    }
  }
  if (pause_start >= 0)
    pauses.push_back({traj.time_at(pause_start), traj.time_at(n_pts - 1),
                      delta * static_cast<double>(out_points.size() - 1)});

  if (out_points.size() < 2) {
    double total = 0.0;
    for (int i = 0; i + 1 < n_pts; ++i) {
      const Eigen::VectorXd p0 = select_dims(traj.points.row(i).transpose(), dims);
      const Eigen::VectorXd p1 = select_dims(traj.points.row(i + 1).transpose(), dims);
      total += (p1 - p0).norm();
    }
    throw DegeneratePath("spatial_sample: total path length " + std::to_string(total) +
                         " m is below delta, nothing to emit");
  }

  const int m = static_cast<int>(out_points.size());
  SpatialPath path;
  path.delta = delta;
  path.points.resize(m, d);
  path.times.resize(m);
  path.arclengths.resize(m);
  if (has_aux) path.aux.resize(m, traj.aux.cols());
  for (int k = 0; k < m; ++k) {
    path.points.row(k) = out_points[static_cast<size_t>(k)].transpose();
    path.times(k) = out_times[static_cast<size_t>(k)];
    path.arclengths(k) = delta * k;
    if (has_aux) path.aux.row(k) = out_aux[static_cast<size_t>(k)].transpose();
  }
  path.pauses = std::move(pauses);
  path.demo_end = traj.points.row(n_pts - 1).transpose();

  // Leftover interpolant length past the last emitted sample.
  const double t_last = path.times(m - 1);
  double residual = 0.0;
  const int i0 = std::min(n_pts - 2, static_cast<int>(std::floor(t_last / traj.period)));
  {
    const double u0 = t_last / traj.period - i0;
    const Eigen::VectorXd p0 = select_dims(traj.points.row(i0).transpose(), dims);
    const Eigen::VectorXd p1 = select_dims(traj.points.row(i0 + 1).transpose(), dims);
    residual += (1.0 - u0) * (p1 - p0).norm();
    for (int i = i0 + 1; i + 1 < n_pts; ++i) {
      const Eigen::VectorXd q0 = select_dims(traj.points.row(i).transpose(), dims);
      const Eigen::VectorXd q1 = select_dims(traj.points.row(i + 1).transpose(), dims);
      residual += (q1 - q0).norm();
    }
  }
  path.residual = residual;
  return path;
}

TimingLaw timing_law(const SpatialPath& path) {
  TimingLaw law;
  law.t = path.times;
  law.s = path.arclengths;
  law.pauses = path.pauses;
  for (Eigen::Index k = 1; k < law.t.size(); ++k) {
    if (law.t(k) <= law.t(k - 1))
      law.t(k) = std::nextafter(law.t(k - 1), std::numeric_limits<double>::infinity());
  }
  return law;
}

double noise_floor_estimate(const TimedTrajectory& traj, double hold_window) {
  if (hold_window > traj.duration() + 1e-12)
    throw InvalidParameter("noise_floor_estimate: hold window exceeds trajectory duration");
  const int n = std::min<int>(traj.sample_count(),
                              static_cast<int>(std::floor(hold_window / traj.period)) + 1);
  if (n < 2) throw InsufficientData("noise_floor_estimate: window holds fewer than 2 samples");
  double best = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      best = std::max(best, (traj.points.row(i) - traj.points.row(j)).norm());
  return best;
}

}  // namespace gdmp
