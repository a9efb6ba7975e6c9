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

#ifndef GDMP_TYPES_HPP_
#define GDMP_TYPES_HPP_

#include <Eigen/Core>
#include <vector>

namespace gdmp {

/// A demonstration recorded at a constant sampling period.
/// Rows of `points` are samples, columns are Cartesian axes [m].
struct TimedTrajectory {
  double period = 0.0;    ///< sampling period [s]
  Eigen::MatrixXd points; ///< (N+1) x d position samples [m]
  Eigen::MatrixXd aux;    ///< (N+1) x m auxiliary channels, 0 cols when absent

  /// Column offsets into `aux` where a 4-wide unit-quaternion block starts.
  /// Interpolated quaternion blocks are re-normalized after resampling.
  std::vector<int> quaternion_blocks;

  int sample_count() const { return static_cast<int>(points.rows()); }
  int dims() const { return static_cast<int>(points.cols()); }
  double duration() const { return period * (points.rows() - 1); }
  double time_at(int k) const { return period * k; }
};

/// A maximal zero-motion interval detected inside a demonstration.
struct PauseInterval {
  double t_begin = 0.0; ///< [s]
  double t_end = 0.0;   ///< [s]
  double s = 0.0;       ///< arc length held during the pause [m]
};

/// Output of spatial sampling: samples spaced at a constant chord
/// distance `delta` along the demonstrated polyline.
struct SpatialPath {
  double delta = 0.0;        ///< spatial period [m]
  Eigen::MatrixXd points;    ///< (M+1) x d resampled positions [m]
  Eigen::VectorXd arclengths;///< arclengths[k] = k * delta [m]
  Eigen::VectorXd times;     ///< demonstration time of each sample [s]
  Eigen::MatrixXd aux;       ///< aux channels interpolated at `times`

  double residual = 0.0;         ///< interpolant length left after the last sample [m]
  Eigen::VectorXd demo_end;      ///< final input point (alternative goal candidate)
  std::vector<PauseInterval> pauses;

  int sample_count() const { return static_cast<int>(points.rows()); }
  int dims() const { return static_cast<int>(points.cols()); }
  /// Total arc length covered by the emitted samples (delta * M).
  double total_length() const { return arclengths.size() ? arclengths(arclengths.size() - 1) : 0.0; }
};

/// The timing law realized during the demonstration: arc length as a
/// function of time, sampled at the spatially resampled instants.
struct TimingLaw {
  Eigen::VectorXd t; ///< strictly increasing [s]
  Eigen::VectorXd s; ///< non-decreasing arc length [m]
  std::vector<PauseInterval> pauses; ///< zero-motion intervals carried from sampling

  int sample_count() const { return static_cast<int>(t.size()); }
};

}  // namespace gdmp

#endif  // GDMP_TYPES_HPP_
