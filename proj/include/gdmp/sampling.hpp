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

#ifndef GDMP_SAMPLING_HPP_
#define GDMP_SAMPLING_HPP_

#include <vector>

#include "gdmp/types.hpp"

namespace gdmp {

/// Resample a time-sampled demonstration at constant chord distance.
///
/// Walks the piecewise-linear interpolant of `traj` and emits a sample
/// whenever the chord distance from the last emitted sample (measured on
/// `position_dims` only) reaches `delta`. The first input point is always
/// emitted with time 0. Sub-delta excursions (pauses, tremor) emit
/// nothing. A final partial segment shorter than delta is dropped and its
/// length reported in SpatialPath::residual so callers may snap the goal
/// to the last emitted point.
///
/// Within a segment the emission point is the larger root of
/// || P_i + u (P_{i+1} - P_i) - y_c || = delta, u in [0, 1]; the sphere
/// can intersect a segment twice when the path bends back. A long segment
/// may hold several emissions.
///
/// An empty `position_dims` means all columns of `traj.points`.
///
/// Throws InvalidParameter (delta <= 0, bad dims) or DegeneratePath
/// (fewer than 2 output samples).
SpatialPath spatial_sample(const TimedTrajectory& traj, double delta,
                           const std::vector<int>& position_dims = {});

/// Extract the demonstrated timing law (t_k, k*delta) from a spatial path.
/// Exactly repeated times (possible only when delta is below numeric
/// resolution) are perturbed by one ULP to keep t strictly increasing.
TimingLaw timing_law(const SpatialPath& path);

/// Maximum apparent displacement inside the leading `hold_window` seconds
/// of a nominally stationary segment; the recommended lower bound for the
/// spatial period delta. Throws InsufficientData when the window holds
/// fewer than 2 samples.
double noise_floor_estimate(const TimedTrajectory& traj, double hold_window);

}  // namespace gdmp

#endif  // GDMP_SAMPLING_HPP_
