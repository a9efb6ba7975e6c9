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

#ifndef GDMP_PHASEPROFILE_HPP_
#define GDMP_PHASEPROFILE_HPP_

#include <Eigen/Core>

namespace gdmp {

/// A timing law s(t) with derivatives on a uniform time grid. Profiles
/// may pause (sd = 0) or reverse (sd < 0); the minimum-time optimizer
/// additionally guarantees sd >= 0 and zero boundary rates on its output.
struct PhaseProfile {
  double dt = 0.0;
  Eigen::VectorXd t, s, sd, sdd;

  int steps() const { return static_cast<int>(t.size()); }
  double total_duration() const { return t.size() ? t(t.size() - 1) : 0.0; }
  double final_s() const { return s.size() ? s(s.size() - 1) : 0.0; }

  /// Linear interpolation between grid samples; held at the boundary
  /// values with sd = sdd = 0 outside the horizon.
  void eval(double time, double& s_out, double& sd_out, double& sdd_out) const;

  /// Time-reversed copy: s(T - t), so sd flips sign.
  PhaseProfile reversed() const;
};

}  // namespace gdmp

#endif  // GDMP_PHASEPROFILE_HPP_
