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

#ifndef GDMP_IO_HPP_
#define GDMP_IO_HPP_

#include <string>
#include <vector>

#include <json.hpp>

#include "gdmp/curvefit.hpp"
#include "gdmp/gdmp.hpp"
#include "gdmp/hilsim.hpp"
#include "gdmp/phaseopt.hpp"
#include "gdmp/types.hpp"

namespace gdmp {

// CSV primitives: comma separators, '.' decimals, 17 significant digits,
// LF line endings; byte-identical across runs with identical inputs.

std::string format_double(double v);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const Eigen::MatrixXd& rows);

struct CsvTable {
  std::vector<std::string> header;
  Eigen::MatrixXd rows;
};

CsvTable read_csv(const std::string& path);

/// Parse a demonstration CSV with header `t,x1,...,xd[,a1,...,am]`.
/// Time must be uniformly spaced and strictly increasing.
TimedTrajectory read_timed_trajectory(const std::string& path);
void write_timed_trajectory(const std::string& path, const TimedTrajectory& traj);

/// Spatial path CSV: `s,t,x1,...,xd[,a1,...,am]`.
void write_spatial_path(const std::string& path, const SpatialPath& sp);
SpatialPath read_spatial_path(const std::string& path);

/// Timing law CSV: `t,s`.
void write_timing_law(const std::string& path, const TimingLaw& law);
TimingLaw read_timing_law(const std::string& path);

/// Phase profile CSV: `t,s,sd,sdd`.
void write_phase_profile(const std::string& path, const PhaseProfile& prof);
PhaseProfile read_phase_profile(const std::string& path);

/// Rollout trace CSV: `t,s,sd,x1..xd,v1..vd,a1..ad`.
void write_rollout_trace(const std::string& path, const RolloutTrace& tr);

/// Simulation trace CSV, one column per recorded series.
void write_sim_trace(const std::string& path, const SimTrace& tr);

// JSON persistence. Doubles survive a round trip bit-faithfully.

nlohmann::json curve_to_json(const ParametricCurve& curve);
ParametricCurve curve_from_json(const nlohmann::json& j);
void save_curve(const std::string& path, const ParametricCurve& curve);
ParametricCurve load_curve(const std::string& path);

nlohmann::json system_to_json(const GdmpSystem& sys);
GdmpSystem system_from_json(const nlohmann::json& j);

nlohmann::json constraints_to_json(const ConstraintSet& cons);
ConstraintSet constraints_from_json(const nlohmann::json& j);

nlohmann::json saturation_to_json(const SaturationReport& rep);

void write_json(const std::string& path, const nlohmann::json& j);
nlohmann::json load_json(const std::string& path);

/// FNV-1a hash of a string, hex encoded (stable across runs/platforms).
std::string fnv1a_hex(const std::string& data);

}  // namespace gdmp

#endif  // GDMP_IO_HPP_
