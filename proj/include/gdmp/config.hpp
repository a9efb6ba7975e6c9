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

#ifndef GDMP_CONFIG_HPP_
#define GDMP_CONFIG_HPP_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gdmp/hilsim.hpp"
#include "gdmp/kinematics.hpp"
#include "gdmp/phaseopt.hpp"

namespace gdmp {

/// One JSON document with per-module sections. Unknown keys are
/// rejected; missing sections fall back to the defaults below. The
/// merged effective document is echoed next to every command output.
struct PipelineConfig {
  // sampling
  double delta = 0.01;
  std::vector<int> position_dims;  // empty = all

  // curvefit
  int n_basis = 30;
  double width_scale = 1.0;
  double ridge = 1e-8;

  // gdmp
  double alpha = 40.0;
  double beta = 10.0;
  std::optional<Eigen::VectorXd> goal;   // default: curve goal
  std::optional<Eigen::VectorXd> start;  // default: curve start

  // phaseopt
  ConstraintSet constraints;
  int grid = 2000;

  // kinematics
  PlanarArm arm;
  std::array<int, 2> plane_dims{0, 1};
  int joint_n_basis = 40;
  bool use_joint_constraints = false;

  // hil
  HilConfig hil;

  /// Seed for tremor noise; set from the CLI --seed flag.
  unsigned seed = 0;
};

/// Parse and validate a config document. Throws InvalidParameter on
/// unknown keys or out-of-range values.
PipelineConfig config_from_json(const nlohmann::json& j);

/// Serialize the effective configuration (defaults merged in).
nlohmann::json config_to_json(const PipelineConfig& cfg);

}  // namespace gdmp

#endif  // GDMP_CONFIG_HPP_
