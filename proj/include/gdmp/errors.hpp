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

#ifndef GDMP_ERRORS_HPP_
#define GDMP_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace gdmp {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A caller-supplied argument is out of its documented domain.
struct InvalidParameter : Error {
  using Error::Error;
};

// The input trajectory is too short to produce a meaningful result
// (e.g. total arc length below one spatial period).
struct DegeneratePath : Error {
  using Error::Error;
};

// A window or series does not contain enough samples.
struct InsufficientData : Error {
  using Error::Error;
};

// The least-squares system is rank deficient and no regularization
// was requested.
struct SingularFit : Error {
  using Error::Error;
};

// An axis has zero displacement between start and goal, so the classic
// DMP modulation term vanishes.
struct DegenerateModulation : Error {
  using Error::Error;
};

// No timing law can satisfy the requested constraint set.
struct Infeasible : Error {
  Infeasible(const std::string& msg, double s_location)
      : Error(msg), location(s_location) {}
  double location;  // arc length [m] where the admissible set collapsed
};

// The fitted curve violates the unit-tangent regularity assumption.
struct RegularityViolation : Error {
  using Error::Error;
};

// A Cartesian target lies outside the reachable workspace.
struct Unreachable : Error {
  Unreachable(const std::string& msg, double distance_deficit)
      : Error(msg), deficit(distance_deficit) {}
  double deficit;  // how far outside the reachable annulus [m]
};

// A rollout produced a non-finite state.
struct Divergence : Error {
  Divergence(const std::string& msg, int bad_step, double bad_time)
      : Error(msg), step(bad_step), time(bad_time) {}
  int step;
  double time;
};

}  // namespace gdmp

#endif  // GDMP_ERRORS_HPP_
