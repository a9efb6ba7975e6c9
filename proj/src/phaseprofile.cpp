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

#include "gdmp/phaseprofile.hpp"

#include <algorithm>
#include <cmath>

namespace gdmp {

void PhaseProfile::eval(double time, double& s_out, double& sd_out,
                        double& sdd_out) const {
  const int n = steps();
  if (n == 0) {
    s_out = sd_out = sdd_out = 0.0;
    return;
  }
  if (time <= t(0)) {
    s_out = s(0);
    sd_out = (time < t(0)) ? 0.0 : sd(0);
    sdd_out = (time < t(0)) ? 0.0 : sdd(0);
    return;
  }
  if (time >= t(n - 1)) {
    s_out = s(n - 1);
    sd_out = (time > t(n - 1)) ? 0.0 : sd(n - 1);
    sdd_out = (time > t(n - 1)) ? 0.0 : sdd(n - 1);
    return;
  }
  const double x = (time - t(0)) / dt;
  const int i = std::min(n - 2, static_cast<int>(std::floor(x)));
  const double u = x - i;
  s_out = s(i) + u * (s(i + 1) - s(i));
  sd_out = sd(i) + u * (sd(i + 1) - sd(i));
  sdd_out = sdd(i) + u * (sdd(i + 1) - sdd(i));
}

PhaseProfile PhaseProfile::reversed() const {
  PhaseProfile r;
  r.dt = dt;
  r.t = t;
  r.s = s.reverse();
  r.sd = -sd.reverse();
  r.sdd = sdd.reverse();
  return r;
}

}  // namespace gdmp
