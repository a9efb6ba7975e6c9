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

#ifndef GDMP_CURVEFIT_HPP_
#define GDMP_CURVEFIT_HPP_

#include <Eigen/Core>

#include "gdmp/types.hpp"

namespace gdmp {

/// Shared-width Gaussian basis b_i(s) = exp(-(s - c_i)^2 / (2 h)),
/// normalized to phi_i = b_i / sum_j b_j before use.
struct RbfBasis {
  Eigen::VectorXd centers;  ///< strictly increasing, inside [0, s_f]
  double width = 0.0;       ///< h, shared [m^2]

  int size() const { return static_cast<int>(centers.size()); }

  /// Normalized basis values at s.
  Eigen::VectorXd phi(double s) const;
  /// Normalized basis values plus first and second derivatives at s.
  void phi_d(double s, Eigen::VectorXd& p, Eigen::VectorXd& dp,
             Eigen::VectorXd& ddp) const;
};

/// A d-dimensional parametric curve over arc length s in [0, s_f],
/// expressed as a normalized-RBF expansion with analytic derivatives.
/// Immutable after fitting; safe for concurrent readers.
struct ParametricCurve {
  RbfBasis basis;
  Eigen::MatrixXd weights;  ///< d x N coefficients
  double s_f = 0.0;         ///< domain end [m]
  double delta = 0.0;       ///< spatial period of the fitted samples [m]
  double fit_rms = 0.0;     ///< RMS residual of the fit [m]
  Eigen::VectorXd goal;     ///< last fitted sample (pipeline goal candidate)
  Eigen::VectorXd start;    ///< first fitted sample

  int dims() const { return static_cast<int>(weights.rows()); }

  /// Curve value at s. Evaluations outside [0, s_f] clamp s.
  Eigen::VectorXd eval(double s) const;
  /// First derivative w.r.t. s; held at the boundary value outside the domain.
  Eigen::VectorXd eval_d1(double s) const;
  /// Second derivative w.r.t. s; zero outside the domain.
  Eigen::VectorXd eval_d2(double s) const;
  /// All three in one basis evaluation.
  void eval_all(double s, Eigen::VectorXd& y, Eigen::VectorXd& d1,
                Eigen::VectorXd& d2) const;
};

/// Fit a normalized-RBF curve to (abscissae, values) samples by ridge
/// least squares. Centers are uniform on [0, abscissae.max()], the shared
/// width is (width_scale * spacing)^2. Throws SingularFit when the system
/// is rank deficient and ridge == 0, InvalidParameter for bad sizes.
ParametricCurve fit_curve(const Eigen::VectorXd& abscissae,
                          const Eigen::MatrixXd& values, int n_basis,
                          double width_scale = 1.0, double ridge = 1e-8);

/// Convenience overload fitting the points of a spatial path over its
/// arc-length abscissae.
ParametricCurve fit_curve(const SpatialPath& path, int n_basis,
                          double width_scale = 1.0, double ridge = 1e-8);

}  // namespace gdmp

#endif  // GDMP_CURVEFIT_HPP_
