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

#include "gdmp/curvefit.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>

#include "gdmp/errors.hpp"

namespace gdmp {

Eigen::VectorXd RbfBasis::phi(double s) const {
  const int n = size();
  Eigen::VectorXd e(n);
  for (int i = 0; i < n; ++i) {
    const double r = s - centers(i);
    e(i) = -r * r / (2.0 * width);
  }
  const double emax = e.maxCoeff();
  Eigen::VectorXd b = (e.array() - emax).exp();
  return b / b.sum();
}

void RbfBasis::phi_d(double s, Eigen::VectorXd& p, Eigen::VectorXd& dp,
                     Eigen::VectorXd& ddp) const {
  const int n = size();
  Eigen::VectorXd e(n), r(n);
  for (int i = 0; i < n; ++i) {
    const double diff = s - centers(i);
    r(i) = -diff / width;  // b_i' = b_i * r_i
    e(i) = -diff * diff / (2.0 * width);
  }
  const double emax = e.maxCoeff();
  const Eigen::VectorXd b = (e.array() - emax).exp();
  const double B = b.sum();
  const Eigen::VectorXd r2 = r.array().square() - 1.0 / width;  // b_i'' = b_i * r2_i
  const double B1 = b.dot(r) / B;                               // B'/B
  const double B2 = b.dot(r2) / B;                              // B''/B

  p = b / B;
  dp = p.array() * (r.array() - B1);
  ddp = p.array() * (r2.array() - 2.0 * B1 * r.array() - B2 + 2.0 * B1 * B1);
}

Eigen::VectorXd ParametricCurve::eval(double s) const {
  const double sc = std::clamp(s, 0.0, s_f);
  return weights * basis.phi(sc);
}

Eigen::VectorXd ParametricCurve::eval_d1(double s) const {
  const double sc = std::clamp(s, 0.0, s_f);
  Eigen::VectorXd p, dp, ddp;
  basis.phi_d(sc, p, dp, ddp);
  return weights * dp;
}

Eigen::VectorXd ParametricCurve::eval_d2(double s) const {
  if (s < 0.0 || s > s_f) return Eigen::VectorXd::Zero(dims());
  Eigen::VectorXd p, dp, ddp;
  basis.phi_d(s, p, dp, ddp);
  return weights * ddp;
}

void ParametricCurve::eval_all(double s, Eigen::VectorXd& y, Eigen::VectorXd& d1,
                               Eigen::VectorXd& d2) const {
  const bool outside = s < 0.0 || s > s_f;
  const double sc = std::clamp(s, 0.0, s_f);
  Eigen::VectorXd p, dp, ddp;
  basis.phi_d(sc, p, dp, ddp);
  y = weights * p;
  d1 = weights * dp;
  d2 = outside ? Eigen::VectorXd::Zero(dims()) : Eigen::VectorXd(weights * ddp);
}

ParametricCurve fit_curve(const Eigen::VectorXd& abscissae,
                          const Eigen::MatrixXd& values, int n_basis,
                          double width_scale, double ridge) {
  const int m = static_cast<int>(abscissae.size());
  if (n_basis < 2) throw InvalidParameter("fit_curve: need at least 2 basis functions");
  if (m != values.rows()) throw InvalidParameter("fit_curve: abscissae/values size mismatch");
  if (n_basis > m) throw InvalidParameter("fit_curve: more basis functions than samples");
  if (ridge < 0.0) throw InvalidParameter("fit_curve: ridge must be >= 0");
  if (width_scale <= 0.0) throw InvalidParameter("fit_curve: width_scale must be > 0");

  const double s_f = abscissae(m - 1);
  if (s_f <= 0.0) throw InvalidParameter("fit_curve: domain end must be > 0");

  RbfBasis basis;
  basis.centers = Eigen::VectorXd::LinSpaced(n_basis, 0.0, s_f);
  const double spacing = s_f / (n_basis - 1);
  basis.width = (width_scale * spacing) * (width_scale * spacing);

  Eigen::MatrixXd design(m, n_basis);
  for (int k = 0; k < m; ++k) design.row(k) = basis.phi(abscissae(k)).transpose();

  Eigen::MatrixXd coeffs;  // N x d
  if (ridge == 0.0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < n_basis)
      throw SingularFit("fit_curve: rank-deficient normal system; use a positive ridge");
    coeffs = qr.solve(values);
  } else {
    const Eigen::MatrixXd gram =
        design.transpose() * design +
        ridge * Eigen::MatrixXd::Identity(n_basis, n_basis);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    coeffs = ldlt.solve(design.transpose() * values);
    if (ldlt.info() != Eigen::Success || !coeffs.allFinite()) {
      // Conditioning failure: solve the stacked ridge system orthogonally.
      Eigen::MatrixXd stacked(m + n_basis, n_basis);
      stacked.topRows(m) = design;
      stacked.bottomRows(n_basis) =
          std::sqrt(ridge) * Eigen::MatrixXd::Identity(n_basis, n_basis);
      Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(m + n_basis, values.cols());
      rhs.topRows(m) = values;
      coeffs = stacked.colPivHouseholderQr().solve(rhs);
    }
  }

  ParametricCurve curve;
  curve.basis = std::move(basis);
  curve.weights = coeffs.transpose();
  curve.s_f = s_f;
  curve.start = values.row(0).transpose();
  curve.goal = values.row(m - 1).transpose();
  curve.fit_rms = std::sqrt((design * coeffs - values).squaredNorm() / m);
  return curve;
}

ParametricCurve fit_curve(const SpatialPath& path, int n_basis,
                          double width_scale, double ridge) {
  ParametricCurve curve =
      fit_curve(path.arclengths, path.points, n_basis, width_scale, ridge);
  curve.delta = path.delta;
  return curve;
}

}  // namespace gdmp
