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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <random>

#include "gdmp/curvefit.hpp"
#include "gdmp/errors.hpp"
#include "gdmp/io.hpp"
#include "gdmp/sampling.hpp"
#include "test_support.hpp"

using namespace gdmp;
using namespace testsupport;

namespace {

SpatialPath circle_path(double radius, double delta, double span = 2.0 * M_PI) {
  const auto traj = sample_curve(
      [radius](double t) {
        Eigen::VectorXd p(2);
        p << radius * std::cos(t), radius * std::sin(t);
        return p;
      },
      span, span / 20000.0);
  return spatial_sample(traj, delta);
}

SpatialPath line_path(double length, double delta) {
  const auto traj = sample_curve(
      [](double t) {
        Eigen::VectorXd p(1);
        p << t;
        return p;
      },
      length, length / 2000.0);
  return spatial_sample(traj, delta);
}

}  // namespace

TEST_CASE("straight line fit interpolates within tolerance") {
  const SpatialPath path = line_path(1.0, 0.1);  // 11 samples
  const ParametricCurve curve = fit_curve(path, 10, 1.0, 1e-8);

  // independent least-squares residual oracle via dense QR on the same model
  Eigen::MatrixXd design(path.sample_count(), 10);
  for (int k = 0; k < path.sample_count(); ++k)
    design.row(k) = curve.basis.phi(path.arclengths(k)).transpose();
  const Eigen::VectorXd w_oracle =
      design.colPivHouseholderQr().solve(path.points.col(0));
  const double rms_oracle =
      std::sqrt((design * w_oracle - path.points.col(0)).squaredNorm() /
                path.sample_count());
  CHECK(curve.fit_rms <= rms_oracle + 1e-6);

  double max_err = 0.0;
  for (int k = 0; k < path.sample_count(); ++k)
    max_err = std::max(max_err,
                       std::abs(curve.eval(path.arclengths(k))(0) - path.points(k, 0)));
  CHECK(max_err <= 1e-3 * curve.s_f);
}

TEST_CASE("circle fit: residual and unit tangent") {
  const SpatialPath path = circle_path(1.0, 0.01);
  const ParametricCurve curve = fit_curve(path, 50, 1.0, 1e-8);
  CHECK(curve.fit_rms <= 1e-3);
  // analytic circle tangent has unit norm; interior abscissae (the exact
  // domain ends carry the structural kernel-edge droop)
  for (int k = 0; k < path.sample_count(); ++k) {
    const double s = path.arclengths(k);
    if (s < 0.05 * curve.s_f || s > 0.95 * curve.s_f) continue;
    const double tn = curve.eval_d1(s).norm();
    CHECK(tn == doctest::Approx(1.0).epsilon(0.02));
  }
}

TEST_CASE("analytic derivatives match finite differences") {
  const SpatialPath path = circle_path(1.0, 0.01);
  const ParametricCurve curve = fit_curve(path, 40, 1.0, 1e-8);
  const double h = 1e-6 * curve.s_f;
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(2.0 * h, curve.s_f - 2.0 * h);
  for (int trial = 0; trial < 1000; ++trial) {
    const double s = u(rng);
    const Eigen::VectorXd d1 = curve.eval_d1(s);
    const Eigen::VectorXd fd1 = (curve.eval(s + h) - curve.eval(s - h)) / (2.0 * h);
    CHECK((d1 - fd1).norm() <= 1e-4 * std::max(1.0, d1.norm()));
    const Eigen::VectorXd d2 = curve.eval_d2(s);
    const Eigen::VectorXd fd2 =
        (curve.eval_d1(s + h) - curve.eval_d1(s - h)) / (2.0 * h);
    CHECK((d2 - fd2).norm() <= 1e-3 * std::max(1.0, d2.norm()));
  }
}

TEST_CASE("domain clamping holds values and zeroes curvature") {
  const SpatialPath path = line_path(1.0, 0.02);
  const ParametricCurve curve = fit_curve(path, 10);
  CHECK((curve.eval(curve.s_f + 1.0) - curve.eval(curve.s_f)).norm() == 0.0);
  CHECK((curve.eval(-0.5) - curve.eval(0.0)).norm() == 0.0);
  CHECK((curve.eval_d1(curve.s_f + 1.0) - curve.eval_d1(curve.s_f)).norm() == 0.0);
  CHECK(curve.eval_d2(curve.s_f + 1.0).norm() == 0.0);
}

TEST_CASE("fit errors") {
  const SpatialPath path = line_path(1.0, 0.02);
  CHECK_THROWS_AS(fit_curve(path, 1), InvalidParameter);
  CHECK_THROWS_AS(fit_curve(path, path.sample_count() + 1), InvalidParameter);
  CHECK_THROWS_AS(fit_curve(path, 10, 1.0, -1.0), InvalidParameter);

  // clustered abscissae with wide flat basis functions force a
  // rank-deficient design; with ridge 0 this must be reported
  Eigen::VectorXd s(4);
  s << 0.0, 1e-12, 2e-12, 1.0;
  Eigen::MatrixXd v(4, 1);
  v << 0.0, 0.0, 0.0, 1.0;
  CHECK_THROWS_AS(fit_curve(s, v, 4, 50.0, 0.0), SingularFit);
}

TEST_CASE("linearity: scaling the data scales the fit") {
  const SpatialPath path = circle_path(1.0, 0.01, M_PI);
  const ParametricCurve c1 = fit_curve(path.arclengths, path.points, 30, 1.0, 0.0);
  const ParametricCurve c2 =
      fit_curve(path.arclengths, 2.5 * path.points, 30, 1.0, 0.0);
  CHECK((c2.weights - 2.5 * c1.weights).norm() <= 1e-9 * c1.weights.norm());
  for (double s : {0.1, 0.7, 1.9}) {
    CHECK((c2.eval(s) - 2.5 * c1.eval(s)).norm() <= 1e-9);
  }
}

TEST_CASE("interpolation fidelity on smooth synthetic paths") {
  for (unsigned seed : {1u, 2u, 3u}) {
    const auto f = random_smooth_curve(seed);
    const auto traj = sample_curve(f, 6.0, 0.002);
    const SpatialPath path = spatial_sample(traj, 0.005);
    const int n_basis = std::max(8, path.sample_count() / 5);
    const ParametricCurve curve = fit_curve(path, n_basis, 1.0, 1e-8);
    double rms = 0.0;
    for (int k = 0; k < path.sample_count(); ++k)
      rms += (curve.eval(path.arclengths(k)) - path.points.row(k).transpose())
                 .squaredNorm();
    rms = std::sqrt(rms / path.sample_count());
    CHECK(rms <= 1e-2 * path.delta);

    // near-unit tangent at interior sample abscissae
    for (int k = 0; k < path.sample_count(); ++k) {
      const double s = path.arclengths(k);
      if (s < 0.05 * curve.s_f || s > 0.95 * curve.s_f) continue;
      const double tn = curve.eval_d1(s).norm();
      CHECK(tn >= 0.95);
      CHECK(tn <= 1.05);
    }
  }
}

TEST_CASE("json round trip is bit-faithful") {
  const SpatialPath path = circle_path(1.0, 0.01, M_PI);
  const ParametricCurve curve = fit_curve(path, 25, 1.0, 1e-8);
  const std::string tmp = "/tmp/gdmp_curve_roundtrip.json";
  save_curve(tmp, curve);
  const ParametricCurve back = load_curve(tmp);
  REQUIRE(back.weights.rows() == curve.weights.rows());
  REQUIRE(back.weights.cols() == curve.weights.cols());
  CHECK((back.weights - curve.weights).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.basis.centers - curve.basis.centers).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.basis.width == curve.basis.width);
  CHECK(back.s_f == curve.s_f);
  CHECK(back.delta == curve.delta);
  CHECK((back.goal - curve.goal).cwiseAbs().maxCoeff() == 0.0);
  std::remove(tmp.c_str());
}
