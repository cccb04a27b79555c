// Copyright 2026 The magsys-lab Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "magsys/error.hpp"
#include "magsys/volume.hpp"

using namespace magsys;

namespace {

constexpr double kPi = std::numbers::pi;

MagneticSystem torus_cos(double eps, bool normalize) {
  const MagneticSystem sys = make_model(0.0, 1.0);
  return conformal_perturb(sys, ScalarField::named("torus_cos_x", {1.0}, sys.surface), eps, normalize);
}

}  // namespace

TEST_CASE("closed form is pi times the area defect") {
  const MagneticSystem sys0 = make_model(0.0, 1.0);
  const MagneticSystem sys = torus_cos(0.1, false);
  // Area defect (2 pi)^2 (I0(0.2) - 1).
  const double defect = 4 * kPi * kPi * (std::cyl_bessel_i(0.0, 0.2) - 1.0);
  CHECK(vol_closed_form(sys0, sys) == doctest::Approx(kPi * defect).epsilon(1e-9));
  CHECK(vol_closed_form_general(1, defect) == doctest::Approx(2 * kPi * kPi * defect));
  CHECK(vol_closed_form(sys0, torus_cos(0.1, true)) == 0.0);
  CHECK(vol_closed_form(sys0, sys0) == 0.0);
  CHECK_THROWS_AS(vol_closed_form(make_model(1.0, 1.0), sys), Error);
}

TEST_CASE("oracle agrees with the closed form on the torus") {
  const MagneticSystem sys0 = make_model(0.0, 1.0);
  const MagneticSystem sys = torus_cos(0.1, false);
  const VolumeEstimate est = vol_quadrature_oracle(sys0, sys, 200000, 3, 1);
  const double exact = vol_closed_form(sys0, sys);
  CHECK(est.samples == 200000);
  CHECK(std::abs(est.value - exact) <= 4 * est.standard_error);
}

TEST_CASE("oracle agrees with the closed form on the sphere") {
  const MagneticSystem sys0 = make_model(1.0, 1.0);
  const MagneticSystem sys =
      conformal_perturb(sys0, ScalarField::named("sphere_harmonic_z", {1.0}, sys0.surface), 0.1, false);
  const VolumeEstimate est = vol_quadrature_oracle(sys0, sys, 200000, 5, 1);
  // Area defect 2 pi sinh(0.2)/0.1 - 4 pi.
  const double exact = kPi * (2 * kPi * std::sinh(0.2) / 0.1 - 4 * kPi);
  CHECK(std::abs(est.value - exact) <= 4 * est.standard_error);
}

TEST_CASE("exact sigma perturbations carry no volume") {
  const MagneticSystem sys0 = make_model(1.0, 1.0);
  const MagneticSystem sys = sigma_perturb(sys0, OneFormField::named("sphere_curl_z", {1.0}, sys0.surface), 0.1);
  const VolumeEstimate est = vol_quadrature_oracle(sys0, sys, 100000, 1, 1);
  CHECK(std::abs(est.value) < 1e-12);
}

TEST_CASE("oracle is deterministic and independent of the worker count") {
  const MagneticSystem sys0 = make_model(0.0, 1.0);
  const MagneticSystem sys = torus_cos(0.1, false);
  const VolumeEstimate a = vol_quadrature_oracle(sys0, sys, 50000, 42, 1);
  const VolumeEstimate b = vol_quadrature_oracle(sys0, sys, 50000, 42, 4);
  const VolumeEstimate c = vol_quadrature_oracle(sys0, sys, 50000, 42, 1);
  CHECK(a.value == b.value);
  CHECK(a.standard_error == b.standard_error);
  CHECK(a.value == c.value);
  const VolumeEstimate d = vol_quadrature_oracle(sys0, sys, 50000, 43, 1);
  CHECK(a.value != d.value);
}

TEST_CASE("closed form scales linearly with the area defect") {
  // A constant exponent c gives defect (e^{2 eps c} - 1) area0, so the ratio of
  // two functionals equals the ratio of the defects.
  const MagneticSystem sys0 = make_model(1.0, 1.0);
  const MagneticSystem s1 = conformal_perturb(sys0, ScalarField::constant(1.0), 0.01, false);
  const MagneticSystem s2 = conformal_perturb(sys0, ScalarField::constant(1.0), 0.02, false);
  const double ratio = (std::exp(0.04) - 1) / (std::exp(0.02) - 1);
  CHECK(vol_closed_form(sys0, s2) / vol_closed_form(sys0, s1) == doctest::Approx(ratio).epsilon(1e-9));
}

TEST_CASE("volume report carries both values") {
  const MagneticSystem sys0 = make_model(0.0, 1.0);
  const VolumeReport r = volume_report(sys0, torus_cos(0.1, true), 20000, 1, 1);
  CHECK(r.closed_form == 0.0);
  CHECK(std::abs(r.quadrature) <= 4 * r.standard_error);
  CHECK(r.vol_g == doctest::Approx(r.vol_g0).epsilon(1e-9));
  CHECK(!r.constant_convention.empty());
}

TEST_CASE("hyperbolic oracle is refused") {
  const MagneticSystem sys0 = make_model(-1.0, 2.0);
  CHECK_THROWS_AS(vol_quadrature_oracle(sys0, sys0, 1000, 1, 1), Error);
}
