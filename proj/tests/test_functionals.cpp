// Copyright 2026 The magsys-lab Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "magsys/dynamics.hpp"
#include "magsys/error.hpp"
#include "magsys/functionals.hpp"
#include "magsys/zollref.hpp"

using namespace magsys;

namespace {

constexpr double kPi = std::numbers::pi;

Orbit zoll_orbit(const MagneticSystem& sys) { return find_closed_orbit(sys, latitude_seed(sys)); }

// s times the g0-area of the geodesic disk of radius r, computed from the
// elementary area formulas of each model.
double disk_flux(double kappa, double s) {
  const double r = zoll_circle_radius(kappa, s);
  if (kappa > 0) return s * 2 * kPi * (1 - std::cos(std::sqrt(kappa) * r)) / kappa;
  if (kappa < 0) return s * 2 * kPi * (std::cosh(std::sqrt(-kappa) * r) - 1) / -kappa;
  return s * kPi * r * r;
}

}  // namespace

TEST_CASE("Zoll flux equals s times the enclosed disk area") {
  for (const auto& [kappa, s] : {std::pair{1.0, 1.0}, std::pair{4.0, 0.5}, std::pair{0.0, 1.0},
                                 std::pair{0.0, 2.0}, std::pair{-1.0, 2.0}, std::pair{-0.5, 1.0}}) {
    const MagneticSystem sys = make_model(kappa, s);
    const Orbit o = zoll_orbit(sys);
    const double expected = disk_flux(kappa, s);
    CHECK(closed_form_flux(kappa, s) == doctest::Approx(expected).epsilon(1e-13));
    CHECK(flux_through_cap(sys, o, FluxMethod::CapQuadrature).value == doctest::Approx(expected).epsilon(1e-10));
    CHECK(flux_through_cap(sys, o, FluxMethod::GreenBoundary).value == doctest::Approx(expected).epsilon(1e-10));
    CHECK(flux_through_cap(sys, o, FluxMethod::ClosedForm).value == doctest::Approx(expected).epsilon(1e-13));
    // Unit speed: length equals the period.
    CHECK(length(sys, o) == doctest::Approx(zoll_period(kappa, s)).epsilon(1e-10));
    CHECK(magnetic_length(sys, o) == doctest::Approx(reference_length(kappa, s)).epsilon(1e-9));
  }
}

TEST_CASE("reference magnetic length examples") {
  CHECK(reference_length(1.0, 1.0) == doctest::Approx(2.6025805691).epsilon(1e-10));
  CHECK(reference_length(0.0, 1.0) == doctest::Approx(kPi));
  CHECK(closed_form_flux(1.0, 1.0) == doctest::Approx(1.840302369).epsilon(1e-9));
  CHECK(closed_form_flux(-1.0, 2.0) == doctest::Approx(1.944024299513).epsilon(1e-11));
  CHECK(reference_length(-1.0, 2.0) == doctest::Approx(1.6835744290).epsilon(1e-9));
}

TEST_CASE("flux is continuous in kappa at zero") {
  for (double s : {1.0, 2.0}) {
    CHECK(closed_form_flux(1e-7, s) == doctest::Approx(closed_form_flux(0.0, s)).epsilon(1e-6));
    CHECK(closed_form_flux(-1e-7, s) == doctest::Approx(closed_form_flux(0.0, s)).epsilon(1e-6));
  }
}

TEST_CASE("cap quadrature and Green boundary agree on perturbed systems") {
  const MagneticSystem sphere0 = make_model(1.0, 1.0);
  MagneticSystem sphere =
      conformal_perturb(sphere0, ScalarField::sphere_linear(Vec3{0.2, 0.1, 0.4}), 0.05, true);
  sphere = sigma_perturb(sphere, OneFormField::named("sphere_curl_z", {1.0}, sphere.surface), 0.03);
  const MagneticSystem torus0 = make_model(0.0, 1.0);
  MagneticSystem torus =
      conformal_perturb(torus0, ScalarField::named("torus_cos_x", {1.0}, torus0.surface), 0.05, false);
  torus = sigma_perturb(torus, OneFormField::named("torus_curl_cos_y", {1.0}, torus.surface), 0.02);
  for (const MagneticSystem& sys : {sphere, torus}) {
    const OrbitCensus census = enumerate_orbits(sys);
    REQUIRE(!census.orbits.empty());
    for (const Orbit& o : census.orbits) {
      const double cap = flux_through_cap(sys, o, FluxMethod::CapQuadrature).value;
      const double green = flux_through_cap(sys, o, FluxMethod::GreenBoundary).value;
      CHECK(cap == doctest::Approx(green).epsilon(1e-8));
    }
  }
}

TEST_CASE("closed form flux refuses perturbed systems") {
  const MagneticSystem sys0 = make_model(1.0, 1.0);
  const MagneticSystem sys =
      conformal_perturb(sys0, ScalarField::named("sphere_harmonic_z", {1.0}, sys0.surface), 0.05, true);
  const Orbit o = zoll_orbit(sys0);
  try {
    flux_through_cap(sys, o, FluxMethod::ClosedForm);
    FAIL("expected InvalidArgument");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("geodesic case has zero flux") {
  const MagneticSystem sys = make_model(1.0, 0.0);
  const Orbit o = find_closed_orbit(sys, unit_state(sys, Vec3{1, 0, 0}, Vec3{0, 1, 0}));
  CHECK(flux_through_cap(sys, o).value == 0.0);
  CHECK(magnetic_length(sys, o) == doctest::Approx(2 * kPi).epsilon(1e-10));
}

TEST_CASE("magnetic length is invariant under rotations") {
  const MagneticSystem sys0 = make_model(1.0, 1.0);
  const MagneticSystem sys =
      conformal_perturb(sys0, ScalarField::sphere_linear(Vec3{0.1, 0.3, 0.6}), 0.04, true);
  const Mat3 R = rotation(Vec3{1, 2, 3}, 0.9);
  const MagneticSystem rotated = rotate_system(sys, R);
  const std::vector<TangentState> seeds = seed_grid(sys0, 4);
  int compared = 0;
  for (std::size_t i = 0; i < seeds.size(); i += 3) {
    Orbit a, b;
    try {
      a = find_closed_orbit(sys, seeds[i]);
      b = find_closed_orbit(rotated, rotate_state(seeds[i], R));
    } catch (const Error&) {
      continue;
    }
    CHECK(magnetic_length(rotated, b) == doctest::Approx(magnetic_length(sys, a)).epsilon(1e-9));
    ++compared;
  }
  CHECK(compared >= 3);
}

TEST_CASE("magnetic action is measured from the reference") {
  const MagneticSystem sys = make_model(1.0, 1.0);
  const ActionValue v = magnetic_action(sys, zoll_orbit(sys));
  CHECK(v.reference_constant == doctest::Approx(reference_length(1.0, 1.0)));
  CHECK(std::abs(v.value) < 1e-9);
  CHECK(v.length_g - v.flux - v.reference_constant == doctest::Approx(v.value).scale(1.0).epsilon(1e-14));
}
