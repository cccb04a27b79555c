// Copyright 2026 The magsys-lab Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "magsys/dynamics.hpp"
#include "magsys/error.hpp"

using namespace magsys;

namespace {

constexpr double kPi = std::numbers::pi;

MagneticSystem perturbed(double kappa, double s) {
  const MagneticSystem sys = make_model(kappa, s);
  if (kappa > 0) {
    return conformal_perturb(sys, ScalarField::sphere_linear(Vec3{0.3, -0.2, 0.5}), 0.1, true);
  }
  if (kappa < 0) {
    return conformal_perturb(sys, ScalarField::named("hyperbolic_bump", {1.0}, sys.surface), 0.1, false);
  }
  return conformal_perturb(sys, ScalarField::named("torus_cos_x", {1.0}, sys.surface), 0.1, false);
}

TangentState random_state(const MagneticSystem& sys, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.1, 3.0);
  std::uniform_real_distribution<double> a(0.0, 2 * kPi);
  const ChartPoint cp = sys.surface.chart_point(u(rng), a(rng));
  const double t = a(rng);
  const Vec3 dir = std::cos(t) * cp.d_q1 / norm(cp.d_q1) + std::sin(t) * cp.d_q2 / norm(cp.d_q2);
  return unit_state(sys, cp.position, dir);
}

double state_distance(const TangentState& a, const TangentState& b) {
  return std::max(norm(a.position - b.position), norm(a.velocity - b.velocity));
}

}  // namespace

TEST_CASE("Zoll period examples") {
  CHECK(zoll_period(1.0, 1.0) == doctest::Approx(2 * kPi / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(zoll_period(0.0, 1.0) == doctest::Approx(2 * kPi));
  CHECK(zoll_period(-1.0, 2.0) == doctest::Approx(2 * kPi / std::sqrt(3.0)));
  CHECK_THROWS_AS(zoll_period(-1.0, 1.0), Error);
}

TEST_CASE("flow examples: great circle and planar circle") {
  // s = 0 on the unit sphere: the equator heading east closes after 2 pi.
  const MagneticSystem geo = make_model(1.0, 0.0);
  const TangentState east = unit_state(geo, Vec3{1, 0, 0}, Vec3{0, 1, 0});
  const Trajectory g = flow(geo, east, 2 * kPi, 1e-12);
  CHECK(state_distance(g.states.back(), east) < 1e-8);
  CHECK(std::abs(g.states[g.states.size() / 2].position.z) < 1e-10);
  // s = 2 in the plane: circle of radius 1/2 centred at p + J v / 2.
  const MagneticSystem plane = make_model(0.0, 2.0);
  const TangentState st = unit_state(plane, Vec3{1, 1, 0}, Vec3{0.6, 0.8, 0});
  const Vec3 centre = st.position + 0.5 * Vec3{-0.8, 0.6, 0};
  const Trajectory c = flow(plane, st, kPi, 1e-12);
  for (const TangentState& x : c.states) CHECK(norm(x.position - centre) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(state_distance(c.states.back(), st) < 1e-8);
}

TEST_CASE("Zoll circle radius agrees with the circumference of a geodesic circle") {
  // A unit-speed orbit of the model has length equal to its period.
  const double r1 = zoll_circle_radius(1.0, 1.0);
  CHECK(r1 == doctest::Approx(kPi / 4));
  CHECK(2 * kPi * std::sin(r1) == doctest::Approx(zoll_period(1.0, 1.0)).epsilon(1e-14));
  const double rh = zoll_circle_radius(-1.0, 2.0);
  CHECK(2 * kPi * std::sinh(rh) == doctest::Approx(zoll_period(-1.0, 2.0)).epsilon(1e-14));
  CHECK(zoll_circle_radius(0.0, 2.0) == doctest::Approx(0.5));
}

TEST_CASE("Zoll orbits close after one period with constant curvature s") {
  for (const auto& [kappa, s] : {std::pair{1.0, 1.0}, std::pair{4.0, 0.5}, std::pair{0.0, 1.0},
                                 std::pair{-1.0, 2.0}, std::pair{1.0, -1.5}}) {
    const MagneticSystem sys = make_model(kappa, s);
    const TangentState start = latitude_seed(sys);
    CHECK(geodesic_curvature(sys, start) == doctest::Approx(s).epsilon(1e-10));
    const Trajectory tr = flow(sys, start, zoll_period(kappa, s), 1e-12);
    CHECK(state_distance(tr.states.back(), start) < 1e-9);
    // Half a period later the orbit is at the antipode of the circle.
    const Trajectory half = flow(sys, start, 0.5 * zoll_period(kappa, s), 1e-12);
    CHECK(state_distance(half.states.back(), start) > 0.1);
  }
}

TEST_CASE("speed drift stays within ten times the tolerance on random trajectories") {
  std::mt19937_64 rng(2026);
  const double tol = 1e-10;
  for (const MagneticSystem& sys : {perturbed(1.0, 1.0), perturbed(0.0, 1.0), perturbed(-1.0, 2.0)}) {
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const Trajectory tr = flow(sys, random_state(sys, rng), 3.0, tol);
      worst = std::max(worst, tr.speed_drift);
    }
    CHECK(worst <= 10 * tol);
  }
}

TEST_CASE("time reversal: flipping velocity and field retraces the orbit") {
  std::mt19937_64 rng(11);
  for (const MagneticSystem& sys : {perturbed(1.0, 1.0), perturbed(0.0, 1.0), perturbed(-1.0, 2.0)}) {
    MagneticSystem reversed = sys;
    reversed.strength = -sys.strength;
    for (int k = 0; k < 5; ++k) {
      const TangentState x = random_state(sys, rng);
      const TangentState y = flow(sys, x, 2.5, 1e-12).states.back();
      const TangentState back = flow(reversed, TangentState{y.position, -y.velocity}, 2.5, 1e-12).states.back();
      CHECK(state_distance(TangentState{back.position, -back.velocity}, x) < 1e-8);
    }
  }
}

TEST_CASE("states stay on the unit tangent bundle") {
  std::mt19937_64 rng(5);
  const MagneticSystem sys = perturbed(1.0, 1.0);
  const Trajectory tr = flow(sys, random_state(sys, rng), 10.0, 1e-10);
  for (const TangentState& st : tr.states) {
    CHECK_NOTHROW(check_unit_state(sys, st, 1e-10));
  }
}

TEST_CASE("flow_at records exactly at the requested times") {
  const MagneticSystem sys = make_model(1.0, 1.0);
  const TangentState start = latitude_seed(sys);
  const double T = zoll_period(1.0, 1.0);
  const Trajectory tr = flow_at(sys, start, {0.0, 0.25 * T, 0.5 * T, T}, 1e-12);
  REQUIRE(tr.states.size() == 4);
  CHECK(tr.times[2] == 0.5 * T);
  // The circle has colatitude pi/4 throughout.
  for (const TangentState& st : tr.states) CHECK(std::acos(st.position.z) == doctest::Approx(kPi / 4).epsilon(1e-10));
  CHECK(state_distance(tr.states[3], start) < 1e-9);
}

TEST_CASE("flow argument checks") {
  const MagneticSystem sys = make_model(1.0, 1.0);
  const TangentState start = latitude_seed(sys);
  CHECK_THROWS_AS(flow(sys, start, -1.0), Error);
  CHECK_THROWS_AS(flow(sys, start, 101 * zoll_period(1.0, 1.0)), Error);
  TangentState off = start;
  off.velocity = 3.0 * off.velocity;
  CHECK_THROWS_AS(flow(sys, off, 1.0), Error);
}

TEST_CASE("perturbed geodesic curvature equals s times the field density") {
  // For a conformal metric without sigma perturbation b = exp(-2 psi).
  const MagneticSystem sys = perturbed(1.0, 1.0);
  std::mt19937_64 rng(3);
  for (int k = 0; k < 10; ++k) {
    const TangentState st = random_state(sys, rng);
    CHECK(geodesic_curvature(sys, st) ==
          doctest::Approx(sys.strength * std::exp(-2 * sys.log_conformal(st.position))).epsilon(1e-9));
  }
}
