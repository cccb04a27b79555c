// Copyright 2026 The magsys-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "magsys/dynamics.hpp"
#include "magsys/error.hpp"

namespace magsys {

/// Transversal slice through `base`: the g0-geodesic orthogonal to the unit
/// direction `normal`. Points on it are labelled by the signed g0-distance `a`
/// along `along` = J normal; velocities by the angle `beta` they make with the
/// parallel-transported normal.
struct SectionSpec {
  Vec3 base;
  Vec3 normal;
  Vec3 along;
  double zoll_period = 0.0;
};

/// Section through the seed's footpoint, normal to the seed's velocity.
SectionSpec make_section(const MagneticSystem& sys, const TangentState& seed);

/// Signed offset of p from the section, <p - base, normal>.
double section_value(const MagneticSystem& sys, const SectionSpec& sec, const Vec3& p);

/// Reduced coordinates (a, beta) of a state on the section, and back.
std::array<double, 2> section_coords(const MagneticSystem& sys, const SectionSpec& sec,
                                     const TangentState& st);
TangentState section_state(const MagneticSystem& sys, const SectionSpec& sec, double a,
                           double beta);

struct ReturnResult {
  TangentState state;
  double time = 0.0;
};

/// First upward return to the section after half a Zoll period.
/// Throws InvalidArgument if the state is off the section, TangencyError if
/// the flow is nearly tangent to it there, NoReturn past two Zoll periods.
ReturnResult return_map(const MagneticSystem& sys, const SectionSpec& sec,
                        const TangentState& state, double tol = 1e-12);

/// Closed magnetic geodesic.
struct Orbit {
  double period = 0.0;
  std::vector<TangentState> samples;  ///< uniform in time; last repeats the first
  std::vector<double> times;
  double residual = 0.0;  ///< max of the reduced fixed-point defect and the sample closure gap
  std::size_t seed_id = 0;
  int newton_steps = 0;
  double magnetic_length = 0.0;  ///< filled by enumerate_orbits
};

struct FindOptions {
  double tol = 1e-9;
  int max_iter = 25;
  double integrator_tol = 1e-12;
  std::size_t samples = 256;
  double fd_step = 1e-6;
  /// Largest admissible reduced defect at the seed.
  double family_gate = 0.3;
  /// Admissible return times, as fractions of the Zoll period.
  double period_window = 0.5;
};

/// Newton iteration on the reduced return map of the section through `seed`.
/// Throws DivergedFromFamily when the seed defect exceeds the gate or iterates
/// leave the short-loop window, NoConvergence after max_iter steps.
Orbit find_closed_orbit(const MagneticSystem& sys, const TangentState& seed,
                        const FindOptions& opt = {}, std::size_t seed_id = 0);

/// Reduced defect |R(0,0) - (0,0)| of the section through `seed`.
double seed_defect(const MagneticSystem& sys, const TangentState& seed, double tol = 1e-12);

struct SearchOptions {
  int grid_density = 6;
  FindOptions find;
  unsigned workers = 0;  ///< 0 selects the hardware concurrency
  double dedup_distance = 1e-4;
};

struct SeedFailure {
  std::size_t seed_id = 0;
  ErrorCode code = ErrorCode::NoConvergence;
  std::string message;
};

struct OrbitCensus {
  std::vector<Orbit> orbits;  ///< distinct, sorted by magnetic length
  std::vector<SeedFailure> failures;
  std::size_t seeds_tried = 0;
};

/// Seed states of the census: one Zoll circle per centre of a density x density
/// grid (sphere: colatitude x longitude; hyperbolic: polar disk of radius 1;
/// torus: fundamental domain).
std::vector<TangentState> seed_grid(const MagneticSystem& sys, int density);

OrbitCensus enumerate_orbits(const MagneticSystem& sys, const SearchOptions& opt = {});

/// Keeps the first orbit of every cluster closer than `distance` in input order,
/// then sorts by magnetic length (NaN last) and seed id. Idempotent.
std::vector<Orbit> deduplicate(const MagneticSystem& sys, std::vector<Orbit> candidates, double distance);

/// Symmetric point-to-segment Hausdorff distance of the position samples; on
/// the torus the second orbit is first shifted by the nearest lattice vector.
double hausdorff_distance(const MagneticSystem& sys, const Orbit& a, const Orbit& b);

}  // namespace magsys
