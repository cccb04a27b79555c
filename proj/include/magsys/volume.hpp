// Copyright 2026 The magsys-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>

#include "magsys/geometry.hpp"

namespace magsys {

struct VolumeEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
};

struct VolumeReport {
  double closed_form = 0.0;
  double quadrature = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
  double vol_g = 0.0;
  double vol_g0 = 0.0;
  std::string constant_convention;
};

/// Surface constant of the volume identity: Vol = pi (vol_g - vol_g0).
inline constexpr double kSurfaceVolumeConstant = std::numbers::pi;

/// pi (vol_g - vol_g0); exactly 0 for volume-normalized or metric-unperturbed
/// systems. Throws InvalidArgument unless sys0 is the unperturbed model of sys.
double vol_closed_form(const MagneticSystem& sys0, const MagneticSystem& sys,
                       double rel_tol = 1e-8);

/// 2 pi^(2n)/(n-1)! times the area defect.
double vol_closed_form_general(int n, double area_defect);

/// Monte Carlo estimate of the integral over the g0 unit tangent bundle of
/// alpha ^ (Omega0 + d alpha / 2), alpha = (f - 1) lambda - s eps eta,
/// f = exp(psi). Stratified over chart cells with antithetic fibre angles;
/// cells are seeded from rng_seed and summed in a fixed order, so the result
/// does not depend on `workers`. Sphere and torus models only.
VolumeEstimate vol_quadrature_oracle(const MagneticSystem& sys0, const MagneticSystem& sys,
                                     std::size_t samples, std::uint64_t rng_seed,
                                     unsigned workers = 1);

VolumeReport volume_report(const MagneticSystem& sys0, const MagneticSystem& sys,
                           std::size_t samples, std::uint64_t rng_seed, unsigned workers = 1,
                           double rel_tol = 1e-8);

}  // namespace magsys
