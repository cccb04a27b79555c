// Copyright 2026 The magsys-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "magsys/orbits.hpp"

namespace magsys {

enum class DiskConvention { InwardNormal };
enum class FluxMethod { ClosedForm, CapQuadrature, GreenBoundary };

const char* to_string(FluxMethod method);

/// s times the integral of sigma over the capping disk: the region on the
/// left of the orbit (the side the inward normal J gamma' points into).
struct FluxResult {
  double value = 0.0;
  DiskConvention disk_convention = DiskConvention::InwardNormal;
  FluxMethod method = FluxMethod::CapQuadrature;
  double error_estimate = 0.0;  ///< |I_N - I_(N/2)| on the sample grid
  int winding = 1;              ///< about the orbit centroid
};

struct ActionValue {
  double value = 0.0;
  double length_g = 0.0;
  double flux = 0.0;
  double reference_constant = 0.0;
};

/// (2 pi/kappa)(s - s^2/sqrt(s^2 + kappa)), and pi/s at kappa = 0.
double closed_form_flux(double kappa, double s);

/// g-length by the periodic trapezoid rule over the samples.
double length(const MagneticSystem& sys, const Orbit& orbit);

/// ClosedForm is only defined for unperturbed systems. Throws CapNotFound when
/// the orbit does not wind once about its centroid or, off the sphere, winds
/// negatively.
FluxResult flux_through_cap(const MagneticSystem& sys, const Orbit& orbit,
                            FluxMethod method = FluxMethod::CapQuadrature);

/// length - CapQuadrature flux.
double magnetic_length(const MagneticSystem& sys, const Orbit& orbit);

/// magnetic_length - pi a^2(1) of the unperturbed reference.
ActionValue magnetic_action(const MagneticSystem& sys, const Orbit& orbit);

}  // namespace magsys
