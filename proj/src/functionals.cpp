// Copyright 2026 The magsys-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "magsys/functionals.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <sstream>

#include "magsys/zollref.hpp"

namespace magsys {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t periodic_count(const Orbit& orbit) {
  if (orbit.samples.size() < 3 || !(orbit.period > 0.0))
    throw Error(ErrorCode::InvalidArgument, "orbit needs at least two intervals of samples");
  return orbit.samples.size() - 1;
}

Vec3 orbit_center(const MagneticSystem& sys, const Orbit& orbit, std::size_t n) {
  Vec3 c;
  for (std::size_t i = 0; i < n; ++i) c += orbit.samples[i].position;
  c = c / static_cast<double>(n);
  return sys.surface.chart() == Chart::FlatTorus ? c : sys.surface.project_point(c);
}

// Full-grid and half-grid periodic trapezoid sums of f over the samples.
template <class F>
std::array<double, 2> trapezoid(const Orbit& orbit, std::size_t n, F&& f) {
  const double dt = orbit.period / static_cast<double>(n);
  double full = 0.0, half = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = f(i);
    full += v;
    if (i % 2 == 0) half += v;
  }
  return {full * dt, n % 2 == 0 ? half * 2.0 * dt : full * dt};
}

}  // namespace

const char* to_string(FluxMethod method) {
  switch (method) {
    case FluxMethod::ClosedForm: return "closed_form";
    case FluxMethod::CapQuadrature: return "cap_quadrature";
    case FluxMethod::GreenBoundary: return "green_boundary";
  }
  return "unknown";
}

double closed_form_flux(double kappa, double s) {
  const double d = s * s + kappa;
  if (!(d > 0.0)) throw Error(ErrorCode::ZollRegimeViolation, "Zoll regime violated: s^2 + kappa <= 0");
  const double root = std::sqrt(d);
  // s - s^2/root = s kappa / (root (root + s)); the right side is regular at kappa = 0.
  if (s >= 0.0) return kTwoPi * s / (root * (root + s));
  if (kappa == 0.0) throw Error(ErrorCode::ZollRegimeViolation, "Zoll regime violated: flat model needs s > 0");
  return (kTwoPi / kappa) * (s - s * s / root);
}

double length(const MagneticSystem& sys, const Orbit& orbit) {
  const std::size_t n = periodic_count(orbit);
  return trapezoid(orbit, n, [&](std::size_t i) { return speed(sys, orbit.samples[i]); })[0];
}

FluxResult flux_through_cap(const MagneticSystem& sys, const Orbit& orbit, FluxMethod method) {
  const ModelSurface& surf = sys.surface;
  FluxResult res;
  res.method = method;
  if (method == FluxMethod::ClosedForm) {
    if (!sys.unperturbed())
      throw Error(ErrorCode::InvalidArgument, "closed-form flux needs the unperturbed system");
    res.value = closed_form_flux(surf.kappa(), sys.strength);
    return res;
  }
  const std::size_t n = periodic_count(orbit);
  // Zero strength: no cap is needed (great circles have no preferred side).
  if (sys.strength == 0.0) return res;
  const PolarFrame frame = surf.polar_frame(orbit_center(sys, orbit, n));
  std::vector<PolarCoords> pc(n);
  for (std::size_t i = 0; i < n; ++i) {
    pc[i] = surf.polar(frame, orbit.samples[i].position, orbit.samples[i].velocity);
  }
  const auto turn = trapezoid(orbit, n, [&](std::size_t i) { return pc[i].phi_rate; });
  const double turns = turn[0] / kTwoPi;
  res.winding = static_cast<int>(std::lround(turns));
  if (std::abs(turns - res.winding) > 1e-3 || std::abs(res.winding) != 1) {
    std::ostringstream os;
    os << "orbit turns " << turns << " times about its centroid";
    throw Error(ErrorCode::CapNotFound, os.str());
  }
  if (res.winding < 0 && !surf.compact()) {
    throw Error(ErrorCode::CapNotFound, "the region left of the orbit is unbounded");
  }
  if (res.winding < 0 && surf.chart() == Chart::FlatTorus) {
    throw Error(ErrorCode::CapNotFound, "the region left of the orbit is not a disk");
  }

  const bool perturbed = sys.sigma_perturbed();
  std::array<double, 2> integral{};
  if (method == FluxMethod::CapQuadrature) {
    using boost::math::quadrature::gauss;
    integral = trapezoid(orbit, n, [&](std::size_t i) {
      const double phi = pc[i].phi;
      const double radial = gauss<double, 20>::integrate(
          [&](double r) {
            const double density = surf.polar_density(r);
            if (!perturbed) return density;
            return (1.0 + sys.sigma_curl(surf.polar_point(frame, r, phi))) * density;
          },
          0.0, pc[i].rho);
      return radial * pc[i].phi_rate;
    });
  } else {
    integral = trapezoid(orbit, n, [&](std::size_t i) {
      const TangentState& st = orbit.samples[i];
      double v = surf.polar_area(pc[i].rho) * pc[i].phi_rate;
      if (perturbed) {
        v += sys.sigma_eps * dot(sys.sigma_perturbation.covector(surf, st.position), st.velocity);
      }
      return v;
    });
  }
  // Exact perturbations do not change the total, so the complement carries
  // the unperturbed area minus the disk about the centroid.
  const double offset = res.winding < 0 ? surf.total_area() : 0.0;
  res.value = sys.strength * (offset + integral[0]);
  res.error_estimate = std::abs(sys.strength) * std::abs(integral[0] - integral[1]);
  return res;
}

double magnetic_length(const MagneticSystem& sys, const Orbit& orbit) {
  return length(sys, orbit) - flux_through_cap(sys, orbit).value;
}

ActionValue magnetic_action(const MagneticSystem& sys, const Orbit& orbit) {
  ActionValue a;
  a.length_g = length(sys, orbit);
  a.flux = flux_through_cap(sys, orbit).value;
  a.reference_constant = reference_length(sys.surface.kappa(), sys.strength);
  a.value = (a.length_g - a.flux) - a.reference_constant;
  return a;
}

}  // namespace magsys
