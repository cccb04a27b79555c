// Copyright 2026 The magsys-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "magsys/volume.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "magsys/error.hpp"
#include "magsys/parallel.hpp"
#include "magsys/zollref.hpp"

namespace magsys {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_pair(const MagneticSystem& sys0, const MagneticSystem& sys) {
  if (!(sys0.surface == sys.surface) || sys0.strength != sys.strength)
    throw Error(ErrorCode::InvalidArgument, "systems must share the model surface and strength");
  if (!sys0.unperturbed())
    throw Error(ErrorCode::InvalidArgument, "reference system must be unperturbed");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Components of a 2-form on (q1, q2, phi) ordered as (01, 02, 12).
struct TwoForm {
  double c01 = 0.0, c02 = 0.0, c12 = 0.0;
};

double wedge(const std::array<double, 3>& a, const TwoForm& b) {
  return a[0] * b.c12 - a[1] * b.c02 + a[2] * b.c01;
}

// -(alpha ^ (Omega0 + d alpha / 2)) in chart coordinates; the sign makes
// lambda ^ d lambda (= -A B dq1 dq2 dphi) positively oriented.
double integrand(const MagneticSystem& sys, double q1, double q2, double phi) {
  const ModelSurface& surf = sys.surface;
  const ChartPoint cp = surf.chart_point(q1, q2);
  const double a = cp.a, b = cp.b, c = std::cos(phi), s = std::sin(phi);
  const double strength = sys.strength;

  const double f = std::exp(sys.log_conformal(cp.position));
  double psi1 = 0.0, psi2 = 0.0;
  if (sys.conformal_eps != 0.0) {
    const Vec3 du = sys.conformal_exponent.partials(surf, cp.position);
    psi1 = sys.conformal_eps * dot(du, cp.d_q1);
    psi2 = sys.conformal_eps * dot(du, cp.d_q2);
  }
  double eta1 = 0.0, eta2 = 0.0, deta01 = 0.0;
  if (sys.sigma_perturbed()) {
    const Vec3 cov = sys.sigma_perturbation.covector(surf, cp.position);
    eta1 = sys.sigma_eps * dot(cov, cp.d_q1);
    eta2 = sys.sigma_eps * dot(cov, cp.d_q2);
    deta01 = sys.sigma_curl(cp.position) * a * b;
  }

  const std::array<double, 3> lambda{a * c, b * s, 0.0};
  const TwoForm dlambda{cp.db_dq1 * s, a * s, -b * c};
  const std::array<double, 3> alpha{(f - 1.0) * lambda[0] - strength * eta1,
                                    (f - 1.0) * lambda[1] - strength * eta2, 0.0};
  const TwoForm dalpha{f * (psi1 * lambda[1] - psi2 * lambda[0]) + (f - 1.0) * dlambda.c01 -
                           strength * deta01,
                       (f - 1.0) * dlambda.c02, (f - 1.0) * dlambda.c12};
  const TwoForm omega0{dlambda.c01 - strength * a * b, dlambda.c02, dlambda.c12};
  return -(wedge(alpha, omega0) + 0.5 * wedge(alpha, dalpha));
}

}  // namespace

double vol_closed_form(const MagneticSystem& sys0, const MagneticSystem& sys, double rel_tol) {
  require_pair(sys0, sys);
  // Normalization fixes vol_g = vol_g0 by construction of the scale factor.
  if (sys.volume_normalized || !sys.metric_perturbed()) return 0.0;
  return kSurfaceVolumeConstant * area_defect(sys, rel_tol);
}

double vol_closed_form_general(int n, double defect) {
  return volume_constant_general(n) * defect;
}

VolumeEstimate vol_quadrature_oracle(const MagneticSystem& sys0, const MagneticSystem& sys,
                                     std::size_t samples, std::uint64_t rng_seed,
                                     unsigned workers) {
  require_pair(sys0, sys);
  if (sys.surface.chart() == Chart::HyperbolicPolar)
    throw Error(ErrorCode::InvalidArgument, "the volume oracle needs a compact chart");
  const std::size_t pairs = samples / 2;
  if (pairs < 4) throw Error(ErrorCode::InvalidArgument, "the volume oracle needs >= 8 samples");

  // K x K cells with at least two antithetic pairs each.
  std::size_t k = static_cast<std::size_t>(std::sqrt(static_cast<double>(pairs) / 16.0));
  k = std::clamp<std::size_t>(k, 1, 256);
  const std::size_t cells = k * k;
  const auto box = sys.surface.chart_box();
  const double h1 = (box[1] - box[0]) / static_cast<double>(k);
  const double h2 = (box[3] - box[2]) / static_cast<double>(k);
  const double cell_volume = h1 * h2 * kTwoPi;

  std::vector<double> mean(cells), var_of_mean(cells);
  parallel_for(cells, workers, [&](std::size_t cell) {
    const std::size_t m = pairs / cells + (cell < pairs % cells ? 1 : 0);
    const std::size_t i = cell / k, j = cell % k;
    std::mt19937_64 rng(splitmix64(rng_seed ^ splitmix64(cell)));
    double mu = 0.0, m2 = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      const double q1 = box[0] + (static_cast<double>(i) + uniform01(rng)) * h1;
      const double q2 = box[2] + (static_cast<double>(j) + uniform01(rng)) * h2;
      const double phi = kTwoPi * uniform01(rng);
      const double x = 0.5 * (integrand(sys, q1, q2, phi) +
                              integrand(sys, q1, q2, phi + std::numbers::pi));
      const double delta = x - mu;
      mu += delta / static_cast<double>(r + 1);
      m2 += delta * (x - mu);
    }
    mean[cell] = mu;
    var_of_mean[cell] = m > 1 ? m2 / static_cast<double>((m - 1) * m) : 0.0;
  });

  VolumeEstimate est;
  double variance = 0.0;
  for (std::size_t cell = 0; cell < cells; ++cell) {
    est.value += mean[cell] * cell_volume;
    variance += var_of_mean[cell] * cell_volume * cell_volume;
  }
  est.standard_error = std::sqrt(variance);
  est.samples = 2 * pairs;
  return est;
}

VolumeReport volume_report(const MagneticSystem& sys0, const MagneticSystem& sys,
                           std::size_t samples, std::uint64_t rng_seed, unsigned workers,
                           double rel_tol) {
  VolumeReport rep;
  rep.closed_form = vol_closed_form(sys0, sys, rel_tol);
  const VolumeEstimate est = vol_quadrature_oracle(sys0, sys, samples, rng_seed, workers);
  rep.quadrature = est.value;
  rep.standard_error = est.standard_error;
  rep.samples = est.samples;
  rep.vol_g0 = sys.surface.total_area();
  rep.vol_g = sys.metric_perturbed() ? riemannian_volume(sys, rel_tol) : rep.vol_g0;
  rep.constant_convention =
      "surface constant pi: Vol = pi (vol_g - vol_g0); general-n constant 2 pi^(2n)/(n-1)!";
  return rep;
}

}  // namespace magsys
