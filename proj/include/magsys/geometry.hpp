// Copyright 2026 The magsys-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <numbers>
#include <string>
#include <vector>

#include "magsys/vec3.hpp"

namespace magsys {

/// Representation used for each constant-curvature model.
///
/// All three models carry their dynamics in an ambient 3-space: the sphere of
/// radius 1/sqrt(kappa) in Euclidean R^3, the upper sheet of the hyperboloid
/// <p,p> = -1/|kappa| in Minkowski R^{2,1} (time component last), and the
/// plane z = 0 covering the flat torus. The chart coordinates reported to users
/// are (colatitude, longitude), geodesic polar (rho, phi) about the hyperboloid
/// vertex, and (x, y) respectively.
enum class Chart { SphereAmbient, HyperbolicPolar, FlatTorus };

const char* to_string(Chart chart);

/// Chart point with the embedding derivatives and the diagonal metric factors
/// g0 = A^2 dq1^2 + B^2 dq2^2.
struct ChartPoint {
  Vec3 position;
  Vec3 d_q1;
  Vec3 d_q2;
  double a = 1.0;
  double b = 1.0;
  double db_dq1 = 0.0;
};

/// Geodesic polar frame centred at `center`; e1, e2 are g0-orthonormal with
/// e2 = J e1.
struct PolarFrame {
  Vec3 center;
  Vec3 e1;
  Vec3 e2;
};

/// Polar coordinates of a point, plus the angular rate of a tangent vector.
struct PolarCoords {
  double rho = 0.0;
  double phi = 0.0;
  double radial = 0.0;  ///< distance from the axis in the frame plane
  double phi_rate = 0.0;
};

class ModelSurface {
 public:
  static ModelSurface sphere(double kappa);
  static ModelSurface hyperbolic(double kappa);
  static ModelSurface flat_torus(double period_x = 2.0 * std::numbers::pi,
                                 double period_y = 2.0 * std::numbers::pi);
  /// Picks the chart from the sign of kappa.
  static ModelSurface for_curvature(double kappa, double period_x = 2.0 * std::numbers::pi,
                                    double period_y = 2.0 * std::numbers::pi);

  double kappa() const { return kappa_; }
  Chart chart() const { return chart_; }
  std::array<double, 2> torus_periods() const { return {period_x_, period_y_}; }
  /// 1/sqrt(|kappa|); infinity on the torus.
  double radius() const { return radius_; }
  bool compact() const { return chart_ != Chart::HyperbolicPolar; }

  double inner(const Vec3& a, const Vec3& b) const;
  Vec3 project_point(const Vec3& p) const;
  Vec3 project_tangent(const Vec3& p, const Vec3& w) const;
  /// Normal acceleration of a g0-geodesic through p with velocity v.
  Vec3 geodesic_acceleration(const Vec3& p, const Vec3& v) const;
  /// Positive quarter turn J in the tangent plane at p.
  Vec3 rotate90(const Vec3& p, const Vec3& v) const;
  /// g0-gradient of a function whose Euclidean ambient partials are `partials`.
  Vec3 gradient(const Vec3& p, const Vec3& partials) const;

  /// Point at g0-distance `dist` along the geodesic from p in unit direction u.
  Vec3 exp_point(const Vec3& p, const Vec3& u, double dist) const;
  /// Unit tangent of that geodesic at the endpoint.
  Vec3 exp_tangent(const Vec3& p, const Vec3& u, double dist) const;

  /// Intrinsic chart coordinates of an ambient point.
  std::array<double, 2> to_chart(const Vec3& p) const;
  ChartPoint chart_point(double q1, double q2) const;
  /// Coordinate box covering the surface once (hyperbolic: unbounded in rho).
  std::array<double, 4> chart_box() const;

  /// Canonical frame at `center`: e1 is the tangential part of e_x (e_y when
  /// e_x is nearly normal), e2 = J e1.
  PolarFrame polar_frame(const Vec3& center) const;
  PolarCoords polar(const PolarFrame& frame, const Vec3& p, const Vec3& v) const;
  Vec3 polar_point(const PolarFrame& frame, double rho, double phi) const;
  /// Circumference density G(rho) in dA0 = G drho dphi.
  double polar_density(double rho) const;
  /// Integral of G over [0, rho].
  double polar_area(double rho) const;
  /// Total g0-area; infinity for the hyperbolic model.
  double total_area() const;

  /// Canonical centre used for seeds: north pole, hyperboloid vertex, or the
  /// middle of the fundamental domain.
  Vec3 base_point() const;

  friend bool operator==(const ModelSurface&, const ModelSurface&) = default;

 private:
  ModelSurface(double kappa, Chart chart, double px, double py);

  double kappa_ = 0.0;
  Chart chart_ = Chart::FlatTorus;
  double period_x_ = 2.0 * std::numbers::pi;
  double period_y_ = 2.0 * std::numbers::pi;
  double radius_ = 0.0;
};

/// Built-in scalar fields usable as conformal exponents.
///
///   constant           [c]            u = c
///   sphere_harmonic_z  [c]            u = c z / R
///   sphere_linear      [ax, ay, az]   u = <a, p> / R
///   torus_cos_x        [c]            u = c cos(2 pi x / Lx)
///   torus_cos_y        [c]            u = c cos(2 pi y / Ly)
///   hyperbolic_bump    [c]            u = c exp(1 - cosh(rho / R))
class ScalarField {
 public:
  enum class Kind { Zero, Constant, SphereLinear, TorusCosX, TorusCosY, HyperbolicBump };

  ScalarField() = default;
  static ScalarField named(const std::string& name, const std::vector<double>& coefficients,
                           const ModelSurface& surface);
  static ScalarField constant(double c);
  static ScalarField sphere_linear(const Vec3& a);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  bool is_zero() const { return kind_ == Kind::Zero; }

  double value(const ModelSurface& s, const Vec3& p) const;
  /// Euclidean partial derivatives in the ambient space.
  Vec3 partials(const ModelSurface& s, const Vec3& p) const;

  ScalarField rotated(const Mat3& r) const;

  friend bool operator==(const ScalarField&, const ScalarField&) = default;

 private:
  Kind kind_ = Kind::Zero;
  std::string name_ = "none";
  Vec3 vec_;
  double c_ = 0.0;
};

/// Built-in exact 1-form perturbations eta of the magnetic form; each comes
/// with its closed-form curl h = d(eta)/dA0.
///
///   sphere_curl_z       [c]            eta = (c/2) <e_z x p, dp>,    h = c z / R
///   sphere_curl_linear  [ax, ay, az]   eta = (1/2) <a x p, dp>,      h = <a, p> / R
///   torus_curl_cos_x    [c]            eta = (c/k) sin(k x) dy,      h = c cos(k x)
///   torus_curl_cos_y    [c]            eta = -(c/k) sin(k y) dx,     h = c cos(k y)
class OneFormField {
 public:
  enum class Kind { Zero, SphereCurl, TorusCurlCosX, TorusCurlCosY };

  OneFormField() = default;
  static OneFormField named(const std::string& name, const std::vector<double>& coefficients,
                            const ModelSurface& surface);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  bool is_zero() const { return kind_ == Kind::Zero; }

  /// Ambient covector: eta_p(v) = dot(covector(p), v).
  Vec3 covector(const ModelSurface& s, const Vec3& p) const;
  double curl(const ModelSurface& s, const Vec3& p) const;

  OneFormField rotated(const Mat3& r) const;

  friend bool operator==(const OneFormField&, const OneFormField&) = default;

 private:
  Kind kind_ = Kind::Zero;
  std::string name_ = "none";
  Vec3 vec_;
  double c_ = 0.0;
};

/// A model surface with metric g = scale * exp(2 eps u) g0 and magnetic form
/// sigma = sigma0 + eta_eps * d(eta), flowed at strength s.
struct MagneticSystem {
  ModelSurface surface = ModelSurface::flat_torus();
  double strength = 1.0;
  ScalarField conformal_exponent;
  double conformal_eps = 0.0;
  double scale = 1.0;  ///< global factor lambda in front of exp(2 eps u)
  OneFormField sigma_perturbation;
  double sigma_eps = 0.0;
  bool volume_normalized = false;

  /// psi with g = exp(2 psi) g0.
  double log_conformal(const Vec3& p) const;
  /// g0-gradient of psi.
  Vec3 grad_log_conformal(const Vec3& p) const;
  /// b = sigma / dA_g.
  double field_density(const Vec3& p) const;
  /// h at p scaled by eta_eps (zero when unperturbed).
  double sigma_curl(const Vec3& p) const;
  bool metric_perturbed() const;
  bool sigma_perturbed() const;
  bool unperturbed() const { return !metric_perturbed() && !sigma_perturbed(); }

  friend bool operator==(const MagneticSystem&, const MagneticSystem&) = default;
};

/// Point of the unit tangent bundle, in ambient coordinates.
struct TangentState {
  Vec3 position;
  Vec3 velocity;
};

/// Unperturbed Zoll system. Throws ZollRegimeViolation unless s^2 + kappa > 0.
MagneticSystem make_model(double kappa, double strength,
                          double period_x = 2.0 * std::numbers::pi,
                          double period_y = 2.0 * std::numbers::pi);

/// Metric g = lambda exp(2 eps u) g0; with normalize, lambda restores the
/// unperturbed area.
MagneticSystem conformal_perturb(const MagneticSystem& sys, const ScalarField& u, double eps,
                                 bool normalize, double rel_tol = 1e-8);

MagneticSystem sigma_perturb(const MagneticSystem& sys, const OneFormField& eta, double eps);

/// Rigid rotation of a spherical system's perturbation data.
MagneticSystem rotate_system(const MagneticSystem& sys, const Mat3& r);
TangentState rotate_state(const TangentState& st, const Mat3& r);

/// Area of the surface under g by nested adaptive Gauss-Kronrod quadrature.
double riemannian_volume(const MagneticSystem& sys, double rel_tol = 1e-8);
/// vol_g - vol_g0; finite on the hyperbolic model for decaying perturbations.
double area_defect(const MagneticSystem& sys, double rel_tol = 1e-8);

/// Metric coefficients (E, G) of g in the intrinsic chart.
std::array<double, 2> metric_coefficients(const MagneticSystem& sys, double q1, double q2);

/// Christoffel symbols gamma[i][j][k] = Gamma^i_{jk} of g in the intrinsic chart.
using Christoffel = std::array<std::array<std::array<double, 2>, 2>, 2>;
Christoffel christoffel(const MagneticSystem& sys, double q1, double q2);

/// The complex structure J (conformally invariant, so J_g = J_g0).
Vec3 rotate90(const MagneticSystem& sys, const Vec3& position, const Vec3& vector);

/// g-norm of the velocity.
double speed(const MagneticSystem& sys, const TangentState& st);
/// State at p moving along `direction`, rescaled to unit g-speed.
TangentState unit_state(const MagneticSystem& sys, const Vec3& p, const Vec3& direction);
/// Throws InvalidArgument unless the state is on the surface with unit g-speed.
void check_unit_state(const MagneticSystem& sys, const TangentState& st, double tol = 1e-10);

}  // namespace magsys
