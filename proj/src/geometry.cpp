// Copyright 2026 The magsys-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "magsys/geometry.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "magsys/error.hpp"

namespace magsys {

namespace {

constexpr double kPi = std::numbers::pi;

// Minkowski metric flip of the time (last) component.
Vec3 flip_time(const Vec3& a) { return {a.x, a.y, -a.z}; }

void require(bool ok, ErrorCode code, const std::string& msg) {
  if (!ok) throw Error(code, msg);
}

double coefficient(const std::vector<double>& c, std::size_t i, double fallback) {
  return i < c.size() ? c[i] : fallback;
}

}  // namespace

const char* to_string(Chart chart) {
  switch (chart) {
    case Chart::SphereAmbient: return "sphere_ambient";
    case Chart::HyperbolicPolar: return "hyperbolic_polar";
    case Chart::FlatTorus: return "flat_torus";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// ModelSurface

ModelSurface::ModelSurface(double kappa, Chart chart, double px, double py)
    : kappa_(kappa), chart_(chart), period_x_(px), period_y_(py) {
  radius_ = kappa == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / std::sqrt(std::abs(kappa));
}

ModelSurface ModelSurface::sphere(double kappa) {
  require(kappa > 0.0, ErrorCode::InvalidArgument, "sphere chart requires kappa > 0");
  return {kappa, Chart::SphereAmbient, 2.0 * kPi, 2.0 * kPi};
}

ModelSurface ModelSurface::hyperbolic(double kappa) {
  require(kappa < 0.0, ErrorCode::InvalidArgument, "hyperbolic chart requires kappa < 0");
  return {kappa, Chart::HyperbolicPolar, 2.0 * kPi, 2.0 * kPi};
}

ModelSurface ModelSurface::flat_torus(double period_x, double period_y) {
  require(period_x > 0.0 && period_y > 0.0, ErrorCode::InvalidArgument,
          "torus periods must be positive");
  return {0.0, Chart::FlatTorus, period_x, period_y};
}

ModelSurface ModelSurface::for_curvature(double kappa, double period_x, double period_y) {
  if (kappa > 0.0) return sphere(kappa);
  if (kappa < 0.0) return hyperbolic(kappa);
  return flat_torus(period_x, period_y);
}

double ModelSurface::inner(const Vec3& a, const Vec3& b) const {
  switch (chart_) {
    case Chart::SphereAmbient: return dot(a, b);
    case Chart::HyperbolicPolar: return a.x * b.x + a.y * b.y - a.z * b.z;
    case Chart::FlatTorus: return a.x * b.x + a.y * b.y;
  }
  return 0.0;
}

Vec3 ModelSurface::project_point(const Vec3& p) const {
  switch (chart_) {
    case Chart::SphereAmbient: return p * (radius_ / norm(p));
    case Chart::HyperbolicPolar: {
      const double q = -inner(p, p);
      require(q > 0.0 && p.z > 0.0, ErrorCode::InvalidArgument, "point is not near the hyperboloid");
      return p * (radius_ / std::sqrt(q));
    }
    case Chart::FlatTorus: return {p.x, p.y, 0.0};
  }
  return p;
}

Vec3 ModelSurface::project_tangent(const Vec3& p, const Vec3& w) const {
  switch (chart_) {
    case Chart::SphereAmbient: return w - (dot(w, p) / dot(p, p)) * p;
    case Chart::HyperbolicPolar: return w - (inner(w, p) / inner(p, p)) * p;
    case Chart::FlatTorus: return {w.x, w.y, 0.0};
  }
  return w;
}

Vec3 ModelSurface::geodesic_acceleration(const Vec3& p, const Vec3& v) const {
  switch (chart_) {
    case Chart::SphereAmbient: return (-inner(v, v) * kappa_) * p;
    case Chart::HyperbolicPolar: return (-inner(v, v) * kappa_) * p;
    case Chart::FlatTorus: return {};
  }
  return {};
}

Vec3 ModelSurface::rotate90(const Vec3& p, const Vec3& v) const {
  switch (chart_) {
    case Chart::SphereAmbient: return cross(p / radius_, v);
    case Chart::HyperbolicPolar: return flip_time(cross(p / radius_, v));
    case Chart::FlatTorus: return {-v.y, v.x, 0.0};
  }
  return v;
}

Vec3 ModelSurface::gradient(const Vec3& p, const Vec3& partials) const {
  switch (chart_) {
    case Chart::SphereAmbient: return project_tangent(p, partials);
    case Chart::HyperbolicPolar: return project_tangent(p, flip_time(partials));
    case Chart::FlatTorus: return {partials.x, partials.y, 0.0};
  }
  return partials;
}

Vec3 ModelSurface::exp_point(const Vec3& p, const Vec3& u, double dist) const {
  switch (chart_) {
    case Chart::SphereAmbient:
      return std::cos(dist / radius_) * p + (radius_ * std::sin(dist / radius_)) * u;
    case Chart::HyperbolicPolar:
      return std::cosh(dist / radius_) * p + (radius_ * std::sinh(dist / radius_)) * u;
    case Chart::FlatTorus: return p + dist * u;
  }
  return p;
}

Vec3 ModelSurface::exp_tangent(const Vec3& p, const Vec3& u, double dist) const {
  switch (chart_) {
    case Chart::SphereAmbient:
      return (-std::sin(dist / radius_) / radius_) * p + std::cos(dist / radius_) * u;
    case Chart::HyperbolicPolar:
      return (std::sinh(dist / radius_) / radius_) * p + std::cosh(dist / radius_) * u;
    case Chart::FlatTorus: return u;
  }
  return u;
}

std::array<double, 2> ModelSurface::to_chart(const Vec3& p) const {
  const double r = std::hypot(p.x, p.y);
  switch (chart_) {
    case Chart::SphereAmbient: return {std::atan2(r, p.z), std::atan2(p.y, p.x)};
    case Chart::HyperbolicPolar: return {radius_ * std::asinh(r / radius_), std::atan2(p.y, p.x)};
    case Chart::FlatTorus: return {p.x, p.y};
  }
  return {};
}

ChartPoint ModelSurface::chart_point(double q1, double q2) const {
  ChartPoint cp;
  const double c2 = std::cos(q2), s2 = std::sin(q2);
  switch (chart_) {
    case Chart::SphereAmbient: {
      const double c1 = std::cos(q1), s1 = std::sin(q1), r = radius_;
      cp.position = {r * s1 * c2, r * s1 * s2, r * c1};
      cp.d_q1 = {r * c1 * c2, r * c1 * s2, -r * s1};
      cp.d_q2 = {-r * s1 * s2, r * s1 * c2, 0.0};
      cp.a = r;
      cp.b = r * s1;
      cp.db_dq1 = r * c1;
      break;
    }
    case Chart::HyperbolicPolar: {
      const double r = radius_;
      const double sh = std::sinh(q1 / r), ch = std::cosh(q1 / r);
      cp.position = {r * sh * c2, r * sh * s2, r * ch};
      cp.d_q1 = {ch * c2, ch * s2, sh};
      cp.d_q2 = {-r * sh * s2, r * sh * c2, 0.0};
      cp.a = 1.0;
      cp.b = r * sh;
      cp.db_dq1 = ch;
      break;
    }
    case Chart::FlatTorus:
      cp.position = {q1, q2, 0.0};
      cp.d_q1 = {1.0, 0.0, 0.0};
      cp.d_q2 = {0.0, 1.0, 0.0};
      break;
  }
  return cp;
}

std::array<double, 4> ModelSurface::chart_box() const {
  switch (chart_) {
    case Chart::SphereAmbient: return {0.0, kPi, 0.0, 2.0 * kPi};
    case Chart::HyperbolicPolar:
      return {0.0, std::numeric_limits<double>::infinity(), 0.0, 2.0 * kPi};
    case Chart::FlatTorus: return {0.0, period_x_, 0.0, period_y_};
  }
  return {};
}

PolarFrame ModelSurface::polar_frame(const Vec3& center) const {
  PolarFrame f;
  f.center = project_point(center);
  if (chart_ == Chart::FlatTorus) {
    f.e1 = {1.0, 0.0, 0.0};
    f.e2 = {0.0, 1.0, 0.0};
    return f;
  }
  Vec3 helper{1.0, 0.0, 0.0};
  Vec3 e1 = project_tangent(f.center, helper);
  if (inner(e1, e1) < 1e-6) e1 = project_tangent(f.center, Vec3{0.0, 1.0, 0.0});
  f.e1 = e1 / std::sqrt(inner(e1, e1));
  f.e2 = rotate90(f.center, f.e1);
  return f;
}

PolarCoords ModelSurface::polar(const PolarFrame& frame, const Vec3& p, const Vec3& v) const {
  const Vec3 rel = chart_ == Chart::FlatTorus ? p - frame.center : p;
  const double x1 = inner(rel, frame.e1), x2 = inner(rel, frame.e2);
  const double r2 = x1 * x1 + x2 * x2;
  PolarCoords pc;
  pc.radial = std::sqrt(r2);
  pc.phi = std::atan2(x2, x1);
  pc.phi_rate = r2 > 0.0 ? (x1 * inner(v, frame.e2) - x2 * inner(v, frame.e1)) / r2 : 0.0;
  switch (chart_) {
    case Chart::SphereAmbient:
      pc.rho = radius_ * std::atan2(pc.radial, dot(p, frame.center) / radius_);
      break;
    case Chart::HyperbolicPolar: pc.rho = radius_ * std::asinh(pc.radial / radius_); break;
    case Chart::FlatTorus: pc.rho = pc.radial; break;
  }
  return pc;
}

Vec3 ModelSurface::polar_point(const PolarFrame& frame, double rho, double phi) const {
  const Vec3 u = std::cos(phi) * frame.e1 + std::sin(phi) * frame.e2;
  return exp_point(frame.center, u, rho);
}

double ModelSurface::polar_density(double rho) const {
  switch (chart_) {
    case Chart::SphereAmbient: return radius_ * std::sin(rho / radius_);
    case Chart::HyperbolicPolar: return radius_ * std::sinh(rho / radius_);
    case Chart::FlatTorus: return rho;
  }
  return 0.0;
}

double ModelSurface::polar_area(double rho) const {
  switch (chart_) {
    case Chart::SphereAmbient: {
      const double s = std::sin(rho / (2.0 * radius_));
      return 2.0 * radius_ * radius_ * s * s;
    }
    case Chart::HyperbolicPolar: {
      const double s = std::sinh(rho / (2.0 * radius_));
      return 2.0 * radius_ * radius_ * s * s;
    }
    case Chart::FlatTorus: return 0.5 * rho * rho;
  }
  return 0.0;
}

double ModelSurface::total_area() const {
  switch (chart_) {
    case Chart::SphereAmbient: return 4.0 * kPi * radius_ * radius_;
    case Chart::HyperbolicPolar: return std::numeric_limits<double>::infinity();
    case Chart::FlatTorus: return period_x_ * period_y_;
  }
  return 0.0;
}

Vec3 ModelSurface::base_point() const {
  switch (chart_) {
    case Chart::SphereAmbient:
    case Chart::HyperbolicPolar: return {0.0, 0.0, radius_};
    case Chart::FlatTorus: return {0.5 * period_x_, 0.5 * period_y_, 0.0};
  }
  return {};
}

// ---------------------------------------------------------------------------
// Fields

ScalarField ScalarField::constant(double c) {
  ScalarField f;
  f.kind_ = Kind::Constant;
  f.name_ = "constant";
  f.c_ = c;
  return f;
}

ScalarField ScalarField::sphere_linear(const Vec3& a) {
  ScalarField f;
  f.kind_ = Kind::SphereLinear;
  f.name_ = "sphere_linear";
  f.vec_ = a;
  return f;
}

ScalarField ScalarField::named(const std::string& name, const std::vector<double>& c,
                               const ModelSurface& s) {
  const auto need_chart = [&](Chart chart) {
    require(s.chart() == chart, ErrorCode::ValidationError,
            "field '" + name + "' is not defined on the " + to_string(s.chart()) + " model");
  };
  const auto max_coeffs = [&](std::size_t n) {
    require(c.size() <= n, ErrorCode::ValidationError,
            "field '" + name + "' takes at most " + std::to_string(n) + " coefficients");
  };
  ScalarField f;
  if (name == "none" || name.empty()) return f;
  if (name == "constant") {
    max_coeffs(1);
    f = constant(coefficient(c, 0, 1.0));
    return f;
  }
  if (name == "sphere_harmonic_z") {
    need_chart(Chart::SphereAmbient);
    max_coeffs(1);
    f = sphere_linear({0.0, 0.0, coefficient(c, 0, 1.0)});
    f.name_ = name;
    return f;
  }
  if (name == "sphere_linear") {
    need_chart(Chart::SphereAmbient);
    require(c.size() == 3, ErrorCode::ValidationError, "sphere_linear takes 3 coefficients");
    f = sphere_linear({c[0], c[1], c[2]});
    return f;
  }
  if (name == "torus_cos_x" || name == "torus_cos_y") {
    need_chart(Chart::FlatTorus);
    max_coeffs(1);
    f.kind_ = name == "torus_cos_x" ? Kind::TorusCosX : Kind::TorusCosY;
    f.name_ = name;
    f.c_ = coefficient(c, 0, 1.0);
    return f;
  }
  if (name == "hyperbolic_bump") {
    need_chart(Chart::HyperbolicPolar);
    max_coeffs(1);
    f.kind_ = Kind::HyperbolicBump;
    f.name_ = name;
    f.c_ = coefficient(c, 0, 1.0);
    return f;
  }
  throw Error(ErrorCode::ValidationError, "unknown scalar field '" + name + "'");
}

double ScalarField::value(const ModelSurface& s, const Vec3& p) const {
  switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::Constant: return c_;
    case Kind::SphereLinear: return dot(vec_, p) / s.radius();
    case Kind::TorusCosX: return c_ * std::cos(2.0 * kPi * p.x / s.torus_periods()[0]);
    case Kind::TorusCosY: return c_ * std::cos(2.0 * kPi * p.y / s.torus_periods()[1]);
    case Kind::HyperbolicBump: return c_ * std::exp(1.0 - p.z / s.radius());
  }
  return 0.0;
}

Vec3 ScalarField::partials(const ModelSurface& s, const Vec3& p) const {
  switch (kind_) {
    case Kind::Zero:
    case Kind::Constant: return {};
    case Kind::SphereLinear: return vec_ / s.radius();
    case Kind::TorusCosX: {
      const double k = 2.0 * kPi / s.torus_periods()[0];
      return {-c_ * k * std::sin(k * p.x), 0.0, 0.0};
    }
    case Kind::TorusCosY: {
      const double k = 2.0 * kPi / s.torus_periods()[1];
      return {0.0, -c_ * k * std::sin(k * p.y), 0.0};
    }
    case Kind::HyperbolicBump:
      return {0.0, 0.0, -(c_ / s.radius()) * std::exp(1.0 - p.z / s.radius())};
  }
  return {};
}

ScalarField ScalarField::rotated(const Mat3& r) const {
  ScalarField f = *this;
  if (kind_ == Kind::SphereLinear) {
    f.vec_ = r * vec_;
    f.name_ = "sphere_linear";
  } else if (kind_ != Kind::Zero && kind_ != Kind::Constant) {
    throw Error(ErrorCode::InvalidArgument, "field '" + name_ + "' cannot be rotated");
  }
  return f;
}

OneFormField OneFormField::named(const std::string& name, const std::vector<double>& c,
                                 const ModelSurface& s) {
  OneFormField f;
  if (name == "none" || name.empty()) return f;
  f.name_ = name;
  if (name == "sphere_curl_z" || name == "sphere_curl_linear") {
    require(s.chart() == Chart::SphereAmbient, ErrorCode::ValidationError,
            "1-form '" + name + "' needs the sphere model");
    f.kind_ = Kind::SphereCurl;
    if (name == "sphere_curl_z") {
      require(c.size() <= 1, ErrorCode::ValidationError, "sphere_curl_z takes at most 1 coefficient");
      f.vec_ = {0.0, 0.0, coefficient(c, 0, 1.0)};
    } else {
      require(c.size() == 3, ErrorCode::ValidationError, "sphere_curl_linear takes 3 coefficients");
      f.vec_ = {c[0], c[1], c[2]};
    }
    return f;
  }
  if (name == "torus_curl_cos_x" || name == "torus_curl_cos_y") {
    require(s.chart() == Chart::FlatTorus, ErrorCode::ValidationError,
            "1-form '" + name + "' needs the torus model");
    require(c.size() <= 1, ErrorCode::ValidationError, name + " takes at most 1 coefficient");
    f.kind_ = name == "torus_curl_cos_x" ? Kind::TorusCurlCosX : Kind::TorusCurlCosY;
    f.c_ = coefficient(c, 0, 1.0);
    return f;
  }
  throw Error(ErrorCode::ValidationError, "unknown 1-form field '" + name + "'");
}

Vec3 OneFormField::covector(const ModelSurface& s, const Vec3& p) const {
  switch (kind_) {
    case Kind::Zero: return {};
    case Kind::SphereCurl: return 0.5 * cross(vec_, p);
    case Kind::TorusCurlCosX: {
      const double k = 2.0 * kPi / s.torus_periods()[0];
      return {0.0, (c_ / k) * std::sin(k * p.x), 0.0};
    }
    case Kind::TorusCurlCosY: {
      const double k = 2.0 * kPi / s.torus_periods()[1];
      return {-(c_ / k) * std::sin(k * p.y), 0.0, 0.0};
    }
  }
  return {};
}

double OneFormField::curl(const ModelSurface& s, const Vec3& p) const {
  switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::SphereCurl: return dot(vec_, p) / s.radius();
    case Kind::TorusCurlCosX: return c_ * std::cos(2.0 * kPi * p.x / s.torus_periods()[0]);
    case Kind::TorusCurlCosY: return c_ * std::cos(2.0 * kPi * p.y / s.torus_periods()[1]);
  }
  return 0.0;
}

OneFormField OneFormField::rotated(const Mat3& r) const {
  OneFormField f = *this;
  if (kind_ == Kind::SphereCurl) {
    f.vec_ = r * vec_;
    f.name_ = "sphere_curl_linear";
  } else if (kind_ != Kind::Zero) {
    throw Error(ErrorCode::InvalidArgument, "1-form '" + name_ + "' cannot be rotated");
  }
  return f;
}

// ---------------------------------------------------------------------------
// MagneticSystem

double MagneticSystem::log_conformal(const Vec3& p) const {
  double psi = scale == 1.0 ? 0.0 : 0.5 * std::log(scale);
  if (conformal_eps != 0.0) psi += conformal_eps * conformal_exponent.value(surface, p);
  return psi;
}

Vec3 MagneticSystem::grad_log_conformal(const Vec3& p) const {
  if (conformal_eps == 0.0 || conformal_exponent.is_zero()) return {};
  return conformal_eps * surface.gradient(p, conformal_exponent.partials(surface, p));
}

double MagneticSystem::sigma_curl(const Vec3& p) const {
  if (sigma_eps == 0.0 || sigma_perturbation.is_zero()) return 0.0;
  return sigma_eps * sigma_perturbation.curl(surface, p);
}

double MagneticSystem::field_density(const Vec3& p) const {
  const double psi = log_conformal(p);
  const double b = 1.0 + sigma_curl(p);
  return psi == 0.0 ? b : b * std::exp(-2.0 * psi);
}

bool MagneticSystem::metric_perturbed() const {
  return scale != 1.0 || (conformal_eps != 0.0 && !conformal_exponent.is_zero());
}

bool MagneticSystem::sigma_perturbed() const {
  return sigma_eps != 0.0 && !sigma_perturbation.is_zero();
}

// ---------------------------------------------------------------------------
// Operations

MagneticSystem make_model(double kappa, double strength, double period_x, double period_y) {
  require(std::isfinite(kappa) && std::isfinite(strength), ErrorCode::InvalidArgument,
          "kappa and strength must be finite");
  if (!(strength * strength + kappa > 0.0)) {
    std::ostringstream os;
    os << "Zoll regime violated: s^2 + kappa = " << strength * strength + kappa << " <= 0 (kappa=" << kappa
       << ", s=" << strength << ")";
    throw Error(ErrorCode::ZollRegimeViolation, os.str());
  }
  MagneticSystem sys;
  sys.surface = ModelSurface::for_curvature(kappa, period_x, period_y);
  sys.strength = strength;
  return sys;
}

namespace {

// Nested adaptive Gauss-Kronrod over the chart box of integrand(p, A*B).
template <class F>
double integrate_chart(const ModelSurface& s, double q1_max, double rel_tol, F&& integrand) {
  using boost::math::quadrature::gauss_kronrod;
  const auto box = s.chart_box();
  const double hi1 = std::min(box[1], q1_max);
  const double inner_tol = rel_tol * 1e-2;
  double worst_inner = 0.0;
  const auto row = [&](double q1) {
    double err = 0.0;
    const double v = gauss_kronrod<double, 31>::integrate(
        [&](double q2) {
          const ChartPoint cp = s.chart_point(q1, q2);
          return integrand(cp.position) * cp.a * cp.b;
        },
        box[2], box[3], 12, inner_tol, &err);
    const double scale = std::max(std::abs(v), 1e-300);
    worst_inner = std::max(worst_inner, err / scale);
    return v;
  };
  double err = 0.0;
  const double total = gauss_kronrod<double, 31>::integrate(row, box[0], hi1, 15, rel_tol * 0.1, &err);
  const double bound = rel_tol * std::max(std::abs(total), 1e-12);
  if (!(err <= bound) || !std::isfinite(total)) {
    std::ostringstream os;
    os << "estimated error " << err << " exceeds " << bound;
    throw Error(ErrorCode::QuadratureFailure, os.str());
  }
  return total;
}

double hyperbolic_cutoff(const ModelSurface& s) { return s.radius() * std::acosh(41.0); }

}  // namespace

MagneticSystem conformal_perturb(const MagneticSystem& sys, const ScalarField& u, double eps,
                                 bool normalize, double rel_tol) {
  if (eps == 0.0) return sys;
  MagneticSystem out = sys;
  out.conformal_exponent = u;
  out.conformal_eps = eps;
  out.scale = 1.0;
  out.volume_normalized = false;
  if (normalize && !u.is_zero()) {
    require(sys.surface.compact(), ErrorCode::InvalidArgument,
            "volume normalization needs a compact model");
    const double raw = integrate_chart(out.surface, std::numeric_limits<double>::infinity(), rel_tol * 1e-2,
                                       [&](const Vec3& p) { return std::exp(2.0 * out.log_conformal(p)); });
    out.scale = out.surface.total_area() / raw;
    out.volume_normalized = true;
  } else if (normalize) {
    out.volume_normalized = true;
  }
  return out;
}

MagneticSystem sigma_perturb(const MagneticSystem& sys, const OneFormField& eta, double eps) {
  MagneticSystem out = sys;
  out.sigma_perturbation = eta;
  out.sigma_eps = eps;
  return out;
}

MagneticSystem rotate_system(const MagneticSystem& sys, const Mat3& r) {
  require(sys.surface.chart() == Chart::SphereAmbient, ErrorCode::InvalidArgument,
          "rigid rotations are only defined on the sphere model");
  MagneticSystem out = sys;
  out.conformal_exponent = sys.conformal_exponent.rotated(r);
  out.sigma_perturbation = sys.sigma_perturbation.rotated(r);
  return out;
}

TangentState rotate_state(const TangentState& st, const Mat3& r) {
  return {r * st.position, r * st.velocity};
}

double riemannian_volume(const MagneticSystem& sys, double rel_tol) {
  require(sys.surface.compact(), ErrorCode::InvalidArgument,
          "the hyperbolic model has infinite area; use area_defect");
  return integrate_chart(sys.surface, std::numeric_limits<double>::infinity(), rel_tol,
                         [&](const Vec3& p) { return std::exp(2.0 * sys.log_conformal(p)); });
}

double area_defect(const MagneticSystem& sys, double rel_tol) {
  if (!sys.metric_perturbed()) return 0.0;
  if (sys.surface.compact()) return riemannian_volume(sys, rel_tol) - sys.surface.total_area();
  require(sys.scale == 1.0 && sys.conformal_exponent.kind() == ScalarField::Kind::HyperbolicBump,
          ErrorCode::InvalidArgument, "area defect on the hyperbolic model needs a decaying field");
  // Absolute tolerance relative to the bump's own scale.
  const double rmax = hyperbolic_cutoff(sys.surface);
  double err = 0.0;
  using boost::math::quadrature::gauss_kronrod;
  const double v = gauss_kronrod<double, 31>::integrate(
      [&](double rho) {
        const ChartPoint cp = sys.surface.chart_point(rho, 0.0);
        return 2.0 * std::numbers::pi * std::expm1(2.0 * sys.log_conformal(cp.position)) * cp.b;
      },
      0.0, rmax, 15, rel_tol * 0.1, &err);
  if (!(err <= rel_tol * std::max(std::abs(v), 1e-12)))
    throw Error(ErrorCode::QuadratureFailure, "area defect did not converge");
  return v;
}

std::array<double, 2> metric_coefficients(const MagneticSystem& sys, double q1, double q2) {
  const ChartPoint cp = sys.surface.chart_point(q1, q2);
  const double f = std::exp(2.0 * sys.log_conformal(cp.position));
  return {f * cp.a * cp.a, f * cp.b * cp.b};
}

Christoffel christoffel(const MagneticSystem& sys, double q1, double q2) {
  const ChartPoint cp = sys.surface.chart_point(q1, q2);
  const double f = std::exp(2.0 * sys.log_conformal(cp.position));
  double psi1 = 0.0, psi2 = 0.0;
  if (sys.conformal_eps != 0.0) {
    const Vec3 du = sys.conformal_exponent.partials(sys.surface, cp.position);
    psi1 = sys.conformal_eps * dot(du, cp.d_q1);
    psi2 = sys.conformal_eps * dot(du, cp.d_q2);
  }
  const double e = f * cp.a * cp.a, g = f * cp.b * cp.b;
  const double e1 = 2.0 * psi1 * e, e2 = 2.0 * psi2 * e;
  const double g1 = 2.0 * psi1 * g + 2.0 * f * cp.b * cp.db_dq1, g2 = 2.0 * psi2 * g;
  Christoffel c{};
  c[0][0][0] = e1 / (2.0 * e);
  c[0][0][1] = c[0][1][0] = e2 / (2.0 * e);
  c[0][1][1] = -g1 / (2.0 * e);
  c[1][0][0] = -e2 / (2.0 * g);
  c[1][0][1] = c[1][1][0] = g1 / (2.0 * g);
  c[1][1][1] = g2 / (2.0 * g);
  return c;
}

Vec3 rotate90(const MagneticSystem& sys, const Vec3& position, const Vec3& vector) {
  return sys.surface.rotate90(position, vector);
}

double speed(const MagneticSystem& sys, const TangentState& st) {
  const double v0 = std::sqrt(std::max(0.0, sys.surface.inner(st.velocity, st.velocity)));
  const double psi = sys.log_conformal(st.position);
  return psi == 0.0 ? v0 : v0 * std::exp(psi);
}

TangentState unit_state(const MagneticSystem& sys, const Vec3& p, const Vec3& direction) {
  TangentState st;
  st.position = sys.surface.project_point(p);
  const Vec3 d = sys.surface.project_tangent(st.position, direction);
  const double n0 = std::sqrt(sys.surface.inner(d, d));
  require(n0 > 0.0, ErrorCode::InvalidArgument, "direction has no tangential component");
  const double psi = sys.log_conformal(st.position);
  st.velocity = d * ((psi == 0.0 ? 1.0 : std::exp(-psi)) / n0);
  return st;
}

void check_unit_state(const MagneticSystem& sys, const TangentState& st, double tol) {
  const ModelSurface& s = sys.surface;
  if (s.chart() != Chart::FlatTorus) {
    const double target = s.chart() == Chart::SphereAmbient ? 1.0 : -1.0;
    const double r2 = s.inner(st.position, st.position) / (s.radius() * s.radius());
    require(std::abs(r2 - target) <= 1e-9, ErrorCode::InvalidArgument, "position is off the surface");
    require(std::abs(s.inner(st.position, st.velocity)) <= 1e-9 * s.radius(),
            ErrorCode::InvalidArgument, "velocity is not tangent");
  }
  const double sp = speed(sys, st);
  if (!(std::abs(sp - 1.0) <= tol)) {
    std::ostringstream os;
    os << "g-speed " << sp << " differs from 1 by more than " << tol;
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
}

}  // namespace magsys
