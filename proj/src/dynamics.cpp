// Copyright 2026 The magsys-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "magsys/dynamics.hpp"

#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <sstream>

#include "magsys/error.hpp"

namespace magsys {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::array<double, 6>;
using Base = odeint::runge_kutta_fehlberg78<State>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Vec3 pos(const State& x) { return {x[0], x[1], x[2]}; }
Vec3 vel(const State& x) { return {x[3], x[4], x[5]}; }

State pack(const TangentState& st) {
  return {st.position.x, st.position.y, st.position.z,
          st.velocity.x, st.velocity.y, st.velocity.z};
}

struct Rhs {
  const MagneticSystem* sys;
  void operator()(const State& x, State& dxdt, double /*t*/) const {
    const Vec3 v = vel(x);
    const Vec3 a = flow_acceleration(*sys, pos(x), v);
    dxdt = {v.x, v.y, v.z, a.x, a.y, a.z};
  }
};

// Projects back onto the unit tangent bundle; returns |g-speed - 1| before.
double renormalize(const MagneticSystem& sys, State& x) {
  const ModelSurface& s = sys.surface;
  const Vec3 p = s.project_point(pos(x));
  Vec3 v = s.project_tangent(p, vel(x));
  const double psi = sys.log_conformal(p);
  const double v0 = std::sqrt(s.inner(v, v));
  const double sp = psi == 0.0 ? v0 : v0 * std::exp(psi);
  v = v * (1.0 / sp);
  x = {p.x, p.y, p.z, v.x, v.y, v.z};
  return std::abs(sp - 1.0);
}

void check_flow_args(const MagneticSystem& sys, const TangentState& start, double duration, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "integrator tolerance must be positive");
  check_unit_state(sys, start, 1e-9);
  if (!(duration >= 0.0) || !std::isfinite(duration))
    throw Error(ErrorCode::InvalidArgument, "duration must be finite and non-negative");
  const double cap = 100.0 * zoll_period(sys.surface.kappa(), sys.strength);
  if (duration > cap * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "duration " << duration << " exceeds 100 Zoll periods (" << cap << ")";
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
}

}  // namespace

double zoll_period(double kappa, double strength) {
  const double d = strength * strength + kappa;
  if (!(d > 0.0)) throw Error(ErrorCode::ZollRegimeViolation, "Zoll regime violated: s^2 + kappa <= 0");
  return kTwoPi / std::sqrt(d);
}

double zoll_circle_radius(double kappa, double strength) {
  const double s = std::abs(strength);
  if (!(strength * strength + kappa > 0.0))
    throw Error(ErrorCode::ZollRegimeViolation, "Zoll regime violated: s^2 + kappa <= 0");
  if (kappa > 0.0) return std::atan2(std::sqrt(kappa), s) / std::sqrt(kappa);
  if (kappa < 0.0) return std::atanh(std::sqrt(-kappa) / s) / std::sqrt(-kappa);
  return 1.0 / s;
}

TangentState circle_seed(const MagneticSystem& sys, const Vec3& center, double angle) {
  const ModelSurface& s = sys.surface;
  const PolarFrame f = s.polar_frame(center);
  const double rho = zoll_circle_radius(s.kappa(), sys.strength);
  const Vec3 u = std::cos(angle) * f.e1 + std::sin(angle) * f.e2;
  const Vec3 p = s.exp_point(f.center, u, rho);
  const Vec3 radial = s.exp_tangent(f.center, u, rho);
  const double sign = sys.strength < 0.0 ? -1.0 : 1.0;
  return unit_state(sys, p, sign * s.rotate90(p, radial));
}

TangentState latitude_seed(const MagneticSystem& sys) {
  return circle_seed(sys, sys.surface.base_point(), 0.0);
}

Vec3 flow_acceleration(const MagneticSystem& sys, const Vec3& p, const Vec3& v) {
  const ModelSurface& s = sys.surface;
  Vec3 a = s.geodesic_acceleration(p, v);
  double b = 1.0;
  if (sys.metric_perturbed() || sys.sigma_perturbed()) {
    const Vec3 grad = sys.grad_log_conformal(p);
    a += (-2.0 * s.inner(grad, v)) * v + s.inner(v, v) * grad;
    b = sys.field_density(p);
  }
  if (sys.strength != 0.0) a += (sys.strength * b) * s.rotate90(p, v);
  return a;
}

double geodesic_curvature(const MagneticSystem& sys, const TangentState& st) {
  const ModelSurface& s = sys.surface;
  const Vec3& p = st.position;
  const Vec3& v = st.velocity;
  // Covariant acceleration under g0, then the conformal correction to g.
  Vec3 cov = flow_acceleration(sys, p, v) - s.geodesic_acceleration(p, v);
  const Vec3 grad = sys.grad_log_conformal(p);
  cov += (2.0 * s.inner(grad, v)) * v - s.inner(v, v) * grad;
  const double e2psi = std::exp(2.0 * sys.log_conformal(p));
  const double sp = speed(sys, st);
  return e2psi * s.inner(cov, s.rotate90(p, v)) / (sp * sp * sp);
}

FlowStepper::FlowStepper(const MagneticSystem& sys, const TangentState& start, double tol)
    : sys_(&sys), x_(pack(start)), tol_(tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  dt_ = 0.05 * zoll_period(sys.surface.kappa(), sys.strength);
}

void FlowStepper::step(double max_dt) {
  auto stepper = odeint::make_controlled(tol_, tol_, Base());
  const Rhs rhs{sys_};
  for (int attempt = 0; attempt < 200; ++attempt) {
    double dt = std::min(dt_, max_dt);
    const double tried = dt;
    State trial = x_;
    double t = t_;
    if (stepper.try_step(rhs, trial, t, dt) == odeint::success) {
      drift_ = std::max(drift_, renormalize(*sys_, trial));
      x_ = trial;
      t_ = t;
      last_dt_ = tried;
      // Clipped steps keep the previous estimate so the next step is not tiny.
      dt_ = tried < dt_ ? std::max(dt_, dt) : dt;
      return;
    }
    dt_ = dt;
    if (dt_ < 1e-13 * std::max(1.0, std::abs(t_))) break;
  }
  std::ostringstream os;
  os << "adaptive step underflow at t = " << t_;
  throw Error(ErrorCode::StepFailure, os.str());
}

TangentState FlowStepper::state() const { return {pos(x_), vel(x_)}; }

TangentState single_step(const MagneticSystem& sys, const TangentState& st, double h) {
  Base stepper;
  State x = pack(st);
  stepper.do_step(Rhs{&sys}, x, 0.0, h);
  renormalize(sys, x);
  return {pos(x), vel(x)};
}

Trajectory flow(const MagneticSystem& sys, const TangentState& start, double duration,
                double tol) {
  check_flow_args(sys, start, duration, tol);
  Trajectory tr;
  tr.states.push_back(start);
  tr.times.push_back(0.0);
  FlowStepper stepper(sys, start, tol);
  while (stepper.time() < duration) {
    const double remaining = duration - stepper.time();
    stepper.step(remaining);
    // Snap to the end when the remainder is below the time resolution.
    if (duration - stepper.time() <= 1e-14 * std::max(1.0, duration)) {
      tr.states.push_back(stepper.state());
      tr.times.push_back(duration);
      break;
    }
    tr.states.push_back(stepper.state());
    tr.times.push_back(stepper.time());
  }
  tr.speed_drift = stepper.speed_drift();
  return tr;
}

Trajectory flow_at(const MagneticSystem& sys, const TangentState& start,
                   const std::vector<double>& times, double tol) {
  Trajectory tr;
  if (times.empty()) return tr;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0.0 || (i > 0 && !(times[i] > times[i - 1])))
      throw Error(ErrorCode::InvalidArgument, "sample times must be non-negative and increasing");
  }
  check_flow_args(sys, start, times.back(), tol);
  FlowStepper stepper(sys, start, tol);
  for (const double target : times) {
    while (target - stepper.time() > 1e-14 * std::max(1.0, target)) {
      stepper.step(target - stepper.time());
    }
    tr.states.push_back(stepper.state());
    tr.times.push_back(target);
  }
  tr.speed_drift = stepper.speed_drift();
  return tr;
}

}  // namespace magsys
