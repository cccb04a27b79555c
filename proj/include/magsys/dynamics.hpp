// Copyright 2026 The magsys-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <vector>

#include "magsys/geometry.hpp"

namespace magsys {

/// Arc-length sampled solution of nabla^g_v v = s b J v.
struct Trajectory {
  std::vector<TangentState> states;
  std::vector<double> times;
  double speed_drift = 0.0;  ///< max |g-speed - 1| before per-step renormalization
};

/// 2 pi / sqrt(s^2 + kappa); throws ZollRegimeViolation outside the Zoll regime.
double zoll_period(double kappa, double strength);

/// g0-radius of the Zoll circles: tan(sqrt(k) r) = sqrt(k)/|s|,
/// tanh(sqrt(-k) r) = sqrt(-k)/|s|, or 1/|s| on the torus.
double zoll_circle_radius(double kappa, double strength);

/// Unit-speed state on the Zoll circle of the unperturbed model centred at
/// `center`, at polar angle `angle` of the canonical frame. The velocity is
/// sign(s) J applied to the outward radial direction.
TangentState circle_seed(const MagneticSystem& sys, const Vec3& center, double angle = 0.0);

/// circle_seed about the model's base point at angle 0.
TangentState latitude_seed(const MagneticSystem& sys);

/// Ambient second derivative of the flow at a state.
Vec3 flow_acceleration(const MagneticSystem& sys, const Vec3& p, const Vec3& v);

/// Geodesic curvature of the flow line through the state, under g.
double geodesic_curvature(const MagneticSystem& sys, const TangentState& st);

/// Integrates for `duration`, recording every accepted step.
/// Throws StepFailure on step-size underflow, InvalidArgument for a negative
/// duration or one longer than 100 Zoll periods.
Trajectory flow(const MagneticSystem& sys, const TangentState& start, double duration,
                double tol = 1e-10);

/// Integrates through ascending `times` (all >= 0), recording exactly there.
Trajectory flow_at(const MagneticSystem& sys, const TangentState& start,
                   const std::vector<double>& times, double tol = 1e-10);

/// Adaptive stepper with per-step projection back onto the unit tangent bundle.
class FlowStepper {
 public:
  FlowStepper(const MagneticSystem& sys, const TangentState& start, double tol);

  /// Takes one accepted step no longer than max_dt.
  void step(double max_dt);

  TangentState state() const;
  double time() const { return t_; }
  double last_step() const { return last_dt_; }
  double speed_drift() const { return drift_; }

 private:
  const MagneticSystem* sys_;
  std::array<double, 6> x_{};
  double t_ = 0.0;
  double dt_ = 0.0;
  double last_dt_ = 0.0;
  double tol_ = 0.0;
  double drift_ = 0.0;
};

/// One fixed RKF78 step of size h from `st`, projected back to unit speed.
TangentState single_step(const MagneticSystem& sys, const TangentState& st, double h);

}  // namespace magsys
