// Copyright 2026 The magsys-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

namespace magsys {

/// Closed-form constants of the Zoll model with curvature kappa, strength s and
/// complex dimension n.
struct ZollReference {
  double kappa = 0.0;
  double strength = 0.0;
  int n = 1;
  double a1_squared = 0.0;
  double reference_magnetic_length = 0.0;  ///< pi * a1_squared
  double vol_g0 = 0.0;
};

/// a^2(r) = (2/kappa)(sqrt(s^2 + kappa r^2) - s), r^2/s when kappa = 0.
/// Throws ZollRegimeViolation when s^2 + kappa r^2 <= 0 or the value is not
/// positive.
double a_squared(double kappa, double s, double r);
double a_of_r(double kappa, double s, double r);

/// pi a^2(1).
double reference_length(double kappa, double s);

ZollReference zoll_reference(double kappa, double s, int n, double vol_g0);

/// Pairings <c0^(m-k) e0^k, [M]> for k = 0..m, with m = dim_M / 2.
struct CohomologyData {
  int dim_M = 2;
  std::vector<double> pairings;
};

/// Throws InvalidArgument unless dim_M is even and positive, there are
/// m + 1 pairings, and pairings[0] > 0.
void validate(const CohomologyData& coh);

/// P(A) = integral_0^A <(c0 + t e0)^m, [M]> dt, by exact binomial expansion.
double zoll_polynomial_generic(const CohomologyData& coh, double A);
/// P'(A).
double zoll_polynomial_generic_derivative(const CohomologyData& coh, double A);

/// pi^(2n+1)/(n!)^2 a^(8n) (kappa/2)^n (a^2 + s)^(n-1) (1 + 2(s + a^2)), a = a(1).
double k_tilde(double kappa, double s, int n);

/// Zoll polynomial of the Kaehler magnetic model:
///   kappa != 0: K~ vol_g0 [(1 + A/(pi a^2))^(2n) - 1]
///   kappa == 0: 2 pi^(2n+1)/(2n)! a^(8n) [(1 + A/(pi a^2))^(2n) - 1]
double zoll_polynomial_kahler(double kappa, double s, int n, double vol_g0, double A);

/// Pairings of the magnetic circle bundle of the flat Zoll model: on the orbit
/// space c0 = (pi a^2) e0, and <e0^m, [M]> = 2 pi a^(4n)/(2n-1)! with m = 2n-1.
CohomologyData torus_bundle_pairings(double s, int n);

/// The bracketed constant of the kappa != 0 inequality, grouped as
/// [pi/(n!)^2 a^(8n) (kappa/2)^n (a^2+s)^(n-1) (1+2(s+a^2))]^(-1) * 2/(vol_g0 (n-1)!).
double inequality_constant_C(double kappa, double s, int n, double vol_g0);

/// Volume-functional constant 2 pi^(2n)/(n-1)! of the general-n identity.
double volume_constant_general(int n);

/// Right-hand side of the systolic bound solved for (l_min/(pi a^2))^(2n):
/// 1 + Vol/(P leading constant), with Vol = volume_constant_general(n) (vol_g - vol_g0).
/// The inequality direction flips when the leading constant is negative;
/// `flipped` reports that case.
double effective_systolic_bound(double kappa, double s, int n, double vol_g0, double vol_g,
                                bool* flipped = nullptr);

}  // namespace magsys
