// Copyright 2026 The magsys-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "magsys/zollref.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "magsys/error.hpp"

namespace magsys {

namespace {

using ld = long double;
constexpr ld kPiL = std::numbers::pi_v<long double>;

ld factorial(int k) {
  ld f = 1.0L;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

ld binomial(int m, int k) {
  ld c = 1.0L;
  for (int i = 1; i <= k; ++i) c = c * (m - k + i) / i;
  return c;
}

// Neumaier compensated accumulator.
struct Accumulator {
  ld sum = 0.0L;
  ld comp = 0.0L;
  void add(ld x) {
    const ld t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) comp += (sum - t) + x;
    else comp += (x - t) + sum;
    sum = t;
  }
  ld value() const { return sum + comp; }
};

void require_n(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "complex dimension n must be >= 1");
}

ld a2_long(double kappa, double s, double r) {
  const ld k = kappa, sl = s, rl = r;
  const ld disc = sl * sl + k * rl * rl;
  if (!(disc > 0.0L)) {
    std::ostringstream os;
    os << "Zoll regime violated: s^2 + kappa r^2 = " << static_cast<double>(disc) << " <= 0";
    throw Error(ErrorCode::ZollRegimeViolation, os.str());
  }
  if (r == 0.0) return 0.0L;
  ld a2;
  if (kappa == 0.0) a2 = rl * rl / sl;
  else if (s > 0.0) a2 = 2.0L * rl * rl / (std::sqrt(disc) + sl);
  else a2 = (2.0L / k) * (std::sqrt(disc) - sl);
  if (!(a2 > 0.0L) || !std::isfinite(static_cast<double>(a2))) {
    std::ostringstream os;
    os << "Zoll regime violated: a^2(r) is not positive for kappa=" << kappa << ", s=" << s << ", r=" << r;
    throw Error(ErrorCode::ZollRegimeViolation, os.str());
  }
  return a2;
}

// Leading constant L of P(A) = L [(1 + A/(pi a^2))^(2n) - 1].
ld kahler_leading(double kappa, double s, int n, double vol_g0) {
  if (kappa == 0.0) {
    const ld a2 = a2_long(0.0, s, 1.0);
    return 2.0L * std::pow(kPiL, 2 * n + 1) / factorial(2 * n) * std::pow(a2, 4 * n);
  }
  return static_cast<ld>(k_tilde(kappa, s, n)) * vol_g0;
}

}  // namespace

double a_squared(double kappa, double s, double r) {
  if (r < 0.0) throw Error(ErrorCode::InvalidArgument, "radius r must be non-negative");
  return static_cast<double>(a2_long(kappa, s, r));
}

double a_of_r(double kappa, double s, double r) {
  return static_cast<double>(std::sqrt(static_cast<ld>(a_squared(kappa, s, r))));
}

double reference_length(double kappa, double s) {
  return static_cast<double>(kPiL * a2_long(kappa, s, 1.0));
}

ZollReference zoll_reference(double kappa, double s, int n, double vol_g0) {
  require_n(n);
  ZollReference z;
  z.kappa = kappa;
  z.strength = s;
  z.n = n;
  z.a1_squared = a_squared(kappa, s, 1.0);
  z.reference_magnetic_length = reference_length(kappa, s);
  z.vol_g0 = vol_g0;
  return z;
}

void validate(const CohomologyData& coh) {
  if (coh.dim_M <= 0 || coh.dim_M % 2 != 0)
    throw Error(ErrorCode::InvalidArgument, "dim_M must be a positive even integer");
  const std::size_t m = static_cast<std::size_t>(coh.dim_M / 2);
  if (coh.pairings.size() != m + 1) {
    std::ostringstream os;
    os << "expected " << m + 1 << " pairings for dim_M = " << coh.dim_M << ", got "
       << coh.pairings.size();
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
  if (!(coh.pairings[0] > 0.0))
    throw Error(ErrorCode::InvalidArgument, "pairings[0] must be positive");
}

double zoll_polynomial_generic(const CohomologyData& coh, double A) {
  validate(coh);
  const int m = coh.dim_M / 2;
  Accumulator acc;
  ld power = A;  // A^(k+1)
  for (int k = 0; k <= m; ++k) {
    acc.add(binomial(m, k) * coh.pairings[k] * power / (k + 1));
    power *= A;
  }
  return static_cast<double>(acc.value());
}

double zoll_polynomial_generic_derivative(const CohomologyData& coh, double A) {
  validate(coh);
  const int m = coh.dim_M / 2;
  Accumulator acc;
  ld power = 1.0L;
  for (int k = 0; k <= m; ++k) {
    acc.add(binomial(m, k) * coh.pairings[k] * power);
    power *= A;
  }
  return static_cast<double>(acc.value());
}

double k_tilde(double kappa, double s, int n) {
  require_n(n);
  if (kappa == 0.0) throw Error(ErrorCode::InvalidArgument, "K~ is defined for kappa != 0");
  const ld a2 = a2_long(kappa, s, 1.0);
  const ld sl = s;
  const ld f = factorial(n);
  return static_cast<double>(std::pow(kPiL, 2 * n + 1) / (f * f) * std::pow(a2, 4 * n) *
                             std::pow(static_cast<ld>(kappa) / 2.0L, n) *
                             std::pow(a2 + sl, n - 1) * (1.0L + 2.0L * (sl + a2)));
}

double zoll_polynomial_kahler(double kappa, double s, int n, double vol_g0, double A) {
  require_n(n);
  if (A == 0.0) {
    a2_long(kappa, s, 1.0);
    return 0.0;
  }
  const ld a2 = a2_long(kappa, s, 1.0);
  const ld x = static_cast<ld>(A) / (kPiL * a2);
  // (1 + x)^(2n) - 1 without cancellation for small x.
  const ld bracket = std::expm1(2.0L * n * std::log1p(x));
  return static_cast<double>(kahler_leading(kappa, s, n, vol_g0) * bracket);
}

CohomologyData torus_bundle_pairings(double s, int n) {
  require_n(n);
  const ld a2 = a2_long(0.0, s, 1.0);
  const int m = 2 * n - 1;
  const ld euler = 2.0L * kPiL * std::pow(a2, 2 * n) / factorial(2 * n - 1);
  CohomologyData coh;
  coh.dim_M = 2 * m;
  for (int k = 0; k <= m; ++k) {
    coh.pairings.push_back(static_cast<double>(std::pow(kPiL * a2, m - k) * euler));
  }
  return coh;
}

double inequality_constant_C(double kappa, double s, int n, double vol_g0) {
  require_n(n);
  if (kappa == 0.0) throw Error(ErrorCode::InvalidArgument, "C is defined for kappa != 0");
  if (!(vol_g0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "vol_g0 must be positive");
  const ld a2 = a2_long(kappa, s, 1.0);
  const ld sl = s;
  const ld f = factorial(n);
  const ld bracket = kPiL / (f * f) * std::pow(a2, 4 * n) *
                     std::pow(static_cast<ld>(kappa) / 2.0L, n) * std::pow(a2 + sl, n - 1) *
                     (1.0L + 2.0L * (sl + a2));
  return static_cast<double>(2.0L / (bracket * vol_g0 * factorial(n - 1)));
}

double volume_constant_general(int n) {
  require_n(n);
  return static_cast<double>(2.0L * std::pow(kPiL, 2 * n) / factorial(n - 1));
}

double effective_systolic_bound(double kappa, double s, int n, double vol_g0, double vol_g,
                                bool* flipped) {
  require_n(n);
  const ld lead = kahler_leading(kappa, s, n, vol_g0);
  if (lead == 0.0L) throw Error(ErrorCode::InvalidArgument, "vanishing Zoll polynomial");
  if (flipped) *flipped = lead < 0.0L;
  const ld vol = static_cast<ld>(volume_constant_general(n)) * (static_cast<ld>(vol_g) - vol_g0);
  return static_cast<double>(1.0L + vol / lead);
}

}  // namespace magsys
