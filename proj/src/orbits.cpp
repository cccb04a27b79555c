// Copyright 2026 The magsys-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "magsys/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "magsys/functionals.hpp"
#include "magsys/parallel.hpp"

namespace magsys {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_angle(double x) { return std::remainder(x, 2.0 * kPi); }

double state_gap(const TangentState& a, const TangentState& b) {
  return std::hypot(norm(a.position - b.position), norm(a.velocity - b.velocity));
}

// Root of S(single_step(prev, h)) in (0, hi], bracketed by s_lo < 0 <= s_hi.
ReturnResult locate_crossing(const MagneticSystem& sys, const SectionSpec& sec,
                             const TangentState& prev, double t_prev, double hi) {
  double lo = 0.0;
  double h = hi;
  TangentState st = single_step(sys, prev, h);
  double f = section_value(sys, sec, st.position);
  const double scale = std::isfinite(sys.surface.radius()) ? sys.surface.radius() : 1.0;
  for (int it = 0; it < 80; ++it) {
    if (std::abs(f) <= 1e-15 * scale || hi - lo <= 1e-15 * std::max(1.0, hi)) break;
    if (f < 0.0) lo = h; else hi = h;
    const double rate = sys.surface.inner(st.velocity, sec.normal);
    double next = rate > 0.0 ? h - f / rate : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    h = next;
    st = single_step(sys, prev, h);
    f = section_value(sys, sec, st.position);
  }
  return {st, t_prev + h};
}

double point_segment(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = dot(ab, ab);
  const double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
  return norm(p - (a + t * ab));
}

double directed_hausdorff(const std::vector<Vec3>& from, const std::vector<Vec3>& to) {
  double worst = 0.0;
  for (const Vec3& p : from) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j + 1 < to.size(); ++j) {
      best = std::min(best, point_segment(p, to[j], to[j + 1]));
    }
    if (to.size() == 1) best = norm(p - to[0]);
    worst = std::max(worst, best);
  }
  return worst;
}

Vec3 centroid(const Orbit& o) {
  Vec3 c;
  const std::size_t n = o.samples.size() > 1 ? o.samples.size() - 1 : o.samples.size();
  for (std::size_t i = 0; i < n; ++i) c += o.samples[i].position;
  return n > 0 ? c / static_cast<double>(n) : c;
}

// Lattice translation moving b's centroid closest to a's (zero off the torus).
Vec3 lattice_shift(const MagneticSystem& sys, const Vec3& ca, const Vec3& cb) {
  if (sys.surface.chart() != Chart::FlatTorus) return {};
  const auto per = sys.surface.torus_periods();
  return {per[0] * std::round((ca.x - cb.x) / per[0]), per[1] * std::round((ca.y - cb.y) / per[1]), 0.0};
}

std::vector<Vec3> positions(const Orbit& o, const Vec3& shift) {
  std::vector<Vec3> out;
  out.reserve(o.samples.size());
  for (const auto& s : o.samples) out.push_back(s.position + shift);
  return out;
}

}  // namespace

SectionSpec make_section(const MagneticSystem& sys, const TangentState& seed) {
  const ModelSurface& s = sys.surface;
  SectionSpec sec;
  sec.base = seed.position;
  const double n0 = std::sqrt(s.inner(seed.velocity, seed.velocity));
  if (!(n0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "seed velocity vanishes");
  sec.normal = seed.velocity / n0;
  sec.along = s.rotate90(sec.base, sec.normal);
  sec.zoll_period = zoll_period(s.kappa(), sys.strength);
  return sec;
}

double section_value(const MagneticSystem& sys, const SectionSpec& sec, const Vec3& p) {
  return sys.surface.inner(p - sec.base, sec.normal);
}

std::array<double, 2> section_coords(const MagneticSystem& sys, const SectionSpec& sec,
                                     const TangentState& st) {
  const ModelSurface& s = sys.surface;
  const Vec3& p = st.position;
  double a = 0.0;
  switch (s.chart()) {
    case Chart::SphereAmbient:
      a = s.radius() * std::atan2(s.inner(p, sec.along), s.inner(p, sec.base) / s.radius());
      break;
    case Chart::HyperbolicPolar: a = s.radius() * std::asinh(s.inner(p, sec.along) / s.radius()); break;
    case Chart::FlatTorus: a = s.inner(p - sec.base, sec.along); break;
  }
  const Vec3 t = s.exp_tangent(sec.base, sec.along, a);
  const double beta = std::atan2(s.inner(st.velocity, t), s.inner(st.velocity, sec.normal));
  return {a, beta};
}

TangentState section_state(const MagneticSystem& sys, const SectionSpec& sec, double a,
                           double beta) {
  const ModelSurface& s = sys.surface;
  const Vec3 p = s.exp_point(sec.base, sec.along, a);
  const Vec3 t = s.exp_tangent(sec.base, sec.along, a);
  return unit_state(sys, p, std::cos(beta) * sec.normal + std::sin(beta) * t);
}

ReturnResult return_map(const MagneticSystem& sys, const SectionSpec& sec,
                        const TangentState& state, double tol) {
  const ModelSurface& s = sys.surface;
  const double scale = std::isfinite(s.radius()) ? s.radius() : 1.0;
  if (std::abs(section_value(sys, sec, state.position)) > 1e-8 * scale)
    throw Error(ErrorCode::InvalidArgument, "state is not on the section");
  const double v0 = std::sqrt(s.inner(state.velocity, state.velocity));
  const double cos_angle = s.inner(state.velocity, sec.normal) / v0;
  if (!(cos_angle > 0.05)) {
    std::ostringstream os;
    os << "flow meets the section at cos(angle) = " << cos_angle;
    throw Error(ErrorCode::TangencyError, os.str());
  }
  const double period = sec.zoll_period;
  FlowStepper stepper(sys, state, tol);
  TangentState prev = state;
  double prev_value = 0.0;
  while (true) {
    const double t_prev = stepper.time();
    stepper.step(period / 16.0);
    const TangentState cur = stepper.state();
    const double value = section_value(sys, sec, cur.position);
    if (stepper.time() > 0.5 * period && prev_value < 0.0 && value >= 0.0) {
      return locate_crossing(sys, sec, prev, t_prev, stepper.last_step());
    }
    if (stepper.time() > 2.0 * period) {
      std::ostringstream os;
      os << "no return to the section within " << 2.0 * period;
      throw Error(ErrorCode::NoReturn, os.str());
    }
    prev = cur;
    prev_value = value;
  }
}

double seed_defect(const MagneticSystem& sys, const TangentState& seed, double tol) {
  const SectionSpec sec = make_section(sys, seed);
  const ReturnResult r = return_map(sys, sec, seed, tol);
  const auto c = section_coords(sys, sec, r.state);
  return std::hypot(c[0], wrap_angle(c[1]));
}

Orbit find_closed_orbit(const MagneticSystem& sys, const TangentState& seed,
                        const FindOptions& opt, std::size_t seed_id) {
  if (!(opt.tol > 0.0) || opt.max_iter < 0 || opt.samples < 2)
    throw Error(ErrorCode::InvalidArgument, "invalid orbit search options");
  const SectionSpec sec = make_section(sys, seed);
  const double period = sec.zoll_period;

  struct Eval {
    std::array<double, 2> g;
    double norm;
    ReturnResult ret;
  };
  const auto evaluate = [&](const std::array<double, 2>& x) {
    ReturnResult r;
    try {
      r = return_map(sys, sec, section_state(sys, sec, x[0], x[1]), opt.integrator_tol);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::StepFailure) throw;
      throw Error(ErrorCode::DivergedFromFamily, std::string("return map failed: ") + e.what());
    }
    if (std::abs(r.time / period - 1.0) > opt.period_window) {
      std::ostringstream os;
      os << "return time " << r.time << " outside the short-loop window around " << period;
      throw Error(ErrorCode::DivergedFromFamily, os.str());
    }
    const auto c = section_coords(sys, sec, r.state);
    Eval e{{c[0] - x[0], wrap_angle(c[1] - x[1])}, 0.0, r};
    e.norm = std::hypot(e.g[0], e.g[1]);
    return e;
  };

  std::array<double, 2> x{0.0, 0.0};
  Eval cur = evaluate(x);
  if (cur.norm > opt.family_gate) {
    std::ostringstream os;
    os << "seed defect " << cur.norm << " exceeds the family gate " << opt.family_gate;
    throw Error(ErrorCode::DivergedFromFamily, os.str());
  }
  int steps = 0;
  while (cur.norm > opt.tol) {
    if (steps >= opt.max_iter) {
      std::ostringstream os;
      os << "residual " << cur.norm << " after " << steps << " Newton steps";
      throw Error(ErrorCode::NoConvergence, os.str());
    }
    double jac[2][2];
    for (int j = 0; j < 2; ++j) {
      std::array<double, 2> xp = x;
      xp[j] += opt.fd_step;
      const Eval ep = evaluate(xp);
      jac[0][j] = (ep.g[0] - cur.g[0]) / opt.fd_step;
      jac[1][j] = (ep.g[1] - cur.g[1]) / opt.fd_step;
    }
    // Regularized normal equations: plain Newton when the Jacobian is well
    // conditioned, the minimum-norm step along degenerate orbit families.
    const double m00 = jac[0][0] * jac[0][0] + jac[1][0] * jac[1][0];
    const double m01 = jac[0][0] * jac[0][1] + jac[1][0] * jac[1][1];
    const double m11 = jac[0][1] * jac[0][1] + jac[1][1] * jac[1][1];
    const double mu = 1e-12 * (m00 + m11);
    const double r0 = jac[0][0] * cur.g[0] + jac[1][0] * cur.g[1];
    const double r1 = jac[0][1] * cur.g[0] + jac[1][1] * cur.g[1];
    const double det = (m00 + mu) * (m11 + mu) - m01 * m01;
    if (!(det > 0.0) || !std::isfinite(det))
      throw Error(ErrorCode::NoConvergence, "singular return-map Jacobian");
    const std::array<double, 2> delta{-((m11 + mu) * r0 - m01 * r1) / det,
                                      -(-m01 * r0 + (m00 + mu) * r1) / det};
    double lambda = 1.0;
    bool accepted = false;
    for (int k = 0; k < 40 && !accepted; ++k, lambda *= 0.8) {
      const std::array<double, 2> xn{x[0] + lambda * delta[0], x[1] + lambda * delta[1]};
      if (std::hypot(xn[0], xn[1]) > 4.0 * opt.family_gate)
        throw Error(ErrorCode::DivergedFromFamily, "Newton iterate left the seed neighbourhood");
      const Eval en = evaluate(xn);
      if (en.norm < cur.norm) {
        x = xn;
        cur = en;
        accepted = true;
      }
    }
    if (!accepted) throw Error(ErrorCode::NoConvergence, "damped Newton step made no progress");
    ++steps;
  }

  Orbit orbit;
  orbit.period = cur.ret.time;
  orbit.seed_id = seed_id;
  orbit.newton_steps = steps;
  std::vector<double> times(opt.samples + 1);
  for (std::size_t k = 0; k <= opt.samples; ++k) {
    times[k] = orbit.period * static_cast<double>(k) / static_cast<double>(opt.samples);
  }
  times.back() = orbit.period;
  const TangentState start = section_state(sys, sec, x[0], x[1]);
  Trajectory tr = flow_at(sys, start, times, opt.integrator_tol);
  orbit.samples = std::move(tr.states);
  orbit.times = std::move(tr.times);
  orbit.residual = std::max(cur.norm, state_gap(orbit.samples.front(), orbit.samples.back()));
  return orbit;
}

std::vector<TangentState> seed_grid(const MagneticSystem& sys, int density) {
  std::vector<TangentState> seeds;
  if (density <= 0) return seeds;
  const ModelSurface& s = sys.surface;
  const int n = density;
  const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Vec3 center;
      switch (s.chart()) {
        case Chart::SphereAmbient:
          center = s.chart_point(kPi * i / denom, 2.0 * kPi * j / n).position;
          break;
        case Chart::HyperbolicPolar:
          center = s.chart_point(i / denom, 2.0 * kPi * j / n).position;
          break;
        case Chart::FlatTorus: {
          const auto per = s.torus_periods();
          center = {per[0] * (i + 0.5) / n, per[1] * (j + 0.5) / n, 0.0};
          break;
        }
      }
      seeds.push_back(circle_seed(sys, center, 0.0));
    }
  }
  return seeds;
}

double hausdorff_distance(const MagneticSystem& sys, const Orbit& a, const Orbit& b) {
  const Vec3 shift = lattice_shift(sys, centroid(a), centroid(b));
  const auto pa = positions(a, {});
  const auto pb = positions(b, shift);
  return std::max(directed_hausdorff(pa, pb), directed_hausdorff(pb, pa));
}

std::vector<Orbit> deduplicate(const MagneticSystem& sys, std::vector<Orbit> candidates, double distance) {
  std::vector<Orbit> kept_orbits;
  for (Orbit& cand : candidates) {
    const Vec3 cc = centroid(cand);
    bool duplicate = false;
    for (const Orbit& kept : kept_orbits) {
      const Vec3 ck = centroid(kept);
      if (norm(ck - (cc + lattice_shift(sys, ck, cc))) > 1e-2) continue;
      if (hausdorff_distance(sys, kept, cand) < distance) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) kept_orbits.push_back(std::move(cand));
  }
  std::stable_sort(kept_orbits.begin(), kept_orbits.end(), [](const Orbit& x, const Orbit& y) {
    const bool xn = std::isnan(x.magnetic_length), yn = std::isnan(y.magnetic_length);
    if (xn != yn) return yn;
    if (!xn && x.magnetic_length != y.magnetic_length) return x.magnetic_length < y.magnetic_length;
    return x.seed_id < y.seed_id;
  });
  return kept_orbits;
}

OrbitCensus enumerate_orbits(const MagneticSystem& sys, const SearchOptions& opt) {
  OrbitCensus census;
  const std::vector<TangentState> seeds = seed_grid(sys, opt.grid_density);
  census.seeds_tried = seeds.size();
  std::vector<std::optional<Orbit>> found(seeds.size());
  std::vector<std::optional<SeedFailure>> failed(seeds.size());
  parallel_for(seeds.size(), opt.workers, [&](std::size_t i) {
    try {
      Orbit o = find_closed_orbit(sys, seeds[i], opt.find, i);
      try {
        o.magnetic_length = magnetic_length(sys, o);
      } catch (const Error&) {
        o.magnetic_length = std::numeric_limits<double>::quiet_NaN();
      }
      found[i] = std::move(o);
    } catch (const Error& e) {
      failed[i] = SeedFailure{i, e.code(), e.what()};
    } catch (const std::exception& e) {
      failed[i] = SeedFailure{i, ErrorCode::InvalidArgument, e.what()};
    }
  });

  std::vector<Orbit> candidates;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (failed[i]) census.failures.push_back(*failed[i]);
    if (found[i]) candidates.push_back(std::move(*found[i]));
  }
  census.orbits = deduplicate(sys, std::move(candidates), opt.dedup_distance);
  return census;
}

}  // namespace magsys
