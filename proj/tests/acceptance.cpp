// Copyright 2026 The magsys-lab Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance report: one PASS/FAIL line per criterion, exit 1 if any fails.
// Expected values are computed here from elementary closed forms, never read
// back from the library under test.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "magsys/commands.hpp"
#include "magsys/dynamics.hpp"
#include "magsys/error.hpp"
#include "magsys/functionals.hpp"
#include "magsys/orbits.hpp"
#include "magsys/syslab.hpp"
#include "magsys/volume.hpp"
#include "magsys/zollref.hpp"

namespace {

using namespace magsys;

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records one comparison; the first failing comparison leads the detail line.
  void check(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail.str("");
      pass = false;
      detail << "FAILED " << what << "; ";
    } else if (pass) {
      detail << what << "; ";
    }
  }
  void near(const std::string& name, double got, double want, double tol) {
    std::ostringstream os;
    os.precision(10);
    os << name << " " << got << " vs " << want << " (tol " << tol << ")";
    check(std::abs(got - want) <= tol, os.str());
  }
};

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;  // <= 0: no runtime requirement
  std::function<void(Outcome&)> run;
};

MagneticSystem perturbed(double kappa, double s) {
  const MagneticSystem sys = make_model(kappa, s);
  if (kappa > 0) return conformal_perturb(sys, ScalarField::sphere_linear(Vec3{0.3, -0.2, 0.5}), 0.1, true);
  if (kappa < 0) return conformal_perturb(sys, ScalarField::named("hyperbolic_bump", {1.0}, sys.surface), 0.1, false);
  return conformal_perturb(sys, ScalarField::named("torus_cos_x", {1.0}, sys.surface), 0.1, false);
}

TangentState random_state(const MagneticSystem& sys, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.1, 3.0);
  std::uniform_real_distribution<double> a(0.0, 2 * kPi);
  const ChartPoint cp = sys.surface.chart_point(u(rng), a(rng));
  const double t = a(rng);
  const Vec3 dir = std::cos(t) * cp.d_q1 / norm(cp.d_q1) + std::sin(t) * cp.d_q2 / norm(cp.d_q2);
  return unit_state(sys, cp.position, dir);
}

double state_distance(const TangentState& a, const TangentState& b) {
  return std::max(norm(a.position - b.position), norm(a.velocity - b.velocity));
}

ExperimentConfig sphere_z_config() {
  ExperimentConfig c;
  c.kappa = 1.0;
  c.strength = 1.0;
  c.perturbation.field = "sphere_harmonic_z";
  c.perturbation.coefficients = {1.0};
  c.normalize = true;
  c.volume_samples = 20000;
  return c;
}

void zoll_positive(Outcome& out) {
  const MagneticSystem sys = make_model(1.0, 1.0);
  const Orbit o = find_closed_orbit(sys, latitude_seed(sys));
  out.near("period", o.period, 2 * kPi / std::sqrt(2.0), 1e-6);
  out.near("cap flux", flux_through_cap(sys, o, FluxMethod::CapQuadrature).value,
           2 * kPi * (1 - 1 / std::sqrt(2.0)), 1e-6);
  out.near("l_mag", magnetic_length(sys, o), 2 * kPi * (std::sqrt(2.0) - 1), 1e-6);
}

void zoll_flat(Outcome& out) {
  const MagneticSystem sys = make_model(0.0, 1.0);
  const Orbit o = find_closed_orbit(sys, latitude_seed(sys));
  // Samples are uniform in time on a closed orbit, so their mean is the centre.
  Vec3 c{0, 0, 0};
  const std::size_t n = o.samples.size() - 1;
  for (std::size_t i = 0; i < n; ++i) c = c + o.samples[i].position;
  c = c / static_cast<double>(n);
  double radius_err = 0.0;
  for (const TangentState& st : o.samples) radius_err = std::max(radius_err, std::abs(norm(st.position - c) - 1.0));
  out.near("radius error", radius_err, 0.0, 1e-8);
  out.near("length", length(sys, o), 2 * kPi, 1e-8);
  out.near("cap flux", flux_through_cap(sys, o, FluxMethod::CapQuadrature).value, kPi, 1e-8);
  out.near("l_mag", magnetic_length(sys, o), kPi, 1e-7);
}

void zoll_negative(Outcome& out) {
  const MagneticSystem sys = make_model(-1.0, 2.0);
  const Orbit o = find_closed_orbit(sys, latitude_seed(sys));
  // s times the hyperbolic disk area 2 pi (cosh r - 1), with tanh r = 1/2.
  const double disk_flux = 2.0 * 2 * kPi * (2 / std::sqrt(3.0) - 1);
  const double cap = flux_through_cap(sys, o, FluxMethod::CapQuadrature).value;
  out.near("cap flux vs closed form", cap, closed_form_flux(-1.0, 2.0), 1e-8);
  out.near("cap flux vs disk area", cap, disk_flux, 1e-8);
  out.near("l_mag vs 2(2-sqrt3)pi", magnetic_length(sys, o), 2 * (2 - std::sqrt(3.0)) * kPi, 1e-6);
}

void kappa_continuity(Outcome& out) {
  for (double s : {1.0, 2.0, 4.0}) {
    for (double k : {1e-3, -1e-3}) {
      std::ostringstream name;
      name << "L(" << k << "," << s << ")";
      out.near(name.str(), reference_length(k, s), kPi / s, 1e-2);
    }
  }
}

void equality_case(Outcome& out) {
  for (const auto& [kappa, s] : {std::pair{1.0, 1.0}, std::pair{0.0, 1.0}, std::pair{-1.0, 2.0}}) {
    ExperimentConfig c;
    c.kappa = kappa;
    c.strength = s;
    c.volume_samples = 1000;
    const ExperimentReport r = run_experiment(c, 0.0);
    std::ostringstream name;
    name << "kappa=" << kappa;
    out.near(name.str() + " slack_lower", r.slack_lower, 0.0, 1e-5);
    out.near(name.str() + " slack_upper", r.slack_upper, 0.0, 1e-5);
    out.check(r.zoll_flag, name.str() + " zoll_flag");
  }
}

void strict_case(Outcome& out) {
  const double ref = 2 * kPi * (std::sqrt(2.0) - 1);
  const std::vector<SweepRun> runs = sweep(sphere_z_config(), {0.01, 0.05});
  for (const SweepRun& run : runs) {
    std::ostringstream name;
    name << "eps=" << run.eps;
    out.check(run.ok, name.str() + " ran");
    if (!run.ok) continue;
    const ExperimentReport& r = run.report;
    out.check(r.summaries.size() >= 2, name.str() + " orbits=" + std::to_string(r.summaries.size()) + ">=2");
    std::ostringstream lo, hi;
    lo.precision(8);
    hi.precision(8);
    lo << name.str() << " l_min " << r.l_min << " <= ref+1e-4";
    hi << name.str() << " l_max " << r.l_max << " >= ref-1e-4";
    out.check(r.l_min <= ref + 1e-4, lo.str());
    out.check(r.l_max >= ref - 1e-4, hi.str());
  }
  if (runs.size() == 2 && runs[1].ok) {
    std::ostringstream os;
    os << "slack at 0.05 " << runs[1].report.slack_lower << ", " << runs[1].report.slack_upper << " > 0";
    out.check(runs[1].report.slack_lower > 0 && runs[1].report.slack_upper > 0, os.str());
  }
}

void volume_identity(Outcome& out) {
  const MagneticSystem sys0 = make_model(0.0, 1.0);
  const ScalarField u = ScalarField::named("torus_cos_x", {1.0}, sys0.surface);
  const MagneticSystem sys = conformal_perturb(sys0, u, 0.1, false);
  // pi times the area defect (2 pi)^2 (I0(0.2) - 1).
  const double exact = kPi * 4 * kPi * kPi * (std::cyl_bessel_i(0.0, 0.2) - 1.0);
  out.near("closed form", vol_closed_form(sys0, sys), exact, 1e-9 * exact);
  const VolumeEstimate est = vol_quadrature_oracle(sys0, sys, 1000000, 1, 0);
  out.near("oracle (3 sigma)", est.value, exact, 3 * est.standard_error);
  out.near("oracle (1%)", est.value, exact, 0.01 * exact);
  const VolumeEstimate norm_est = vol_quadrature_oracle(sys0, conformal_perturb(sys0, u, 0.1, true), 1000000, 1, 0);
  out.near("normalized oracle", norm_est.value, 0.0, 3 * norm_est.standard_error);
}

void zoll_polynomial(Outcome& out) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> any(-5.0, 5.0);
  std::uniform_real_distribution<double> pos(1e-3, 10.0);
  int bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    CohomologyData coh;
    const int m = 1 + trial % 5;
    coh.dim_M = 2 * m;
    coh.pairings.push_back(pos(rng));
    for (int k = 1; k <= m; ++k) coh.pairings.push_back(any(rng));
    if (zoll_polynomial_generic(coh, 0.0) != 0.0 || !(zoll_polynomial_generic_derivative(coh, 0.0) > 0.0)) ++bad;
  }
  out.check(bad == 0, "P(0)=0 and P'(0)>0 on 1000 random cases (" + std::to_string(bad) + " bad)");
  for (const auto& [kappa, s] : {std::pair{1.0, 1.0}, std::pair{-1.0, 2.0}}) {
    out.check(zoll_polynomial_kahler(kappa, s, 1, 4 * kPi, 0.0) == 0.0, "Kaehler P(0)=0");
  }
  double worst = 0.0;
  for (double s : {0.5, 1.0, 2.0}) {
    const CohomologyData coh = torus_bundle_pairings(s, 1);
    for (double A : {-0.5, -0.1, 0.0, 0.1, 0.7, 1.5}) {
      const double generic = zoll_polynomial_generic(coh, A);
      worst = std::max(worst, std::abs(zoll_polynomial_kahler(0.0, s, 1, 4 * kPi * kPi, A) - generic) /
                                  std::max(1.0, std::abs(generic)));
    }
  }
  out.near("Kaehler vs generic on bundle pairings", worst, 0.0, 1e-10);
}

void property_suites(Outcome& out) {
  std::mt19937_64 rng(2026);
  const double tol = 1e-10;
  const std::vector<MagneticSystem> systems = {perturbed(1.0, 1.0), perturbed(0.0, 1.0), perturbed(-1.0, 2.0)};
  double drift = 0.0;
  for (const MagneticSystem& sys : systems) {
    for (int k = 0; k < 100; ++k) drift = std::max(drift, flow(sys, random_state(sys, rng), 3.0, tol).speed_drift);
  }
  out.near("speed drift (300 trajectories)", drift, 0.0, 10 * tol);

  double reversal = 0.0;
  for (const MagneticSystem& sys : systems) {
    MagneticSystem reversed = sys;
    reversed.strength = -sys.strength;
    for (int k = 0; k < 5; ++k) {
      const TangentState x = random_state(sys, rng);
      const TangentState y = flow(sys, x, 2.5, 1e-12).states.back();
      const TangentState back = flow(reversed, TangentState{y.position, -y.velocity}, 2.5, 1e-12).states.back();
      reversal = std::max(reversal, state_distance(TangentState{back.position, -back.velocity}, x));
    }
  }
  out.near("time reversal", reversal, 0.0, 1e-8);

  const MagneticSystem sphere0 = make_model(1.0, 1.0);
  const MagneticSystem sphere = conformal_perturb(sphere0, ScalarField::sphere_linear(Vec3{0.1, 0.3, 0.6}), 0.04, true);
  const Mat3 R = rotation(Vec3{1, 2, 3}, 0.9);
  const MagneticSystem rotated = rotate_system(sphere, R);
  const std::vector<TangentState> seeds = seed_grid(sphere0, 4);
  double rot = 0.0;
  int compared = 0;
  for (std::size_t i = 0; i < seeds.size(); i += 3) {
    try {
      const Orbit a = find_closed_orbit(sphere, seeds[i]);
      const Orbit b = find_closed_orbit(rotated, rotate_state(seeds[i], R));
      rot = std::max(rot, std::abs(magnetic_length(sphere, a) - magnetic_length(rotated, b)));
      ++compared;
    } catch (const Error&) {
    }
  }
  out.check(compared >= 3, "rotation pairs compared " + std::to_string(compared));
  out.near("isometry invariance of l_mag", rot, 0.0, 1e-9);

  const MagneticSystem bumped =
      conformal_perturb(sphere0, ScalarField::named("sphere_harmonic_z", {1.0}, sphere0.surface), 0.01, true);
  const SearchOptions opt;
  const OrbitCensus census = enumerate_orbits(bumped, opt);
  std::vector<Orbit> doubled = census.orbits;
  doubled.insert(doubled.end(), census.orbits.begin(), census.orbits.end());
  const std::vector<Orbit> once = deduplicate(bumped, census.orbits, opt.dedup_distance);
  const std::vector<Orbit> twice = deduplicate(bumped, doubled, opt.dedup_distance);
  bool same = once.size() == census.orbits.size() && twice.size() == census.orbits.size();
  for (std::size_t i = 0; same && i < once.size(); ++i) same = once[i].seed_id == census.orbits[i].seed_id;
  out.check(same, "dedup idempotent on " + std::to_string(census.orbits.size()) + " orbits");

  const ParsedConfig pc = parse_config_string(
      "[model]\nkappa = 1\nstrength = 1\n[perturbation]\nfield = sphere_harmonic_z\ncoefficients = 1\n"
      "eps_list = 0.02, 0.04\n[search]\nvolume_samples = 20000\nrng_seed = 99\n",
      "acceptance.cfg");
  ParsedConfig pc_workers = pc;
  pc_workers.config.workers = 1;
  bool identical = true;
  bool worker_invariant = true;
  std::size_t files = 0;
  for (const char* format : {"json", "csv"}) {
    const auto a = render_files(run_command(Command::Sweep, pc), format);
    const auto b = render_files(run_command(Command::Sweep, pc), format);
    const auto w = render_files(run_command(Command::Sweep, pc_workers), format);
    identical = identical && a == b;
    // metadata.json echoes the worker count; every other file must not depend on it.
    worker_invariant = worker_invariant && a.size() == w.size();
    for (std::size_t i = 0; worker_invariant && i < a.size(); ++i) {
      worker_invariant = a[i].first == w[i].first && (a[i].first == "metadata.json" || a[i].second == w[i].second);
    }
    files += a.size();
  }
  out.check(worker_invariant, "reports independent of the worker count");
  out.check(identical, "byte-identical reports under a fixed seed (" + std::to_string(files) + " files)");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "Zoll constants, kappa>0", 1.0, zoll_positive},
      {2, "Zoll constants, kappa=0", 1.0, zoll_flat},
      {3, "Zoll constants, kappa<0", 5.0, zoll_negative},
      {4, "kappa->0 continuity", 0.0, kappa_continuity},
      {5, "local systolic inequality, equality case", 0.0, equality_case},
      {6, "local systolic inequality, strict case", 120.0, strict_case},
      {7, "volume identity", 60.0, volume_identity},
      {8, "Zoll polynomial", 0.0, zoll_polynomial},
      {9, "property suites", 0.0, property_suites},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit_s > 0) {
      std::ostringstream os;
      os << "runtime " << secs << " s < " << c.time_limit_s << " s";
      out.check(secs < c.time_limit_s, os.str());
    }
    failed += !out.pass;
    std::printf("%s [%d] %s (%.2f s): %s\n", out.pass ? "PASS" : "FAIL", c.id, c.name, secs,
                out.detail.str().c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
