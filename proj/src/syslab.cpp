// Copyright 2026 The magsys-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "magsys/syslab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "magsys/functionals.hpp"
#include "magsys/parallel.hpp"
#include "magsys/volume.hpp"
#include "magsys/zollref.hpp"

namespace magsys {

namespace {

void invalid(const std::string& key, const std::string& why) {
  throw Error(ErrorCode::ValidationError, "key '" + key + "': " + why);
}

void positive(const std::string& key, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) invalid(key, "must be positive and finite");
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Skip: return "SKIP";
  }
  return "SKIP";
}

void validate(const ExperimentConfig& cfg) {
  if (!std::isfinite(cfg.kappa)) invalid("model.kappa", "must be finite");
  if (!std::isfinite(cfg.strength)) invalid("model.strength", "must be finite");
  if (!(cfg.strength * cfg.strength + cfg.kappa > 0.0))
    invalid("model.strength", "Zoll regime violated: s^2 + kappa <= 0");
  if (cfg.kappa <= 0.0 && !(cfg.strength > 0.0))
    invalid("model.strength", "must be positive when kappa <= 0");
  if (cfg.n < 1) invalid("model.n", "must be >= 1");
  positive("model.period_x", cfg.period_x);
  positive("model.period_y", cfg.period_y);
  positive("search.tol_orbit", cfg.tol_orbit);
  positive("search.tol_quad", cfg.tol_quad);
  positive("search.tol_integrator", cfg.tol_integrator);
  positive("search.equality_tol", cfg.equality_tol);
  positive("search.verdict_tol", cfg.verdict_tol);
  if (cfg.grid_density < 0) invalid("search.grid_density", "must be >= 0");
  if (cfg.max_iter < 1) invalid("search.max_iter", "must be >= 1");
  if (cfg.samples_per_orbit < 4 || cfg.samples_per_orbit % 2 != 0)
    invalid("search.samples_per_orbit", "must be an even number >= 4");
  if (cfg.volume_samples != 0 && cfg.volume_samples < 8)
    invalid("search.volume_samples", "must be 0 (disabled) or >= 8");
  if (!(cfg.perturbation.eps >= 0.0) || !std::isfinite(cfg.perturbation.eps))
    invalid("perturbation.eps", "must be finite and >= 0");
  if (!std::isfinite(cfg.perturbation.eta_eps)) invalid("perturbation.eta_eps", "must be finite");
  for (const double e : cfg.eps_list) {
    if (!(e >= 0.0) || !std::isfinite(e)) invalid("perturbation.eps_list", "entries must be >= 0");
  }
  if (cfg.format != "json" && cfg.format != "csv") invalid("output.format", "must be json or csv");

  const ModelSurface surface = ModelSurface::for_curvature(cfg.kappa, cfg.period_x, cfg.period_y);
  try {
    ScalarField::named(cfg.perturbation.field, cfg.perturbation.coefficients, surface);
  } catch (const Error& e) {
    invalid("perturbation.field", e.what());
  }
  try {
    OneFormField::named(cfg.perturbation.eta_field, cfg.perturbation.eta_coefficients, surface);
  } catch (const Error& e) {
    invalid("perturbation.eta_field", e.what());
  }
  const bool perturbs = cfg.perturbation.field != "none" &&
                        (cfg.perturbation.eps > 0.0 ||
                         std::any_of(cfg.eps_list.begin(), cfg.eps_list.end(),
                                     [](double e) { return e > 0.0; }));
  if (perturbs && cfg.normalize && !surface.compact())
    invalid("perturbation.normalize", "volume normalization needs a compact model");
}

MagneticSystem build_system(const ExperimentConfig& cfg, double eps) {
  MagneticSystem sys = make_model(cfg.kappa, cfg.strength, cfg.period_x, cfg.period_y);
  const ScalarField u =
      ScalarField::named(cfg.perturbation.field, cfg.perturbation.coefficients, sys.surface);
  if (!u.is_zero() && eps != 0.0) sys = conformal_perturb(sys, u, eps, cfg.normalize, cfg.tol_quad);
  const OneFormField eta =
      OneFormField::named(cfg.perturbation.eta_field, cfg.perturbation.eta_coefficients, sys.surface);
  if (!eta.is_zero() && cfg.perturbation.eta_eps != 0.0)
    sys = sigma_perturb(sys, eta, cfg.perturbation.eta_eps);
  return sys;
}

MagneticSystem build_system(const ExperimentConfig& cfg) {
  return build_system(cfg, cfg.perturbation.eps);
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  return run_experiment(cfg, cfg.perturbation.eps);
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, double eps) {
  validate(cfg);
  const MagneticSystem sys = build_system(cfg, eps);
  const MagneticSystem sys0 = make_model(cfg.kappa, cfg.strength, cfg.period_x, cfg.period_y);
  const ModelSurface& surf = sys.surface;

  ExperimentReport rep;
  rep.kappa = cfg.kappa;
  rep.strength = cfg.strength;
  rep.n = cfg.n;
  rep.eps = eps;
  rep.eta_eps = cfg.perturbation.eta_eps;
  rep.normalized = sys.volume_normalized;
  rep.grid_density = cfg.grid_density;
  rep.verdict_tol = cfg.verdict_tol;

  SearchOptions so;
  so.grid_density = cfg.grid_density;
  so.find.tol = cfg.tol_orbit;
  so.find.max_iter = cfg.max_iter;
  so.find.integrator_tol = cfg.tol_integrator;
  so.find.samples = cfg.samples_per_orbit;
  so.workers = cfg.workers;
  rep.period_window = so.find.period_window;
  rep.zoll_period = zoll_period(cfg.kappa, cfg.strength);

  OrbitCensus census = enumerate_orbits(sys, so);
  rep.seeds_tried = census.seeds_tried;
  rep.failures = std::move(census.failures);
  rep.reference = reference_length(cfg.kappa, cfg.strength);
  for (Orbit& o : census.orbits) {
    if (std::isnan(o.magnetic_length)) continue;
    OrbitSummary s;
    s.seed_id = o.seed_id;
    s.period = o.period;
    s.residual = o.residual;
    s.length = length(sys, o);
    s.flux = flux_through_cap(sys, o).value;
    s.magnetic_length = o.magnetic_length;
    s.action = s.magnetic_length - rep.reference;
    s.newton_steps = o.newton_steps;
    rep.summaries.push_back(s);
    rep.orbits.push_back(std::move(o));
  }
  if (rep.summaries.empty()) {
    std::ostringstream os;
    os << "no capped closed orbit among " << rep.seeds_tried << " seeds (eps = " << eps << ")";
    throw Error(ErrorCode::NoOrbitsFound, os.str());
  }
  rep.expected_min_orbits = surf.chart() == Chart::SphereAmbient ? 2 : 3;
  rep.census_complete = rep.summaries.size() >= rep.expected_min_orbits;

  rep.l_min = std::numeric_limits<double>::infinity();
  rep.l_max = -std::numeric_limits<double>::infinity();
  for (const auto& s : rep.summaries) {
    rep.l_min = std::min(rep.l_min, s.magnetic_length);
    rep.l_max = std::max(rep.l_max, s.magnetic_length);
    rep.max_action_spread = std::max(rep.max_action_spread, std::abs(s.action));
  }
  rep.slack_lower = rep.reference - rep.l_min;
  rep.slack_upper = rep.l_max - rep.reference;
  rep.zoll_flag = rep.max_action_spread < cfg.equality_tol;

  double defect = 0.0;
  if (surf.compact()) {
    rep.vol_g0 = surf.total_area();
    rep.vol_g = sys.metric_perturbed() ? riemannian_volume(sys, cfg.tol_quad) : rep.vol_g0;
    defect = sys.volume_normalized ? 0.0 : rep.vol_g - rep.vol_g0;
    rep.volume_functional = vol_closed_form(sys0, sys, cfg.tol_quad);
    if (cfg.volume_samples > 0) {
      const VolumeEstimate est =
          vol_quadrature_oracle(sys0, sys, cfg.volume_samples, cfg.rng_seed, cfg.workers);
      rep.volume_oracle = est.value;
      rep.volume_oracle_error = est.standard_error;
      rep.volume_oracle_samples = est.samples;
    }
  } else {
    // Reference closed quotient: genus 2, area 4 pi / |kappa|.
    rep.vol_g0_is_reference_quotient = true;
    rep.vol_g0 = 4.0 * std::numbers::pi / std::abs(cfg.kappa);
    defect = area_defect(sys, cfg.tol_quad);
    rep.vol_g = rep.vol_g0 + defect;
    rep.volume_functional = kSurfaceVolumeConstant * defect;
  }
  rep.volume_functional_general = vol_closed_form_general(cfg.n, defect);

  rep.p_min = zoll_polynomial_kahler(cfg.kappa, cfg.strength, cfg.n, rep.vol_g0, rep.l_min - rep.reference);
  rep.p_max = zoll_polynomial_kahler(cfg.kappa, cfg.strength, cfg.n, rep.vol_g0, rep.l_max - rep.reference);
  rep.ratio_power = std::pow(rep.l_min / rep.reference, 2 * cfg.n);
  rep.effective_bound = effective_systolic_bound(cfg.kappa, cfg.strength, cfg.n, rep.vol_g0,
                                                 rep.vol_g0 + defect, &rep.bound_flipped);
  if (cfg.kappa != 0.0) {
    rep.literal_C = inequality_constant_C(cfg.kappa, cfg.strength, cfg.n, rep.vol_g0);
    rep.literal_rhs = rep.literal_C * (rep.vol_g0 + defect) / rep.vol_g0;
  } else {
    rep.literal_C = std::numeric_limits<double>::quiet_NaN();
    double fact = 1.0;
    for (int k = 2; k <= cfg.n; ++k) fact *= k;
    double fact1 = 1.0;
    for (int k = 2; k <= cfg.n - 1; ++k) fact1 *= k;
    const double a2 = rep.reference / std::numbers::pi;
    rep.literal_rhs = 2.0 * fact / fact1 / (std::pow(a2, 4 * cfg.n) * std::numbers::pi) * defect;
  }
  rep.literal_holds = rep.ratio_power <= rep.literal_rhs;

  const double tol = cfg.verdict_tol;
  if (!sys.metric_perturbed() || sys.volume_normalized) {
    rep.local_systolic_normalized = rep.l_min <= rep.reference + tol ? Verdict::Pass : Verdict::Fail;
  }
  const double ratio_tol = 2.0 * cfg.n * tol / rep.reference;
  const bool full_ok = rep.bound_flipped ? rep.ratio_power >= rep.effective_bound - ratio_tol
                                         : rep.ratio_power <= rep.effective_bound + ratio_tol;
  rep.local_systolic_full = full_ok ? Verdict::Pass : Verdict::Fail;
  rep.two_sided = check_two_sided(rep);
  return rep;
}

Verdict check_two_sided(const ExperimentReport& r) {
  if (r.summaries.empty()) return Verdict::Skip;
  const double tol = r.verdict_tol;
  if (r.volume_functional_general == 0.0) {
    return r.l_min <= r.reference + tol && r.l_max >= r.reference - tol ? Verdict::Pass
                                                                         : Verdict::Fail;
  }
  // Tolerance in action units mapped through P.
  const double tp = std::abs(zoll_polynomial_kahler(r.kappa, r.strength, r.n, r.vol_g0, tol));
  const double vol = r.volume_functional_general;
  return r.p_min <= vol + tp && vol <= r.p_max + tp ? Verdict::Pass : Verdict::Fail;
}

bool all_pass(const ExperimentReport& r) {
  return r.local_systolic_normalized != Verdict::Fail && r.local_systolic_full != Verdict::Fail &&
         r.two_sided != Verdict::Fail;
}

std::vector<SweepRun> sweep(const ExperimentConfig& cfg, const std::vector<double>& eps_list) {
  std::vector<SweepRun> runs(eps_list.size());
  if (eps_list.empty()) return runs;
  const unsigned total = resolve_workers(cfg.workers);
  const unsigned outer = static_cast<unsigned>(std::min<std::size_t>(total, eps_list.size()));
  ExperimentConfig inner = cfg;
  inner.workers = std::max(1u, total / std::max(1u, outer));
  parallel_for(eps_list.size(), outer, [&](std::size_t i) {
    SweepRun& run = runs[i];
    run.eps = eps_list[i];
    try {
      run.report = run_experiment(inner, eps_list[i]);
      run.ok = true;
    } catch (const Error& e) {
      run.code = e.code();
      run.error = e.what();
    } catch (const std::exception& e) {
      run.code = ErrorCode::InvalidArgument;
      run.error = e.what();
    }
  });
  return runs;
}

}  // namespace magsys
