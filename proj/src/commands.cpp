// Copyright 2026 The magsys-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "magsys/commands.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "magsys/dynamics.hpp"
#include "magsys/error.hpp"
#include "magsys/functionals.hpp"
#include "magsys/zollref.hpp"

namespace magsys {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

SearchOptions search_options(const ExperimentConfig& cfg) {
  SearchOptions so;
  so.grid_density = cfg.grid_density;
  so.find.tol = cfg.tol_orbit;
  so.find.max_iter = cfg.max_iter;
  so.find.integrator_tol = cfg.tol_integrator;
  so.find.samples = cfg.samples_per_orbit;
  so.workers = cfg.workers;
  return so;
}

}  // namespace

const char* to_string(Command c) {
  switch (c) {
    case Command::Orbit: return "orbit";
    case Command::Sweep: return "sweep";
    case Command::Systole: return "systole";
    case Command::Volume: return "volume";
    case Command::Zollpoly: return "zollpoly";
    case Command::Constants: return "constants";
  }
  return "unknown";
}

Command command_from_string(const std::string& name) {
  for (Command c : {Command::Orbit, Command::Sweep, Command::Systole, Command::Volume,
                    Command::Zollpoly, Command::Constants}) {
    if (name == to_string(c)) return c;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown subcommand '" + name + "'");
}

double reference_area(const ExperimentConfig& cfg) {
  const ModelSurface surf = ModelSurface::for_curvature(cfg.kappa, cfg.period_x, cfg.period_y);
  return surf.compact() ? surf.total_area() : 4.0 * std::numbers::pi / std::abs(cfg.kappa);
}

CommandResult run_command(Command command, const ParsedConfig& config, const ZollpolyRange& range) {
  CommandResult res;
  res.command = command;
  res.config = config;
  res.range = range;
  const ExperimentConfig& cfg = config.config;
  validate(cfg);

  switch (command) {
    case Command::Systole:
      res.runs = sweep(cfg, {cfg.perturbation.eps});
      break;
    case Command::Sweep:
      res.runs = sweep(cfg, cfg.eps_list.empty() ? std::vector<double>{cfg.perturbation.eps} : cfg.eps_list);
      break;
    case Command::Orbit: {
      const MagneticSystem sys = build_system(cfg);
      res.census = enumerate_orbits(sys, search_options(cfg));
      break;
    }
    case Command::Volume: {
      const MagneticSystem sys0 = make_model(cfg.kappa, cfg.strength, cfg.period_x, cfg.period_y);
      const MagneticSystem sys = build_system(cfg);
      res.volume = volume_report(sys0, sys, cfg.volume_samples, cfg.rng_seed, cfg.workers, cfg.tol_quad);
      break;
    }
    case Command::Zollpoly: {
      if (range.steps < 1 || !std::isfinite(range.a_min) || !std::isfinite(range.a_max) ||
          range.a_max < range.a_min) {
        throw Error(ErrorCode::ValidationError, "zollpoly range needs a_min <= a_max and steps >= 1");
      }
      const double vol0 = reference_area(cfg);
      const bool flat = cfg.kappa == 0.0;
      const CohomologyData coh = flat ? torus_bundle_pairings(cfg.strength, cfg.n) : CohomologyData{};
      for (int i = 0; i < range.steps; ++i) {
        ZollpolyRow row;
        row.A = range.steps == 1 ? range.a_min
                                 : range.a_min + (range.a_max - range.a_min) * i / (range.steps - 1);
        row.p_kahler = zoll_polynomial_kahler(cfg.kappa, cfg.strength, cfg.n, vol0, row.A);
        row.p_generic = flat ? zoll_polynomial_generic(coh, row.A) : kNaN;
        res.zollpoly.push_back(row);
      }
      break;
    }
    case Command::Constants: {
      ConstantsTable t;
      const ZollReference ref = zoll_reference(cfg.kappa, cfg.strength, cfg.n, reference_area(cfg));
      t.a1_squared = ref.a1_squared;
      t.a1 = std::sqrt(ref.a1_squared);
      t.reference_magnetic_length = ref.reference_magnetic_length;
      t.zoll_period = zoll_period(cfg.kappa, cfg.strength);
      t.zoll_circle_radius = zoll_circle_radius(cfg.kappa, cfg.strength);
      t.closed_form_flux = closed_form_flux(cfg.kappa, cfg.strength);
      t.vol_g0 = ref.vol_g0;
      t.k_tilde = cfg.kappa != 0.0 ? k_tilde(cfg.kappa, cfg.strength, cfg.n) : kNaN;
      t.inequality_C = cfg.kappa != 0.0 ? inequality_constant_C(cfg.kappa, cfg.strength, cfg.n, ref.vol_g0) : kNaN;
      t.volume_constant_surface = kSurfaceVolumeConstant;
      t.volume_constant_general = volume_constant_general(cfg.n);
      res.constants = t;
      break;
    }
  }
  return res;
}

int exit_code(const CommandResult& result) {
  bool failed = false;
  for (const SweepRun& run : result.runs) {
    if (!run.ok) return 1;
    failed = failed || !all_pass(run.report);
  }
  return failed ? 2 : 0;
}

}  // namespace magsys
