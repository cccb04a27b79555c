// Copyright 2026 The magsys-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "magsys/orbits.hpp"

namespace magsys {

struct PerturbationSpec {
  std::string field = "none";
  std::vector<double> coefficients;
  double eps = 0.0;
  std::string eta_field = "none";
  std::vector<double> eta_coefficients;
  double eta_eps = 0.0;
};

struct ExperimentConfig {
  double kappa = 1.0;
  double strength = 1.0;
  int n = 1;
  double period_x = 2.0 * std::numbers::pi;
  double period_y = 2.0 * std::numbers::pi;
  PerturbationSpec perturbation;
  bool normalize = true;
  int grid_density = 6;
  double tol_orbit = 1e-9;
  double tol_quad = 1e-8;
  double tol_integrator = 1e-12;
  int max_iter = 25;
  std::size_t samples_per_orbit = 256;
  std::size_t volume_samples = 1000000;
  std::uint64_t rng_seed = 1;
  unsigned workers = 0;
  double equality_tol = 1e-5;
  double verdict_tol = 1e-5;
  std::vector<double> eps_list;
  std::string format = "json";
  bool write_orbits = true;
};

/// Throws ValidationError naming the offending key.
void validate(const ExperimentConfig& cfg);

/// The perturbed system of a config, with `eps` replacing perturbation.eps.
MagneticSystem build_system(const ExperimentConfig& cfg, double eps);
MagneticSystem build_system(const ExperimentConfig& cfg);

enum class Verdict { Pass, Fail, Skip };
const char* to_string(Verdict v);

struct OrbitSummary {
  std::size_t seed_id = 0;
  double period = 0.0;
  double residual = 0.0;
  double length = 0.0;
  double flux = 0.0;
  double magnetic_length = 0.0;
  double action = 0.0;
  int newton_steps = 0;
};

struct ExperimentReport {
  double kappa = 0.0;
  double strength = 0.0;
  int n = 1;
  double eps = 0.0;
  double eta_eps = 0.0;
  bool normalized = false;
  int grid_density = 0;
  double period_window = 0.5;
  double zoll_period = 0.0;

  std::vector<Orbit> orbits;
  std::vector<OrbitSummary> summaries;
  std::vector<SeedFailure> failures;
  std::size_t seeds_tried = 0;
  std::size_t expected_min_orbits = 0;
  bool census_complete = false;

  double reference = 0.0;  ///< pi a^2(1)
  double l_min = 0.0;
  double l_max = 0.0;
  double slack_lower = 0.0;  ///< reference - l_min
  double slack_upper = 0.0;  ///< l_max - reference
  double max_action_spread = 0.0;
  bool zoll_flag = false;

  double vol_g = 0.0;
  double vol_g0 = 0.0;
  bool vol_g0_is_reference_quotient = false;  ///< hyperbolic model: genus-2 quotient area
  double volume_functional = 0.0;             ///< pi (vol_g - vol_g0)
  double volume_functional_general = 0.0;     ///< 2 pi^(2n)/(n-1)! (vol_g - vol_g0)
  double volume_oracle = 0.0;
  double volume_oracle_error = 0.0;
  std::size_t volume_oracle_samples = 0;

  double p_min = 0.0;  ///< P(l_min - reference)
  double p_max = 0.0;  ///< P(l_max - reference)
  double ratio_power = 0.0;       ///< (l_min / reference)^(2n)
  double effective_bound = 0.0;   ///< bound on ratio_power from P(inf A) <= Vol
  bool bound_flipped = false;
  double literal_C = 0.0;         ///< NaN on the flat model
  double literal_rhs = 0.0;       ///< literal_C vol_g / vol_g0 (flat: printed kappa = 0 form)
  bool literal_holds = false;

  Verdict local_systolic_normalized = Verdict::Skip;
  Verdict local_systolic_full = Verdict::Skip;
  Verdict two_sided = Verdict::Skip;
  double verdict_tol = 0.0;
};

/// Full pipeline for cfg.perturbation.eps. Throws NoOrbitsFound when the
/// census has no orbit with a capping disk.
ExperimentReport run_experiment(const ExperimentConfig& cfg);
ExperimentReport run_experiment(const ExperimentConfig& cfg, double eps);

/// P(l_min - ref) <= Vol <= P(l_max - ref); with Vol = 0 this is the sandwich
/// l_min <= ref <= l_max, each side within the verdict tolerance.
Verdict check_two_sided(const ExperimentReport& report);

/// Pass unless any verdict fails.
bool all_pass(const ExperimentReport& report);

struct SweepRun {
  double eps = 0.0;
  bool ok = false;
  ExperimentReport report;
  ErrorCode code = ErrorCode::InvalidArgument;
  std::string error;
};

/// Independent runs per eps in parallel; results in input order.
std::vector<SweepRun> sweep(const ExperimentConfig& cfg, const std::vector<double>& eps_list);

}  // namespace magsys
