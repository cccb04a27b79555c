// Copyright 2026 The magsys-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "magsys/syslab.hpp"

namespace magsys {

/// A validated config plus where each value came from.
struct ParsedConfig {
  ExperimentConfig config;
  std::string source;  ///< file path, or the name given to parse_config_string
  /// (section.key, "file:line" | "default" | "flag") in schema order.
  std::vector<std::pair<std::string, std::string>> provenance;
};

/// Parses the sectioned `key = value` format:
///
///   [model]         kappa, strength, n, period_x, period_y
///   [perturbation]  field, coefficients, eps, eps_list, normalize,
///                   eta_field, eta_coefficients, eta_eps
///   [search]        grid_density, tol_orbit, tol_quad, tol_integrator,
///                   max_iter, samples_per_orbit, volume_samples, rng_seed,
///                   workers, equality_tol, verdict_tol
///   [output]        format, write_orbits
///
/// `#` starts a comment; lists are comma or space separated. model.kappa and
/// model.strength are required. Throws ParseError (with the line number) on
/// malformed lines, duplicate keys or bad values, ValidationError naming the
/// key for unknown keys or failed validation, IoError if the file is unreadable.
ParsedConfig parse_config(const std::string& path);
ParsedConfig parse_config_string(const std::string& text, const std::string& source = "<string>");

/// Marks a key as overridden on the command line.
void mark_flag(ParsedConfig& pc, const std::string& key);

}  // namespace magsys
