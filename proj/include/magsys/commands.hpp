// Copyright 2026 The magsys-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "magsys/config.hpp"
#include "magsys/volume.hpp"

namespace magsys {

enum class Command { Orbit, Sweep, Systole, Volume, Zollpoly, Constants };

const char* to_string(Command c);
/// Throws InvalidArgument for an unknown name.
Command command_from_string(const std::string& name);

struct ZollpolyRange {
  double a_min = -1.0;
  double a_max = 1.0;
  int steps = 21;
};

struct ZollpolyRow {
  double A = 0.0;
  double p_kahler = 0.0;
  double p_generic = 0.0;  ///< NaN unless the flat model's bundle pairings apply
};

struct ConstantsTable {
  double a1_squared = 0.0;
  double a1 = 0.0;
  double reference_magnetic_length = 0.0;
  double zoll_period = 0.0;
  double zoll_circle_radius = 0.0;
  double closed_form_flux = 0.0;
  double vol_g0 = 0.0;
  double k_tilde = 0.0;          ///< NaN on the flat model
  double inequality_C = 0.0;     ///< NaN on the flat model
  double volume_constant_surface = 0.0;
  double volume_constant_general = 0.0;
};

/// Output of one CLI subcommand; everything needed to render its files.
struct CommandResult {
  Command command = Command::Systole;
  ParsedConfig config;
  std::vector<SweepRun> runs;          ///< systole (one run) and sweep
  std::optional<OrbitCensus> census;   ///< orbit
  std::optional<VolumeReport> volume;  ///< volume
  std::vector<ZollpolyRow> zollpoly;
  std::optional<ConstantsTable> constants;
  ZollpolyRange range;
};

/// g0-area of the model, or the genus-2 reference quotient area 4 pi/|kappa|
/// on the hyperbolic model.
double reference_area(const ExperimentConfig& cfg);

/// Errors inside sweep runs are recorded per run; all other errors propagate.
CommandResult run_command(Command command, const ParsedConfig& config,
                          const ZollpolyRange& range = {});

/// 0 when every verdict passes, 2 if any fails, 1 if any run errored.
int exit_code(const CommandResult& result);

/// 12 significant digits, shortest of fixed/scientific; non-finite -> "null".
std::string format_number(double x);
/// Fixed six decimals with negative zero printed as 0.000000.
std::string format_fixed6(double x);

/// (relative path, content) pairs in a fixed order. Throws InvalidArgument for
/// an unknown format.
std::vector<std::pair<std::string, std::string>> render_files(const CommandResult& result,
                                                              const std::string& format);
std::string render_json(const CommandResult& result);
/// The main CSV table of the command (summary.csv for systole and sweep).
std::string render_csv(const CommandResult& result);

/// Writes render_files into outdir (created if missing). Throws IoError.
void emit(const CommandResult& result, const std::string& format, const std::string& outdir);

}  // namespace magsys
