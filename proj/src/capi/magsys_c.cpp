// Copyright 2026 The magsys-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "magsys/magsys.h"

#include <algorithm>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "magsys/commands.hpp"
#include "magsys/error.hpp"
#include "magsys/functionals.hpp"
#include "magsys/zollref.hpp"

struct magsys_system {
  magsys::MagneticSystem sys;
};

struct magsys_config {
  magsys::ParsedConfig parsed;
};

struct magsys_result {
  magsys::CommandResult result;
  std::string json;
  std::string csv;
};

namespace {

thread_local std::string g_last_error;

magsys_status to_status(magsys::ErrorCode code) {
  return static_cast<magsys_status>(static_cast<int>(code));
}

// Runs fn, translating exceptions into status codes; fn never sees a null
// output pointer because callers check them first.
template <class Fn>
magsys_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return MAGSYS_OK;
  } catch (const magsys::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return MAGSYS_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MAGSYS_INTERNAL_ERROR;
  } catch (...) {
    g_last_error = "unknown exception";
    return MAGSYS_INTERNAL_ERROR;
  }
}

magsys_status null_argument(const char* name) {
  g_last_error = std::string("InvalidArgument: null pointer for '") + name + "'";
  return MAGSYS_INVALID_ARGUMENT;
}

#define MAGSYS_REQUIRE(ptr) \
  if ((ptr) == nullptr) return null_argument(#ptr)

int verdict_code(magsys::Verdict v) {
  switch (v) {
    case magsys::Verdict::Pass: return 0;
    case magsys::Verdict::Fail: return 1;
    case magsys::Verdict::Skip: return 2;
  }
  return 2;
}

}  // namespace

extern "C" {

const char* magsys_version(void) { return "1.0.0"; }

const char* magsys_last_error(void) { return g_last_error.c_str(); }

const char* magsys_status_name(magsys_status status) {
  if (status == MAGSYS_OK) return "Ok";
  if (status == MAGSYS_INTERNAL_ERROR) return "InternalError";
  if (status >= MAGSYS_INVALID_ARGUMENT && status <= MAGSYS_IO_ERROR) {
    return magsys::to_string(static_cast<magsys::ErrorCode>(static_cast<int>(status)));
  }
  return "Unknown";
}

magsys_status magsys_model_create(double kappa, double strength, magsys_system** out) {
  MAGSYS_REQUIRE(out);
  return guarded([&] { *out = new magsys_system{magsys::make_model(kappa, strength)}; });
}

magsys_status magsys_system_perturb(const magsys_system* sys, const char* field,
                                    const double* coefficients, size_t n_coefficients, double eps,
                                    int normalize, magsys_system** out) {
  MAGSYS_REQUIRE(sys);
  MAGSYS_REQUIRE(field);
  MAGSYS_REQUIRE(out);
  if (n_coefficients > 0 && coefficients == nullptr) return null_argument("coefficients");
  return guarded([&] {
    const std::vector<double> coeffs(coefficients, coefficients + n_coefficients);
    const auto u = magsys::ScalarField::named(field, coeffs, sys->sys.surface);
    *out = new magsys_system{magsys::conformal_perturb(sys->sys, u, eps, normalize != 0)};
  });
}

magsys_status magsys_system_volume(const magsys_system* sys, double* out) {
  MAGSYS_REQUIRE(sys);
  MAGSYS_REQUIRE(out);
  return guarded([&] { *out = magsys::riemannian_volume(sys->sys); });
}

magsys_status magsys_system_orbit_lengths(const magsys_system* sys, int grid_density,
                                          double* lengths, size_t capacity, size_t* count) {
  MAGSYS_REQUIRE(sys);
  MAGSYS_REQUIRE(count);
  if (capacity > 0 && lengths == nullptr) return null_argument("lengths");
  return guarded([&] {
    magsys::SearchOptions so;
    so.grid_density = grid_density;
    const magsys::OrbitCensus census = magsys::enumerate_orbits(sys->sys, so);
    *count = census.orbits.size();
    for (size_t i = 0; i < std::min(capacity, census.orbits.size()); ++i) {
      lengths[i] = census.orbits[i].magnetic_length;
    }
  });
}

void magsys_system_free(magsys_system* sys) { delete sys; }

magsys_status magsys_reference_length(double kappa, double strength, double* out) {
  MAGSYS_REQUIRE(out);
  return guarded([&] { *out = magsys::reference_length(kappa, strength); });
}

magsys_status magsys_a_of_r(double kappa, double strength, double r, double* out) {
  MAGSYS_REQUIRE(out);
  return guarded([&] { *out = magsys::a_of_r(kappa, strength, r); });
}

magsys_status magsys_zoll_polynomial_kahler(double kappa, double strength, int n, double vol_g0,
                                            double A, double* out) {
  MAGSYS_REQUIRE(out);
  return guarded([&] { *out = magsys::zoll_polynomial_kahler(kappa, strength, n, vol_g0, A); });
}

magsys_status magsys_config_parse_file(const char* path, magsys_config** out) {
  MAGSYS_REQUIRE(path);
  MAGSYS_REQUIRE(out);
  return guarded([&] { *out = new magsys_config{magsys::parse_config(path)}; });
}

magsys_status magsys_config_parse_string(const char* text, const char* source, magsys_config** out) {
  MAGSYS_REQUIRE(text);
  MAGSYS_REQUIRE(out);
  return guarded([&] {
    *out = new magsys_config{magsys::parse_config_string(text, source ? source : "<string>")};
  });
}

magsys_status magsys_config_set_seed(magsys_config* cfg, uint64_t seed) {
  MAGSYS_REQUIRE(cfg);
  return guarded([&] {
    cfg->parsed.config.rng_seed = seed;
    magsys::mark_flag(cfg->parsed, "search.rng_seed");
  });
}

magsys_status magsys_config_set_workers(magsys_config* cfg, unsigned workers) {
  MAGSYS_REQUIRE(cfg);
  return guarded([&] {
    cfg->parsed.config.workers = workers;
    magsys::mark_flag(cfg->parsed, "search.workers");
  });
}

magsys_status magsys_config_set_tol_orbit(magsys_config* cfg, double tol) {
  MAGSYS_REQUIRE(cfg);
  return guarded([&] {
    magsys::ExperimentConfig next = cfg->parsed.config;
    next.tol_orbit = tol;
    magsys::validate(next);
    cfg->parsed.config = next;
    magsys::mark_flag(cfg->parsed, "search.tol_orbit");
  });
}

magsys_status magsys_config_set_tol_quad(magsys_config* cfg, double tol) {
  MAGSYS_REQUIRE(cfg);
  return guarded([&] {
    magsys::ExperimentConfig next = cfg->parsed.config;
    next.tol_quad = tol;
    magsys::validate(next);
    cfg->parsed.config = next;
    magsys::mark_flag(cfg->parsed, "search.tol_quad");
  });
}

magsys_status magsys_config_set_format(magsys_config* cfg, const char* format) {
  MAGSYS_REQUIRE(cfg);
  MAGSYS_REQUIRE(format);
  return guarded([&] {
    const std::string f = format;
    if (f != "json" && f != "csv") {
      throw magsys::Error(magsys::ErrorCode::ValidationError,
                          "key 'output.format': expected json or csv, got '" + f + "'");
    }
    cfg->parsed.config.format = f;
    magsys::mark_flag(cfg->parsed, "output.format");
  });
}

const char* magsys_config_format(const magsys_config* cfg) {
  return cfg ? cfg->parsed.config.format.c_str() : "";
}

void magsys_config_free(magsys_config* cfg) { delete cfg; }

namespace {

magsys_status run_impl(magsys::Command command, const magsys_config* cfg,
                       const magsys::ZollpolyRange& range, magsys_result** out) {
  return guarded([&] {
    auto* res = new magsys_result{magsys::run_command(command, cfg->parsed, range), {}, {}};
    try {
      res->json = magsys::render_json(res->result);
      res->csv = magsys::render_csv(res->result);
    } catch (...) {
      delete res;
      throw;
    }
    *out = res;
  });
}

}  // namespace

magsys_status magsys_run(magsys_command command, const magsys_config* cfg, magsys_result** out) {
  MAGSYS_REQUIRE(cfg);
  MAGSYS_REQUIRE(out);
  magsys::Command cmd;
  switch (command) {
    case MAGSYS_CMD_ORBIT: cmd = magsys::Command::Orbit; break;
    case MAGSYS_CMD_SWEEP: cmd = magsys::Command::Sweep; break;
    case MAGSYS_CMD_SYSTOLE: cmd = magsys::Command::Systole; break;
    case MAGSYS_CMD_VOLUME: cmd = magsys::Command::Volume; break;
    case MAGSYS_CMD_ZOLLPOLY: cmd = magsys::Command::Zollpoly; break;
    case MAGSYS_CMD_CONSTANTS: cmd = magsys::Command::Constants; break;
    default:
      g_last_error = "InvalidArgument: unknown command";
      return MAGSYS_INVALID_ARGUMENT;
  }
  return run_impl(cmd, cfg, {}, out);
}

magsys_status magsys_run_zollpoly(const magsys_config* cfg, double a_min, double a_max, int steps,
                                  magsys_result** out) {
  MAGSYS_REQUIRE(cfg);
  MAGSYS_REQUIRE(out);
  return run_impl(magsys::Command::Zollpoly, cfg, {a_min, a_max, steps}, out);
}

magsys_status magsys_result_emit(const magsys_result* res, const char* format, const char* outdir) {
  MAGSYS_REQUIRE(res);
  MAGSYS_REQUIRE(format);
  MAGSYS_REQUIRE(outdir);
  return guarded([&] { magsys::emit(res->result, format, outdir); });
}

int magsys_result_exit_code(const magsys_result* res) {
  return res ? magsys::exit_code(res->result) : 1;
}

const char* magsys_result_json(const magsys_result* res) { return res ? res->json.c_str() : ""; }

const char* magsys_result_csv(const magsys_result* res) { return res ? res->csv.c_str() : ""; }

size_t magsys_result_run_count(const magsys_result* res) { return res ? res->result.runs.size() : 0; }

magsys_status magsys_result_run_summary(const magsys_result* res, size_t index, magsys_run_summary* out) {
  MAGSYS_REQUIRE(res);
  MAGSYS_REQUIRE(out);
  if (index >= res->result.runs.size()) {
    g_last_error = "InvalidArgument: run index out of range";
    return MAGSYS_INVALID_ARGUMENT;
  }
  const magsys::SweepRun& run = res->result.runs[index];
  magsys_run_summary s{};
  s.eps = run.eps;
  s.ok = run.ok ? 1 : 0;
  s.status = run.ok ? MAGSYS_OK : to_status(run.code);
  if (run.ok) {
    const magsys::ExperimentReport& r = run.report;
    s.orbits = r.summaries.size();
    s.l_min = r.l_min;
    s.l_max = r.l_max;
    s.reference = r.reference;
    s.slack_lower = r.slack_lower;
    s.slack_upper = r.slack_upper;
    s.vol_g = r.vol_g;
    s.vol_g0 = r.vol_g0;
    s.zoll_flag = r.zoll_flag ? 1 : 0;
    s.census_complete = r.census_complete ? 1 : 0;
    s.verdict_normalized = verdict_code(r.local_systolic_normalized);
    s.verdict_full = verdict_code(r.local_systolic_full);
    s.verdict_two_sided = verdict_code(r.two_sided);
  } else {
    s.verdict_normalized = s.verdict_full = s.verdict_two_sided = 2;
  }
  *out = s;
  g_last_error.clear();
  return MAGSYS_OK;
}

void magsys_result_free(magsys_result* res) { delete res; }

}  // extern "C"
