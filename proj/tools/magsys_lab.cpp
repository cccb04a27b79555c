// Copyright 2026 The magsys-lab Authors
// SPDX-License-Identifier: Apache-2.0
//
// magsys-lab command-line front end. Uses only the C interface of libmagsys.
// Exit codes: 0 every verdict passes, 2 some verdict fails, 1 error.

#include <cstdint>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "magsys/magsys.h"

namespace {

struct Options {
  std::string config;
  std::string out;
  std::optional<std::string> format;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<double> tol_orbit;
  std::optional<double> tol_quad;
  bool verbose = false;
  double a_min = -1.0;
  double a_max = 1.0;
  int steps = 21;
};

struct ConfigDeleter {
  void operator()(magsys_config* c) const { magsys_config_free(c); }
};
struct ResultDeleter {
  void operator()(magsys_result* r) const { magsys_result_free(r); }
};

int fail(magsys_status) {
  std::fprintf(stderr, "magsys-lab: %s\n", magsys_last_error());
  return 1;
}

int run(magsys_command command, const Options& opt) {
  magsys_config* raw_cfg = nullptr;
  if (magsys_status st = magsys_config_parse_file(opt.config.c_str(), &raw_cfg); st != MAGSYS_OK) return fail(st);
  std::unique_ptr<magsys_config, ConfigDeleter> cfg(raw_cfg);

  magsys_status st = MAGSYS_OK;
  if (opt.seed && (st = magsys_config_set_seed(cfg.get(), *opt.seed)) != MAGSYS_OK) return fail(st);
  if (opt.workers && (st = magsys_config_set_workers(cfg.get(), *opt.workers)) != MAGSYS_OK) return fail(st);
  if (opt.tol_orbit && (st = magsys_config_set_tol_orbit(cfg.get(), *opt.tol_orbit)) != MAGSYS_OK) return fail(st);
  if (opt.tol_quad && (st = magsys_config_set_tol_quad(cfg.get(), *opt.tol_quad)) != MAGSYS_OK) return fail(st);
  if (opt.format && (st = magsys_config_set_format(cfg.get(), opt.format->c_str())) != MAGSYS_OK) return fail(st);

  if (opt.verbose) std::fprintf(stderr, "magsys-lab %s: config %s\n", magsys_version(), opt.config.c_str());

  magsys_result* raw_res = nullptr;
  st = command == MAGSYS_CMD_ZOLLPOLY ? magsys_run_zollpoly(cfg.get(), opt.a_min, opt.a_max, opt.steps, &raw_res)
                                      : magsys_run(command, cfg.get(), &raw_res);
  if (st != MAGSYS_OK) return fail(st);
  std::unique_ptr<magsys_result, ResultDeleter> res(raw_res);

  if (opt.verbose) {
    for (size_t i = 0; i < magsys_result_run_count(res.get()); ++i) {
      magsys_run_summary s{};
      if (magsys_result_run_summary(res.get(), i, &s) != MAGSYS_OK) continue;
      if (s.ok) {
        std::fprintf(stderr, "run %zu: eps=%g orbits=%zu l_min=%.9f l_max=%.9f census_complete=%d\n", i, s.eps,
                     s.orbits, s.l_min, s.l_max, s.census_complete);
      } else {
        std::fprintf(stderr, "run %zu: eps=%g error %s\n", i, s.eps, magsys_status_name(s.status));
      }
    }
  }

  if (!opt.out.empty()) {
    st = magsys_result_emit(res.get(), magsys_config_format(cfg.get()), opt.out.c_str());
    if (st != MAGSYS_OK) return fail(st);
    if (opt.verbose) std::fprintf(stderr, "wrote %s\n", opt.out.c_str());
  }
  std::fputs(magsys_result_csv(res.get()), stdout);
  return magsys_result_exit_code(res.get());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"magsys-lab: magnetic geodesic flows and local systolic checks on model surfaces"};
  app.require_subcommand(1);
  Options opt;

  const struct {
    const char* name;
    const char* help;
    magsys_command command;
  } commands[] = {
      {"orbit", "find and deduplicate closed magnetic geodesics", MAGSYS_CMD_ORBIT},
      {"systole", "single run: orbits, systolic slack, volume and verdicts", MAGSYS_CMD_SYSTOLE},
      {"sweep", "one systole run per entry of perturbation.eps_list", MAGSYS_CMD_SWEEP},
      {"volume", "volume functional: closed form and Monte Carlo oracle", MAGSYS_CMD_VOLUME},
      {"zollpoly", "table of the Zoll polynomial P(A)", MAGSYS_CMD_ZOLLPOLY},
      {"constants", "closed-form reference constants", MAGSYS_CMD_CONSTANTS},
  };
  magsys_command selected = MAGSYS_CMD_SYSTOLE;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", opt.config, "config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "output directory (omit to print the main table only)");
    sub->add_option("--format", opt.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", opt.seed, "rng seed of the volume oracle");
    sub->add_option("--workers", opt.workers, "worker threads (0 = hardware concurrency)");
    sub->add_option("--tol-orbit", opt.tol_orbit, "Newton tolerance of the orbit finder");
    sub->add_option("--tol-quad", opt.tol_quad, "relative quadrature tolerance");
    sub->add_flag("-v,--verbose", opt.verbose, "progress on stderr");
    if (c.command == MAGSYS_CMD_ZOLLPOLY) {
      sub->add_option("--a-min", opt.a_min, "first action value");
      sub->add_option("--a-max", opt.a_max, "last action value");
      sub->add_option("--steps", opt.steps, "number of rows")->check(CLI::PositiveNumber);
    }
    const magsys_command cmd = c.command;
    sub->callback([&selected, cmd] { selected = cmd; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  return run(selected, opt);
}
