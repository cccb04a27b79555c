// Copyright 2026 The magsys-lab Authors
// SPDX-License-Identifier: Apache-2.0

// Exercises the shared library through its C header only.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "magsys/magsys.h"

namespace {

constexpr const char* kSphere =
    "[model]\nkappa = 1\nstrength = 1\n"
    "[perturbation]\nfield = sphere_harmonic_z\ncoefficients = 1\neps = 0.05\n"
    "[search]\nvolume_samples = 2000\n";

magsys_config* parse(const char* text) {
  magsys_config* cfg = nullptr;
  REQUIRE(magsys_config_parse_string(text, "capi.cfg", &cfg) == MAGSYS_OK);
  REQUIRE(cfg != nullptr);
  return cfg;
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(magsys_version()) == "1.0.0");
  CHECK(std::string(magsys_status_name(MAGSYS_OK)) == "Ok");
  CHECK(std::string(magsys_status_name(MAGSYS_ZOLL_REGIME_VIOLATION)) == "ZollRegimeViolation");
  CHECK(std::string(magsys_status_name(static_cast<magsys_status>(77))) == "Unknown");
}

TEST_CASE("null arguments are rejected without crashing") {
  CHECK(magsys_model_create(1.0, 1.0, nullptr) == MAGSYS_INVALID_ARGUMENT);
  CHECK(std::string(magsys_last_error()).size() > 0);
  double v = 0.0;
  CHECK(magsys_system_volume(nullptr, &v) == MAGSYS_INVALID_ARGUMENT);
  CHECK(magsys_config_parse_string(nullptr, "x", nullptr) == MAGSYS_INVALID_ARGUMENT);
  CHECK(magsys_run(MAGSYS_CMD_CONSTANTS, nullptr, nullptr) == MAGSYS_INVALID_ARGUMENT);
  CHECK(magsys_result_exit_code(nullptr) == 1);
  CHECK(magsys_result_run_count(nullptr) == 0);
  CHECK(std::string(magsys_result_json(nullptr)).empty());
  magsys_system_free(nullptr);
  magsys_config_free(nullptr);
  magsys_result_free(nullptr);
}

TEST_CASE("error codes surface through the boundary") {
  magsys_system* sys = nullptr;
  CHECK(magsys_model_create(-1.0, 1.0, &sys) == MAGSYS_ZOLL_REGIME_VIOLATION);
  CHECK(sys == nullptr);
  CHECK(std::string(magsys_last_error()).find("Zoll regime violated") != std::string::npos);
  magsys_config* cfg = nullptr;
  CHECK(magsys_config_parse_string("[model]\nkappa = 1\nstrenght = 1\n", "bad.cfg", &cfg) ==
        MAGSYS_VALIDATION_ERROR);
  CHECK(std::string(magsys_last_error()).find("model.strenght") != std::string::npos);
  CHECK(magsys_config_parse_string("[model]\nkappa 1\n", "bad.cfg", &cfg) == MAGSYS_PARSE_ERROR);
  CHECK(magsys_config_parse_file("/nonexistent/x.cfg", &cfg) == MAGSYS_IO_ERROR);
  CHECK(cfg == nullptr);
}

TEST_CASE("systems and constants") {
  double L = 0.0;
  REQUIRE(magsys_reference_length(1.0, 1.0, &L) == MAGSYS_OK);
  CHECK(L == doctest::Approx(std::numbers::pi * 2 * (std::sqrt(2.0) - 1)).epsilon(1e-14));
  double a = 0.0;
  REQUIRE(magsys_a_of_r(0.0, 2.0, 1.0, &a) == MAGSYS_OK);
  CHECK(a == doctest::Approx(std::sqrt(0.5)));
  double p = 1.0;
  REQUIRE(magsys_zoll_polynomial_kahler(1.0, 1.0, 1, 4 * std::numbers::pi, 0.0, &p) == MAGSYS_OK);
  CHECK(p == 0.0);

  magsys_system* sphere = nullptr;
  REQUIRE(magsys_model_create(1.0, 1.0, &sphere) == MAGSYS_OK);
  double vol = 0.0;
  REQUIRE(magsys_system_volume(sphere, &vol) == MAGSYS_OK);
  CHECK(vol == doctest::Approx(4 * std::numbers::pi));

  const double coeff = 1.0;
  magsys_system* bumped = nullptr;
  REQUIRE(magsys_system_perturb(sphere, "sphere_harmonic_z", &coeff, 1, 0.05, 1, &bumped) == MAGSYS_OK);
  REQUIRE(magsys_system_volume(bumped, &vol) == MAGSYS_OK);
  CHECK(vol == doctest::Approx(4 * std::numbers::pi).epsilon(1e-9));
  CHECK(magsys_system_perturb(sphere, "no_such_field", &coeff, 1, 0.05, 1, &bumped) != MAGSYS_OK);

  std::vector<double> lengths(64);
  size_t count = 0;
  REQUIRE(magsys_system_orbit_lengths(bumped, 8, lengths.data(), lengths.size(), &count) == MAGSYS_OK);
  REQUIRE(count >= 2);
  for (size_t i = 1; i < count; ++i) CHECK(lengths[i - 1] <= lengths[i]);
  CHECK(lengths[0] <= L);
  CHECK(lengths[count - 1] >= L);
  magsys_system_free(bumped);
  magsys_system_free(sphere);
}

TEST_CASE("config setters and a systole run") {
  magsys_config* cfg = parse(kSphere);
  CHECK(std::string(magsys_config_format(cfg)) == "json");
  CHECK(magsys_config_set_format(cfg, "csv") == MAGSYS_OK);
  CHECK(std::string(magsys_config_format(cfg)) == "csv");
  CHECK(magsys_config_set_format(cfg, "yaml") == MAGSYS_VALIDATION_ERROR);
  CHECK(magsys_config_set_tol_orbit(cfg, -1.0) == MAGSYS_VALIDATION_ERROR);
  CHECK(magsys_config_set_workers(cfg, 2) == MAGSYS_OK);
  CHECK(magsys_config_set_seed(cfg, 7) == MAGSYS_OK);

  magsys_result* res = nullptr;
  REQUIRE(magsys_run(MAGSYS_CMD_SYSTOLE, cfg, &res) == MAGSYS_OK);
  CHECK(magsys_result_exit_code(res) == 0);
  REQUIRE(magsys_result_run_count(res) == 1);
  magsys_run_summary s{};
  REQUIRE(magsys_result_run_summary(res, 0, &s) == MAGSYS_OK);
  CHECK(s.ok == 1);
  CHECK(s.eps == 0.05);
  CHECK(s.orbits >= 2);
  CHECK(s.slack_lower > 0.0);
  CHECK(s.slack_upper > 0.0);
  CHECK(s.verdict_normalized == 0);
  CHECK(s.verdict_two_sided == 0);
  CHECK(magsys_result_run_summary(res, 1, &s) == MAGSYS_INVALID_ARGUMENT);
  CHECK(std::strstr(magsys_result_json(res), "\"schema\": \"magsys-lab.report.v1\"") != nullptr);
  CHECK(std::strncmp(magsys_result_csv(res), "eps,status,orbits", 17) == 0);

  const auto dir = std::filesystem::temp_directory_path() / "magsys_capi_test";
  std::filesystem::remove_all(dir);
  REQUIRE(magsys_result_emit(res, "csv", dir.string().c_str()) == MAGSYS_OK);
  CHECK(std::filesystem::exists(dir / "summary.csv"));
  CHECK(std::filesystem::exists(dir / "metadata.json"));
  CHECK(magsys_result_emit(res, "xml", dir.string().c_str()) != MAGSYS_OK);
  std::filesystem::remove_all(dir);
  magsys_result_free(res);
  magsys_config_free(cfg);
}

TEST_CASE("zollpoly through the C interface") {
  magsys_config* cfg = parse("[model]\nkappa = 0\nstrength = 1\n");
  magsys_result* res = nullptr;
  REQUIRE(magsys_run_zollpoly(cfg, -1.0, 1.0, 3, &res) == MAGSYS_OK);
  CHECK(std::strncmp(magsys_result_csv(res), "A,p_kahler,p_generic\n", 21) == 0);
  CHECK(magsys_result_exit_code(res) == 0);
  magsys_result_free(res);
  CHECK(magsys_run_zollpoly(cfg, 1.0, -1.0, 3, &res) == MAGSYS_VALIDATION_ERROR);
  magsys_config_free(cfg);
}
