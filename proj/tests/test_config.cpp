// Copyright 2026 The magsys-lab Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "magsys/config.hpp"
#include "magsys/error.hpp"

using namespace magsys;

namespace {

Error parse_failure(const std::string& text) {
  try {
    parse_config_string(text, "t.cfg");
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected the config to be rejected");
  return Error(ErrorCode::InvalidArgument, "unreachable");
}

std::string origin(const ParsedConfig& pc, const std::string& key) {
  for (const auto& [k, o] : pc.provenance) {
    if (k == key) return o;
  }
  return "missing";
}

}  // namespace

TEST_CASE("minimal file yields all defaults") {
  const ParsedConfig pc = parse_config_string("[model]\nkappa = 1\nstrength = 1\n", "t.cfg");
  const ExperimentConfig d;
  CHECK(pc.config.kappa == 1.0);
  CHECK(pc.config.strength == 1.0);
  CHECK(pc.config.grid_density == d.grid_density);
  CHECK(pc.config.tol_orbit == d.tol_orbit);
  CHECK(pc.config.volume_samples == d.volume_samples);
  CHECK(pc.config.format == "json");
  CHECK(pc.config.perturbation.field == "none");
  CHECK(origin(pc, "model.kappa") == "t.cfg:2");
  CHECK(origin(pc, "model.strength") == "t.cfg:3");
  CHECK(origin(pc, "search.rng_seed") == "default");
}

TEST_CASE("Zoll regime violation is a validation error") {
  const Error e = parse_failure("[model]\nkappa = -1\nstrength = 1\n");
  CHECK(e.code() == ErrorCode::ValidationError);
  CHECK(std::string(e.what()).find("Zoll regime violated") != std::string::npos);
}

TEST_CASE("misspelled key is named in the error") {
  const Error e = parse_failure("[model]\nkappa = 1\nstrenght = 1\n");
  CHECK(e.code() == ErrorCode::ValidationError);
  CHECK(std::string(e.what()).find("model.strenght") != std::string::npos);
  CHECK(std::string(e.what()).find("t.cfg:3") != std::string::npos);
}

TEST_CASE("parse errors carry the line number") {
  Error e = parse_failure("[model]\nkappa = 1\nstrength 1\n");
  CHECK(e.code() == ErrorCode::ParseError);
  CHECK(std::string(e.what()).find("t.cfg:3") != std::string::npos);
  e = parse_failure("[model]\nkappa = one\nstrength = 1\n");
  CHECK(e.code() == ErrorCode::ParseError);
  CHECK(std::string(e.what()).find("t.cfg:2") != std::string::npos);
  e = parse_failure("[model]\nkappa = 1\nkappa = 2\nstrength = 1\n");
  CHECK(e.code() == ErrorCode::ParseError);
  CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
  e = parse_failure("kappa = 1\n");
  CHECK(e.code() == ErrorCode::ParseError);
  e = parse_failure("[model\nkappa = 1\n");
  CHECK(e.code() == ErrorCode::ParseError);
}

TEST_CASE("unknown sections and missing required keys") {
  CHECK(parse_failure("[modle]\nkappa = 1\n").code() == ErrorCode::ValidationError);
  const Error e = parse_failure("[model]\nkappa = 1\n");
  CHECK(e.code() == ErrorCode::ValidationError);
  CHECK(std::string(e.what()).find("model.strength") != std::string::npos);
}

TEST_CASE("full file with comments, lists and booleans") {
  const std::string text =
      "# sphere sweep\n"
      "[model]\n"
      "kappa = 1      # curvature\n"
      "strength = 1\n"
      "\n"
      "[perturbation]\n"
      "field = sphere_linear\n"
      "coefficients = 0.1, 0.2 0.3\n"
      "eps_list = 0, 0.01,0.05\n"
      "normalize = false\n"
      "[search]\n"
      "grid_density = 4\n"
      "rng_seed = 18446744073709551615\n"
      "[output]\n"
      "format = csv\n"
      "write_orbits = no\n";
  const ParsedConfig pc = parse_config_string(text, "full.cfg");
  CHECK(pc.config.perturbation.coefficients == std::vector<double>{0.1, 0.2, 0.3});
  CHECK(pc.config.eps_list == std::vector<double>{0.0, 0.01, 0.05});
  CHECK(!pc.config.normalize);
  CHECK(pc.config.grid_density == 4);
  CHECK(pc.config.rng_seed == 18446744073709551615ull);
  CHECK(pc.config.format == "csv");
  CHECK(!pc.config.write_orbits);
}

TEST_CASE("command-line overrides are recorded") {
  ParsedConfig pc = parse_config_string("[model]\nkappa = 1\nstrength = 1\n", "t.cfg");
  mark_flag(pc, "search.rng_seed");
  CHECK(origin(pc, "search.rng_seed") == "flag");
}

TEST_CASE("unreadable file is an io error") {
  try {
    parse_config("/nonexistent/dir/x.cfg");
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IoError);
  }
}
