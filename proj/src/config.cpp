// Copyright 2026 The magsys-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "magsys/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "magsys/error.hpp"

namespace magsys {

namespace {

struct BadValue {
  std::string why;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v) {
  double x = 0.0;
  const char* first = v.data();
  const char* last = v.data() + v.size();
  if (!v.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, x);
  if (ec != std::errc() || ptr != last || v.empty()) throw BadValue{"expected a number, got '" + v + "'"};
  return x;
}

template <class Int>
Int to_integer(const std::string& v) {
  Int x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
    throw BadValue{"expected an integer, got '" + v + "'"};
  return x;
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  throw BadValue{"expected true or false, got '" + v + "'"};
}

std::vector<double> to_list(const std::string& v) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(v);
  std::string token;
  while (in >> token) {
    std::size_t start = 0;
    while (start <= token.size()) {
      const auto comma = token.find(',', start);
      const std::string part = token.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      if (!part.empty()) out.push_back(to_double(part));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return out;
}

std::string to_name(const std::string& v) {
  if (v.empty()) throw BadValue{"expected a name"};
  for (const char c : v) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
      throw BadValue{"invalid name '" + v + "'"};
  }
  return v;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

const std::vector<std::pair<std::string, Setter>>& schema() {
  static const std::vector<std::pair<std::string, Setter>> keys = {
      {"model.kappa", [](ExperimentConfig& c, const std::string& v) { c.kappa = to_double(v); }},
      {"model.strength", [](ExperimentConfig& c, const std::string& v) { c.strength = to_double(v); }},
      {"model.n", [](ExperimentConfig& c, const std::string& v) { c.n = to_integer<int>(v); }},
      {"model.period_x", [](ExperimentConfig& c, const std::string& v) { c.period_x = to_double(v); }},
      {"model.period_y", [](ExperimentConfig& c, const std::string& v) { c.period_y = to_double(v); }},
      {"perturbation.field",
       [](ExperimentConfig& c, const std::string& v) { c.perturbation.field = to_name(v); }},
      {"perturbation.coefficients",
       [](ExperimentConfig& c, const std::string& v) { c.perturbation.coefficients = to_list(v); }},
      {"perturbation.eps", [](ExperimentConfig& c, const std::string& v) { c.perturbation.eps = to_double(v); }},
      {"perturbation.eps_list", [](ExperimentConfig& c, const std::string& v) { c.eps_list = to_list(v); }},
      {"perturbation.normalize", [](ExperimentConfig& c, const std::string& v) { c.normalize = to_bool(v); }},
      {"perturbation.eta_field",
       [](ExperimentConfig& c, const std::string& v) { c.perturbation.eta_field = to_name(v); }},
      {"perturbation.eta_coefficients",
       [](ExperimentConfig& c, const std::string& v) { c.perturbation.eta_coefficients = to_list(v); }},
      {"perturbation.eta_eps",
       [](ExperimentConfig& c, const std::string& v) { c.perturbation.eta_eps = to_double(v); }},
      {"search.grid_density",
       [](ExperimentConfig& c, const std::string& v) { c.grid_density = to_integer<int>(v); }},
      {"search.tol_orbit", [](ExperimentConfig& c, const std::string& v) { c.tol_orbit = to_double(v); }},
      {"search.tol_quad", [](ExperimentConfig& c, const std::string& v) { c.tol_quad = to_double(v); }},
      {"search.tol_integrator",
       [](ExperimentConfig& c, const std::string& v) { c.tol_integrator = to_double(v); }},
      {"search.max_iter", [](ExperimentConfig& c, const std::string& v) { c.max_iter = to_integer<int>(v); }},
      {"search.samples_per_orbit",
       [](ExperimentConfig& c, const std::string& v) { c.samples_per_orbit = to_integer<std::size_t>(v); }},
      {"search.volume_samples",
       [](ExperimentConfig& c, const std::string& v) { c.volume_samples = to_integer<std::size_t>(v); }},
      {"search.rng_seed",
       [](ExperimentConfig& c, const std::string& v) { c.rng_seed = to_integer<std::uint64_t>(v); }},
      {"search.workers", [](ExperimentConfig& c, const std::string& v) { c.workers = to_integer<unsigned>(v); }},
      {"search.equality_tol",
       [](ExperimentConfig& c, const std::string& v) { c.equality_tol = to_double(v); }},
      {"search.verdict_tol", [](ExperimentConfig& c, const std::string& v) { c.verdict_tol = to_double(v); }},
      {"output.format", [](ExperimentConfig& c, const std::string& v) { c.format = to_name(v); }},
      {"output.write_orbits", [](ExperimentConfig& c, const std::string& v) { c.write_orbits = to_bool(v); }},
  };
  return keys;
}

}  // namespace

ParsedConfig parse_config_string(const std::string& text, const std::string& source) {
  ParsedConfig pc;
  pc.source = source;
  std::map<std::string, std::string> origin;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  const auto parse_error = [&](const std::string& why) {
    std::ostringstream os;
    os << source << ":" << line_no << ": " << why;
    throw Error(ErrorCode::ParseError, os.str());
  };
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') parse_error("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "model" && section != "perturbation" && section != "search" && section != "output") {
        throw Error(ErrorCode::ValidationError, "unknown section '" + section + "' at " + source + ":" +
                                                    std::to_string(line_no));
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) parse_error("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) parse_error("missing key");
    if (section.empty()) parse_error("key '" + key + "' appears before any section header");
    const std::string full = section + "." + key;
    const auto& keys = schema();
    const auto it = std::find_if(keys.begin(), keys.end(), [&](const auto& k) { return k.first == full; });
    if (it == keys.end()) {
      throw Error(ErrorCode::ValidationError, "unknown key '" + full + "' at " + source + ":" +
                                                  std::to_string(line_no));
    }
    if (origin.count(full)) parse_error("duplicate key '" + full + "'");
    try {
      it->second(pc.config, value);
    } catch (const BadValue& bad) {
      parse_error("key '" + full + "': " + bad.why);
    }
    origin[full] = source + ":" + std::to_string(line_no);
  }
  for (const char* required : {"model.kappa", "model.strength"}) {
    if (!origin.count(required))
      throw Error(ErrorCode::ValidationError, std::string("key '") + required + "' is required");
  }
  for (const auto& [key, setter] : schema()) {
    const auto it = origin.find(key);
    pc.provenance.emplace_back(key, it == origin.end() ? "default" : it->second);
  }
  validate(pc.config);
  return pc;
}

ParsedConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_string(ss.str(), path);
}

void mark_flag(ParsedConfig& pc, const std::string& key) {
  for (auto& [k, origin] : pc.provenance) {
    if (k == key) origin = "flag";
  }
}

}  // namespace magsys
