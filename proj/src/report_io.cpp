// Copyright 2026 The magsys-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "magsys/commands.hpp"
#include "magsys/dynamics.hpp"
#include "magsys/error.hpp"
#include "magsys/functionals.hpp"

namespace magsys {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kSchemaId = "magsys-lab.report.v1";
constexpr const char* kVersion = "1.0.0";

// Serializer with fixed number formatting; nlohmann's own dump would print
// shortest round-trip digits, which is not stable across libraries.
void write_json(std::ostringstream& os, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string pad_in(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad_in << Json(it.key()).dump() << ": ";
        write_json(os, it.value(), indent + 1);
      }
      os << "\n" << pad << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << ",\n";
        first = false;
        os << pad_in;
        write_json(os, v, indent + 1);
      }
      os << "\n" << pad << "]";
      return;
    }
    case Json::value_t::number_float:
      os << format_number(j.get<double>());
      return;
    default:
      os << j.dump();
      return;
  }
}

std::string dump(const Json& j) {
  std::ostringstream os;
  write_json(os, j, 0);
  os << "\n";
  return os.str();
}

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

std::string csv_number(double x) { return std::isfinite(x) ? format_fixed6(x) : std::string(); }

Json config_json(const ExperimentConfig& c) {
  Json j;
  j["model"] = {{"kappa", c.kappa}, {"strength", c.strength}, {"n", c.n},
                {"period_x", c.period_x}, {"period_y", c.period_y}};
  j["perturbation"] = {{"field", c.perturbation.field},
                       {"coefficients", c.perturbation.coefficients},
                       {"eps", c.perturbation.eps},
                       {"eps_list", c.eps_list},
                       {"normalize", c.normalize},
                       {"eta_field", c.perturbation.eta_field},
                       {"eta_coefficients", c.perturbation.eta_coefficients},
                       {"eta_eps", c.perturbation.eta_eps}};
  j["search"] = {{"grid_density", c.grid_density},
                 {"tol_orbit", c.tol_orbit},
                 {"tol_quad", c.tol_quad},
                 {"tol_integrator", c.tol_integrator},
                 {"max_iter", c.max_iter},
                 {"samples_per_orbit", c.samples_per_orbit},
                 {"volume_samples", c.volume_samples},
                 {"rng_seed", c.rng_seed},
                 {"workers", c.workers},
                 {"equality_tol", c.equality_tol},
                 {"verdict_tol", c.verdict_tol}};
  j["output"] = {{"format", c.format}, {"write_orbits", c.write_orbits}};
  return j;
}

Json failures_json(const std::vector<SeedFailure>& failures) {
  Json arr = Json::array();
  for (const SeedFailure& f : failures) {
    arr.push_back({{"seed_id", f.seed_id}, {"code", to_string(f.code)}, {"message", f.message}});
  }
  return arr;
}

std::string orbit_file(const CommandResult& res, std::size_t run, std::size_t orbit) {
  char buf[64];
  if (res.command == Command::Orbit) {
    std::snprintf(buf, sizeof buf, "orbits/orbit_%03zu.csv", orbit);
  } else {
    std::snprintf(buf, sizeof buf, "orbits/run_%03zu_orbit_%03zu.csv", run, orbit);
  }
  return buf;
}

// t, chart coordinates, chart velocity and geodesic curvature per sample.
std::string orbit_csv(const MagneticSystem& sys, const Orbit& orbit) {
  std::ostringstream os;
  os << "t,q1,q2,dq1,dq2,geodesic_curvature\n";
  const ModelSurface& surf = sys.surface;
  for (std::size_t i = 0; i < orbit.samples.size(); ++i) {
    const TangentState& st = orbit.samples[i];
    const auto q = surf.to_chart(st.position);
    const ChartPoint cp = surf.chart_point(q[0], q[1]);
    const double n1 = surf.inner(cp.d_q1, cp.d_q1);
    const double n2 = surf.inner(cp.d_q2, cp.d_q2);
    // Coordinate rates are undefined at chart poles; report 0 there.
    const double dq1 = n1 > 1e-24 ? surf.inner(st.velocity, cp.d_q1) / n1 : 0.0;
    const double dq2 = n2 > 1e-24 ? surf.inner(st.velocity, cp.d_q2) / n2 : 0.0;
    os << format_number(orbit.times[i]) << ',' << format_number(q[0]) << ',' << format_number(q[1]) << ','
       << format_number(dq1) << ',' << format_number(dq2) << ','
       << format_number(geodesic_curvature(sys, st)) << '\n';
  }
  return os.str();
}

Json run_json(const CommandResult& res, std::size_t index, const SweepRun& run) {
  Json j;
  j["eps"] = run.eps;
  j["status"] = run.ok ? "ok" : "error";
  if (!run.ok) {
    j["error"] = {{"code", to_string(run.code)}, {"message", run.error}};
    return j;
  }
  const ExperimentReport& r = run.report;
  j["error"] = nullptr;
  j["model"] = {{"kappa", r.kappa}, {"strength", r.strength}, {"n", r.n},
                {"eta_eps", r.eta_eps}, {"normalized", r.normalized}, {"zoll_period", r.zoll_period}};
  j["census"] = {{"grid_density", r.grid_density},
                 {"period_window", r.period_window},
                 {"seeds_tried", r.seeds_tried},
                 {"orbits_found", r.summaries.size()},
                 {"expected_min_orbits", r.expected_min_orbits},
                 {"complete", r.census_complete},
                 {"failures", failures_json(r.failures)}};
  Json orbits = Json::array();
  for (std::size_t k = 0; k < r.summaries.size(); ++k) {
    const OrbitSummary& s = r.summaries[k];
    Json o = {{"seed_id", s.seed_id},
              {"period", s.period},
              {"residual", s.residual},
              {"length", s.length},
              {"flux", s.flux},
              {"magnetic_length", s.magnetic_length},
              {"action", s.action},
              {"newton_steps", s.newton_steps}};
    o["samples_file"] = res.config.config.write_orbits ? Json(orbit_file(res, index, k)) : Json(nullptr);
    orbits.push_back(o);
  }
  j["orbits"] = orbits;
  j["systole"] = {{"reference", r.reference},         {"l_min", r.l_min},
                  {"l_max", r.l_max},                 {"slack_lower", r.slack_lower},
                  {"slack_upper", r.slack_upper},     {"max_action_spread", r.max_action_spread},
                  {"zoll_flag", r.zoll_flag}};
  j["volume"] = {{"vol_g", r.vol_g},
                 {"vol_g0", r.vol_g0},
                 {"vol_g0_is_reference_quotient", r.vol_g0_is_reference_quotient},
                 {"functional", r.volume_functional},
                 {"functional_general", r.volume_functional_general},
                 {"oracle", r.volume_oracle},
                 {"oracle_standard_error", r.volume_oracle_error},
                 {"oracle_samples", r.volume_oracle_samples}};
  j["polynomial"] = {{"p_min", number_or_null(r.p_min)},
                     {"p_max", number_or_null(r.p_max)},
                     {"ratio_power", number_or_null(r.ratio_power)},
                     {"effective_bound", number_or_null(r.effective_bound)},
                     {"bound_flipped", r.bound_flipped},
                     {"literal_C", number_or_null(r.literal_C)},
                     {"literal_rhs", number_or_null(r.literal_rhs)},
                     {"literal_holds", r.literal_holds}};
  j["verdicts"] = {{"local_systolic_normalized", to_string(r.local_systolic_normalized)},
                   {"local_systolic_full", to_string(r.local_systolic_full)},
                   {"two_sided", to_string(r.two_sided)},
                   {"tolerance", r.verdict_tol}};
  return j;
}

Json orbit_census_json(const CommandResult& res) {
  const MagneticSystem sys = build_system(res.config.config);
  Json orbits = Json::array();
  for (std::size_t k = 0; k < res.census->orbits.size(); ++k) {
    const Orbit& o = res.census->orbits[k];
    double flux = std::numeric_limits<double>::quiet_NaN();
    try {
      flux = flux_through_cap(sys, o).value;
    } catch (const Error&) {
      // Orbits without a capping disk keep a null flux.
    }
    orbits.push_back({{"seed_id", o.seed_id},
                      {"period", o.period},
                      {"residual", o.residual},
                      {"length", length(sys, o)},
                      {"flux", number_or_null(flux)},
                      {"magnetic_length", number_or_null(o.magnetic_length)},
                      {"newton_steps", o.newton_steps},
                      {"samples_file", res.config.config.write_orbits ? Json(orbit_file(res, 0, k))
                                                                      : Json(nullptr)}});
  }
  return {{"seeds_tried", res.census->seeds_tried},
          {"grid_density", res.config.config.grid_density},
          {"orbits", orbits},
          {"failures", failures_json(res.census->failures)}};
}

Json report_document(const CommandResult& res) {
  Json j;
  j["schema"] = kSchemaId;
  j["command"] = to_string(res.command);
  j["exit_code"] = exit_code(res);
  switch (res.command) {
    case Command::Systole:
    case Command::Sweep: {
      Json runs = Json::array();
      for (std::size_t i = 0; i < res.runs.size(); ++i) runs.push_back(run_json(res, i, res.runs[i]));
      j["runs"] = runs;
      break;
    }
    case Command::Orbit:
      j["census"] = orbit_census_json(res);
      break;
    case Command::Volume: {
      const VolumeReport& v = *res.volume;
      j["volume"] = {{"closed_form", v.closed_form}, {"quadrature", v.quadrature},
                     {"standard_error", v.standard_error}, {"samples", v.samples},
                     {"vol_g", v.vol_g}, {"vol_g0", v.vol_g0},
                     {"constant_convention", v.constant_convention}};
      break;
    }
    case Command::Zollpoly: {
      Json rows = Json::array();
      for (const ZollpolyRow& r : res.zollpoly) {
        rows.push_back({{"A", r.A}, {"p_kahler", r.p_kahler}, {"p_generic", number_or_null(r.p_generic)}});
      }
      j["zollpoly"] = rows;
      break;
    }
    case Command::Constants: {
      const ConstantsTable& t = *res.constants;
      j["constants"] = {{"a1_squared", t.a1_squared},
                        {"a1", t.a1},
                        {"reference_magnetic_length", t.reference_magnetic_length},
                        {"zoll_period", t.zoll_period},
                        {"zoll_circle_radius", t.zoll_circle_radius},
                        {"closed_form_flux", t.closed_form_flux},
                        {"vol_g0", t.vol_g0},
                        {"k_tilde", number_or_null(t.k_tilde)},
                        {"inequality_C", number_or_null(t.inequality_C)},
                        {"volume_constant_surface", t.volume_constant_surface},
                        {"volume_constant_general", t.volume_constant_general}};
      break;
    }
  }
  return j;
}

const std::vector<std::pair<std::string, std::string>>& summary_columns() {
  static const std::vector<std::pair<std::string, std::string>> cols = {
      {"eps", "conformal perturbation size of the run"},
      {"status", "ok, or error:<code> when the run failed"},
      {"orbits", "distinct capped closed orbits found"},
      {"l_min", "smallest magnetic length"},
      {"l_max", "largest magnetic length"},
      {"reference", "Zoll magnetic length pi a(1)^2"},
      {"slack_lower", "reference - l_min"},
      {"slack_upper", "l_max - reference"},
      {"vol_g", "area of the perturbed metric"},
      {"vol_g0", "area of the model metric (hyperbolic: reference quotient)"},
      {"zoll_flag", "1 when every action equals the reference within equality_tol"},
      {"local_systolic_normalized", "PASS, FAIL or SKIP"},
      {"local_systolic_full", "PASS, FAIL or SKIP"},
      {"two_sided", "PASS, FAIL or SKIP"},
      {"census_complete", "1 when at least the topological minimum of orbits was found"},
  };
  return cols;
}

std::string summary_csv(const CommandResult& res) {
  std::ostringstream os;
  const auto& cols = summary_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i].first;
  os << '\n';
  for (const SweepRun& run : res.runs) {
    if (!run.ok) {
      os << format_fixed6(run.eps) << ",error:" << to_string(run.code) << ",0,,,,,,,,,,,,\n";
      continue;
    }
    const ExperimentReport& r = run.report;
    os << format_fixed6(r.eps) << ",ok," << r.summaries.size() << ',' << csv_number(r.l_min) << ','
       << csv_number(r.l_max) << ',' << csv_number(r.reference) << ',' << csv_number(r.slack_lower) << ','
       << csv_number(r.slack_upper) << ',' << csv_number(r.vol_g) << ',' << csv_number(r.vol_g0) << ','
       << (r.zoll_flag ? 1 : 0) << ',' << to_string(r.local_systolic_normalized) << ','
       << to_string(r.local_systolic_full) << ',' << to_string(r.two_sided) << ','
       << (r.census_complete ? 1 : 0) << '\n';
  }
  return os.str();
}

}  // namespace

std::string render_csv(const CommandResult& res) {
  std::ostringstream os;
  switch (res.command) {
    case Command::Orbit: {
      const Json doc = orbit_census_json(res);
      os << "seed_id,period,residual,length,flux,magnetic_length,newton_steps\n";
      for (const auto& o : doc["orbits"]) {
        const auto num = [&](const char* k) {
          return o[k].is_null() ? std::string() : csv_number(o[k].get<double>());
        };
        os << o["seed_id"].get<std::size_t>() << ',' << num("period") << ',' << format_number(o["residual"].get<double>())
           << ',' << num("length") << ',' << num("flux") << ',' << num("magnetic_length") << ','
           << o["newton_steps"].get<int>() << '\n';
      }
      break;
    }
    case Command::Volume: {
      const VolumeReport& v = *res.volume;
      os << "closed_form,quadrature,standard_error,samples,vol_g,vol_g0\n"
         << csv_number(v.closed_form) << ',' << csv_number(v.quadrature) << ','
         << format_number(v.standard_error) << ',' << v.samples << ',' << csv_number(v.vol_g) << ','
         << csv_number(v.vol_g0) << '\n';
      break;
    }
    case Command::Zollpoly:
      os << "A,p_kahler,p_generic\n";
      for (const ZollpolyRow& r : res.zollpoly) {
        os << format_number(r.A) << ',' << format_number(r.p_kahler) << ','
           << (std::isfinite(r.p_generic) ? format_number(r.p_generic) : std::string()) << '\n';
      }
      break;
    case Command::Constants: {
      const Json doc = report_document(res)["constants"];
      os << "name,value\n";
      for (auto it = doc.begin(); it != doc.end(); ++it) {
        os << it.key() << ',' << (it.value().is_null() ? std::string() : format_number(it.value().get<double>()))
           << '\n';
      }
      break;
    }
    default:
      return summary_csv(res);
  }
  return os.str();
}

namespace {

const char* table_file(Command c) {
  switch (c) {
    case Command::Orbit: return "orbits.csv";
    case Command::Volume: return "volume.csv";
    case Command::Zollpoly: return "zollpoly.csv";
    case Command::Constants: return "constants.csv";
    default: return "summary.csv";
  }
}

std::vector<std::pair<std::string, std::string>> orbit_files(const CommandResult& res) {
  std::vector<std::pair<std::string, std::string>> files;
  if (!res.config.config.write_orbits) return files;
  if (res.command == Command::Orbit) {
    const MagneticSystem sys = build_system(res.config.config);
    for (std::size_t k = 0; k < res.census->orbits.size(); ++k) {
      files.emplace_back(orbit_file(res, 0, k), orbit_csv(sys, res.census->orbits[k]));
    }
  }
  for (std::size_t i = 0; i < res.runs.size(); ++i) {
    const SweepRun& run = res.runs[i];
    if (!run.ok) continue;
    const MagneticSystem sys = build_system(res.config.config, run.eps);
    for (std::size_t k = 0; k < run.report.orbits.size(); ++k) {
      files.emplace_back(orbit_file(res, i, k), orbit_csv(sys, run.report.orbits[k]));
    }
  }
  return files;
}

std::string metadata(const CommandResult& res, const std::string& format,
                     const std::vector<std::string>& files) {
  Json j;
  j["tool"] = "magsys-lab";
  j["version"] = kVersion;
  j["schema"] = kSchemaId;
  j["command"] = to_string(res.command);
  j["format"] = format;
  j["config_source"] = res.config.source;
  j["config"] = config_json(res.config.config);
  Json prov = Json::object();
  for (const auto& [key, origin] : res.config.provenance) prov[key] = origin;
  j["provenance"] = prov;
  j["search"] = {{"grid_density", res.config.config.grid_density},
                 {"period_window", FindOptions{}.period_window},
                 {"family_gate", FindOptions{}.family_gate},
                 {"dedup_distance", SearchOptions{}.dedup_distance}};
  if (res.command == Command::Zollpoly) {
    j["zollpoly_range"] = {{"a_min", res.range.a_min}, {"a_max", res.range.a_max}, {"steps", res.range.steps}};
  }
  j["files"] = files;
  Json cols = Json::object();
  Json summary = Json::object();
  for (const auto& [name, doc] : summary_columns()) summary[name] = doc;
  cols["summary.csv"] = summary;
  cols["orbits/*.csv"] = {{"t", "time along the orbit"},
                          {"q1", "first chart coordinate (colatitude, rho or x)"},
                          {"q2", "second chart coordinate (longitude, phi or y)"},
                          {"dq1", "rate of q1; 0 at chart poles"},
                          {"dq2", "rate of q2; 0 at chart poles"},
                          {"geodesic_curvature", "geodesic curvature of the perturbed metric"}};
  j["columns"] = cols;
  j["number_format"] = "json: 12 significant digits; summary csv: fixed 6 decimals";
  return dump(j);
}

}  // namespace

std::string format_number(double x) {
  if (!std::isfinite(x)) return "null";
  if (x == 0.0) return "0";
  std::array<char, 64> buf{};
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 12);
  return std::string(buf.data(), r.ptr);
}

std::string format_fixed6(double x) {
  if (!std::isfinite(x)) return "nan";
  std::array<char, 512> buf{};
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::fixed, 6);
  std::string s(buf.data(), r.ptr);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

std::string render_json(const CommandResult& result) { return dump(report_document(result)); }

std::vector<std::pair<std::string, std::string>> render_files(const CommandResult& result,
                                                              const std::string& format) {
  std::vector<std::pair<std::string, std::string>> files;
  if (format == "json") {
    files.emplace_back("report.json", render_json(result));
  } else if (format == "csv") {
    files.emplace_back(table_file(result.command), render_csv(result));
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown format '" + format + "' (expected json or csv)");
  }
  for (auto& f : orbit_files(result)) files.push_back(std::move(f));
  std::vector<std::string> names;
  names.reserve(files.size() + 1);
  names.emplace_back("metadata.json");
  for (const auto& f : files) names.push_back(f.first);
  files.emplace_back("metadata.json", metadata(result, format, names));
  return files;
}

void emit(const CommandResult& result, const std::string& format, const std::string& outdir) {
  const auto files = render_files(result, format);
  namespace fs = std::filesystem;
  std::error_code ec;
  for (const auto& [name, content] : files) {
    const fs::path path = fs::path(outdir) / name;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create directory '" + path.parent_path().string() + "'");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  }
}

}  // namespace magsys
