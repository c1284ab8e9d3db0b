#pragma once

// File formats: instance JSON (schema v1), distance-matrix CSV, flat-text
// solution files and the report CSV bundle. Grammars are in docs/formats.md.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mfc/evaluation.hpp"
#include "mfc/lp.hpp"
#include "mfc/model.hpp"
#include "mfc/solution.hpp"

namespace mfc {

inline constexpr const char* instance_schema = "mfcroute.instance/1";
inline constexpr const char* solution_format = "mfcroute.solution/1";

using json = nlohmann::json;

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io", "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io", "cannot write " + path.string());
  out << text;
  if (!out) throw Error("io", "write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// Matrix CSV

/// Header row and first column hold node ids 0..n; entries are miles.
inline std::string matrix_to_csv(const SquareMatrix& m) {
  std::ostringstream os;
  os << "node";
  for (std::size_t j = 0; j < m.size(); ++j) os << "," << j;
  os << "\n";
  for (std::size_t i = 0; i < m.size(); ++i) {
    os << i;
    for (std::size_t j = 0; j < m.size(); ++j) os << "," << format_number(m(i, j));
    os << "\n";
  }
  return os.str();
}

inline SquareMatrix matrix_from_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) {
      const auto b = cell.find_first_not_of(" \t");
      const auto e = cell.find_last_not_of(" \t");
      cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    rows.push_back(std::move(cells));
  }
  if (rows.empty()) throw SchemaError("matrix: empty file");
  const std::size_t n = rows.size() - 1;
  auto num = [](const std::string& s, const std::string& where) {
    double v;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
      throw SchemaError(where + ": '" + s + "' is not a number");
    return v;
  };
  if (rows[0].size() != n + 1) throw SchemaError("matrix: header width does not match row count");
  for (std::size_t j = 0; j < n; ++j)
    if (num(rows[0][j + 1], "matrix header") != static_cast<double>(j))
      throw SchemaError("matrix header: node ids must be 0..n in order");
  SquareMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = rows[i + 1];
    const std::string where = "matrix row " + std::to_string(i);
    if (r.size() != n + 1) throw SchemaError(where + ": wrong number of columns");
    if (num(r[0], where) != static_cast<double>(i))
      throw SchemaError(where + ": node ids must be 0..n in order");
    for (std::size_t j = 0; j < n; ++j) m(i, j) = num(r[j + 1], where);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(m(i, j) - m(j, i)) > 1e-9 * std::max(1.0, m(i, j)))
        throw SchemaError("matrix[" + std::to_string(i) + "][" + std::to_string(j) +
                          "]: asymmetric distances are not supported");
  return m;
}

// ---------------------------------------------------------------------------
// Instance JSON

inline json instance_to_json(const Instance& inst) {
  const auto& cf = inst.coeffs;
  json j;
  j["schema"] = instance_schema;
  j["meta"] = {{"name", inst.name},
               {"units",
                {{"distance", "mi"},
                 {"time", "h"},
                 {"energy", "kWh"},
                 {"power", "kW"},
                 {"fuel", "gal"},
                 {"money", "USD"}}},
               {"horizon", cf.horizon},
               {"t_start", cf.t_start},
               {"coordinates", inst.coords == CoordinateSystem::planar ? "planar" : "geographic"},
               {"road_factor", inst.road_factor}};
  j["coeffs"] = {{"alpha", cf.alpha},
                 {"lambda_w", cf.lambda_w},
                 {"beta", cf.beta},
                 {"delta", cf.delta},
                 {"epsilon", cf.epsilon},
                 {"zeta", cf.zeta},
                 {"gamma", cf.gamma},
                 {"speed", cf.speed},
                 {"sigma_batt", cf.sigma_batt},
                 {"sigma_fuel", cf.sigma_fuel},
                 {"vehicle_life_years", cf.vehicle_life_years},
                 {"days_per_year", cf.days_per_year}};
  j["types"] = json::array();
  for (const auto& vt : inst.types)
    j["types"].push_back({{"name", vt.name},
                          {"p_max", vt.p_max},
                          {"battery", vt.battery},
                          {"fuel_cap", vt.fuel_cap},
                          {"fuel_rate", vt.fuel_rate},
                          {"capex_day", vt.capex_day},
                          {"opex_hr", vt.opex_hr},
                          {"min_slots", vt.min_slots},
                          {"max_slots", vt.max_slots},
                          {"vehicle_trailer_cost", vt.vehicle_trailer_cost},
                          {"dcfc_cost", vt.dcfc_cost}});
  j["total_fleet_cap"] = inst.total_fleet_cap;
  j["depot"] = {{"lat", inst.depot.lat}, {"lon", inst.depot.lon}};
  j["clients"] = json::array();
  for (const auto& c : inst.clients) {
    json cj = {{"id", c.id},
               {"lat", c.location.lat},
               {"lon", c.location.lon},
               {"rho", c.max_accept_power},
               {"window", {c.window_open, c.window_close}}};
    if (c.equipment_battery && demand_from_battery(*c.equipment_battery) == c.energy_demand)
      cj["B_j"] = *c.equipment_battery;
    else
      cj["E_j"] = c.energy_demand;
    j["clients"].push_back(std::move(cj));
  }
  json rows = json::array();
  for (std::size_t i = 0; i < inst.distance.size(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < inst.distance.size(); ++k) row.push_back(inst.distance(i, k));
    rows.push_back(std::move(row));
  }
  j["matrix"] = std::move(rows);
  return j;
}

namespace detail {

inline const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path + "." + key + ": missing");
  return *it;
}

inline double number_at(const json& v, const std::string& path) {
  if (!v.is_number()) throw SchemaError(path + ": expected a number");
  return v.get<double>();
}

inline int integer_at(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw SchemaError(path + ": expected an integer");
  return v.get<int>();
}

inline double number_or(const json& obj, const std::string& key, double fallback,
                        const std::string& path) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : number_at(*it, path + "." + key);
}

}  // namespace detail

/// Builds an Instance from a schema-v1 document without semantic validation.
/// `base_dir` resolves a relative matrix_ref.
inline Instance instance_from_json(const json& j, const std::filesystem::path& base_dir = {}) {
  using detail::number_at;
  using detail::number_or;
  using detail::require;
  if (!j.is_object()) throw SchemaError("$: expected an object");
  const auto& schema = require(j, "schema", "$");
  if (!schema.is_string() || schema.get<std::string>() != instance_schema)
    throw SchemaError("$.schema: expected \"" + std::string(instance_schema) + "\"");

  Instance inst;
  const auto& meta = require(j, "meta", "$");
  const auto& name = require(meta, "name", "$.meta");
  if (!name.is_string()) throw SchemaError("$.meta.name: expected a string");
  inst.name = name.get<std::string>();
  inst.coeffs.horizon = number_at(require(meta, "horizon", "$.meta"), "$.meta.horizon");
  inst.coeffs.t_start = number_at(require(meta, "t_start", "$.meta"), "$.meta.t_start");
  if (auto it = meta.find("coordinates"); it != meta.end()) {
    const std::string c = it->is_string() ? it->get<std::string>() : "";
    if (c == "planar")
      inst.coords = CoordinateSystem::planar;
    else if (c == "geographic")
      inst.coords = CoordinateSystem::geographic;
    else
      throw SchemaError("$.meta.coordinates: expected \"planar\" or \"geographic\"");
  }
  inst.road_factor = number_or(meta, "road_factor", inst.road_factor, "$.meta");

  if (auto it = j.find("coeffs"); it != j.end()) {
    const json& c = *it;
    if (!c.is_object()) throw SchemaError("$.coeffs: expected an object");
    auto& cf = inst.coeffs;
    const std::pair<const char*, double*> fields[] = {
        {"alpha", &cf.alpha},       {"lambda_w", &cf.lambda_w},
        {"beta", &cf.beta},         {"delta", &cf.delta},
        {"epsilon", &cf.epsilon},   {"zeta", &cf.zeta},
        {"gamma", &cf.gamma},       {"speed", &cf.speed},
        {"sigma_batt", &cf.sigma_batt}, {"sigma_fuel", &cf.sigma_fuel},
        {"vehicle_life_years", &cf.vehicle_life_years},
        {"days_per_year", &cf.days_per_year}};
    for (const auto& [key, dst] : fields) *dst = number_or(c, key, *dst, "$.coeffs");
  }

  const auto& types = require(j, "types", "$");
  if (!types.is_array()) throw SchemaError("$.types: expected an array");
  for (std::size_t t = 0; t < types.size(); ++t) {
    const std::string p = "$.types[" + std::to_string(t) + "]";
    const json& tj = types[t];
    VehicleType vt;
    const auto& tn = require(tj, "name", p);
    if (!tn.is_string()) throw SchemaError(p + ".name: expected a string");
    vt.name = tn.get<std::string>();
    vt.p_max = number_at(require(tj, "p_max", p), p + ".p_max");
    vt.battery = number_at(require(tj, "battery", p), p + ".battery");
    vt.fuel_cap = number_at(require(tj, "fuel_cap", p), p + ".fuel_cap");
    vt.fuel_rate = number_at(require(tj, "fuel_rate", p), p + ".fuel_rate");
    vt.capex_day = number_at(require(tj, "capex_day", p), p + ".capex_day");
    vt.opex_hr = number_at(require(tj, "opex_hr", p), p + ".opex_hr");
    vt.max_slots = detail::integer_at(require(tj, "max_slots", p), p + ".max_slots");
    if (auto it = tj.find("min_slots"); it != tj.end())
      vt.min_slots = detail::integer_at(*it, p + ".min_slots");
    vt.vehicle_trailer_cost = number_or(tj, "vehicle_trailer_cost", vt.vehicle_trailer_cost, p);
    vt.dcfc_cost = number_or(tj, "dcfc_cost", vt.dcfc_cost, p);
    inst.types.push_back(std::move(vt));
  }
  if (auto it = j.find("total_fleet_cap"); it != j.end())
    inst.total_fleet_cap = detail::integer_at(*it, "$.total_fleet_cap");
  else
    inst.total_fleet_cap = inst.total_slots();

  const auto& depot = require(j, "depot", "$");
  inst.depot.lat = number_at(require(depot, "lat", "$.depot"), "$.depot.lat");
  inst.depot.lon = number_at(require(depot, "lon", "$.depot"), "$.depot.lon");

  const auto& clients = require(j, "clients", "$");
  if (!clients.is_array()) throw SchemaError("$.clients: expected an array");
  for (std::size_t k = 0; k < clients.size(); ++k) {
    const std::string p = "$.clients[" + std::to_string(k) + "]";
    const json& cj = clients[k];
    Client c;
    c.id = detail::integer_at(require(cj, "id", p), p + ".id");
    c.location.lat = number_at(require(cj, "lat", p), p + ".lat");
    c.location.lon = number_at(require(cj, "lon", p), p + ".lon");
    c.max_accept_power = number_at(require(cj, "rho", p), p + ".rho");
    const bool has_b = cj.contains("B_j");
    const bool has_e = cj.contains("E_j");
    if (has_b == has_e) throw SchemaError(p + ": exactly one of B_j or E_j is required");
    if (has_b) {
      c.equipment_battery = number_at(cj.at("B_j"), p + ".B_j");
      c.energy_demand = demand_from_battery(*c.equipment_battery);
    } else {
      c.energy_demand = number_at(cj.at("E_j"), p + ".E_j");
    }
    const auto& w = require(cj, "window", p);
    if (!w.is_array() || w.size() != 2) throw SchemaError(p + ".window: expected [open, close]");
    c.window_open = number_at(w[0], p + ".window[0]");
    c.window_close = number_at(w[1], p + ".window[1]");
    inst.clients.push_back(std::move(c));
  }

  if (auto it = j.find("matrix"); it != j.end()) {
    const json& m = *it;
    const std::size_t n = inst.num_nodes();
    if (!m.is_array() || m.size() != n)
      throw SchemaError("$.matrix: expected " + std::to_string(n) + " rows");
    inst.distance = SquareMatrix(n);
    for (std::size_t r = 0; r < n; ++r) {
      const std::string p = "$.matrix[" + std::to_string(r) + "]";
      if (!m[r].is_array() || m[r].size() != n)
        throw SchemaError(p + ": expected " + std::to_string(n) + " entries");
      for (std::size_t c = 0; c < n; ++c)
        inst.distance(r, c) = number_at(m[r][c], p + "[" + std::to_string(c) + "]");
    }
  } else if (auto ref = j.find("matrix_ref"); ref != j.end()) {
    if (!ref->is_string()) throw SchemaError("$.matrix_ref: expected a path");
    std::filesystem::path mp = ref->get<std::string>();
    if (mp.is_relative()) mp = base_dir / mp;
    inst.distance = matrix_from_csv(read_text(mp));
    if (inst.distance.size() != inst.num_nodes())
      throw SchemaError("$.matrix_ref: matrix size does not match depot + clients");
  }
  if (inst.coeffs.speed > 0.0) derive_matrices(inst);
  return inst;
}

inline Instance parse_instance_file(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw SchemaError("$: invalid JSON (" + std::string(e.what()) + ")");
  }
  return instance_from_json(j, path.parent_path());
}

/// Parses and validates; any instance issue becomes a SchemaError naming its field.
inline Instance load_instance(const std::filesystem::path& path) {
  Instance inst = parse_instance_file(path);
  const auto issues = validate_instance(inst);
  if (!issues.empty()) {
    std::string msg;
    for (const auto& is : issues) {
      if (!msg.empty()) msg += "; ";
      msg += is.where + ": " + is.message + " [" + is.code + "]";
    }
    throw SchemaError(msg);
  }
  return inst;
}

inline void save_instance(const Instance& inst, const std::filesystem::path& path) {
  write_text(path, instance_to_json(inst).dump(2) + "\n");
}

/// FNV-1a 64 of the compact canonical JSON, as 16 hex digits.
inline std::string content_hash(const Instance& inst) {
  const std::string text = instance_to_json(inst).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// Solution file

struct SolutionFile {
  std::string instance_hash;
  double objective = 0.0;
  Solution solution;
};

inline std::string format_exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string solution_to_text(const Instance& inst, const Solution& sol) {
  std::ostringstream os;
  os << "format=" << solution_format << "\n";
  os << "instance_hash=" << content_hash(inst) << "\n";
  os << "objective=" << format_exact(solution_objective(inst, sol)) << "\n";
  for (const auto& r : sol.routes) {
    if (r.stops.empty()) continue;
    os << "route=" << r.slot.type + 1 << ":" << r.slot.index + 1 << ":";
    for (std::size_t i = 0; i < r.stops.size(); ++i) os << (i ? "," : "") << r.stops[i];
    os << "\n";
  }
  if (!sol.unserved.empty()) {
    os << "unserved=";
    for (std::size_t i = 0; i < sol.unserved.size(); ++i) os << (i ? "," : "") << sol.unserved[i];
    os << "\n";
  }
  return os.str();
}

inline SolutionFile solution_from_text(const std::string& text) {
  SolutionFile sf;
  std::istringstream in(text);
  int lineno = 0;
  bool have_format = false, have_objective = false;
  auto ints = [&](const std::string& s, char sep) {
    std::vector<int> out;
    std::stringstream ss(s);
    for (std::string part; std::getline(ss, part, sep);) {
      int v = 0;
      auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
      if (ec != std::errc() || p != part.data() + part.size())
        throw ParseError("solution line " + std::to_string(lineno) + ": bad integer '" + part + "'");
      out.push_back(v);
    }
    return out;
  };
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("solution line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = line.substr(0, eq);
    const std::string val = line.substr(eq + 1);
    if (key == "format") {
      if (val != solution_format) throw ParseError("unsupported solution format '" + val + "'");
      have_format = true;
    } else if (key == "instance_hash") {
      sf.instance_hash = val;
    } else if (key == "objective") {
      auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), sf.objective);
      if (ec != std::errc() || p != val.data() + val.size())
        throw ParseError("solution line " + std::to_string(lineno) + ": bad objective");
      have_objective = true;
    } else if (key == "route") {
      const auto c1 = val.find(':');
      const auto c2 = c1 == std::string::npos ? c1 : val.find(':', c1 + 1);
      if (c2 == std::string::npos)
        throw ParseError("solution line " + std::to_string(lineno) + ": expected type:slot:stops");
      const auto t = ints(val.substr(0, c1), ',');
      const auto v = ints(val.substr(c1 + 1, c2 - c1 - 1), ',');
      if (t.size() != 1 || v.size() != 1 || t[0] < 1 || v[0] < 1)
        throw ParseError("solution line " + std::to_string(lineno) + ": bad slot");
      sf.solution.routes.push_back({{t[0] - 1, v[0] - 1}, ints(val.substr(c2 + 1), ',')});
    } else if (key == "unserved") {
      sf.solution.unserved = ints(val, ',');
    } else {
      throw ParseError("solution line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (!have_format || !have_objective) throw ParseError("solution file lacks format or objective");
  return sf;
}

inline void save_solution(const Instance& inst, const Solution& sol,
                          const std::filesystem::path& path) {
  write_text(path, solution_to_text(inst, sol));
}

inline SolutionFile load_solution(const std::filesystem::path& path) {
  return solution_from_text(read_text(path));
}

// ---------------------------------------------------------------------------
// Report CSVs

struct ReportFiles {
  std::string fleet;
  std::string performance;
  std::string costs;
  std::string timeline;
};

inline ReportFiles report_to_csv(const ReportBundle& rb, const std::string& hash) {
  auto num = [](double v) { return format_number(v); };
  const std::string head = "# instance_hash=" + hash + "\n";
  ReportFiles f;
  {
    std::ostringstream os;
    os << head << "type,battery_kwh,count,utilization_pct,capex_day\n";
    for (const auto& r : rb.fleet)
      os << r.type_name << "," << num(r.battery_kwh) << "," << r.count << ","
         << num(100.0 * r.utilization) << "," << num(r.capex_day) << "\n";
    os << "total,," << rb.fleet_size << ",," << num(rb.fleet_capex) << "\n";
    f.fleet = os.str();
  }
  {
    const auto& p = rb.performance;
    std::ostringstream os;
    os << head << "metric,value\n";
    os << "total_travel_time_h," << num(p.travel_h) << "\n";
    os << "total_service_time_h," << num(p.service_h) << "\n";
    os << "total_waiting_time_h," << num(p.wait_h) << "\n";
    os << "total_lateness_h," << num(p.late_h) << "\n";
    os << "total_distance_mi," << num(p.distance_mi) << "\n";
    os << "fuel_gal," << num(p.fuel_gal) << "\n";
    os << "energy_kwh," << num(p.energy_kwh) << "\n";
    os << "clients_served," << p.clients_served << "\n";
    os << "completion_rate_pct," << num(100.0 * p.completion_rate) << "\n";
    for (const auto& v : p.vehicles)
      os << "utilization_pct:" << v.type_name << "#" << v.slot.index + 1 << ","
         << num(100.0 * v.utilization) << "\n";
    f.performance = os.str();
  }
  {
    const auto& c = rb.costs;
    std::ostringstream os;
    os << head << "component,usd_per_day\n";
    os << "travel_and_service_labor," << num(c.travel_and_service) << "\n";
    os << "waiting_labor," << num(c.wait) << "\n";
    os << "fuel," << num(c.fuel) << "\n";
    os << "lateness_penalty," << num(c.lateness) << "\n";
    os << "fleet_capex," << num(c.capex) << "\n";
    os << "vehicle_trailer_capex," << num(c.vehicle_trailer) << "\n";
    os << "energy_transfer," << num(c.energy_transfer) << "\n";
    os << "opex," << num(c.opex) << "\n";
    os << "objective_total," << num(c.objective_total) << "\n";
    os << "total_daily_cost," << num(c.reported_total) << "\n";
    os << "cost_per_kwh," << num(rb.cost_per_kwh) << "\n";
    os << "cost_per_client," << num(rb.cost_per_client) << "\n";
    f.costs = os.str();
  }
  {
    std::ostringstream os;
    os << head << "vehicle,client,arrival,wait,service_start,service_end,lateness\n";
    for (const auto& t : rb.timeline)
      os << t.vehicle << "," << t.client << "," << num(t.arrival) << "," << num(t.wait) << ","
         << num(t.service_start) << "," << num(t.service_end) << "," << num(t.lateness) << "\n";
    f.timeline = os.str();
  }
  return f;
}

}  // namespace mfc
