#pragma once

// Problem data for the fleet size and mix VRP with time windows served by
// mobile fast-charging vehicles, plus the closed-form parameter derivations
// (effective power, service time, demand clamp, travel time, amortization).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mfc/errors.hpp"

namespace mfc {

/// Geographic position in degrees, or planar position in miles, depending on
/// the owning instance's CoordinateSystem. For planar instances `lat` is the
/// northing and `lon` the easting.
struct Location {
  double lat = 0.0;
  double lon = 0.0;
  bool operator==(const Location&) const = default;
};

enum class CoordinateSystem { planar, geographic };

struct Client {
  int id = 0;                             // 1..n, node index
  Location location;
  double energy_demand = 0.0;             // kWh
  std::optional<double> equipment_battery;  // kWh
  double max_accept_power = 0.0;          // kW
  double window_open = 0.0;               // hours from midnight
  double window_close = 24.0;

  bool operator==(const Client&) const = default;
};

struct VehicleType {
  std::string name;
  double p_max = 0.0;          // kW
  double battery = 0.0;        // kWh
  double fuel_cap = 0.0;       // gal
  double fuel_rate = 0.0;      // gal/mile
  double capex_day = 0.0;      // USD/day, taken as published
  double opex_hr = 0.0;        // USD/hr while travelling
  int max_slots = 0;
  int min_slots = 0;
  double vehicle_trailer_cost = 80'000.0;  // USD, reported separately
  double dcfc_cost = 0.0;                  // USD

  bool operator==(const VehicleType&) const = default;
};

struct CostCoefficients {
  double alpha = 30.0;      // labor, USD/hr
  double lambda_w = 30.0;   // waiting, USD/hr
  double beta = 3.80;       // diesel, USD/gal
  double delta = 100.0;     // lateness, USD/hr
  double epsilon = 1.0;     // CAPEX weight
  double zeta = 1.0;        // OPEX weight
  double gamma = 0.10;      // electricity, USD/kWh
  double speed = 28.0;      // miles/hr
  double sigma_batt = 0.9;
  double sigma_fuel = 0.9;
  double t_start = 0.0;     // hours
  double horizon = 24.0;    // hours
  double vehicle_life_years = 20.0;
  double days_per_year = 365.0;

  bool operator==(const CostCoefficients&) const = default;
};

/// Dense row-major square matrix over the node set (depot = 0).
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const std::vector<double>& raw() const noexcept { return data_; }

  bool operator==(const SquareMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

struct Instance {
  std::string name = "instance";
  CoordinateSystem coords = CoordinateSystem::planar;
  double road_factor = 1.3;
  Location depot;
  std::vector<Client> clients;  // clients[j-1].id == j
  SquareMatrix distance;        // miles
  SquareMatrix travel_time;     // hours
  std::vector<VehicleType> types;
  int total_fleet_cap = 0;
  CostCoefficients coeffs;

  std::size_t num_clients() const noexcept { return clients.size(); }
  std::size_t num_nodes() const noexcept { return clients.size() + 1; }

  const Client& client(int id) const {
    if (id < 1 || static_cast<std::size_t>(id) > clients.size())
      throw UnknownClient("client id " + std::to_string(id) + " is not in the instance");
    return clients[static_cast<std::size_t>(id) - 1];
  }

  int total_slots() const {
    int total = 0;
    for (const auto& t : types) total += t.max_slots;
    return total;
  }

  bool operator==(const Instance&) const = default;
};

// ---------------------------------------------------------------------------
// Closed-form derivations

inline double effective_power(const Client& client, const VehicleType& vtype) {
  return std::min(vtype.p_max, client.max_accept_power);
}

inline double service_time(const Client& client, const VehicleType& vtype) {
  const double power = effective_power(client, vtype);
  if (!(power > 0.0))
    throw DegenerateInput("effective charging power is zero for client " +
                          std::to_string(client.id));
  return client.energy_demand / power;
}

/// Off-hour top-up demand: 25% of equipment battery, clamped to [30, 250] kWh.
inline double demand_from_battery(double equipment_battery_kwh) {
  return std::min(250.0, std::max(30.0, 0.25 * equipment_battery_kwh));
}

inline double travel_time(double distance_mi, double speed_mph) {
  if (!(speed_mph > 0.0)) throw DegenerateInput("speed must be positive");
  return distance_mi / speed_mph;
}

/// Daily amortized capital cost of a vehicle/trailer pair plus its charger.
inline double amortized_capex(double vehicle_cost, double trailer_cost, double dcfc_cost,
                              double life_vehicle_years, double life_dcfc_years,
                              double days_per_year) {
  if (!(life_vehicle_years > 0.0) || !(life_dcfc_years > 0.0))
    throw DegenerateInput("lifespans must be positive");
  if (!(days_per_year > 0.0)) throw DegenerateInput("days per year must be positive");
  return ((vehicle_cost + trailer_cost) / life_vehicle_years + dcfc_cost / life_dcfc_years) /
         days_per_year;
}

/// Per-vehicle amortized vehicle-and-trailer line reported next to fleet CAPEX.
inline double vehicle_trailer_day(const VehicleType& vtype, const CostCoefficients& coeffs) {
  return amortized_capex(vtype.vehicle_trailer_cost, 0.0, 0.0, coeffs.vehicle_life_years, 1.0,
                         coeffs.days_per_year);
}

// ---------------------------------------------------------------------------
// Catalog

/// Five charger classes Standard..Mega with the published specifications.
inline std::vector<VehicleType> default_catalog() {
  return {
      {"Standard", 50, 80, 40, 0.10, 65.75, 1.0, 10, 0, 80'000, 100'000},
      {"Medium", 200, 160, 60, 0.12, 147.95, 1.2, 10, 0, 80'000, 250'000},
      {"High", 350, 300, 80, 0.15, 258.64, 1.5, 8, 0, 80'000, 450'000},
      {"Ultra", 500, 500, 100, 0.18, 367.12, 1.8, 5, 0, 80'000, 650'000},
      {"Mega", 1000, 1000, 150, 0.25, 668.59, 2.5, 3, 0, 80'000, 1'200'000},
  };
}

// ---------------------------------------------------------------------------
// Geometry

inline double haversine_miles(const Location& a, const Location& b) {
  constexpr double earth_radius_mi = 3958.7613;
  constexpr double deg = 3.14159265358979323846 / 180.0;
  const double dlat = (b.lat - a.lat) * deg;
  const double dlon = (b.lon - a.lon) * deg;
  const double h = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(a.lat * deg) * std::cos(b.lat * deg) * std::sin(dlon / 2) *
                       std::sin(dlon / 2);
  return 2.0 * earth_radius_mi * std::asin(std::min(1.0, std::sqrt(h)));
}

inline double planar_miles(const Location& a, const Location& b) {
  return std::hypot(b.lat - a.lat, b.lon - a.lon);
}

/// Fallback road distances: straight-line distance times a road factor.
inline SquareMatrix distances_from_locations(const Location& depot,
                                             const std::vector<Client>& clients,
                                             CoordinateSystem coords, double road_factor) {
  std::vector<Location> nodes{depot};
  for (const auto& c : clients) nodes.push_back(c.location);
  SquareMatrix d(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      const double straight = coords == CoordinateSystem::geographic
                                  ? haversine_miles(nodes[i], nodes[j])
                                  : planar_miles(nodes[i], nodes[j]);
      d(i, j) = d(j, i) = straight * road_factor;
    }
  }
  return d;
}

inline SquareMatrix travel_times(const SquareMatrix& distance, double speed) {
  SquareMatrix t(distance.size());
  for (std::size_t i = 0; i < distance.size(); ++i)
    for (std::size_t j = 0; j < distance.size(); ++j) t(i, j) = travel_time(distance(i, j), speed);
  return t;
}

/// Fills the distance matrix from coordinates when absent, then derives
/// travel times from distance and speed.
inline void derive_matrices(Instance& inst) {
  if (inst.distance.size() != inst.num_nodes())
    inst.distance = distances_from_locations(inst.depot, inst.clients, inst.coords,
                                             inst.road_factor);
  inst.travel_time = travel_times(inst.distance, inst.coeffs.speed);
}

// ---------------------------------------------------------------------------
// Instance validation

struct InstanceIssue {
  std::string code;
  std::string where;
  std::string message;
};

namespace detail {

inline std::string fmt_num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace detail

/// Returns every invariant the instance breaks; empty means downstream
/// solvers can run without degenerate-input errors.
inline std::vector<InstanceIssue> validate_instance(const Instance& inst) {
  std::vector<InstanceIssue> issues;
  auto add = [&](std::string code, std::string where, std::string msg) {
    issues.push_back({std::move(code), std::move(where), std::move(msg)});
  };
  const auto& cf = inst.coeffs;

  // coefficients
  const std::pair<const char*, double> nonneg[] = {
      {"alpha", cf.alpha},     {"lambda_w", cf.lambda_w}, {"beta", cf.beta},
      {"delta", cf.delta},     {"epsilon", cf.epsilon},   {"zeta", cf.zeta},
      {"gamma", cf.gamma},     {"t_start", cf.t_start}};
  for (const auto& [name, v] : nonneg)
    if (!(v >= 0.0) || !std::isfinite(v))
      add("coeffs.negative", std::string("coeffs.") + name, "must be finite and >= 0");
  if (!(cf.speed > 0.0)) add("coeffs.speed", "coeffs.speed", "speed must be > 0");
  if (!(cf.sigma_batt > 0.0 && cf.sigma_batt <= 1.0))
    add("coeffs.sigma", "coeffs.sigma_batt", "must lie in (0, 1]");
  if (!(cf.sigma_fuel > 0.0 && cf.sigma_fuel <= 1.0))
    add("coeffs.sigma", "coeffs.sigma_fuel", "must lie in (0, 1]");
  if (!(cf.horizon > cf.t_start)) add("coeffs.horizon", "coeffs.horizon", "must exceed t_start");
  if (!(cf.vehicle_life_years > 0.0) || !(cf.days_per_year > 0.0))
    add("coeffs.amortization", "coeffs", "lifespan and days per year must be > 0");

  // vehicle types
  if (inst.types.empty()) add("types.empty", "types", "catalog has no vehicle types");
  for (std::size_t t = 0; t < inst.types.size(); ++t) {
    const auto& vt = inst.types[t];
    const std::string where = "types[" + std::to_string(t) + "]";
    if (!(vt.p_max > 0 && vt.battery > 0 && vt.fuel_cap > 0 && vt.fuel_rate > 0 &&
          vt.capex_day >= 0 && vt.opex_hr >= 0))
      add("type.field", where, "physical fields must be positive");
    if (vt.min_slots < 0 || vt.max_slots < 0 || vt.min_slots > vt.max_slots)
      add("type.slots", where, "need 0 <= min_slots <= max_slots");
  }
  if (inst.total_fleet_cap < 0 || inst.total_fleet_cap > inst.total_slots())
    add("fleet.cap", "total_fleet_cap", "must lie in [0, sum of max_slots]");
  int min_total = 0;
  for (const auto& vt : inst.types) min_total += vt.min_slots;
  if (min_total > inst.total_fleet_cap)
    add("fleet.cap", "total_fleet_cap", "minimum fleet composition exceeds the total cap");

  // matrices
  const std::size_t n = inst.num_nodes();
  bool matrices_ok = true;
  if (inst.distance.size() != n || inst.travel_time.size() != n) {
    add("matrix.shape", "distance", "matrices must be square over depot + clients");
    matrices_ok = false;
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      if (inst.distance(i, i) != 0.0 || inst.travel_time(i, i) != 0.0)
        add("matrix.diagonal", "distance[" + std::to_string(i) + "]", "diagonal must be zero");
      for (std::size_t j = 0; j < n; ++j) {
        const double d = inst.distance(i, j);
        if (!(d >= 0.0) || !std::isfinite(d) || !(inst.travel_time(i, j) >= 0.0)) {
          add("matrix.negative",
              "distance[" + std::to_string(i) + "][" + std::to_string(j) + "]",
              "entries must be finite and >= 0");
          matrices_ok = false;
        }
        if (j > i && std::abs(d - inst.distance(j, i)) > 1e-9 * std::max(1.0, d))
          add("matrix.symmetry",
              "distance[" + std::to_string(i) + "][" + std::to_string(j) + "]",
              "distance matrix must be symmetric");
      }
    }
  }

  // clients
  for (std::size_t k = 0; k < inst.clients.size(); ++k) {
    const auto& c = inst.clients[k];
    const std::string where = "clients[" + std::to_string(k) + "]";
    if (c.id != static_cast<int>(k) + 1)
      add("client.id", where, "client ids must be 1..n in order");
    bool fields_ok = true;
    if (!(c.energy_demand > 0.0)) {
      add("client.demand", where, "energy demand must be > 0");
      fields_ok = false;
    }
    if (!(c.max_accept_power > 0.0)) {
      add("client.power", where, "max accepted power must be > 0");
      fields_ok = false;
    }
    if (c.equipment_battery && c.energy_demand > *c.equipment_battery)
      add("client.battery", where, "energy demand exceeds equipment battery");
    if (!(c.window_open < c.window_close)) {
      add("client.window_order", where,
          "window opens at " + detail::fmt_num(c.window_open) + " but closes at " +
              detail::fmt_num(c.window_close));
      fields_ok = false;
    }
    if (c.window_open < 0.0 || c.window_close > cf.horizon)
      add("client.window_horizon", where, "window must lie inside [0, horizon]");
    if (!fields_ok || inst.types.empty() || !matrices_ok || !(cf.speed > 0.0)) continue;

    const auto j = static_cast<std::size_t>(c.id);
    if (j >= n) continue;
    double min_service = std::numeric_limits<double>::infinity();
    bool reachable = false;
    bool returns_in_time = false;
    for (const auto& vt : inst.types) {
      if (vt.max_slots == 0 || !(vt.p_max > 0.0)) continue;
      const double s = service_time(c, vt);
      min_service = std::min(min_service, s);
      const bool battery_ok = c.energy_demand <= vt.battery * cf.sigma_batt;
      const bool fuel_ok =
          2.0 * inst.distance(0, j) * vt.fuel_rate <= vt.fuel_cap * cf.sigma_fuel;
      if (battery_ok && fuel_ok) {
        reachable = true;
        const double start = std::max(cf.t_start + inst.travel_time(0, j), c.window_open);
        if (start + s + inst.travel_time(j, 0) <= cf.horizon) returns_in_time = true;
      }
    }
    if (c.window_close - c.window_open < min_service)
      add("client.window_too_short", where,
          "no vehicle type can complete service inside the window");
    if (!reachable)
      add("client.infeasible", where,
          "no vehicle type covers demand " + detail::fmt_num(c.energy_demand) +
              " kWh and the depot round trip within its budgets");
    else if (!returns_in_time)
      add("client.horizon", where, "no compatible type can serve and return before the horizon");
  }
  return issues;
}

}  // namespace mfc
