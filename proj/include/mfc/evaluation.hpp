#pragma once

// Cost accounting, constraint validation and performance metrics for a
// Solution. This is the reference every solver and the MILP importer is
// checked against.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "mfc/model.hpp"
#include "mfc/solution.hpp"

namespace mfc {

/// Daily cost rows. `objective_total` sums the six optimized terms;
/// `reported_total` is the full economic figure (adds energy purchase and
/// the vehicle-and-trailer line, and OPEX only when requested).
struct CostBreakdown {
  double travel_labor = 0.0;
  double service_labor = 0.0;
  double travel_and_service = 0.0;
  double wait = 0.0;
  double fuel = 0.0;
  double lateness = 0.0;
  double capex = 0.0;
  double opex = 0.0;
  double energy_transfer = 0.0;
  double vehicle_trailer = 0.0;
  double objective_total = 0.0;
  double reported_total = 0.0;
};

struct ReportPolicy {
  bool opex_in_reported = false;
  bool fold_vehicle_trailer = false;  // show the vehicle/trailer line inside capex
};

/// Aggregate operating quantities; enough to cost a plan without routes.
struct OperationalTotals {
  double travel_h = 0.0;
  double service_h = 0.0;
  double wait_h = 0.0;
  double late_h = 0.0;
  double fuel_gal = 0.0;
  double energy_kwh = 0.0;
  double opex_base = 0.0;
  std::vector<int> fleet;  // type index of every active vehicle
};

inline CostBreakdown cost_from_totals(const OperationalTotals& totals,
                                      const std::vector<VehicleType>& types,
                                      const CostCoefficients& cf, ReportPolicy policy = {}) {
  CostBreakdown cb;
  cb.travel_labor = cf.alpha * totals.travel_h;
  cb.service_labor = cf.alpha * totals.service_h;
  cb.travel_and_service = cb.travel_labor + cb.service_labor;
  cb.wait = cf.lambda_w * totals.wait_h;
  cb.fuel = cf.beta * totals.fuel_gal;
  cb.lateness = cf.delta * totals.late_h;
  double capex_sum = 0.0;
  double vt_sum = 0.0;
  for (int t : totals.fleet) {
    const auto& vt = types.at(static_cast<std::size_t>(t));
    capex_sum += vt.capex_day;
    vt_sum += vehicle_trailer_day(vt, cf);
  }
  cb.capex = cf.epsilon * capex_sum;
  cb.opex = cf.zeta * totals.opex_base;
  cb.energy_transfer = cf.gamma * totals.energy_kwh;
  cb.vehicle_trailer = vt_sum;
  cb.objective_total =
      cb.travel_and_service + cb.wait + cb.fuel + cb.lateness + cb.capex + cb.opex;
  cb.reported_total = cb.travel_and_service + cb.wait + cb.fuel + cb.lateness + cb.capex +
                      (policy.opex_in_reported ? cb.opex : 0.0) + cb.energy_transfer +
                      cb.vehicle_trailer;
  if (policy.fold_vehicle_trailer) {
    cb.capex += cb.vehicle_trailer;
    cb.vehicle_trailer = 0.0;
  }
  return cb;
}

inline OperationalTotals operational_totals(const Solution& sol, const Instance& inst) {
  OperationalTotals tot;
  for (const auto& r : sol.routes) {
    if (r.stops.empty()) continue;
    const RouteEval ev = evaluate_route(inst, r.slot.type, r.stops);
    tot.travel_h += ev.travel_h;
    tot.service_h += ev.service_h;
    tot.wait_h += ev.wait_h;
    tot.late_h += ev.late_h;
    tot.fuel_gal += ev.fuel_gal;
    tot.energy_kwh += ev.energy_kwh;
    tot.opex_base += ev.opex_base;
    tot.fleet.push_back(r.slot.type);
  }
  return tot;
}

inline CostBreakdown cost_breakdown(const Solution& sol, const Instance& inst,
                                    ReportPolicy policy = {}) {
  return cost_from_totals(operational_totals(sol, inst), inst.types, inst.coeffs, policy);
}

// ---------------------------------------------------------------------------
// Validation

enum class ViolationKind {
  coverage,
  duplicate_visit,
  battery_budget,
  fuel_budget,
  fleet_bound_total,
  fleet_bound_type_min,
  fleet_bound_type_max,
  window_hard,
  horizon,
  slot_reuse,
};

inline const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::coverage: return "coverage";
    case ViolationKind::duplicate_visit: return "duplicate_visit";
    case ViolationKind::battery_budget: return "battery_budget";
    case ViolationKind::fuel_budget: return "fuel_budget";
    case ViolationKind::fleet_bound_total: return "fleet_bound_total";
    case ViolationKind::fleet_bound_type_min: return "fleet_bound_type_min";
    case ViolationKind::fleet_bound_type_max: return "fleet_bound_type_max";
    case ViolationKind::window_hard: return "window_hard";
    case ViolationKind::horizon: return "horizon";
    case ViolationKind::slot_reuse: return "slot_reuse";
  }
  return "unknown";
}

struct Violation {
  ViolationKind kind;
  int route = -1;   // index into Solution::routes, -1 when not route-specific
  int client = -1;  // client id, -1 when not client-specific
  double magnitude = 0.0;
};

struct ValidationOptions {
  bool strict_windows = false;  // any lateness becomes a window_hard violation
};

inline std::vector<Violation> validate_solution(const Solution& sol, const Instance& inst,
                                                ValidationOptions opts = {}) {
  constexpr double tol = 1e-9;
  std::vector<Violation> out;
  const auto& cf = inst.coeffs;
  const int n = static_cast<int>(inst.num_clients());
  const int num_types = static_cast<int>(inst.types.size());

  std::vector<int> visits(static_cast<std::size_t>(n) + 1, 0);
  std::map<SlotId, int> slot_use;
  std::vector<int> per_type(inst.types.size(), 0);
  int active = 0;

  for (std::size_t ri = 0; ri < sol.routes.size(); ++ri) {
    const Route& r = sol.routes[ri];
    const int route_idx = static_cast<int>(ri);
    if (r.stops.empty()) continue;
    const bool type_ok = r.slot.type >= 0 && r.slot.type < num_types;
    if (!type_ok || r.slot.index < 0 ||
        r.slot.index >= inst.types[static_cast<std::size_t>(r.slot.type)].max_slots)
      out.push_back({ViolationKind::fleet_bound_type_max, route_idx, -1, 1.0});
    ++active;
    if (type_ok) ++per_type[static_cast<std::size_t>(r.slot.type)];
    if (++slot_use[r.slot] == 2) out.push_back({ViolationKind::slot_reuse, route_idx, -1, 1.0});

    bool known = true;
    for (int id : r.stops) {
      if (id < 1 || id > n) {
        out.push_back({ViolationKind::coverage, route_idx, id, 1.0});
        known = false;
        continue;
      }
      if (++visits[static_cast<std::size_t>(id)] == 2)
        out.push_back({ViolationKind::duplicate_visit, route_idx, id, 1.0});
    }
    if (!known || !type_ok) continue;

    const auto& vt = inst.types[static_cast<std::size_t>(r.slot.type)];
    const Schedule sched = schedule_route(r, inst);
    const RouteEval ev = evaluate_route(inst, r.slot.type, r.stops);
    const double batt_excess = ev.energy_kwh - vt.battery * cf.sigma_batt;
    if (batt_excess > tol)
      out.push_back({ViolationKind::battery_budget, route_idx, -1, batt_excess});
    const double fuel_excess = ev.fuel_gal - vt.fuel_cap * cf.sigma_fuel;
    if (fuel_excess > tol) out.push_back({ViolationKind::fuel_budget, route_idx, -1, fuel_excess});
    const double late_return = sched.depot_return - cf.horizon;
    if (late_return > tol) out.push_back({ViolationKind::horizon, route_idx, -1, late_return});
    if (opts.strict_windows)
      for (const auto& st : sched.stops)
        if (st.lateness > tol)
          out.push_back({ViolationKind::window_hard, route_idx, st.client, st.lateness});
  }

  std::set<int> listed_unserved(sol.unserved.begin(), sol.unserved.end());
  for (int id = 1; id <= n; ++id) {
    if (visits[static_cast<std::size_t>(id)] == 0 || listed_unserved.count(id))
      out.push_back({ViolationKind::coverage, -1, id, 1.0});
  }
  for (std::size_t t = 0; t < inst.types.size(); ++t) {
    const int deficit = inst.types[t].min_slots - per_type[t];
    if (deficit > 0)
      out.push_back({ViolationKind::fleet_bound_type_min, -1, -1, static_cast<double>(deficit)});
  }
  if (active > inst.total_fleet_cap)
    out.push_back({ViolationKind::fleet_bound_total, -1, -1,
                   static_cast<double>(active - inst.total_fleet_cap)});
  return out;
}

inline bool is_feasible(const Solution& sol, const Instance& inst, ValidationOptions opts = {}) {
  return validate_solution(sol, inst, opts).empty();
}

// ---------------------------------------------------------------------------
// Metrics and report tables

struct VehicleUsage {
  SlotId slot;
  std::string type_name;
  int clients = 0;
  double energy_kwh = 0.0;
  double utilization = 0.0;  // delivered energy / onboard battery
  double duration_h = 0.0;   // depot departure to depot return
};

struct PerformanceMetrics {
  double travel_h = 0.0;
  double service_h = 0.0;
  double wait_h = 0.0;
  double late_h = 0.0;
  double distance_mi = 0.0;
  double fuel_gal = 0.0;
  double energy_kwh = 0.0;
  int clients_served = 0;
  double completion_rate = 0.0;  // fraction in [0, 1]
  std::vector<VehicleUsage> vehicles;
};

inline double utilization(double delivered_kwh, double battery_kwh) {
  return battery_kwh > 0.0 ? delivered_kwh / battery_kwh : 0.0;
}

inline PerformanceMetrics metrics(const Solution& sol, const Instance& inst) {
  PerformanceMetrics m;
  std::set<int> served;
  for (const auto& r : sol.routes) {
    if (r.stops.empty()) continue;
    const RouteEval ev = evaluate_route(inst, r.slot.type, r.stops);
    const auto& vt = inst.types.at(static_cast<std::size_t>(r.slot.type));
    m.travel_h += ev.travel_h;
    m.service_h += ev.service_h;
    m.wait_h += ev.wait_h;
    m.late_h += ev.late_h;
    m.distance_mi += ev.distance_mi;
    m.fuel_gal += ev.fuel_gal;
    m.energy_kwh += ev.energy_kwh;
    served.insert(r.stops.begin(), r.stops.end());
    m.vehicles.push_back({r.slot, vt.name, static_cast<int>(r.stops.size()), ev.energy_kwh,
                          utilization(ev.energy_kwh, vt.battery),
                          ev.depot_return - inst.coeffs.t_start});
  }
  m.clients_served = static_cast<int>(served.size());
  m.completion_rate =
      inst.num_clients() == 0 ? 0.0 : static_cast<double>(served.size()) / inst.num_clients();
  return m;
}

struct FleetRow {
  std::string type_name;
  double battery_kwh = 0.0;
  int count = 0;
  double utilization = 0.0;  // pooled over the vehicles of this type
  double capex_day = 0.0;
};

struct TimelineRow {
  std::string vehicle;
  int client = 0;
  double arrival = 0.0;
  double wait = 0.0;
  double service_start = 0.0;
  double service_end = 0.0;
  double lateness = 0.0;
};

/// Fleet composition, routing performance and cost tables plus unit costs.
struct ReportBundle {
  std::vector<FleetRow> fleet;
  int fleet_size = 0;
  double fleet_capex = 0.0;
  PerformanceMetrics performance;
  CostBreakdown costs;
  double cost_per_kwh = 0.0;
  double cost_per_client = 0.0;
  std::vector<TimelineRow> timeline;
};

inline double cost_per_kwh(double total, double kwh) { return kwh > 0.0 ? total / kwh : 0.0; }
inline double cost_per_client(double total, int clients) {
  return clients > 0 ? total / clients : 0.0;
}

inline ReportBundle report(const Solution& sol, const Instance& inst, ReportPolicy policy = {}) {
  ReportBundle rb;
  rb.performance = metrics(sol, inst);
  rb.costs = cost_breakdown(sol, inst, policy);
  for (std::size_t t = 0; t < inst.types.size(); ++t) {
    FleetRow row{inst.types[t].name, inst.types[t].battery, 0, 0.0, inst.types[t].capex_day};
    double delivered = 0.0;
    for (const auto& v : rb.performance.vehicles)
      if (static_cast<std::size_t>(v.slot.type) == t) {
        ++row.count;
        delivered += v.energy_kwh;
      }
    if (row.count > 0) row.utilization = utilization(delivered, row.count * row.battery_kwh);
    rb.fleet_size += row.count;
    rb.fleet_capex += row.count * row.capex_day;
    rb.fleet.push_back(row);
  }
  rb.cost_per_kwh = cost_per_kwh(rb.costs.reported_total, rb.performance.energy_kwh);
  rb.cost_per_client = cost_per_client(rb.costs.reported_total, rb.performance.clients_served);
  for (const auto& r : sol.routes) {
    if (r.stops.empty()) continue;
    const Schedule sched = schedule_route(r, inst);
    for (const auto& st : sched.stops)
      rb.timeline.push_back({slot_label(inst, r.slot), st.client, st.arrival, st.wait,
                             st.service_start, st.departure, st.lateness});
  }
  return rb;
}

}  // namespace mfc
