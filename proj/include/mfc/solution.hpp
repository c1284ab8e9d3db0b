#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mfc/model.hpp"

namespace mfc {

/// One potential vehicle: slot `index` (0-based) of vehicle type `type`
/// (0-based position in the instance catalog).
struct SlotId {
  int type = 0;
  int index = 0;
  auto operator<=>(const SlotId&) const = default;
};

/// Ordered client visits of one vehicle; the depot start and end are implicit.
struct Route {
  SlotId slot;
  std::vector<int> stops;
  bool operator==(const Route&) const = default;
};

struct Solution {
  std::vector<Route> routes;
  std::vector<int> unserved;
  bool operator==(const Solution&) const = default;
};

struct StopSchedule {
  int client = 0;
  double arrival = 0.0;
  double wait = 0.0;
  double service_start = 0.0;
  double service_duration = 0.0;
  double departure = 0.0;
  double lateness = 0.0;
};

struct Schedule {
  double depot_departure = 0.0;
  double depot_return = 0.0;
  std::vector<StopSchedule> stops;
};

/// Operational quantities of one route plus its objective contribution.
struct RouteEval {
  double travel_h = 0.0;
  double service_h = 0.0;
  double wait_h = 0.0;
  double late_h = 0.0;
  double distance_mi = 0.0;
  double fuel_gal = 0.0;
  double energy_kwh = 0.0;
  double opex_base = 0.0;  // sum of C^op * t over traversed arcs, before zeta
  double depot_return = 0.0;
  double last_departure = 0.0;
  double objective = 0.0;  // capex + labor + wait + fuel + lateness + opex
  bool battery_ok = true;
  bool fuel_ok = true;
  bool horizon_ok = true;

  bool feasible() const noexcept { return battery_ok && fuel_ok && horizon_ok; }
};

namespace detail {

/// Earliest-arrival forward pass. `on_stop` sees every StopSchedule in order.
template <typename OnStop>
RouteEval forward_pass(const Instance& inst, int type, std::span<const int> stops,
                       OnStop&& on_stop) {
  const auto& vt = inst.types.at(static_cast<std::size_t>(type));
  const auto& cf = inst.coeffs;
  RouteEval ev;
  if (stops.empty()) {
    ev.depot_return = cf.t_start;
    ev.last_departure = cf.t_start;
    return ev;
  }
  std::size_t prev = 0;
  double clock = cf.t_start;
  for (int id : stops) {
    const Client& c = inst.client(id);
    const auto node = static_cast<std::size_t>(id);
    const double leg_t = inst.travel_time(prev, node);
    const double leg_d = inst.distance(prev, node);
    StopSchedule st;
    st.client = id;
    st.arrival = clock + leg_t;
    st.wait = std::max(0.0, c.window_open - st.arrival);
    st.service_start = st.arrival + st.wait;
    st.service_duration = service_time(c, vt);
    st.departure = st.service_start + st.service_duration;
    st.lateness = std::max(0.0, st.departure - c.window_close);
    on_stop(st);

    ev.travel_h += leg_t;
    ev.distance_mi += leg_d;
    ev.opex_base += vt.opex_hr * leg_t;
    ev.service_h += st.service_duration;
    ev.wait_h += st.wait;
    ev.late_h += st.lateness;
    ev.energy_kwh += c.energy_demand;
    clock = st.departure;
    prev = node;
  }
  ev.last_departure = clock;
  const double back_t = inst.travel_time(prev, 0);
  ev.travel_h += back_t;
  ev.distance_mi += inst.distance(prev, 0);
  ev.opex_base += vt.opex_hr * back_t;
  ev.depot_return = clock + back_t;
  ev.fuel_gal = ev.distance_mi * vt.fuel_rate;

  ev.battery_ok = ev.energy_kwh <= vt.battery * cf.sigma_batt + 1e-9;
  ev.fuel_ok = ev.fuel_gal <= vt.fuel_cap * cf.sigma_fuel + 1e-9;
  ev.horizon_ok = ev.depot_return <= cf.horizon + 1e-9;
  ev.objective = cf.epsilon * vt.capex_day + cf.alpha * (ev.travel_h + ev.service_h) +
                 cf.lambda_w * ev.wait_h + cf.beta * ev.fuel_gal + cf.delta * ev.late_h +
                 cf.zeta * ev.opex_base;
  return ev;
}

}  // namespace detail

inline RouteEval evaluate_route(const Instance& inst, int type, std::span<const int> stops) {
  return detail::forward_pass(inst, type, stops, [](const StopSchedule&) {});
}

inline Schedule schedule_route(const Route& route, const Instance& inst) {
  Schedule sched;
  sched.depot_departure = inst.coeffs.t_start;
  sched.stops.reserve(route.stops.size());
  const RouteEval ev = detail::forward_pass(
      inst, route.slot.type, route.stops,
      [&](const StopSchedule& st) { sched.stops.push_back(st); });
  sched.depot_return = ev.depot_return;
  return sched;
}

/// Sum of per-route objectives in route order. Every solver reports its
/// cost through this function so identical solutions compare bit-equal.
inline double solution_objective(const Instance& inst, const Solution& sol) {
  double total = 0.0;
  for (const auto& r : sol.routes)
    if (!r.stops.empty()) total += evaluate_route(inst, r.slot.type, r.stops).objective;
  return total;
}

/// Drops empty routes, orders the routes of each type by their stop
/// sequence, renumbers slots 0..c-1 per type and sorts by slot.
inline Solution canonicalize(Solution sol) {
  std::erase_if(sol.routes, [](const Route& r) { return r.stops.empty(); });
  std::sort(sol.routes.begin(), sol.routes.end(), [](const Route& a, const Route& b) {
    if (a.slot.type != b.slot.type) return a.slot.type < b.slot.type;
    return a.stops < b.stops;
  });
  int current_type = -1;
  int next_index = 0;
  for (auto& r : sol.routes) {
    if (r.slot.type != current_type) {
      current_type = r.slot.type;
      next_index = 0;
    }
    r.slot.index = next_index++;
  }
  std::sort(sol.unserved.begin(), sol.unserved.end());
  return sol;
}

/// Lexicographic encoding used for deterministic tie-breaks: the sequence of
/// (type, stops...) of a canonical solution, with -1 separating routes.
inline std::vector<int> route_encoding(const Solution& canonical) {
  std::vector<int> enc;
  for (const auto& r : canonical.routes) {
    enc.push_back(r.slot.type);
    enc.insert(enc.end(), r.stops.begin(), r.stops.end());
    enc.push_back(-1);
  }
  return enc;
}

/// Total order on candidate solutions: cost quantized to 1e-8 USD, then the
/// route encoding. Makes the optimum independent of enumeration order.
struct RankKey {
  std::int64_t cost_ticks = 0;
  std::vector<int> encoding;
  auto operator<=>(const RankKey&) const = default;
};

inline RankKey rank_key(double cost, const Solution& canonical) {
  return {static_cast<std::int64_t>(std::llround(cost * 1e8)), route_encoding(canonical)};
}

inline std::string slot_label(const Instance& inst, SlotId slot) {
  return inst.types.at(static_cast<std::size_t>(slot.type)).name + "#" +
         std::to_string(slot.index + 1);
}

}  // namespace mfc
