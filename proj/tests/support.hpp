#pragma once

// Shared fixtures: hand-built instances, a random small-instance generator
// and an exhaustive set-partition oracle written independently of the
// library solvers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "mfc/mfc.hpp"

namespace mfc::test {

/// Depot plus clients on a line, `spacing` miles apart, every window open all day.
inline Instance line_instance(int n, double spacing = 2.0) {
  Instance inst;
  inst.name = "line";
  inst.types = default_catalog();
  inst.total_fleet_cap = inst.total_slots();
  for (int j = 1; j <= n; ++j) {
    Client c;
    c.id = j;
    c.location = {0.0, spacing * j};
    c.energy_demand = 50.0;
    c.max_accept_power = 200.0;
    c.window_open = 0.0;
    c.window_close = 24.0;
    inst.clients.push_back(c);
  }
  inst.road_factor = 1.0;
  derive_matrices(inst);
  return inst;
}

struct SmallInstanceOptions {
  int min_clients = 2;
  int max_clients = 6;
  int max_total_slots = 4;
  double side = 12.0;  // miles
};

/// Random instance with at most `max_total_slots` slots over 2-3 catalog types.
inline Instance random_small_instance(std::uint64_t seed, SmallInstanceOptions opt = {}) {
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + 17);
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

  Instance inst;
  inst.name = "small-" + std::to_string(seed);
  const auto catalog = default_catalog();
  std::vector<int> idx{0, 1, 2, 3, 4};
  std::shuffle(idx.begin(), idx.end(), rng);
  const int num_types = pick(2, 3);
  idx.resize(static_cast<std::size_t>(num_types));
  std::sort(idx.begin(), idx.end());
  int slots_left = opt.max_total_slots;
  for (int t : idx) {
    VehicleType vt = catalog[static_cast<std::size_t>(t)];
    vt.max_slots = std::min(slots_left - (num_types - static_cast<int>(inst.types.size()) - 1),
                            pick(1, 2));
    vt.max_slots = std::max(1, vt.max_slots);
    vt.min_slots = 0;
    slots_left -= vt.max_slots;
    inst.types.push_back(vt);
  }
  if (pick(0, 5) == 0) inst.types[0].min_slots = 1;
  inst.total_fleet_cap = inst.total_slots() - (pick(0, 3) == 0 ? 1 : 0);
  inst.total_fleet_cap = std::max(inst.total_fleet_cap, 1);

  const int n = pick(opt.min_clients, opt.max_clients);
  for (int j = 1; j <= n; ++j) {
    Client c;
    c.id = j;
    c.location = {uni(0, opt.side), uni(0, opt.side)};
    c.equipment_battery = std::round(uni(120.0, 700.0));
    c.energy_demand = demand_from_battery(*c.equipment_battery);
    c.max_accept_power = 100.0 + 50.0 * pick(0, 5);
    const double open = uni(0.0, 14.0);
    c.window_open = open;
    c.window_close = open + uni(1.5, 6.0);
    inst.clients.push_back(c);
  }
  inst.depot = {opt.side / 2, opt.side / 2};
  derive_matrices(inst);
  return inst;
}

/// True when the fleet of this instance could in principle serve every client.
inline bool plausibly_feasible(const Instance& inst) {
  return validate_instance(inst).empty();
}

/// Exhaustive optimum by set partition: best (type, order) per client block,
/// then a type assignment over blocks that respects fleet bounds. Returns +inf
/// when nothing is feasible.
inline double partition_oracle(const Instance& inst) {
  const int n = static_cast<int>(inst.num_clients());
  const std::size_t T = inst.types.size();
  if (n == 0) {
    double capex_only = 0.0;
    for (const auto& vt : inst.types)
      if (vt.min_slots > 0) return std::numeric_limits<double>::infinity();
    return capex_only;
  }
  // best[mask][t]: cheapest feasible single route of type t over the clients in mask
  const std::size_t masks = std::size_t{1} << n;
  std::vector<std::vector<double>> best(masks,
                                        std::vector<double>(T, std::numeric_limits<double>::infinity()));
  for (std::size_t mask = 1; mask < masks; ++mask) {
    std::vector<int> members;
    for (int j = 0; j < n; ++j)
      if (mask >> j & 1) members.push_back(j + 1);
    for (std::size_t t = 0; t < T; ++t) {
      std::vector<int> perm = members;
      do {
        const RouteEval ev = evaluate_route(inst, static_cast<int>(t), perm);
        if (ev.feasible()) best[mask][t] = std::min(best[mask][t], ev.objective);
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  }
  double answer = std::numeric_limits<double>::infinity();
  std::vector<int> used(T, 0);
  std::function<void(std::size_t, int, double)> rec = [&](std::size_t remaining, int active,
                                                          double cost) {
    if (remaining == 0) {
      for (std::size_t t = 0; t < T; ++t)
        if (used[t] < inst.types[t].min_slots) return;
      answer = std::min(answer, cost);
      return;
    }
    if (active == inst.total_fleet_cap) return;
    // Block containing the lowest remaining client, to avoid permuted partitions.
    const std::size_t low = remaining & (~remaining + 1);
    const std::size_t rest = remaining ^ low;
    for (std::size_t sub = rest;; sub = (sub - 1) & rest) {
      const std::size_t block = sub | low;
      for (std::size_t t = 0; t < T; ++t) {
        if (used[t] == inst.types[t].max_slots || !std::isfinite(best[block][t])) continue;
        ++used[t];
        rec(remaining ^ block, active + 1, cost + best[block][t]);
        --used[t];
      }
      if (sub == 0) break;
    }
  };
  rec(masks - 1, 0, 0.0);
  return answer;
}

}  // namespace mfc::test
