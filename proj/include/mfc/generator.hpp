#pragma once

// Synthetic scenario generators for a dense urban and a sparse rural region.
// Positions are planar miles with the depot at the demand centroid.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mfc/model.hpp"

namespace mfc {

enum class Profile { urban_dense, rural_sparse };
enum class WindowStyle { narrow_overlapping, wide_offset };

struct GeneratorConfig {
  Profile profile = Profile::urban_dense;
  int n_clients = 25;
  double area = 800.0;  // square miles
  WindowStyle window_style = WindowStyle::narrow_overlapping;
  std::uint64_t seed = 1;
};

inline GeneratorConfig urban_config(std::uint64_t seed, int n = 25, double area = 800.0) {
  return {Profile::urban_dense, n, area, WindowStyle::narrow_overlapping, seed};
}

inline GeneratorConfig rural_config(std::uint64_t seed, int n = 6, double area = 210.0) {
  return {Profile::rural_sparse, n, area, WindowStyle::wide_offset, seed};
}

inline const char* to_string(Profile p) {
  return p == Profile::urban_dense ? "urban_dense" : "rural_sparse";
}

inline const char* to_string(WindowStyle w) {
  return w == WindowStyle::narrow_overlapping ? "narrow_overlapping" : "wide_offset";
}

/// Deterministic per seed. Every window fits the fastest service and the
/// return leg before the horizon.
inline Instance generate(const GeneratorConfig& cfg) {
  if (cfg.n_clients <= 0) throw DegenerateInput("n_clients must be positive");
  if (!(cfg.area > 0.0)) throw DegenerateInput("area must be positive");
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(cfg.profile == Profile::urban_dense ? 1 : 2)};
  std::mt19937_64 rng(seq);
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  const double side = std::sqrt(cfg.area);
  const int n = cfg.n_clients;

  Instance inst;
  inst.name = std::string(to_string(cfg.profile)) + "-n" + std::to_string(n) + "-s" +
              std::to_string(cfg.seed);
  inst.coords = CoordinateSystem::planar;
  inst.types = default_catalog();
  inst.total_fleet_cap = 36;

  std::vector<Location> pos;
  if (cfg.profile == Profile::urban_dense) {
    const int clusters = std::max(2, n / 6);
    std::vector<Location> centers;
    for (int c = 0; c < clusters; ++c)
      centers.push_back({uni(0.15 * side, 0.85 * side), uni(0.15 * side, 0.85 * side)});
    std::normal_distribution<double> spread(0.0, 0.06 * side);
    std::uniform_int_distribution<int> pick(0, clusters - 1);
    for (int j = 0; j < n; ++j) {
      const Location& c = centers[static_cast<std::size_t>(pick(rng))];
      pos.push_back({std::clamp(c.lat + spread(rng), 0.0, side),
                     std::clamp(c.lon + spread(rng), 0.0, side)});
    }
  } else {
    for (int j = 0; j < n; ++j) pos.push_back({uni(0.0, side), uni(0.0, side)});
  }
  for (const auto& p : pos) {
    inst.depot.lat += p.lat / n;
    inst.depot.lon += p.lon / n;
  }

  std::vector<double> anchors;
  for (int a = 0; a < std::max(2, n / 5); ++a) anchors.push_back(uni(1.0, 17.0));
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) order[static_cast<std::size_t>(j)] = j;
  std::shuffle(order.begin(), order.end(), rng);

  std::uniform_int_distribution<int> rho_step(0, 5);
  std::uniform_int_distribution<std::size_t> anchor_pick(0, anchors.size() - 1);
  for (int j = 0; j < n; ++j) {
    Client c;
    c.id = j + 1;
    c.location = pos[static_cast<std::size_t>(j)];
    c.equipment_battery = std::round(uni(120.0, 1000.0));
    c.energy_demand = demand_from_battery(*c.equipment_battery);
    c.max_accept_power = 100.0 + 50.0 * rho_step(rng);
    double open, len;
    if (cfg.window_style == WindowStyle::narrow_overlapping) {
      len = uni(2.0, 4.0);
      open = anchors[anchor_pick(rng)] + uni(-1.0, 1.0);
    } else {
      len = uni(4.0, 8.0);
      open = 10.0 * order[static_cast<std::size_t>(j)] / n + uni(0.0, 1.5);
    }
    inst.clients.push_back(c);
    inst.clients.back().window_open = open;
    inst.clients.back().window_close = open + len;
  }

  derive_matrices(inst);
  const auto& cf = inst.coeffs;
  for (auto& c : inst.clients) {
    double fastest = std::numeric_limits<double>::infinity();
    for (const auto& vt : inst.types) fastest = std::min(fastest, service_time(c, vt));
    const double len = std::max(c.window_close - c.window_open, fastest + 0.25);
    const double back = inst.travel_time(static_cast<std::size_t>(c.id), 0);
    const double latest_open = cf.horizon - 0.25 - back - len;
    c.window_open = std::clamp(c.window_open, 0.0, latest_open);
    c.window_close = c.window_open + len;
  }
  return inst;
}

}  // namespace mfc
