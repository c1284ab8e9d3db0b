#pragma once

// Exact solvers for small instances. `solve_brute` enumerates fleet
// compositions and ordered client partitions; `solve_bnb` is a depth-first
// branch-and-bound over (slot activation, next client). Both rank candidates
// with the same RankKey, so on ties they return the same certificate.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "mfc/evaluation.hpp"
#include "mfc/model.hpp"
#include "mfc/solution.hpp"

namespace mfc {

struct SearchLimits {
  int max_clients = 8;
  int max_active_slots = 4;
  double time_limit = 60.0;  // seconds
  std::int64_t node_limit = 200'000'000;
};

struct ExactResult {
  Solution solution;
  double cost = 0.0;
  bool proven_optimal = false;
  std::int64_t nodes = 0;
};

/// Snapshot of a branch-and-bound node, handed to an optional observer.
struct BnbNodeView {
  double lower_bound = 0.0;
  std::span<const Route> closed;  // slot.index is unset (0)
  int open_type = -1;             // -1 when no route is open
  std::span<const int> open_stops;
};

using BnbObserver = std::function<void(const BnbNodeView&)>;

namespace detail {

/// Upper bound on simultaneously active vehicles: every active vehicle must
/// serve at least one client.
inline int active_cap(const Instance& inst) {
  return std::min({inst.total_fleet_cap, inst.total_slots(),
                   static_cast<int>(inst.num_clients())});
}

class Incumbent {
 public:
  void offer(const Instance& inst, Solution candidate) {
    Solution canon = canonicalize(std::move(candidate));
    const double cost = solution_objective(inst, canon);
    RankKey key = rank_key(cost, canon);
    if (!key_ || key < *key_) {
      key_ = std::move(key);
      cost_ = cost;
      best_ = std::move(canon);
    }
  }
  bool has() const noexcept { return key_.has_value(); }
  /// True when a candidate of this cost cannot beat the incumbent.
  bool dominated(double cost) const noexcept {
    return key_ && static_cast<std::int64_t>(std::llround(cost * 1e8)) > key_->cost_ticks;
  }
  double cost() const noexcept { return has() ? cost_ : std::numeric_limits<double>::infinity(); }
  const Solution& solution() const { return best_; }

 private:
  std::optional<RankKey> key_;
  double cost_ = 0.0;
  Solution best_;
};

inline void for_each_composition(const Instance& inst, int cap,
                                 const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> counts(inst.types.size(), 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t t, int used) {
    if (t == inst.types.size()) {
      fn(counts);
      return;
    }
    const auto& vt = inst.types[t];
    for (int c = vt.min_slots; c <= vt.max_slots && used + c <= cap; ++c) {
      counts[t] = c;
      rec(t + 1, used + c);
    }
    counts[t] = 0;
  };
  rec(0, 0);
}

}  // namespace detail

inline ExactResult solve_brute(const Instance& inst, const SearchLimits& limits = {}) {
  const int n = static_cast<int>(inst.num_clients());
  if (n > limits.max_clients)
    throw InstanceTooLarge("brute force supports at most " + std::to_string(limits.max_clients) +
                           " clients, instance has " + std::to_string(n));
  const int cap = detail::active_cap(inst);
  if (cap > limits.max_active_slots)
    throw InstanceTooLarge("instance admits " + std::to_string(cap) +
                           " active vehicles, brute force limit is " +
                           std::to_string(limits.max_active_slots));

  detail::Incumbent inc;
  ExactResult res;

  detail::for_each_composition(inst, cap, [&](const std::vector<int>& counts) {
    std::vector<SlotId> slots;
    for (std::size_t t = 0; t < counts.size(); ++t)
      for (int v = 0; v < counts[t]; ++v) slots.push_back({static_cast<int>(t), v});
    const int k = static_cast<int>(slots.size());
    if (k > n || (n > 0 && k == 0)) return;
    if (n == 0) {
      if (k == 0) inc.offer(inst, Solution{});
      return;
    }

    // Assign clients (ascending) to slots; slot v>0 of a type opens only
    // after slot v-1 of that type, so identical slots are not permuted.
    std::vector<std::vector<int>> members(static_cast<std::size_t>(k));
    std::function<void(int)> assign = [&](int client) {
      if (client > n) {
        for (const auto& m : members)
          if (m.empty()) return;
        // Feasible orderings of every slot, then their cartesian product.
        std::vector<std::vector<std::pair<std::vector<int>, double>>> options(members.size());
        for (std::size_t s = 0; s < members.size(); ++s) {
          std::vector<int> perm = members[s];
          do {
            ++res.nodes;
            const RouteEval ev = evaluate_route(inst, slots[s].type, perm);
            if (ev.feasible()) options[s].emplace_back(perm, ev.objective);
          } while (std::next_permutation(perm.begin(), perm.end()));
          if (options[s].empty()) return;
        }
        Solution sol;
        sol.routes.resize(members.size());
        for (std::size_t s = 0; s < members.size(); ++s) sol.routes[s].slot = slots[s];
        std::vector<double> objs(options.size(), 0.0);
        std::vector<std::size_t> order(options.size());
        std::function<void(std::size_t)> product = [&](std::size_t s) {
          if (s == options.size()) {
            // Same summation order as solution_objective on the canonical form.
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
              if (slots[a].type != slots[b].type) return slots[a].type < slots[b].type;
              return sol.routes[a].stops < sol.routes[b].stops;
            });
            double cost = 0.0;
            for (std::size_t i : order) cost += objs[i];
            if (!inc.dominated(cost)) inc.offer(inst, sol);
            return;
          }
          for (const auto& [perm, obj] : options[s]) {
            sol.routes[s].stops = perm;
            objs[s] = obj;
            product(s + 1);
          }
        };
        product(0);
        return;
      }
      for (int s = 0; s < k; ++s) {
        const auto us = static_cast<std::size_t>(s);
        if (members[us].empty() && slots[us].index > 0 && members[us - 1].empty()) continue;
        members[us].push_back(client);
        assign(client + 1);
        members[us].pop_back();
      }
    };
    assign(1);
  });

  if (!inc.has()) throw Infeasible("no fleet and route assignment satisfies every constraint");
  res.solution = inc.solution();
  res.cost = inc.cost();
  res.proven_optimal = true;
  return res;
}

namespace detail {

class BranchAndBound {
 public:
  BranchAndBound(const Instance& inst, const SearchLimits& limits, BnbObserver observer)
      : inst_(inst),
        limits_(limits),
        observer_(std::move(observer)),
        n_(static_cast<int>(inst.num_clients())),
        cap_(active_cap(inst)),
        assigned_(static_cast<std::size_t>(n_) + 1, 0),
        type_count_(inst.types.size(), 0),
        start_(std::chrono::steady_clock::now()) {
    const auto& cf = inst.coeffs;
    const std::size_t nodes = inst.num_nodes();
    arc_lb_.assign(nodes * nodes, std::numeric_limits<double>::infinity());
    service_lb_.assign(nodes, std::numeric_limits<double>::infinity());
    cheapest_capex_.assign(inst.types.size(), 0.0);
    for (std::size_t t = 0; t < inst.types.size(); ++t) {
      const auto& vt = inst.types[t];
      cheapest_capex_[t] = cf.epsilon * vt.capex_day;
      if (vt.max_slots == 0) continue;
      for (std::size_t i = 0; i < nodes; ++i)
        for (std::size_t j = 0; j < nodes; ++j)
          arc_lb_[i * nodes + j] = std::min(arc_lb_[i * nodes + j], arc_cost(t, i, j));
      for (int j = 1; j <= n_; ++j)
        service_lb_[static_cast<std::size_t>(j)] =
            std::min(service_lb_[static_cast<std::size_t>(j)],
                     cf.alpha * service_time(inst.client(j), vt));
    }
  }

  ExactResult run() {
    ExactResult res;
    if (n_ == 0) {
      if (min_deficit_routes() == 0) inc_.offer(inst_, Solution{});
    } else {
      open_routes(0.0);
    }
    res.nodes = nodes_;
    if (!inc_.has()) {
      if (aborted_) throw Infeasible("search limits reached before any feasible solution");
      throw Infeasible("no fleet and route assignment satisfies every constraint");
    }
    res.solution = inc_.solution();
    res.cost = inc_.cost();
    res.proven_optimal = !aborted_;
    return res;
  }

 private:
  struct OpenRoute {
    int type = -1;
    int must_contain = 0;  // smallest unassigned client when opened
    std::vector<int> stops;
    std::size_t tail = 0;
    double clock = 0.0;
    double energy = 0.0;
    double distance = 0.0;
    double cost = 0.0;  // everything except the return leg
  };

  double arc_cost(std::size_t type, std::size_t i, std::size_t j) const {
    const auto& vt = inst_.types[type];
    const auto& cf = inst_.coeffs;
    const double t = inst_.travel_time(i, j);
    return (cf.alpha + cf.zeta * vt.opex_hr) * t + cf.beta * vt.fuel_rate * inst_.distance(i, j);
  }

  int unassigned_count() const { return n_ - assigned_total_; }

  int smallest_unassigned() const {
    for (int j = 1; j <= n_; ++j)
      if (!assigned_[static_cast<std::size_t>(j)]) return j;
    return 0;
  }

  int min_deficit_routes() const {
    int d = 0;
    for (std::size_t t = 0; t < inst_.types.size(); ++t)
      d += std::max(0, inst_.types[t].min_slots - type_count_[t]);
    return d;
  }

  bool out_of_budget() {
    if (aborted_) return true;
    if (nodes_ >= limits_.node_limit) aborted_ = true;
    if ((nodes_ & 1023) == 0) {
      const std::chrono::duration<double> el = std::chrono::steady_clock::now() - start_;
      if (el.count() > limits_.time_limit) aborted_ = true;
    }
    return aborted_;
  }

  double lower_bound(double committed, const OpenRoute* open) const {
    const std::size_t nodes = inst_.num_nodes();
    double lb = committed;
    for (int j = 1; j <= n_; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      if (assigned_[uj]) continue;
      double incoming = arc_lb_[0 * nodes + uj];
      if (open) incoming = std::min(incoming, arc_lb_[open->tail * nodes + uj]);
      for (int i = 1; i <= n_; ++i)
        if (i != j && !assigned_[static_cast<std::size_t>(i)])
          incoming = std::min(incoming, arc_lb_[static_cast<std::size_t>(i) * nodes + uj]);
      lb += incoming + service_lb_[uj];
    }
    if (open) {
      const auto t = static_cast<std::size_t>(open->type);
      double back = arc_cost(t, open->tail, 0);
      for (int i = 1; i <= n_; ++i)
        if (!assigned_[static_cast<std::size_t>(i)])
          back = std::min(back, arc_cost(t, static_cast<std::size_t>(i), 0));
      lb += back;
    }
    for (std::size_t t = 0; t < inst_.types.size(); ++t) {
      const int deficit = std::max(0, inst_.types[t].min_slots - type_count_[t]);
      lb += deficit * cheapest_capex_[t];
    }
    return lb;
  }

  bool prune(double lb) const { return inc_.has() && lb > inc_.cost() + 1e-6; }

  void notify(double lb, const OpenRoute* open) {
    if (!observer_) return;
    BnbNodeView view;
    view.lower_bound = lb;
    view.closed = closed_;
    if (open) {
      view.open_type = open->type;
      view.open_stops = open->stops;
    }
    observer_(view);
  }

  // No route open: choose the type of the next vehicle.
  void open_routes(double committed) {
    if (static_cast<int>(closed_.size()) >= cap_) return;
    const int m = smallest_unassigned();
    for (std::size_t t = 0; t < inst_.types.size(); ++t) {
      const auto& vt = inst_.types[t];
      if (type_count_[t] >= vt.max_slots) continue;
      ++type_count_[t];
      if (min_deficit_routes() <= unassigned_count()) {
        OpenRoute r;
        r.type = static_cast<int>(t);
        r.must_contain = m;
        r.clock = inst_.coeffs.t_start;
        r.cost = inst_.coeffs.epsilon * vt.capex_day;
        expand(committed, r);
      }
      --type_count_[t];
      if (aborted_) return;
    }
  }

  void expand(double committed, OpenRoute& r) {
    ++nodes_;
    if (out_of_budget()) return;
    const double lb = lower_bound(committed + r.cost, &r);
    notify(lb, &r);
    if (prune(lb)) return;

    const auto& vt = inst_.types[static_cast<std::size_t>(r.type)];
    const auto& cf = inst_.coeffs;

    // Extend with each unassigned client, cheapest arc first.
    std::vector<std::pair<double, int>> cand;
    for (int j = 1; j <= n_; ++j)
      if (!assigned_[static_cast<std::size_t>(j)])
        cand.emplace_back(arc_cost(static_cast<std::size_t>(r.type), r.tail,
                                   static_cast<std::size_t>(j)),
                          j);
    std::sort(cand.begin(), cand.end());
    for (const auto& [arc, j] : cand) {
      const Client& c = inst_.client(j);
      const auto uj = static_cast<std::size_t>(j);
      const double energy = r.energy + c.energy_demand;
      if (energy > vt.battery * cf.sigma_batt + 1e-9) continue;
      const double distance = r.distance + inst_.distance(r.tail, uj);
      if (distance * vt.fuel_rate > vt.fuel_cap * cf.sigma_fuel + 1e-9) continue;
      const double leg = inst_.travel_time(r.tail, uj);
      const double arrival = r.clock + leg;
      const double wait = std::max(0.0, c.window_open - arrival);
      const double s = service_time(c, vt);
      const double departure = arrival + wait + s;
      if (departure > cf.horizon + 1e-9) continue;
      const double late = std::max(0.0, departure - c.window_close);

      OpenRoute next = r;
      next.stops.push_back(j);
      next.tail = uj;
      next.clock = departure;
      next.energy = energy;
      next.distance = distance;
      next.cost = r.cost + cf.alpha * (leg + s) + cf.lambda_w * wait + cf.delta * late +
                  cf.beta * vt.fuel_rate * inst_.distance(r.tail, uj) +
                  cf.zeta * vt.opex_hr * leg;
      assigned_[uj] = 1;
      ++assigned_total_;
      expand(committed, next);
      assigned_[uj] = 0;
      --assigned_total_;
      if (aborted_) return;
    }

    // Close the route; it must hold the client that was smallest when opened.
    if (r.stops.empty() ||
        std::find(r.stops.begin(), r.stops.end(), r.must_contain) == r.stops.end())
      return;
    const RouteEval ev = evaluate_route(inst_, r.type, r.stops);
    if (!ev.feasible()) return;
    closed_.push_back({SlotId{r.type, 0}, r.stops});
    const double closed_committed = committed + ev.objective;
    if (unassigned_count() == 0) {
      if (min_deficit_routes() == 0) {
        ++nodes_;
        Solution sol;
        sol.routes = closed_;
        inc_.offer(inst_, std::move(sol));
      }
    } else {
      ++nodes_;
      const double lb = lower_bound(closed_committed, nullptr);
      notify(lb, nullptr);
      if (!prune(lb)) open_routes(closed_committed);
    }
    closed_.pop_back();
  }

  const Instance& inst_;
  SearchLimits limits_;
  BnbObserver observer_;
  int n_;
  int cap_;
  std::vector<char> assigned_;
  int assigned_total_ = 0;
  std::vector<int> type_count_;
  std::vector<Route> closed_;
  std::vector<double> arc_lb_;
  std::vector<double> service_lb_;
  std::vector<double> cheapest_capex_;
  Incumbent inc_;
  std::int64_t nodes_ = 0;
  bool aborted_ = false;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

inline ExactResult solve_bnb(const Instance& inst, const SearchLimits& limits = {},
                             BnbObserver observer = {}) {
  if (inst.num_clients() > 63)
    throw InstanceTooLarge("branch-and-bound supports at most 63 clients");
  return detail::BranchAndBound(inst, limits, std::move(observer)).run();
}

}  // namespace mfc
