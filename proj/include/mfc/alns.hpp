#pragma once

// Adaptive large-neighbourhood search over routes and fleet mix.
//
// Construction is regret-2 insertion where opening a new vehicle of any
// type with free slots competes with inserting into an open route. The
// improvement loop alternates destroy/repair pairs with fleet-mix moves
// (type change, merge, split) under simulated-annealing acceptance. Every
// state the search holds is feasible; a move that cannot be repaired is
// discarded.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <thread>
#include <vector>

#include "mfc/evaluation.hpp"
#include "mfc/model.hpp"
#include "mfc/solution.hpp"

namespace mfc {

struct SearchParams {
  std::uint64_t seed = 1;
  int iterations = 2000;
  double destroy_fraction = 0.3;
  int restart_count = 1;
  // Annealing temperatures as fractions of the starting objective.
  double initial_temperature = 0.02;
  double final_temperature = 0.0002;
  // Initial roulette weights: destroy {random, worst, route} then fleet
  // moves {type change, merge, split}; repair {greedy, regret-2}.
  std::vector<double> destroy_weights{1, 1, 1, 1, 1, 1};
  std::vector<double> repair_weights{1, 1};
  double reaction = 0.2;
  int segment_length = 100;
  double noise = 0.1;
  double time_limit = 0.0;  // seconds per solve, 0 = unlimited
  int threads = 1;
};

/// Best objective after every iteration of `improve`.
struct SearchTrace {
  std::vector<double> best_costs;
};

namespace detail {

struct WorkRoute {
  int type = 0;
  std::vector<int> stops;
  RouteEval eval;
};

struct WorkState {
  std::vector<WorkRoute> routes;
  std::vector<int> type_count;
  double cost = 0.0;

  void recost() {
    cost = 0.0;
    for (const auto& r : routes) cost += r.eval.objective;
  }
};

struct InsertOption {
  double delta = std::numeric_limits<double>::infinity();
  int route = -1;  // -1 opens a new vehicle of `type`
  int pos = 0;
  int type = 0;
};

inline Solution to_solution(const WorkState& st) {
  Solution sol;
  for (const auto& r : st.routes) sol.routes.push_back({SlotId{r.type, 0}, r.stops});
  return canonicalize(std::move(sol));
}

class Alns {
 public:
  using Clock = std::chrono::steady_clock;

  Alns(const Instance& inst, std::mt19937_64& rng) : inst_(inst), rng_(rng) {}

  bool open_largest = false;  // new vehicles take the biggest battery, not the cheapest

  WorkState from_solution(const Solution& sol) const {
    WorkState st;
    st.type_count.assign(inst_.types.size(), 0);
    for (const auto& r : sol.routes) {
      if (r.stops.empty()) continue;
      st.routes.push_back({r.slot.type, r.stops, evaluate_route(inst_, r.slot.type, r.stops)});
      ++st.type_count[static_cast<std::size_t>(r.slot.type)];
    }
    st.recost();
    return st;
  }

  bool counts_ok(const WorkState& st) const {
    int total = 0;
    for (std::size_t t = 0; t < inst_.types.size(); ++t) {
      if (st.type_count[t] < inst_.types[t].min_slots || st.type_count[t] > inst_.types[t].max_slots)
        return false;
      total += st.type_count[t];
    }
    return total <= inst_.total_fleet_cap;
  }

  bool can_open(const WorkState& st, std::size_t type) const {
    const int total = static_cast<int>(st.routes.size());
    return total < inst_.total_fleet_cap && st.type_count[type] < inst_.types[type].max_slots;
  }

  /// Best insertion per open route plus the best new-vehicle option.
  void insertion_options(const WorkState& st, int client, std::vector<InsertOption>& out) {
    out.clear();
    const Client& c = inst_.client(client);
    const auto& cf = inst_.coeffs;
    for (std::size_t ri = 0; ri < st.routes.size(); ++ri) {
      const auto& r = st.routes[ri];
      const auto& vt = inst_.types[static_cast<std::size_t>(r.type)];
      if (r.eval.energy_kwh + c.energy_demand > vt.battery * cf.sigma_batt + 1e-9) continue;
      InsertOption best;
      for (std::size_t p = 0; p <= r.stops.size(); ++p) {
        scratch_.assign(r.stops.begin(), r.stops.end());
        scratch_.insert(scratch_.begin() + static_cast<std::ptrdiff_t>(p), client);
        const RouteEval ev = evaluate_route(inst_, r.type, scratch_);
        if (!ev.feasible()) continue;
        const double delta = ev.objective - r.eval.objective;
        if (delta < best.delta) best = {delta, static_cast<int>(ri), static_cast<int>(p), r.type};
      }
      if (best.route >= 0) out.push_back(best);
    }
    InsertOption fresh;
    for (std::size_t t = 0; t < inst_.types.size(); ++t) {
      if (!can_open(st, t)) continue;
      const int single[] = {client};
      const RouteEval ev = evaluate_route(inst_, static_cast<int>(t), single);
      if (!ev.feasible()) continue;
      bool better = ev.objective < fresh.delta;
      if (open_largest && std::isfinite(fresh.delta)) {
        const double cap = inst_.types[t].battery;
        const double held = inst_.types[static_cast<std::size_t>(fresh.type)].battery;
        better = cap > held || (cap == held && better);
      }
      if (better) fresh = {ev.objective, -1, 0, static_cast<int>(t)};
    }
    if (fresh.delta < std::numeric_limits<double>::infinity()) out.push_back(fresh);
  }

  void apply(WorkState& st, int client, const InsertOption& opt) {
    if (opt.route < 0) {
      std::vector<int> stops{client};
      st.routes.push_back({opt.type, stops, evaluate_route(inst_, opt.type, stops)});
      ++st.type_count[static_cast<std::size_t>(opt.type)];
    } else {
      auto& r = st.routes[static_cast<std::size_t>(opt.route)];
      r.stops.insert(r.stops.begin() + opt.pos, client);
      r.eval = evaluate_route(inst_, r.type, r.stops);
    }
    st.recost();
  }

  void remove_client(WorkState& st, int client) {
    for (std::size_t ri = 0; ri < st.routes.size(); ++ri) {
      auto& r = st.routes[ri];
      auto it = std::find(r.stops.begin(), r.stops.end(), client);
      if (it == r.stops.end()) continue;
      r.stops.erase(it);
      if (r.stops.empty()) {
        --st.type_count[static_cast<std::size_t>(r.type)];
        st.routes.erase(st.routes.begin() + static_cast<std::ptrdiff_t>(ri));
      } else {
        r.eval = evaluate_route(inst_, r.type, r.stops);
      }
      st.recost();
      return;
    }
  }

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
  std::size_t pick(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  }

  /// Inserts every pending client; regret-2 when `regret`, else cheapest
  /// first. Returns false when some client fits nowhere.
  bool repair(WorkState& st, std::vector<int> pending, bool regret, double noise) {
    std::sort(pending.begin(), pending.end());
    std::vector<InsertOption> opts;
    while (!pending.empty()) {
      std::size_t chosen = pending.size();
      InsertOption chosen_opt;
      double chosen_score = 0.0;
      for (std::size_t k = 0; k < pending.size(); ++k) {
        insertion_options(st, pending[k], opts);
        if (opts.empty()) return false;
        std::sort(opts.begin(), opts.end(),
                  [](const InsertOption& a, const InsertOption& b) { return a.delta < b.delta; });
        const double jitter = noise > 0.0 ? 1.0 + noise * (2.0 * uniform() - 1.0) : 1.0;
        double score;
        if (regret) {
          const double gap = opts.size() > 1 ? opts[1].delta - opts[0].delta : 1e12;
          score = -gap * jitter;  // larger regret first
        } else {
          score = opts[0].delta * jitter;
        }
        if (chosen == pending.size() || score < chosen_score) {
          chosen = k;
          chosen_score = score;
          chosen_opt = opts[0];
        }
      }
      apply(st, pending[chosen], chosen_opt);
      pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(chosen));
    }
    return true;
  }

  std::vector<int> all_clients(const WorkState& st) const {
    std::vector<int> out;
    for (const auto& r : st.routes) out.insert(out.end(), r.stops.begin(), r.stops.end());
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<int> destroy_random(WorkState& st, int q) {
    std::vector<int> pool = all_clients(st);
    std::shuffle(pool.begin(), pool.end(), rng_);
    pool.resize(std::min<std::size_t>(pool.size(), static_cast<std::size_t>(q)));
    for (int c : pool) remove_client(st, c);
    return pool;
  }

  std::vector<int> destroy_worst(WorkState& st, int q) {
    std::vector<int> removed;
    for (int k = 0; k < q && !st.routes.empty(); ++k) {
      std::vector<std::pair<double, int>> savings;
      for (const auto& r : st.routes) {
        for (std::size_t p = 0; p < r.stops.size(); ++p) {
          scratch_.assign(r.stops.begin(), r.stops.end());
          scratch_.erase(scratch_.begin() + static_cast<std::ptrdiff_t>(p));
          const double without =
              scratch_.empty() ? 0.0 : evaluate_route(inst_, r.type, scratch_).objective;
          savings.emplace_back(r.eval.objective - without, r.stops[p]);
        }
      }
      std::sort(savings.begin(), savings.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
      });
      const auto idx = static_cast<std::size_t>(std::pow(uniform(), 3.0) *
                                                static_cast<double>(savings.size()));
      const int victim = savings[std::min(idx, savings.size() - 1)].second;
      remove_client(st, victim);
      removed.push_back(victim);
    }
    return removed;
  }

  std::vector<int> destroy_route(WorkState& st) {
    if (st.routes.empty()) return {};
    const std::size_t ri = pick(st.routes.size());
    std::vector<int> removed = st.routes[ri].stops;
    --st.type_count[static_cast<std::size_t>(st.routes[ri].type)];
    st.routes.erase(st.routes.begin() + static_cast<std::ptrdiff_t>(ri));
    st.recost();
    return removed;
  }

  /// Best feasible type for a stop sequence given the slots left free.
  bool best_type(const WorkState& st, std::span<const int> stops, int& type, RouteEval& eval) {
    bool found = false;
    for (std::size_t t = 0; t < inst_.types.size(); ++t) {
      if (st.type_count[t] >= inst_.types[t].max_slots) continue;
      const RouteEval ev = evaluate_route(inst_, static_cast<int>(t), stops);
      if (ev.feasible() && (!found || ev.objective < eval.objective)) {
        found = true;
        type = static_cast<int>(t);
        eval = ev;
      }
    }
    return found;
  }

  bool move_type_change(WorkState& st) {
    if (st.routes.empty()) return false;
    const std::size_t ri = pick(st.routes.size());
    WorkRoute r = st.routes[ri];
    --st.type_count[static_cast<std::size_t>(r.type)];
    int best_t = -1;
    RouteEval best_ev;
    for (std::size_t t = 0; t < inst_.types.size(); ++t) {
      if (static_cast<int>(t) == r.type || st.type_count[t] >= inst_.types[t].max_slots) continue;
      const RouteEval ev = evaluate_route(inst_, static_cast<int>(t), r.stops);
      if (ev.feasible() && (best_t < 0 || ev.objective < best_ev.objective)) {
        best_t = static_cast<int>(t);
        best_ev = ev;
      }
    }
    // Exchanging types with another route keeps the counts unchanged.
    double best_delta = best_t < 0 ? std::numeric_limits<double>::infinity()
                                   : best_ev.objective - r.eval.objective;
    std::size_t swap_with = st.routes.size();
    RouteEval swap_a, swap_b;
    for (std::size_t rj = 0; rj < st.routes.size(); ++rj) {
      const WorkRoute& o = st.routes[rj];
      if (rj == ri || o.type == r.type) continue;
      const RouteEval a = evaluate_route(inst_, o.type, r.stops);
      if (!a.feasible()) continue;
      const RouteEval b = evaluate_route(inst_, r.type, o.stops);
      if (!b.feasible()) continue;
      const double delta = a.objective + b.objective - r.eval.objective - o.eval.objective;
      if (delta < best_delta) {
        best_delta = delta;
        swap_with = rj;
        swap_a = a;
        swap_b = b;
      }
    }
    if (swap_with < st.routes.size()) {
      ++st.type_count[static_cast<std::size_t>(r.type)];
      WorkRoute& o = st.routes[swap_with];
      const int other = o.type;
      o = {r.type, o.stops, swap_b};
      st.routes[ri] = {other, r.stops, swap_a};
      st.recost();
      return true;
    }
    if (best_t < 0) {
      ++st.type_count[static_cast<std::size_t>(r.type)];
      return false;
    }
    st.routes[ri] = {best_t, r.stops, best_ev};
    ++st.type_count[static_cast<std::size_t>(best_t)];
    st.recost();
    return true;
  }

  bool move_merge(WorkState& st) {
    if (st.routes.size() < 2) return false;
    const std::size_t a = pick(st.routes.size());
    std::size_t b = pick(st.routes.size() - 1);
    if (b >= a) ++b;
    const WorkRoute ra = st.routes[a];
    const WorkRoute rb = st.routes[b];
    --st.type_count[static_cast<std::size_t>(ra.type)];
    --st.type_count[static_cast<std::size_t>(rb.type)];

    std::vector<std::vector<int>> orders(3);
    orders[0] = ra.stops;
    orders[0].insert(orders[0].end(), rb.stops.begin(), rb.stops.end());
    orders[1] = rb.stops;
    orders[1].insert(orders[1].end(), ra.stops.begin(), ra.stops.end());
    orders[2] = orders[0];
    std::stable_sort(orders[2].begin(), orders[2].end(), [&](int x, int y) {
      return inst_.client(x).window_open < inst_.client(y).window_open;
    });
    bool found = false;
    int type = 0;
    RouteEval eval;
    std::size_t best_order = 0;
    for (std::size_t o = 0; o < orders.size(); ++o) {
      int t;
      RouteEval ev;
      if (best_type(st, orders[o], t, ev) && (!found || ev.objective < eval.objective)) {
        found = true;
        type = t;
        eval = ev;
        best_order = o;
      }
    }
    if (!found) return false;
    st.routes.erase(st.routes.begin() + static_cast<std::ptrdiff_t>(std::max(a, b)));
    st.routes.erase(st.routes.begin() + static_cast<std::ptrdiff_t>(std::min(a, b)));
    st.routes.push_back({type, orders[best_order], eval});
    ++st.type_count[static_cast<std::size_t>(type)];
    st.recost();
    return true;
  }

  bool move_split(WorkState& st) {
    std::vector<std::size_t> candidates;
    for (std::size_t ri = 0; ri < st.routes.size(); ++ri)
      if (st.routes[ri].stops.size() >= 2) candidates.push_back(ri);
    if (candidates.empty() || static_cast<int>(st.routes.size()) >= inst_.total_fleet_cap)
      return false;
    const std::size_t ri = candidates[pick(candidates.size())];
    const WorkRoute r = st.routes[ri];
    --st.type_count[static_cast<std::size_t>(r.type)];

    double best = std::numeric_limits<double>::infinity();
    WorkRoute left, right;
    for (std::size_t cut = 1; cut < r.stops.size(); ++cut) {
      const std::vector<int> first(r.stops.begin(), r.stops.begin() + static_cast<std::ptrdiff_t>(cut));
      const std::vector<int> second(r.stops.begin() + static_cast<std::ptrdiff_t>(cut), r.stops.end());
      int t1 = -1, t2 = -1;
      RouteEval e1, e2;
      if (!best_type(st, first, t1, e1)) continue;
      ++st.type_count[static_cast<std::size_t>(t1)];
      const bool ok = best_type(st, second, t2, e2);
      --st.type_count[static_cast<std::size_t>(t1)];
      if (!ok) continue;
      if (e1.objective + e2.objective < best) {
        best = e1.objective + e2.objective;
        left = {t1, first, e1};
        right = {t2, second, e2};
      }
    }
    if (!std::isfinite(best)) return false;
    st.routes[ri] = left;
    st.routes.push_back(right);
    ++st.type_count[static_cast<std::size_t>(left.type)];
    ++st.type_count[static_cast<std::size_t>(right.type)];
    st.recost();
    return true;
  }

  static std::size_t roulette(std::span<const double> weights, double u) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      acc += weights[i];
      if (u * total < acc) return i;
    }
    return weights.size() - 1;
  }

  WorkState search(const WorkState& start, const SearchParams& p, Clock::time_point deadline,
                   SearchTrace* trace) {
    constexpr double score_best = 33, score_better = 9, score_accepted = 13;
    WorkState current = start;
    WorkState best = start;
    const int n = static_cast<int>(inst_.num_clients());
    const int q_max = std::clamp(static_cast<int>(std::lround(p.destroy_fraction * n)),
                                 std::min(3, n), std::max(1, n));
    const double t0 = std::max(1e-9, p.initial_temperature * start.cost);
    const double tf = std::max(1e-12, p.final_temperature * start.cost);

    std::vector<double> dw = p.destroy_weights, rw = p.repair_weights;
    if (dw.size() != 6) dw.assign(6, 1.0);
    if (rw.size() != 2) rw.assign(2, 1.0);
    std::vector<double> dscore(6, 0.0), rscore(2, 0.0);
    std::vector<int> duse(6, 0), ruse(2, 0);

    for (int it = 0; it < p.iterations; ++it) {
      if (p.time_limit > 0.0 && (it & 15) == 0 && Clock::now() > deadline) break;
      const double temp = t0 * std::pow(tf / t0, static_cast<double>(it) / p.iterations);
      WorkState cand = current;
      const std::size_t op = roulette(dw, uniform());
      std::size_t rep = rw.size();
      bool ok = true;
      if (op < 3) {
        const int q = 1 + static_cast<int>(pick(static_cast<std::size_t>(q_max)));
        std::vector<int> removed = op == 0   ? destroy_random(cand, q)
                                   : op == 1 ? destroy_worst(cand, q)
                                             : destroy_route(cand);
        rep = roulette(rw, uniform());
        const double noise = uniform() < 0.5 ? p.noise : 0.0;
        ok = !removed.empty() && repair(cand, std::move(removed), rep == 1, noise);
      } else if (op == 3) {
        ok = move_type_change(cand);
      } else if (op == 4) {
        ok = move_merge(cand);
      } else {
        ok = move_split(cand);
      }
      ok = ok && counts_ok(cand);

      double gained = 0.0;
      if (ok) {
        const double diff = cand.cost - current.cost;
        if (cand.cost < best.cost - 1e-9) {
          best = cand;
          gained = score_best;
        } else if (diff < -1e-9) {
          gained = score_better;
        }
        if (diff < 0.0 || uniform() < std::exp(-diff / temp)) {
          if (gained == 0.0 && diff >= 0.0) gained = score_accepted;
          current = std::move(cand);
        }
      }
      dscore[op] += gained;
      ++duse[op];
      if (rep < rw.size()) {
        rscore[rep] += gained;
        ++ruse[rep];
      }
      if (p.segment_length > 0 && (it + 1) % p.segment_length == 0) {
        for (std::size_t i = 0; i < dw.size(); ++i)
          if (duse[i] > 0)
            dw[i] = std::max(0.05, (1 - p.reaction) * dw[i] + p.reaction * dscore[i] / duse[i]);
        for (std::size_t i = 0; i < rw.size(); ++i)
          if (ruse[i] > 0)
            rw[i] = std::max(0.05, (1 - p.reaction) * rw[i] + p.reaction * rscore[i] / ruse[i]);
        std::fill(dscore.begin(), dscore.end(), 0.0);
        std::fill(rscore.begin(), rscore.end(), 0.0);
        std::fill(duse.begin(), duse.end(), 0);
        std::fill(ruse.begin(), ruse.end(), 0);
      }
      if (trace) trace->best_costs.push_back(best.cost);
    }
    return best;
  }

 private:
  const Instance& inst_;
  std::mt19937_64& rng_;
  std::vector<int> scratch_;
};

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

inline Solution construct_with(const Instance& inst, std::mt19937_64& rng) {
  Alns alns(inst, rng);
  WorkState st;
  st.type_count.assign(inst.types.size(), 0);
  const int n = static_cast<int>(inst.num_clients());
  std::vector<char> routed(static_cast<std::size_t>(n) + 1, 0);

  // Mandatory vehicles first, each seeded with its cheapest singleton client.
  for (std::size_t t = 0; t < inst.types.size(); ++t) {
    for (int k = 0; k < inst.types[t].min_slots; ++k) {
      int best_client = 0;
      RouteEval best_ev;
      for (int j = 1; j <= n; ++j) {
        if (routed[static_cast<std::size_t>(j)]) continue;
        const int single[] = {j};
        const RouteEval ev = evaluate_route(inst, static_cast<int>(t), single);
        if (ev.feasible() && (best_client == 0 || ev.objective < best_ev.objective)) {
          best_client = j;
          best_ev = ev;
        }
      }
      if (best_client == 0)
        throw Infeasible("cannot staff the minimum fleet of type " + inst.types[t].name);
      st.routes.push_back({static_cast<int>(t), {best_client}, best_ev});
      ++st.type_count[t];
      routed[static_cast<std::size_t>(best_client)] = 1;
    }
  }
  std::vector<int> pending;
  for (int j = 1; j <= n; ++j)
    if (!routed[static_cast<std::size_t>(j)]) pending.push_back(j);
  // Regret-2 first; when the fleet cap binds, open the largest type instead
  // of the cheapest, then fall back to noisy greedy passes.
  const WorkState seeded = st;
  bool placed = false;
  for (int attempt = 0; attempt < 32 && !placed; ++attempt) {
    st = seeded;
    alns.open_largest = attempt % 2 == 1;
    placed = attempt < 2 ? alns.repair(st, pending, /*regret=*/true, /*noise=*/0.0)
                         : alns.repair(st, pending, /*regret=*/attempt % 4 < 2, /*noise=*/0.5);
  }
  alns.open_largest = false;
  if (!placed) throw Infeasible("regret insertion could not place every client within budgets");
  if (!alns.counts_ok(st)) throw Infeasible("constructed fleet violates the fleet-size bounds");
  return to_solution(st);
}

}  // namespace detail

/// Regret-2 construction. Deterministic given `seed`.
inline Solution construct(const Instance& inst, std::uint64_t seed = 1) {
  auto rng = detail::make_rng(seed, 0);
  return detail::construct_with(inst, rng);
}

/// Runs the destroy/repair loop from a feasible `start`; never returns a
/// worse solution, and returns `start` unchanged when nothing better is found.
inline Solution improve(const Instance& inst, const Solution& start, const SearchParams& params,
                        SearchTrace* trace = nullptr) {
  if (params.iterations <= 0) return start;
  auto rng = detail::make_rng(params.seed, 1);
  detail::Alns alns(inst, rng);
  const detail::WorkState init = alns.from_solution(start);
  const auto deadline = detail::Alns::Clock::now() +
                        std::chrono::duration_cast<detail::Alns::Clock::duration>(
                            std::chrono::duration<double>(params.time_limit));
  const detail::WorkState best = alns.search(init, params, deadline, trace);
  if (best.cost < init.cost - 1e-9) return detail::to_solution(best);
  return start;
}

/// Construct + improve for every restart; the cheapest result wins, ties
/// going to the lowest restart index. Restarts may run on `threads` threads
/// without changing the result.
inline Solution solve(const Instance& inst, const SearchParams& params) {
  const int restarts = std::max(1, params.restart_count);
  std::vector<Solution> results(static_cast<std::size_t>(restarts));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(restarts));
  auto run = [&](int r) {
    try {
      const std::uint64_t seed = params.seed + static_cast<std::uint64_t>(r) * 0x9E3779B97F4A7C15ULL;
      SearchParams p = params;
      p.seed = seed;
      Solution start = construct(inst, seed);
      results[static_cast<std::size_t>(r)] = improve(inst, start, p);
    } catch (...) {
      errors[static_cast<std::size_t>(r)] = std::current_exception();
    }
  };
  const int threads = std::clamp(params.threads, 1, restarts);
  if (threads == 1) {
    for (int r = 0; r < restarts; ++r) run(r);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&, w] {
        for (int r = w; r < restarts; r += threads) run(r);
      });
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::size_t best = 0;
  double best_cost = solution_objective(inst, results[0]);
  for (std::size_t r = 1; r < results.size(); ++r) {
    const double c = solution_objective(inst, results[r]);
    if (c < best_cost - 1e-9) {
      best = r;
      best_cost = c;
    }
  }
  return canonicalize(results[best]);
}

}  // namespace mfc
