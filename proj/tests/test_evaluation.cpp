#include <gtest/gtest.h>

#include <random>

#include "mfc/evaluation.hpp"
#include "support.hpp"

namespace {

using namespace mfc;

/// Speed 1 so travel hours equal matrix entries; one Mega-like type.
Instance timed_instance(const std::vector<std::vector<double>>& d,
                        const std::vector<std::array<double, 4>>& clients /* E, rho, open, close */) {
  Instance inst;
  inst.coeffs.speed = 1.0;
  inst.types = {default_catalog()[4]};
  inst.total_fleet_cap = 3;
  inst.distance = SquareMatrix(d.size());
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = 0; j < d.size(); ++j) inst.distance(i, j) = d[i][j];
  for (std::size_t k = 0; k < clients.size(); ++k) {
    Client c;
    c.id = static_cast<int>(k) + 1;
    c.energy_demand = clients[k][0];
    c.max_accept_power = clients[k][1];
    c.window_open = clients[k][2];
    c.window_close = clients[k][3];
    inst.clients.push_back(c);
  }
  derive_matrices(inst);
  return inst;
}

bool has_kind(const std::vector<Violation>& v, ViolationKind k) {
  for (const auto& x : v)
    if (x.kind == k) return true;
  return false;
}

TEST(Schedule, WaitsForWindowOpening) {
  const Instance inst = timed_instance({{0, 1}, {1, 0}}, {{{50, 100, 3, 5}}});
  const Schedule s = schedule_route({{0, 0}, {1}}, inst);
  ASSERT_EQ(s.stops.size(), 1u);
  EXPECT_DOUBLE_EQ(s.stops[0].arrival, 1.0);
  EXPECT_DOUBLE_EQ(s.stops[0].wait, 2.0);
  EXPECT_DOUBLE_EQ(s.stops[0].service_start, 3.0);
  EXPECT_DOUBLE_EQ(s.stops[0].lateness, 0.0);
  EXPECT_DOUBLE_EQ(s.depot_return, 4.5);
  EXPECT_DOUBLE_EQ(s.depot_departure, 0.0);
}

TEST(Schedule, OpenWindowNoWaitNoLateness) {
  const Instance inst = timed_instance({{0, 2}, {2, 0}}, {{{100, 100, 0, 24}}});
  const Schedule s = schedule_route({{0, 0}, {1}}, inst);
  EXPECT_DOUBLE_EQ(s.stops[0].wait, 0.0);
  EXPECT_DOUBLE_EQ(s.stops[0].lateness, 0.0);
  EXPECT_DOUBLE_EQ(s.stops[0].service_duration, 1.0);
}

TEST(Schedule, SecondClientLate) {
  const Instance inst =
      timed_instance({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}, {{{100, 100, 0, 2}}, {{100, 100, 0, 2}}});
  const Schedule s = schedule_route({{0, 0}, {1, 2}}, inst);
  EXPECT_DOUBLE_EQ(s.stops[0].departure, 2.0);
  EXPECT_DOUBLE_EQ(s.stops[1].service_start, 3.0);
  EXPECT_DOUBLE_EQ(s.stops[1].lateness, 2.0);
}

TEST(Schedule, UnknownClientThrows) {
  const Instance inst = timed_instance({{0, 1}, {1, 0}}, {{{50, 100, 3, 5}}});
  EXPECT_THROW(schedule_route({{0, 0}, {2}}, inst), UnknownClient);
}

TEST(Schedule, IdentitiesAndMonotonicity) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Instance inst = test::random_small_instance(seed);
    std::vector<int> stops;
    for (int j = 1; j <= static_cast<int>(inst.num_clients()); ++j) stops.push_back(j);
    const Route r{{0, 0}, stops};
    const Schedule s = schedule_route(r, inst);
    double prev_start = -1.0;
    double clock = inst.coeffs.t_start;
    std::size_t prev = 0;
    for (const auto& st : s.stops) {
      const Client& c = inst.client(st.client);
      EXPECT_DOUBLE_EQ(st.arrival, clock + inst.travel_time(prev, static_cast<std::size_t>(st.client)));
      EXPECT_DOUBLE_EQ(st.wait, std::max(0.0, c.window_open - st.arrival));
      EXPECT_DOUBLE_EQ(st.service_start, std::max(st.arrival, c.window_open));
      EXPECT_DOUBLE_EQ(st.lateness, std::max(0.0, st.service_start + st.service_duration - c.window_close));
      EXPECT_GT(st.service_start, prev_start);
      if (st.wait > 0 && st.lateness > 0)
        EXPECT_LT(c.window_close - c.window_open, st.service_duration);
      prev_start = st.service_start;
      clock = st.departure;
      prev = static_cast<std::size_t>(st.client);
    }
  }
}

// Published aggregates of the two case studies.
OperationalTotals la_totals() {
  return {13.9, 1.38, 17.1287, 0.0, 82.7, 988.0, 0.0, {2, 4}};
}
OperationalTotals truckee_totals() {
  return {4.59, 0.6237, 18.41, 0.0, 23.13, 311.88, 0.0, {3}};
}

TEST(CostBreakdown, LosAngelesRows) {
  const auto cb = cost_from_totals(la_totals(), default_catalog(), {});
  EXPECT_NEAR(cb.travel_labor, 417.00, 0.02);
  EXPECT_NEAR(cb.service_labor, 41.40, 0.02);
  EXPECT_NEAR(cb.wait, 513.86, 0.02);
  EXPECT_NEAR(cb.fuel, 314.26, 0.02);
  EXPECT_NEAR(cb.energy_transfer, 98.80, 0.02);
  EXPECT_NEAR(cb.capex, 927.23, 1e-9);
  EXPECT_NEAR(cb.vehicle_trailer, 21.92, 0.01);
  EXPECT_NEAR(cb.reported_total, 2335.35, 1.0);
}

TEST(CostBreakdown, TruckeeRows) {
  const auto cb = cost_from_totals(truckee_totals(), default_catalog(), {});
  EXPECT_NEAR(cb.travel_labor, 137.69, 0.02);
  EXPECT_NEAR(cb.service_labor, 18.71, 0.02);
  EXPECT_NEAR(cb.wait, 552.30, 0.02);
  EXPECT_NEAR(cb.fuel, 87.90, 0.02);
  EXPECT_NEAR(cb.energy_transfer, 31.19, 0.02);
  EXPECT_NEAR(cb.reported_total, 1205.83, 1.0);
  EXPECT_NEAR(cost_per_kwh(cb.reported_total, 311.88), 3.86, 0.01);
  EXPECT_NEAR(cost_per_client(cb.reported_total, 6), 200.97, 0.01);
}

TEST(CostBreakdown, ObjectiveIsSumOfSixTerms) {
  const auto cb = cost_from_totals({3, 1, 2, 0.5, 10, 200, 7, {0, 1}}, default_catalog(), {});
  const double six = cb.travel_and_service + cb.wait + cb.fuel + cb.lateness + cb.capex + cb.opex;
  EXPECT_NEAR(cb.objective_total, six, 1e-6 * six);
  EXPECT_DOUBLE_EQ(cb.opex, 7.0);
  const auto with_opex = cost_from_totals({3, 1, 2, 0.5, 10, 200, 7, {0, 1}}, default_catalog(), {},
                                          {true, false});
  EXPECT_NEAR(with_opex.reported_total - cb.reported_total, 7.0, 1e-12);
  const auto folded = cost_from_totals({3, 1, 2, 0.5, 10, 200, 7, {0, 1}}, default_catalog(), {},
                                       {false, true});
  EXPECT_DOUBLE_EQ(folded.vehicle_trailer, 0.0);
  EXPECT_NEAR(folded.capex, cb.capex + cb.vehicle_trailer, 1e-12);
  EXPECT_NEAR(folded.reported_total, cb.reported_total, 1e-12);
}

TEST(CostBreakdown, EmptySolutionIsZero) {
  const Instance inst = test::line_instance(2);
  const auto cb = cost_breakdown(Solution{}, inst);
  EXPECT_EQ(cb.objective_total, 0.0);
  EXPECT_EQ(cb.reported_total, 0.0);
  EXPECT_EQ(cb.capex, 0.0);
  EXPECT_EQ(cb.energy_transfer, 0.0);
}

TEST(CostBreakdown, StandardRoundTripFuel) {
  Instance inst = test::line_instance(1, 10.0);
  const Solution sol{{{{0, 0}, {1}}}, {}};
  EXPECT_NEAR(cost_breakdown(sol, inst).fuel, 7.60, 1e-12);
}

TEST(CostBreakdown, MatchesRouteObjectives) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Instance inst = test::random_small_instance(seed);
    Solution sol;
    for (int j = 1; j <= static_cast<int>(inst.num_clients()); ++j)
      sol.routes.push_back({{static_cast<int>(j % inst.types.size()), 0}, {j}});
    const auto cb = cost_breakdown(sol, inst);
    EXPECT_NEAR(cb.objective_total, solution_objective(inst, sol), 1e-9 * cb.objective_total);
  }
}

TEST(CostBreakdown, AdditiveOverDisjointSolutions) {
  const Instance inst = test::line_instance(4);
  const Solution a{{{{1, 0}, {1, 2}}}, {}};
  const Solution b{{{{3, 0}, {4, 3}}}, {}};
  Solution ab = a;
  ab.routes.push_back(b.routes[0]);
  const auto ca = cost_breakdown(a, inst), cb = cost_breakdown(b, inst),
             cab = cost_breakdown(ab, inst);
  EXPECT_NEAR(cab.travel_and_service, ca.travel_and_service + cb.travel_and_service, 1e-9);
  EXPECT_NEAR(cab.wait, ca.wait + cb.wait, 1e-9);
  EXPECT_NEAR(cab.fuel, ca.fuel + cb.fuel, 1e-9);
  EXPECT_NEAR(cab.lateness, ca.lateness + cb.lateness, 1e-9);
  EXPECT_NEAR(cab.capex, ca.capex + cb.capex, 1e-9);
  EXPECT_NEAR(cab.opex, ca.opex + cb.opex, 1e-9);
  EXPECT_NEAR(cab.energy_transfer, ca.energy_transfer + cb.energy_transfer, 1e-9);
  EXPECT_NEAR(cab.reported_total, ca.reported_total + cb.reported_total, 1e-9);
}

TEST(CostBreakdown, LinearInEachCoefficient) {
  const OperationalTotals tot{3, 1, 2, 0.5, 10, 200, 7, {0, 4}};
  const CostCoefficients base;
  const auto c0 = cost_from_totals(tot, default_catalog(), base);
  auto scaled = [&](auto member) {
    CostCoefficients cf = base;
    cf.*member *= 2;
    return cost_from_totals(tot, default_catalog(), cf);
  };
  const auto ca = scaled(&CostCoefficients::alpha);
  EXPECT_NEAR(ca.travel_and_service, 2 * c0.travel_and_service, 1e-9);
  EXPECT_NEAR(ca.wait, c0.wait, 1e-12);
  const auto cl = scaled(&CostCoefficients::lambda_w);
  EXPECT_NEAR(cl.wait, 2 * c0.wait, 1e-9);
  EXPECT_NEAR(cl.travel_and_service, c0.travel_and_service, 1e-12);
  EXPECT_NEAR(scaled(&CostCoefficients::beta).fuel, 2 * c0.fuel, 1e-9);
  EXPECT_NEAR(scaled(&CostCoefficients::delta).lateness, 2 * c0.lateness, 1e-9);
  EXPECT_NEAR(scaled(&CostCoefficients::epsilon).capex, 2 * c0.capex, 1e-9);
  EXPECT_NEAR(scaled(&CostCoefficients::zeta).opex, 2 * c0.opex, 1e-9);
  EXPECT_NEAR(scaled(&CostCoefficients::gamma).energy_transfer, 2 * c0.energy_transfer, 1e-9);
}

TEST(Validate, MegaCarriesPublishedLoad) {
  Instance inst = test::line_instance(1, 1.0);
  inst.clients[0].energy_demand = 778.3;
  EXPECT_FALSE(has_kind(validate_solution({{{{4, 0}, {1}}}, {}}, inst), ViolationKind::battery_budget));
}

TEST(Validate, StandardOverBudgetMagnitude) {
  Instance inst = test::line_instance(1, 1.0);
  inst.clients[0].energy_demand = 100;
  const auto v = validate_solution({{{{0, 0}, {1}}}, {}}, inst);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, ViolationKind::battery_budget);
  EXPECT_NEAR(v[0].magnitude, 28.0, 1e-9);
}

TEST(Validate, DuplicateVisit) {
  const Instance inst = test::line_instance(3);
  const auto v = validate_solution({{{{1, 0}, {1, 3}}, {{1, 1}, {2, 3}}}, {}}, inst);
  EXPECT_TRUE(has_kind(v, ViolationKind::duplicate_visit));
}

TEST(Validate, SingleMutationYieldsMatchingKind) {
  const Instance base = test::line_instance(3);
  const Solution sol{{{{2, 0}, {1, 2}}, {{1, 0}, {3}}}, {}};
  ASSERT_TRUE(validate_solution(sol, base).empty());

  auto only = [](const std::vector<Violation>& v, ViolationKind k) {
    return !v.empty() && std::all_of(v.begin(), v.end(), [&](const Violation& x) { return x.kind == k; });
  };
  {
    Instance inst = base;
    inst.clients[2].energy_demand = 200;  // Medium usable 144
    EXPECT_TRUE(only(validate_solution(sol, inst), ViolationKind::battery_budget));
  }
  {
    Instance inst = base;
    inst.types[1].fuel_cap = 0.5;
    EXPECT_TRUE(only(validate_solution(sol, inst), ViolationKind::fuel_budget));
  }
  {
    Instance inst = base;
    inst.total_fleet_cap = 1;
    EXPECT_TRUE(only(validate_solution(sol, inst), ViolationKind::fleet_bound_total));
  }
  {
    Instance inst = base;
    inst.types[4].min_slots = 1;
    EXPECT_TRUE(only(validate_solution(sol, inst), ViolationKind::fleet_bound_type_min));
  }
  {
    Instance inst = base;
    inst.coeffs.horizon = 0.5;
    EXPECT_TRUE(only(validate_solution(sol, inst), ViolationKind::horizon));
  }
  {
    Solution s = sol;
    s.routes[1].slot = {2, 0};
    EXPECT_TRUE(only(validate_solution(s, base), ViolationKind::slot_reuse));
  }
  {
    Solution s = sol;
    s.routes[1].stops.clear();
    EXPECT_TRUE(only(validate_solution(s, base), ViolationKind::coverage));
  }
  {
    Solution s = sol;
    s.routes[1].slot = {1, 10};
    EXPECT_TRUE(only(validate_solution(s, base), ViolationKind::fleet_bound_type_max));
  }
}

TEST(Validate, LatenessIsSoftUnlessStrict) {
  Instance inst = test::line_instance(1, 1.0);
  inst.clients[0].window_open = 0.0;
  inst.clients[0].window_close = 0.1;
  const Solution sol{{{{1, 0}, {1}}}, {}};
  EXPECT_TRUE(validate_solution(sol, inst).empty());
  const auto strict = validate_solution(sol, inst, {true});
  ASSERT_EQ(strict.size(), 1u);
  EXPECT_EQ(strict[0].kind, ViolationKind::window_hard);
  EXPECT_GT(strict[0].magnitude, 0.0);
}

TEST(Validate, MagnitudesPositive) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Instance inst = test::random_small_instance(seed);
    Solution sol;
    std::vector<int> all;
    for (int j = 1; j <= static_cast<int>(inst.num_clients()); ++j) all.push_back(j);
    sol.routes.push_back({{0, 0}, all});
    for (const auto& v : validate_solution(sol, inst, {true})) EXPECT_GT(v.magnitude, 0.0);
  }
}

TEST(Metrics, PublishedUtilizations) {
  EXPECT_NEAR(100 * utilization(778.3, 1000), 77.8, 0.05);
  EXPECT_NEAR(100 * utilization(311.8, 500), 62.36, 0.005);
  EXPECT_NEAR(100 * utilization(209, 300), 69.8, 0.2);
}

TEST(Metrics, EmptySolution) {
  const Instance inst = test::line_instance(3);
  const auto m = metrics(Solution{}, inst);
  EXPECT_EQ(m.travel_h, 0.0);
  EXPECT_EQ(m.energy_kwh, 0.0);
  EXPECT_EQ(m.completion_rate, 0.0);
  EXPECT_TRUE(m.vehicles.empty());
}

TEST(Metrics, PerVehicleUtilizationAndCompletion) {
  const Instance inst = test::line_instance(3);
  const Solution sol{{{{2, 0}, {1, 2}}}, {3}};
  const auto m = metrics(sol, inst);
  ASSERT_EQ(m.vehicles.size(), 1u);
  EXPECT_NEAR(m.vehicles[0].utilization, 100.0 / 300.0, 1e-12);
  EXPECT_NEAR(m.completion_rate, 2.0 / 3.0, 1e-12);
  EXPECT_EQ(m.clients_served, 2);
}

TEST(Report, RatiosAndTables) {
  const Instance inst = test::line_instance(1);
  const Solution sol{{{{1, 0}, {1}}}, {}};
  const auto rb = report(sol, inst);
  EXPECT_DOUBLE_EQ(rb.cost_per_client, rb.costs.reported_total);
  EXPECT_DOUBLE_EQ(rb.cost_per_kwh, rb.costs.reported_total / 50.0);
  EXPECT_EQ(rb.fleet_size, 1);
  EXPECT_DOUBLE_EQ(rb.fleet_capex, 147.95);
  ASSERT_EQ(rb.timeline.size(), 1u);
  EXPECT_EQ(rb.timeline[0].vehicle, "Medium#1");
  // Published unit-cost ratios.
  EXPECT_NEAR(cost_per_kwh(2335.35, 988), 2.36, 0.005);
  EXPECT_NEAR(cost_per_client(2335.35, 25), 93.41, 0.005);
  EXPECT_NEAR(cost_per_kwh(1205.83, 311.88), 3.866, 0.001);
}

TEST(Canonical, TieBreakOrdersRoutes) {
  Solution s{{{{1, 1}, {3}}, {{1, 0}, {1, 2}}, {{0, 0}, {}}}, {}};
  const Solution c = canonicalize(s);
  ASSERT_EQ(c.routes.size(), 2u);
  EXPECT_EQ(c.routes[0].stops, (std::vector<int>{1, 2}));
  EXPECT_EQ(c.routes[0].slot.index, 0);
  EXPECT_EQ(c.routes[1].slot.index, 1);
  EXPECT_EQ(route_encoding(c), (std::vector<int>{1, 1, 2, -1, 1, 3, -1}));
}

}  // namespace
