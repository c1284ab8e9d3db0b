// Generate a small rural scenario, solve it exactly and heuristically, and
// print the cost table.

#include <cstdio>

#include "mfc/mfc.hpp"

int main() {
  const mfc::Instance inst = mfc::generate(mfc::rural_config(/*seed=*/3, /*n=*/6));

  const mfc::ExactResult exact = mfc::solve_bnb(inst);
  mfc::SearchParams params;
  params.seed = 3;
  params.iterations = 1000;
  params.restart_count = 2;
  const mfc::Solution heuristic = mfc::solve(inst, params);

  std::printf("exact     %.4f (proven %s, %lld nodes)\n", exact.cost,
              exact.proven_optimal ? "yes" : "no", static_cast<long long>(exact.nodes));
  std::printf("heuristic %.4f\n", mfc::solution_objective(inst, heuristic));

  for (const auto& r : exact.solution.routes) {
    std::printf("%-12s", mfc::slot_label(inst, r.slot).c_str());
    for (int c : r.stops) std::printf(" %d", c);
    std::printf("\n");
  }

  const mfc::ReportBundle rb = mfc::report(exact.solution, inst);
  const auto& c = rb.costs;
  std::printf("travel+service %.2f  wait %.2f  fuel %.2f  late %.2f\n", c.travel_and_service,
              c.wait, c.fuel, c.lateness);
  std::printf("capex %.2f  vehicle/trailer %.2f  energy %.2f\n", c.capex, c.vehicle_trailer,
              c.energy_transfer);
  std::printf("total %.2f  per kWh %.2f  per client %.2f\n", c.reported_total, rb.cost_per_kwh,
              rb.cost_per_client);
  return 0;
}
