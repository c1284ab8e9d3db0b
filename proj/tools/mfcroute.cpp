// mfcroute: generate, validate, solve, export and report FSMCVRPTW instances.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "mfc/mfc.hpp"

namespace fs = std::filesystem;

namespace {

int fail(const std::string& kind, const std::string& message) {
  std::string flat = message;
  for (auto& ch : flat)
    if (ch == '\n') ch = ' ';
  std::cerr << "error: kind=" << kind << " message=" << flat << "\n";
  return 1;
}

std::uint64_t seed_or_draw(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  std::random_device rd;
  const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  std::cout << "seed=" << s << "\n";
  return s;
}

void write_reports(const mfc::Instance& inst, const mfc::Solution& sol, const fs::path& dir,
                   bool timeline, bool opex_in_total) {
  fs::create_directories(dir);
  const auto rb = mfc::report(sol, inst, {opex_in_total, false});
  const auto files = mfc::report_to_csv(rb, mfc::content_hash(inst));
  mfc::write_text(dir / "fleet.csv", files.fleet);
  mfc::write_text(dir / "performance.csv", files.performance);
  mfc::write_text(dir / "costs.csv", files.costs);
  if (timeline) mfc::write_text(dir / "timeline.csv", files.timeline);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fleet sizing, routing and scheduling for mobile fast-charging vehicles"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Write a synthetic instance");
  std::string profile = "urban_dense", windows;
  int n_clients = 0;
  double area = 0.0;
  std::optional<std::uint64_t> gen_seed;
  std::string gen_out;
  gen->add_option("--profile", profile)->check(CLI::IsMember({"urban_dense", "rural_sparse"}));
  gen->add_option("--clients", n_clients, "Number of clients (profile default when omitted)");
  gen->add_option("--area", area, "Square miles (profile default when omitted)");
  gen->add_option("--windows", windows)
      ->check(CLI::IsMember({"narrow_overlapping", "wide_offset"}));
  gen->add_option("--seed", gen_seed);
  gen->add_option("-o,--output", gen_out)->required();

  // validate
  auto* val = app.add_subcommand("validate", "Check an instance for invariant violations");
  std::string val_in;
  val->add_option("instance", val_in)->required();

  // solve
  auto* solve = app.add_subcommand("solve", "Optimize fleet mix and routes");
  std::string solve_in, method = "alns", solve_out = "solution.txt", report_dir = ".";
  std::optional<std::uint64_t> solve_seed;
  double time_limit = 0.0;
  int iterations = 2000, restarts = 4, threads = 1;
  bool opex_in_total = false;
  solve->add_option("instance", solve_in)->required();
  solve->add_option("--method", method)->check(CLI::IsMember({"brute", "bnb", "alns"}));
  solve->add_option("--seed", solve_seed);
  solve->add_option("--time-limit", time_limit, "Seconds, 0 = none");
  solve->add_option("--iterations", iterations);
  solve->add_option("--restarts", restarts);
  solve->add_option("--threads", threads);
  solve->add_option("-o,--output", solve_out);
  solve->add_option("--report-dir", report_dir);
  solve->add_flag("--opex-in-total", opex_in_total);

  // export-lp
  auto* lp = app.add_subcommand("export-lp", "Write the MILP in LP format");
  std::string lp_in, lp_out, bigm = "paper";
  bool symmetry = false;
  lp->add_option("instance", lp_in)->required();
  lp->add_option("--bigm", bigm)->check(CLI::IsMember({"paper", "tight"}));
  lp->add_flag("--symmetry", symmetry, "Add slot-ordering symmetry cuts");
  lp->add_option("-o,--output", lp_out)->required();

  // import-sol
  auto* imp = app.add_subcommand("import-sol", "Rebuild a solution from MILP variable values");
  std::string imp_in, imp_values, imp_out;
  imp->add_option("instance", imp_in)->required();
  imp->add_option("values", imp_values)->required();
  imp->add_option("-o,--output", imp_out);

  // report
  auto* rep = app.add_subcommand("report", "Write fleet, performance, cost and timeline CSVs");
  std::string rep_in, rep_sol, rep_dir = ".";
  bool rep_opex = false;
  rep->add_option("instance", rep_in)->required();
  rep->add_option("solution", rep_sol)->required();
  rep->add_option("--out-dir", rep_dir);
  rep->add_flag("--opex-in-total", rep_opex);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) {
      mfc::GeneratorConfig cfg = profile == "urban_dense" ? mfc::urban_config(0)
                                                          : mfc::rural_config(0);
      cfg.seed = seed_or_draw(gen_seed);
      if (n_clients != 0) cfg.n_clients = n_clients;
      if (area != 0.0) cfg.area = area;
      if (!windows.empty())
        cfg.window_style = windows == "narrow_overlapping" ? mfc::WindowStyle::narrow_overlapping
                                                           : mfc::WindowStyle::wide_offset;
      const auto inst = mfc::generate(cfg);
      mfc::save_instance(inst, gen_out);
      std::cout << "instance_hash=" << mfc::content_hash(inst) << "\n";
      return 0;
    }

    if (*val) {
      const auto inst = mfc::parse_instance_file(val_in);
      const auto issues = mfc::validate_instance(inst);
      for (const auto& is : issues)
        std::cout << "issue: code=" << is.code << " where=" << is.where
                  << " message=" << is.message << "\n";
      if (!issues.empty()) return 1;
      std::cout << "ok clients=" << inst.num_clients() << " types=" << inst.types.size()
                << " instance_hash=" << mfc::content_hash(inst) << "\n";
      return 0;
    }

    if (*solve) {
      const auto inst = mfc::load_instance(solve_in);
      mfc::Solution sol;
      if (method == "alns") {
        mfc::SearchParams p;
        p.seed = seed_or_draw(solve_seed);
        p.iterations = iterations;
        p.restart_count = restarts;
        p.threads = threads;
        const int rounds = (std::max(1, restarts) + std::max(1, threads) - 1) / std::max(1, threads);
        p.time_limit = time_limit / rounds;
        sol = mfc::solve(inst, p);
      } else {
        mfc::SearchLimits limits;
        if (time_limit > 0.0) limits.time_limit = time_limit;
        const auto res = method == "brute" ? mfc::solve_brute(inst, limits)
                                           : mfc::solve_bnb(inst, limits);
        sol = res.solution;
        std::cout << "proven_optimal=" << (res.proven_optimal ? "true" : "false")
                  << " nodes=" << res.nodes << "\n";
      }
      mfc::save_solution(inst, sol, solve_out);
      write_reports(inst, sol, report_dir, false, opex_in_total);
      const auto cb = mfc::cost_breakdown(sol, inst);
      std::cout << "objective=" << mfc::format_exact(cb.objective_total)
                << " total_daily_cost=" << mfc::format_number(cb.reported_total)
                << " vehicles=" << mfc::operational_totals(sol, inst).fleet.size() << "\n";
      return 0;
    }

    if (*lp) {
      const auto inst = mfc::load_instance(lp_in);
      const auto policy = mfc::make_bigm_policy(
          inst, bigm == "paper" ? mfc::BigMMode::paper_default : mfc::BigMMode::tightened, symmetry);
      std::string text = mfc::emit(inst, policy);
      text.insert(0, "\\ instance_hash " + mfc::content_hash(inst) + "\n");
      mfc::write_text(lp_out, text);
      return 0;
    }

    if (*imp) {
      const auto inst = mfc::load_instance(imp_in);
      const auto res = mfc::import_solution(inst, mfc::parse_values(mfc::read_text(imp_values)));
      std::cout << "imported_objective=" << mfc::format_exact(res.imported_objective) << "\n"
                << "reevaluated_objective=" << mfc::format_exact(res.reevaluated_objective) << "\n"
                << "difference=" << mfc::format_exact(res.difference) << "\n"
                << "arrival_inflation=" << (res.arrival_inflation ? "true" : "false") << "\n";
      const auto violations = mfc::validate_solution(res.solution, inst);
      for (const auto& v : violations)
        std::cout << "violation: kind=" << mfc::to_string(v.kind) << " route=" << v.route
                  << " client=" << v.client << "\n";
      if (!imp_out.empty()) mfc::save_solution(inst, res.solution, imp_out);
      return 0;
    }

    if (*rep) {
      const auto inst = mfc::load_instance(rep_in);
      const auto sf = mfc::load_solution(rep_sol);
      const std::string hash = mfc::content_hash(inst);
      if (sf.instance_hash != hash)
        return fail("hash_mismatch", "solution was written for instance " + sf.instance_hash +
                                         ", not " + hash);
      const double recost = mfc::solution_objective(inst, sf.solution);
      if (std::abs(recost - sf.objective) > 1e-9 * std::max(1.0, std::abs(sf.objective)))
        return fail("objective_mismatch", "stored " + mfc::format_exact(sf.objective) +
                                              ", recomputed " + mfc::format_exact(recost));
      write_reports(inst, sf.solution, rep_dir, true, rep_opex);
      return 0;
    }
  } catch (const mfc::Error& e) {
    return fail(e.kind(), e.what());
  } catch (const std::exception& e) {
    return fail("internal", e.what());
  }
  return 0;
}
