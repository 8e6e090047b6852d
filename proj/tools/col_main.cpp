#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "col/csv.hpp"
#include "col/equilibrium.hpp"
#include "col/errors.hpp"
#include "col/experiment.hpp"
#include "col/verify.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  long seed = -1;
  long rounds = -1;
};

col::ExperimentConfig load(const CommonArgs& args) {
  col::ExperimentConfig cfg = col::load_config(args.config_path, args.overrides);
  if (args.seed >= 0) cfg.seeds = {static_cast<uint64_t>(args.seed)};
  if (args.rounds >= 0) cfg.rounds = args.rounds;
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  return cfg;
}

void add_common(CLI::App* cmd, CommonArgs& args, bool with_out = true) {
  cmd->add_option("--config", args.config_path, "experiment config file")->required();
  cmd->add_option("--override", args.overrides, "config override section.key=value");
  cmd->add_option("--seed", args.seed, "replace the configured seed list with one seed");
  cmd->add_option("--rounds", args.rounds, "override the number of rounds");
  if (with_out) cmd->add_option("--out", args.out_dir, "output directory");
}

int cmd_run(const CommonArgs& args) {
  const col::ExperimentConfig cfg = load(args);
  const col::ExperimentOutcome out = col::run_experiment(cfg, true);
  for (const auto& seed : out.per_seed)
    std::cout << "seed " << seed.seed << ": dyn_regret=" << col::format_double(
                     seed.row.final_dyn_regret)
              << " wrote " << seed.rounds_csv << "\n";
  std::cout << "summary: " << out.summary_csv << "\n";
  return 0;
}

int cmd_sweep(const CommonArgs& args) {
  const col::ExperimentConfig cfg = load(args);
  const auto entries = col::run_sweep(cfg);
  for (const auto& e : entries)
    std::cout << "eta=" << col::format_double(e.eta) << " sigma=" << col::format_double(e.sigma)
              << " mean_dyn_regret=" << col::format_double(e.mean_final_dyn) << " -> " << e.dir
              << "\n";
  return 0;
}

int cmd_solve_eq(const CommonArgs& args) {
  const col::ExperimentConfig cfg = load(args);
  const col::COLProblem problem = col::build_problem(cfg);
  const col::EquilibriumSolution sol = col::solve_vi(problem, 1e-10);
  std::cout << "solver: " << sol.solver << "\n";
  std::cout << "x_star:";
  for (Eigen::Index i = 0; i < sol.x_star.size(); ++i)
    std::cout << " " << col::format_double(sol.x_star[i]);
  std::cout << "\nresidual: " << col::format_double(sol.natural_residual) << "\n";
  std::cout << "iterations: " << sol.iterations << "\n";
  if (problem.set.dimension() <= 2) {
    const col::EpCheck ep = col::check_ep_solution(problem, sol.x_star, 101);
    std::cout << "ep_grid_worst_violation: " << col::format_double(ep.worst_violation)
              << (ep.is_solution ? " (equilibrium confirmed)" : " (violation!)") << "\n";
  }
  return 0;
}

int cmd_verify(const std::string& scope, const std::string& fault) {
  const auto results = col::verify::run_checks(scope, fault);
  col::verify::print_results(results, std::cout);
  const bool ok = col::verify::all_pass(results);
  std::cout << (ok ? "verify: all checks passed" : "verify: FAILURES present") << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"continuous online learning laboratory"};
  app.require_subcommand(1);

  CommonArgs run_args, sweep_args, solve_args;
  std::string verify_scope = "all";
  std::string verify_fault;

  CLI::App* run_cmd = app.add_subcommand("run", "run a configured experiment, write CSVs");
  add_common(run_cmd, run_args);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "grid over stepsizes and noise levels");
  add_common(sweep_cmd, sweep_args);

  CLI::App* solve_cmd = app.add_subcommand("solve-eq", "solve the associated equilibrium");
  add_common(solve_cmd, solve_args, false);

  CLI::App* verify_cmd = app.add_subcommand("verify", "run invariant suites");
  verify_cmd->add_option("scope", verify_scope,
                         "all or a module name (core, geometry, algorithms, equilibrium, "
                         "regret, problems_synthetic, problems_il, harness)");
  verify_cmd->add_option("--inject-fault", verify_fault,
                         "negative-control fixture (regret-delta, harness-csv)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(run_args);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_args);
    if (solve_cmd->parsed()) return cmd_solve_eq(solve_args);
    if (verify_cmd->parsed()) return cmd_verify(verify_scope, verify_fault);
  } catch (const col::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const col::DomainError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const col::NonConvergenceError& e) {
    std::cerr << "numeric failure: " << e.what() << " (best residual " << e.residual << " after "
              << e.iterations << " iterations)\n";
    return 3;
  } catch (const col::Error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
