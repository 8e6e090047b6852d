#include "col/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "col/csv.hpp"
#include "col/errors.hpp"

namespace col {

namespace {

int thread_budget(size_t seeds) {
  long cap = static_cast<long>(std::thread::hardware_concurrency());
  if (cap < 1) cap = 1;
  if (const char* env = std::getenv("COL_LAB_THREADS")) {
    try {
      cap = std::max(1L, std::stol(env));
    } catch (const std::exception&) {
      throw ConfigError("COL_LAB_THREADS must be an integer");
    }
  }
  return static_cast<int>(std::min<long>(cap, static_cast<long>(seeds)));
}

std::optional<EquilibriumSolution> find_equilibrium(const COLProblem& problem,
                                                    const ExperimentConfig& cfg) {
  if (cfg.bounds_mode == "off") return std::nullopt;
  const auto F = [&problem](const Vec& x) { return problem.operator_at(x); };
  if (problem.equilibrium) {
    EquilibriumSolution sol;
    sol.x_star = *problem.equilibrium;
    sol.natural_residual = natural_residual(problem.set, F, sol.x_star);
    sol.iterations = 0;
    sol.solver = "closed-form";
    return sol;
  }
  try {
    return solve_vi(problem, 1e-10);
  } catch (const NonConvergenceError& e) {
    if (cfg.bounds_mode == "required") throw;
    std::cerr << "note: equilibrium solve did not converge (residual " << e.residual
              << "); bound columns will be empty\n";
    return std::nullopt;
  }
}

SummaryRow summarize(const RegretReport& rep, const std::string& label) {
  SummaryRow row;
  row.seed_label = label;
  row.rounds = rep.rounds;
  row.final_loss = rep.loss.back();
  row.final_dyn_regret = rep.dynamic_regret.back();
  if (rep.has_comparator) {
    row.final_static_regret = rep.static_regret.back();
    row.final_delta = rep.delta.back();
    for (long n = 0; n < rep.rounds; ++n) {
      const double slack = (n + 1) * rep.tol_inner;
      if (rep.dynamic_regret[n] > rep.reduction_bound[n] + slack) ++row.reduction_violations;
      if (!rep.static_reduction_bound.empty() && rep.dynamic_regret[n] > rep.static_reduction_bound[n] + slack)
        ++row.static_reduction_violations;
    }
  }
  row.converged = rep.residual.back() <= 1e-6;
  if (rep.rounds >= 20) {
    try {
      const long lo = std::max<long>(10, rep.rounds / 10);
      row.fitted_rate = fit_regret_rate(rep.dynamic_regret, lo, rep.rounds).slope;
    } catch (const NumericError&) {
      // regret not positive on the window; leave the rate empty
    }
  }
  return row;
}

std::string opt_field(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

}  // namespace

std::string summary_csv_content(const ExperimentOutcome& outcome) {
  std::ostringstream os;
  os << "seed,rounds,final_loss,final_dyn_regret,final_static_regret,final_delta,"
        "fitted_rate,reduction_violations,static_reduction_violations,converged\n";
  auto emit = [&os](const SummaryRow& r) {
    os << r.seed_label << ',' << r.rounds << ',' << format_double(r.final_loss) << ','
       << format_double(r.final_dyn_regret) << ',' << opt_field(r.final_static_regret) << ','
       << opt_field(r.final_delta) << ',' << opt_field(r.fitted_rate) << ','
       << r.reduction_violations << ',' << r.static_reduction_violations << ',' << (r.converged ? 1 : 0) << "\n";
  };
  for (const auto& seed : outcome.per_seed) emit(seed.row);
  emit(outcome.mean_row);
  return os.str();
}

ExperimentOutcome run_experiment(const ExperimentConfig& cfg, bool write_files) {
  const COLProblem problem = build_problem(cfg);

  if (cfg.oracle_mode == FeedbackMode::Rollout && !problem.sample_grad)
    throw ConfigError("rollout oracle requires an IL problem");
  if (cfg.x1 && !problem.set.contains(*cfg.x1))
    throw ConfigError("run.x1 lies outside the decision set");
  const Vec x1 = cfg.x1 ? *cfg.x1 : problem.set.center_point();

  ExperimentOutcome outcome;
  outcome.equilibrium = find_equilibrium(problem, cfg);

  double sigma = cfg.sigma;
  if (cfg.oracle_mode == FeedbackMode::Rollout) {
    // Record the empirical noise scale at the start point; 1e3 draws.
    RandomStream rng(0xd1a60000ULL + cfg.seeds.front());
    const Vec exact = problem.grad(x1, x1);
    double second_moment = 0.0;
    const long draws = 1000;
    for (long i = 0; i < draws; ++i)
      second_moment += (problem.sample_grad(x1, rng) - exact).squaredNorm();
    sigma = std::sqrt(second_moment / draws);
  }

  outcome.per_seed.resize(cfg.seeds.size());
  std::atomic<size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&]() {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= cfg.seeds.size()) return;
      try {
        SeedOutcome& out = outcome.per_seed[i];
        out.seed = cfg.seeds[i];
        FeedbackOracle oracle{cfg.oracle_mode, sigma, cfg.seeds[i]};
        OnlineAlgorithm algo(cfg.algorithm, cfg.stepsize);
        out.log = run(problem, oracle, algo, x1, cfg.rounds);
        out.report = compute_report(problem, out.log, outcome.equilibrium, cfg.tol_inner);
        out.row = summarize(out.report, std::to_string(cfg.seeds[i]));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  const int n_threads = thread_budget(cfg.seeds.size());
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  // Seed-averaged cumulative dynamic regret and the mean summary row.
  outcome.mean_dynamic_regret.assign(cfg.rounds, 0.0);
  for (const auto& seed : outcome.per_seed)
    for (long n = 0; n < cfg.rounds; ++n)
      outcome.mean_dynamic_regret[n] += seed.report.dynamic_regret[n];
  for (double& v : outcome.mean_dynamic_regret) v /= static_cast<double>(cfg.seeds.size());

  SummaryRow mean;
  mean.seed_label = "mean";
  mean.rounds = cfg.rounds;
  const double count = static_cast<double>(outcome.per_seed.size());
  bool all_static = true, all_converged = true;
  double stat = 0.0, delta = 0.0;
  for (const auto& seed : outcome.per_seed) {
    mean.final_loss += seed.row.final_loss / count;
    mean.final_dyn_regret += seed.row.final_dyn_regret / count;
    mean.reduction_violations += seed.row.reduction_violations;
    mean.static_reduction_violations += seed.row.static_reduction_violations;
    all_converged = all_converged && seed.row.converged;
    if (seed.row.final_static_regret) {
      stat += *seed.row.final_static_regret / count;
      delta += *seed.row.final_delta / count;
    } else {
      all_static = false;
    }
  }
  if (all_static && !outcome.per_seed.empty()) {
    mean.final_static_regret = stat;
    mean.final_delta = delta;
  }
  mean.converged = all_converged;
  if (cfg.rounds >= 20) {
    try {
      const long lo = std::max<long>(10, cfg.rounds / 10);
      mean.fitted_rate = fit_regret_rate(outcome.mean_dynamic_regret, lo, cfg.rounds).slope;
    } catch (const NumericError&) {
    }
  }
  outcome.mean_row = mean;

  if (write_files) {
    const std::filesystem::path dir(cfg.out_dir);
    for (auto& seed : outcome.per_seed) {
      const auto path = dir / ("rounds_seed" + std::to_string(seed.seed) + ".csv");
      write_rounds_csv(path, seed.report);
      seed.rounds_csv = path.string();
    }
    const auto summary_path = dir / "summary.csv";
    atomic_write_file(summary_path, summary_csv_content(outcome));
    outcome.summary_csv = summary_path.string();
  }
  return outcome;
}

std::vector<SweepEntry> run_sweep(const ExperimentConfig& cfg) {
  std::vector<double> etas = cfg.sweep_eta;
  std::vector<double> sigmas = cfg.sweep_sigma;
  if (etas.empty() && sigmas.empty())
    throw ConfigError("sweep requires sweep.eta and/or sweep.sigma");
  if (etas.empty()) etas.push_back(0.0);      // 0 keeps the configured stepsize
  if (sigmas.empty()) sigmas.push_back(-1.0); // -1 keeps the configured sigma

  std::vector<SweepEntry> entries;
  std::ostringstream index;
  index << "eta,sigma,dir,mean_final_dyn_regret,mean_fitted_rate\n";
  for (const double eta : etas) {
    for (const double sigma : sigmas) {
      ExperimentConfig run_cfg = cfg;
      if (eta > 0.0) run_cfg.stepsize = StepSize::constant(eta);
      if (sigma >= 0.0) run_cfg.sigma = sigma;
      std::ostringstream sub;
      sub << "eta" << format_double(eta) << "_sigma" << format_double(std::max(sigma, 0.0));
      run_cfg.out_dir = (std::filesystem::path(cfg.out_dir) / sub.str()).string();
      const ExperimentOutcome out = run_experiment(run_cfg, true);

      SweepEntry e;
      e.eta = eta;
      e.sigma = std::max(sigma, 0.0);
      e.dir = run_cfg.out_dir;
      e.mean_final_dyn = out.mean_row.final_dyn_regret;
      e.mean_rate = out.mean_row.fitted_rate;
      entries.push_back(e);
      index << format_double(e.eta) << ',' << format_double(e.sigma) << ',' << e.dir << ','
            << format_double(e.mean_final_dyn) << ',' << opt_field(e.mean_rate) << "\n";
    }
  }
  atomic_write_file(std::filesystem::path(cfg.out_dir) / "sweep_index.csv", index.str());
  return entries;
}

}  // namespace col
