#pragma once

#include <optional>
#include <string>
#include <vector>

#include "col/config.hpp"
#include "col/equilibrium.hpp"
#include "col/regret.hpp"

namespace col {

struct SummaryRow {
  std::string seed_label;  // seed value, or "mean" for the aggregate row
  long rounds = 0;
  double final_loss = 0.0;
  double final_dyn_regret = 0.0;
  std::optional<double> final_static_regret;
  std::optional<double> final_delta;
  std::optional<double> fitted_rate;
  long reduction_violations = 0;
  long static_reduction_violations = 0;
  bool converged = false;
};

struct SeedOutcome {
  uint64_t seed = 0;
  RunLog log;
  RegretReport report;
  SummaryRow row;
  std::string rounds_csv;  // path, when files were written
};

struct ExperimentOutcome {
  std::vector<SeedOutcome> per_seed;
  SummaryRow mean_row;
  std::vector<double> mean_dynamic_regret;  // seed-averaged cumulative series
  std::optional<EquilibriumSolution> equilibrium;
  std::string summary_csv;  // path, when files were written
};

// Runs every configured seed (in parallel up to COL_LAB_THREADS), computes the
// regret reports, and optionally writes per-round CSVs plus a summary CSV.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg, bool write_files = true);

std::string summary_csv_content(const ExperimentOutcome& outcome);

struct SweepEntry {
  double eta = 0.0;
  double sigma = 0.0;
  std::string dir;
  double mean_final_dyn = 0.0;
  std::optional<double> mean_rate;
};

// Grid over [sweep] stepsizes and noise levels; one experiment per combination
// plus an index CSV.
std::vector<SweepEntry> run_sweep(const ExperimentConfig& cfg);

}  // namespace col
