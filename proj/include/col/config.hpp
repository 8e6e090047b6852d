#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "col/algorithms.hpp"
#include "col/imitation.hpp"
#include "col/problem.hpp"

namespace col {

// Flat key-value experiment configuration with [section] headers; '#' and ';'
// start comments. CLI overrides are "section.key=value" strings and win over
// file values. Unknown keys are rejected.
struct ExperimentConfig {
  // [problem]
  std::string problem_type;  // "quadratic" | "il"
  std::string problem_name = "problem";
  int dimension = 0;
  std::string a_kind = "identity-scale";  // identity-scale | diagonal | rows
  double a_scale = 0.0;
  Vec a_diag;
  Mat a_rows;
  Vec b;
  double alpha = 1.0;
  std::string mdp_path;
  double il_floor = 0.0;
  long beta_pairs = 2000;
  uint64_t beta_seed = 0x11bea7;

  // [set] (quadratic problems; IL derives its set from the MDP)
  std::string set_kind;  // box | ball | simplices
  Vec set_lower, set_upper, set_center;
  double set_radius = 1.0;
  int set_blocks = 1, set_block_size = 2;
  double set_floor = 0.0;

  // [algorithm]
  AlgorithmKind algorithm = AlgorithmKind::Ogd;
  StepSize stepsize = StepSize::automatic();

  // [oracle]
  FeedbackMode oracle_mode = FeedbackMode::Deterministic;
  double sigma = 0.0;

  // [run]
  long rounds = 100;
  std::vector<uint64_t> seeds{0};
  std::optional<Vec> x1;
  double tol_inner = 1e-9;
  std::string bounds_mode = "auto";  // auto | required | off

  // [output]
  std::string out_dir = "out";

  // [sweep]
  std::vector<double> sweep_eta;
  std::vector<double> sweep_sigma;
};

using KeyValues = std::map<std::string, std::string>;

KeyValues parse_config_text(const std::string& text, const std::string& origin);
KeyValues parse_config_file(const std::filesystem::path& path);
void apply_overrides(KeyValues& kv, const std::vector<std::string>& overrides);

ExperimentConfig config_from_keyvalues(const KeyValues& kv);
ExperimentConfig load_config(const std::filesystem::path& path,
                             const std::vector<std::string>& overrides = {});

// Instantiates the configured problem (quadratic family or IL from MDP file).
COLProblem build_problem(const ExperimentConfig& cfg);

}  // namespace col
