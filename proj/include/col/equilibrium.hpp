#pragma once

#include <functional>
#include <optional>
#include <string>

#include "col/problem.hpp"
#include "col/types.hpp"

namespace col {

struct EquilibriumSolution {
  Vec x_star;
  double natural_residual = 0.0;
  long iterations = 0;
  std::string solver;
};

// Merit function ||x - project(x - F(x))|| with unit step; zero exactly at
// solutions of VI(X, F).
double natural_residual(const DecisionSet& set, const std::function<Vec(const Vec&)>& F,
                        const Vec& x);

struct VISolveOptions {
  double tolerance = 1e-10;
  long max_iter = 1000000;
  // Strong monotonicity and Lipschitz modulus of F, used for the stepsize:
  // eta = mu/lipschitz^2 when mu > 0, else 1/(2 lipschitz).
  double mu = 0.0;
  double lipschitz = 1.0;
  std::optional<Vec> start;
};

// Extragradient iterations until the natural residual meets the tolerance.
// When mu > 0 the internal target is tightened so that the returned iterate is
// also within `tolerance` of the unique solution in distance.
EquilibriumSolution solve_vi(const DecisionSet& set, const std::function<Vec(const Vec&)>& F,
                             const VISolveOptions& options);

// Problem form: F(x) = grad f_x(x), constants from the problem record.
EquilibriumSolution solve_vi(const COLProblem& problem, double tolerance,
                             long max_iter = 1000000, std::optional<Vec> start = std::nullopt);

struct EpCheck {
  bool is_solution = false;
  double worst_violation = 0.0;  // min over the grid of f_x(cand -> grid) - f_x(cand)
};

// Brute-force equilibrium check of Phi(cand, x) = f_cand(x) - f_cand(cand) >= 0
// over a feasibility grid; dimensions up to 3 only.
EpCheck check_ep_solution(const COLProblem& problem, const Vec& x_candidate, int grid_resolution);

// Minimum sampled monotonicity ratio <F(x)-F(y), x-y>/||x-y||^2 of the map
// F(x) = grad f_x(x).
double monotonicity_certificate(const COLProblem& problem, long num_pairs, RandomStream& rng);

}  // namespace col
