#pragma once

#include <optional>
#include <vector>

#include "col/equilibrium.hpp"
#include "col/problem.hpp"
#include "col/types.hpp"

namespace col {

// Exact regret accounting for one run. All regret series are cumulative.
// Comparator-based series (static regret, delta, bounds) are filled only when
// an equilibrium is supplied.
struct RegretReport {
  long rounds = 0;
  double tol_inner = 1e-9;
  bool has_comparator = false;

  std::vector<double> loss;               // l_n(x_n)
  std::vector<Vec> round_minimizers;      // x_n*
  std::vector<double> round_min_value;    // l_n(x_n*)
  std::vector<double> dynamic_regret;     // sum l_k(x_k) - l_k(x_k*)
  std::vector<double> static_regret;      // sum l_k(x_k) - l_k(x*)
  std::vector<double> delta;              // ||x_n - x*||
  std::vector<double> linearized_static;  // sum <grad l_k(x_k), x_k - x*>
  std::vector<double> reduction_bound;    // dynamic-regret reduction certificate
  std::vector<double> static_reduction_bound;  // alpha > beta only
  std::vector<double> residual;           // natural residual at x_n
};

// argmin_{x in X} f_query(x): closed form when the problem exposes one, else a
// projected-gradient inner solve to gradient-mapping norm <= tol_inner.
Vec per_round_minimizer(const COLProblem& problem, const Vec& query, double tol_inner);

// Fills every report series. reduction_bound_N = min{G sum delta, static_N} +
// sum min{beta D delta_n, beta^2/(2 alpha) delta_n^2}; static_reduction_bound_N
// = (1 + beta^2/(2 alpha (alpha-beta))) * linearized_static_N when alpha > beta.
RegretReport compute_report(const COLProblem& problem, const RunLog& log,
                            const std::optional<EquilibriumSolution>& x_star, double tol_inner);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  long used = 0;
  long excluded = 0;  // non-positive regret values dropped from the window
};

// Least-squares slope of log(cumulative regret) against log(round) over
// rounds [n_lo, n_hi] (1-indexed, inclusive).
RateFit fit_regret_rate(const std::vector<double>& cumulative_regret, long n_lo, long n_hi);

}  // namespace col
