#include "col/regret.hpp"

#include <cmath>
#include <limits>

#include "col/errors.hpp"
#include "col/geometry.hpp"

namespace col {

Vec per_round_minimizer(const COLProblem& problem, const Vec& query, double tol_inner) {
  if (!(tol_inner > 0.0)) throw DomainError("per_round_minimizer: tol_inner must be positive");
  if (problem.round_minimizer) return problem.round_minimizer(query);

  const double lips = problem.smoothness > 0.0 ? problem.smoothness : 1.0;
  const double step = 1.0 / lips;
  Vec x = project_point(problem.set, query);
  const long max_iter = 200000;
  double mapping = std::numeric_limits<double>::infinity();
  for (long it = 0; it < max_iter; ++it) {
    const Vec g = problem.grad(query, x);
    Vec next = project_point(problem.set, x - step * g);
    mapping = (x - next).norm() / step;
    x = std::move(next);
    if (mapping <= tol_inner) return x;
  }
  throw NonConvergenceError("per_round_minimizer: inner solve did not converge", x, mapping,
                            max_iter);
}

RegretReport compute_report(const COLProblem& problem, const RunLog& log,
                            const std::optional<EquilibriumSolution>& x_star, double tol_inner) {
  const long n_rounds = log.rounds;
  if (n_rounds < 1 || static_cast<long>(log.decisions.size()) != n_rounds ||
      static_cast<long>(log.losses.size()) != n_rounds)
    throw DomainError("compute_report: inconsistent run log");
  for (const Vec& x : log.decisions)
    if (!problem.set.contains(x)) throw DomainError("compute_report: infeasible decision in log");

  RegretReport rep;
  rep.rounds = n_rounds;
  rep.tol_inner = tol_inner;
  rep.has_comparator = x_star.has_value();
  rep.loss = log.losses;
  rep.round_minimizers.reserve(n_rounds);
  rep.round_min_value.reserve(n_rounds);
  rep.dynamic_regret.reserve(n_rounds);
  rep.residual.reserve(n_rounds);

  const double a = problem.alpha;
  const double b = problem.beta;
  const double big_g = problem.grad_bound;
  const double diam = problem.set.diameter();
  const bool static_reduction_defined = rep.has_comparator && a > b;
  const auto F = [&problem](const Vec& x) { return problem.operator_at(x); };

  double dyn = 0.0, stat = 0.0, lin = 0.0, sum_delta = 0.0, sum_curv = 0.0;
  for (long n = 0; n < n_rounds; ++n) {
    const Vec& x = log.decisions[n];
    Vec xn_star = per_round_minimizer(problem, x, tol_inner);
    const double min_val = problem.eval(x, xn_star);
    rep.round_minimizers.push_back(std::move(xn_star));
    rep.round_min_value.push_back(min_val);

    dyn += log.losses[n] - min_val;
    rep.dynamic_regret.push_back(dyn);
    rep.residual.push_back(natural_residual(problem.set, F, x));

    if (rep.has_comparator) {
      const Vec& xs = x_star->x_star;
      const double delta = (x - xs).norm();
      stat += log.losses[n] - problem.eval(x, xs);
      lin += problem.grad(x, x).dot(x - xs);
      sum_delta += delta;

      const double lin_term = b * diam * delta;
      const double curv_term =
          a > 0.0 ? (b * b) / (2.0 * a) * delta * delta : std::numeric_limits<double>::infinity();
      sum_curv += std::min(lin_term, curv_term);

      rep.delta.push_back(delta);
      rep.static_regret.push_back(stat);
      rep.linearized_static.push_back(lin);
      rep.reduction_bound.push_back(std::min(big_g * sum_delta, stat) + sum_curv);
      if (static_reduction_defined)
        rep.static_reduction_bound.push_back(lin * (1.0 + (b * b) / (2.0 * a * (a - b))));
    }
  }
  return rep;
}

RateFit fit_regret_rate(const std::vector<double>& cumulative_regret, long n_lo, long n_hi) {
  const long n_rounds = static_cast<long>(cumulative_regret.size());
  if (n_lo < 10) throw DomainError("fit_regret_rate: window must start at round 10 or later");
  if (n_hi > n_rounds) throw DomainError("fit_regret_rate: window end exceeds the series");
  if (n_lo > n_hi) throw DomainError("fit_regret_rate: empty window");

  RateFit fit;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (long n = n_lo; n <= n_hi; ++n) {
    const double r = cumulative_regret[n - 1];
    if (!(r > 0.0)) {
      ++fit.excluded;
      continue;
    }
    const double lx = std::log(static_cast<double>(n));
    const double ly = std::log(r);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++fit.used;
  }
  if (fit.used < 2)
    throw NumericError("fit_regret_rate: rate undefined, too few positive values in window");
  const double denom = fit.used * sxx - sx * sx;
  if (std::abs(denom) < 1e-30)
    throw NumericError("fit_regret_rate: degenerate window");
  fit.slope = (fit.used * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / fit.used;
  return fit;
}

}  // namespace col
