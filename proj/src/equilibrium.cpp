#include "col/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "col/errors.hpp"
#include "col/geometry.hpp"

namespace col {

double natural_residual(const DecisionSet& set, const std::function<Vec(const Vec&)>& F,
                        const Vec& x) {
  return (x - project_point(set, x - F(x))).norm();
}

EquilibriumSolution solve_vi(const DecisionSet& set, const std::function<Vec(const Vec&)>& F,
                             const VISolveOptions& options) {
  if (!(options.tolerance > 0.0)) throw DomainError("solve_vi: tolerance must be positive");
  const double lam = options.lipschitz > 0.0 ? options.lipschitz : 1.0;
  // mu/lam^2 hits the extragradient stability boundary 1/lam when mu == lam
  // (the map cycles); the cap keeps the step strictly inside it.
  const double eta =
      options.mu > 0.0 ? std::min(options.mu / (lam * lam), 0.9 / lam) : 0.5 / lam;

  // With mu > 0 the distance to the solution is bounded by (1+lam)/mu times
  // the residual; tightening the internal target makes multi-start answers
  // agree within the requested tolerance in distance as well.
  double target = options.tolerance;
  if (options.mu > 0.0)
    target = options.tolerance * std::min(1.0, 0.9 * options.mu / (1.0 + lam));

  Vec x = options.start ? *options.start : set.center_point();
  if (!set.contains(x)) x = project_point(set, x);

  Vec best = x;
  double best_res = std::numeric_limits<double>::infinity();

  for (long it = 0; it < options.max_iter; ++it) {
    const Vec fx = F(x);
    if (!fx.allFinite()) throw NumericError("solve_vi: operator returned non-finite values");
    const Vec unit_step = project_point(set, x - fx);
    const double res = (x - unit_step).norm();
    if (res < best_res) {
      best_res = res;
      best = x;
    }
    if (res <= target)
      return EquilibriumSolution{x, res, it, "extragradient"};

    const Vec half = project_point(set, x - eta * fx);
    x = project_point(set, x - eta * F(half));
  }
  throw NonConvergenceError("solve_vi: residual target not reached", best, best_res,
                            options.max_iter);
}

EquilibriumSolution solve_vi(const COLProblem& problem, double tolerance, long max_iter,
                             std::optional<Vec> start) {
  VISolveOptions opt;
  opt.tolerance = tolerance;
  opt.max_iter = max_iter;
  opt.mu = std::max(problem.mu(), 0.0);
  opt.lipschitz = problem.smoothness + problem.beta;
  opt.start = std::move(start);
  return solve_vi(problem.set, [&problem](const Vec& x) { return problem.operator_at(x); }, opt);
}

namespace {

// Enumerates a feasibility grid over the set and invokes fn on every point.
void enumerate_grid(const DecisionSet& set, int res, const std::function<void(const Vec&)>& fn) {
  const int d = set.dimension();
  switch (set.kind()) {
    case DecisionSet::Kind::Box:
    case DecisionSet::Kind::Ball: {
      Vec lo(d), hi(d);
      if (set.kind() == DecisionSet::Kind::Box) {
        lo = set.lower();
        hi = set.upper();
      } else {
        lo = set.center().array() - set.radius();
        hi = set.center().array() + set.radius();
      }
      std::vector<int> digit(d, 0);
      Vec x(d);
      while (true) {
        for (int i = 0; i < d; ++i)
          x[i] = lo[i] + (hi[i] - lo[i]) * digit[i] / static_cast<double>(res - 1);
        if (set.kind() == DecisionSet::Kind::Box || (x - set.center()).norm() <= set.radius())
          fn(x);
        int pos = 0;
        while (pos < d && ++digit[pos] == res) digit[pos++] = 0;
        if (pos == d) break;
      }
      return;
    }
    case DecisionSet::Kind::SimplexProduct: {
      const int m = set.block_size();
      const double eps = set.floor_eps();
      const double scale = 1.0 - m * eps;
      const int units = res - 1;
      // Lattice points of one block: compositions of `units` into m parts.
      std::vector<Vec> block_points;
      std::vector<int> parts(m, 0);
      std::function<void(int, int)> compose = [&](int idx, int remaining) {
        if (idx == m - 1) {
          parts[idx] = remaining;
          Vec q(m);
          for (int i = 0; i < m; ++i)
            q[i] = eps + scale * parts[i] / static_cast<double>(units);
          block_points.push_back(std::move(q));
          return;
        }
        for (int k = 0; k <= remaining; ++k) {
          parts[idx] = k;
          compose(idx + 1, remaining - k);
        }
      };
      compose(0, units);

      std::vector<size_t> digit(set.num_blocks(), 0);
      Vec x(d);
      while (true) {
        for (int b = 0; b < set.num_blocks(); ++b)
          x.segment(b * m, m) = block_points[digit[b]];
        fn(x);
        int pos = 0;
        while (pos < set.num_blocks() && ++digit[pos] == block_points.size()) digit[pos++] = 0;
        if (pos == set.num_blocks()) break;
      }
      return;
    }
  }
}

}  // namespace

EpCheck check_ep_solution(const COLProblem& problem, const Vec& x_candidate,
                          int grid_resolution) {
  if (problem.set.dimension() > 3)
    throw UnsupportedError("check_ep_solution: brute-force grid is limited to dimension <= 3");
  if (grid_resolution < 2) throw DomainError("check_ep_solution: grid_resolution must be >= 2");
  if (x_candidate.size() != problem.set.dimension())
    throw DomainError("check_ep_solution: candidate dimension mismatch");

  const double base = problem.eval(x_candidate, x_candidate);
  double worst = std::numeric_limits<double>::infinity();
  enumerate_grid(problem.set, grid_resolution, [&](const Vec& x) {
    worst = std::min(worst, problem.eval(x_candidate, x) - base);
  });
  return EpCheck{worst >= -1e-6, worst};
}

double monotonicity_certificate(const COLProblem& problem, long num_pairs, RandomStream& rng) {
  if (num_pairs < 1) throw DomainError("monotonicity_certificate: num_pairs must be >= 1");
  double worst = std::numeric_limits<double>::infinity();
  for (long i = 0; i < num_pairs; ++i) {
    Vec x = problem.set.sample(rng);
    Vec y = problem.set.sample(rng);
    int guard = 0;
    while ((x - y).norm() < 1e-12) {
      if (++guard > 1000) throw NumericError("monotonicity_certificate: degenerate sampling");
      y = problem.set.sample(rng);
    }
    const Vec d = x - y;
    const double ratio =
        (problem.operator_at(x) - problem.operator_at(y)).dot(d) / d.squaredNorm();
    worst = std::min(worst, ratio);
  }
  return worst;
}

}  // namespace col
