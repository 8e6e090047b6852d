#include "col/synthetic.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

#include "col/errors.hpp"
#include "col/geometry.hpp"

namespace col {

double spectral_norm(const Mat& A) {
  if (A.rows() != A.cols()) throw DomainError("spectral_norm: matrix must be square");
  const int d = static_cast<int>(A.rows());
  const Mat B = A.transpose() * A;
  if (B.cwiseAbs().maxCoeff() == 0.0) return 0.0;

  // Deterministic start with decaying pseudo-random perturbation so that the
  // overlap with the top eigenspace is generic.
  RandomStream rng(0x5eed5eedULL);
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = 1.0 + 0.25 * rng.uniform01();
  v /= v.norm();

  double lambda = v.dot(B * v);
  const long max_iter = 100000;
  for (long it = 0; it < max_iter; ++it) {
    Vec w = B * v;
    const double wn = w.norm();
    if (wn <= 1e-300) {
      // Start vector fell into the null space; re-randomize.
      for (int i = 0; i < d; ++i) v[i] = rng.gaussian();
      v /= v.norm();
      lambda = v.dot(B * v);
      continue;
    }
    v = w / wn;
    const double next = v.dot(B * v);
    if (std::abs(next - lambda) <= 1e-10 * std::max(next, 1e-300)) return std::sqrt(next);
    lambda = next;
  }
  throw NumericError("spectral_norm: power iteration did not converge");
}

namespace {

// Applies fn to every extreme point of the set; returns false when the vertex
// count would be excessive.
bool for_each_vertex(const DecisionSet& set, const std::function<void(const Vec&)>& fn) {
  switch (set.kind()) {
    case DecisionSet::Kind::Box: {
      const int d = set.dimension();
      if (d > 16) return false;
      Vec x(d);
      for (long mask = 0; mask < (1L << d); ++mask) {
        for (int i = 0; i < d; ++i)
          x[i] = (mask >> i) & 1 ? set.upper()[i] : set.lower()[i];
        fn(x);
      }
      return true;
    }
    case DecisionSet::Kind::Ball:
      return false;  // infinitely many extreme points
    case DecisionSet::Kind::SimplexProduct: {
      const int k = set.num_blocks();
      const int m = set.block_size();
      double count = 1.0;
      for (int b = 0; b < k; ++b) count *= m;
      if (count > 1e5) return false;
      const double eps = set.floor_eps();
      const double peak = eps + (1.0 - m * eps);
      Vec x = Vec::Constant(set.dimension(), eps);
      std::vector<int> digit(k, 0);
      while (true) {
        for (int b = 0; b < k; ++b) {
          x.segment(b * m, m).setConstant(eps);
          x[b * m + digit[b]] = peak;
        }
        fn(x);
        int pos = 0;
        while (pos < k && ++digit[pos] == m) digit[pos++] = 0;
        if (pos == k) break;
      }
      return true;
    }
  }
  return false;
}

double max_set_norm(const DecisionSet& set) {
  switch (set.kind()) {
    case DecisionSet::Kind::Box: {
      double s = 0.0;
      for (int i = 0; i < set.dimension(); ++i)
        s += std::max(set.lower()[i] * set.lower()[i], set.upper()[i] * set.upper()[i]);
      return std::sqrt(s);
    }
    case DecisionSet::Kind::Ball:
      return set.center().norm() + set.radius();
    case DecisionSet::Kind::SimplexProduct: {
      const int m = set.block_size();
      const double eps = set.floor_eps();
      const double peak = eps + (1.0 - m * eps);
      const double block = std::sqrt((m - 1) * eps * eps + peak * peak);
      return std::sqrt(static_cast<double>(set.num_blocks())) * block;
    }
  }
  return 0.0;
}

}  // namespace

double max_affine_norm(const Mat& M, const Vec& v, const DecisionSet& set) {
  double best = 0.0;
  const bool exact = for_each_vertex(
      set, [&](const Vec& x) { best = std::max(best, (M * x - v).norm()); });
  if (exact) return best;
  if (set.kind() == DecisionSet::Kind::Ball)
    return (M * set.center() - v).norm() + set.radius() * spectral_norm(M);
  return spectral_norm(M) * max_set_norm(set) + v.norm();
}

COLProblem make_quadratic(const Mat& A, const Vec& b, double alpha, const DecisionSet& set,
                          std::string name) {
  const int d = set.dimension();
  if (A.rows() != d || A.cols() != d || b.size() != d)
    throw DomainError("make_quadratic: A and b must match the set dimension");
  if (!(alpha > 0.0)) throw DomainError("make_quadratic: alpha must be positive");

  const double a_norm = spectral_norm(A);
  const Mat i_minus_a = Mat::Identity(d, d) - A;

  COLProblem p;
  p.set = set;
  p.name = std::move(name);
  p.alpha = alpha;
  p.beta = alpha * a_norm;
  p.smoothness = alpha;
  p.grad_bound = alpha * max_affine_norm(i_minus_a, b, set);
  p.eval = [A, b, alpha](const Vec& q, const Vec& x) {
    return 0.5 * alpha * (x - A * q - b).squaredNorm();
  };
  p.grad = [A, b, alpha](const Vec& q, const Vec& x) -> Vec {
    return alpha * (x - A * q - b);
  };
  // Identity-Hessian objective: the constrained minimizer is the projection of
  // the unconstrained one, for single rounds and for leader sums alike.
  p.round_minimizer = [A, b, set](const Vec& q) { return project_point(set, A * q + b); };
  p.ftl_minimizer = [A, b, set](const Vec& mean_q, long) {
    return project_point(set, A * mean_q + b);
  };

  if (a_norm < 1.0) {
    const Vec x_star = i_minus_a.fullPivLu().solve(b);
    if (set.strictly_inside(x_star)) p.equilibrium = x_star;
  }
  return p;
}

}  // namespace col
