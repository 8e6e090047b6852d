#include "col/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "col/errors.hpp"

namespace col {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Exact-membership slack used only for the idempotence short circuit; much
// tighter than the 1e-12 membership tolerance used elsewhere.
bool block_feasible_exact(const Eigen::Ref<const Vec>& p, double eps) {
  if (p.minCoeff() < eps) return false;
  return std::abs(p.sum() - 1.0) <= 32.0 * static_cast<double>(p.size()) * kEps;
}

}  // namespace

Vec project_simplex_block(const Vec& y, double eps) {
  const int m = static_cast<int>(y.size());
  if (m < 1) throw DomainError("project_simplex_block: empty block");
  if (eps < 0.0 || eps * m > 1.0) throw DomainError("project_simplex_block: invalid floor");
  if (m == 1) return Vec::Constant(1, 1.0);
  if (block_feasible_exact(y, eps)) return y;

  const double scale = 1.0 - m * eps;
  if (scale <= 8.0 * m * kEps) return Vec::Constant(m, eps);  // mε == 1: singleton set

  const Vec z = (y.array() - eps) / scale;
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&z](int a, int b) {
    if (z[a] != z[b]) return z[a] > z[b];
    return a < b;
  });

  double cum = 0.0, tau = 0.0;
  for (int j = 0; j < m; ++j) {
    const double v = z[order[j]];
    cum += v;
    const double t = (cum - 1.0) / (j + 1);
    if (v - t > 0.0) tau = t;
  }

  Vec p(m);
  for (int i = 0; i < m; ++i) p[i] = eps + scale * std::max(z[i] - tau, 0.0);
  return p;
}

ProjectionResult project(const DecisionSet& set, const Vec& y) {
  if (y.size() != set.dimension())
    throw DomainError("project: input dimension does not match the set");

  switch (set.kind()) {
    case DecisionSet::Kind::Box: {
      Vec p = y.cwiseMax(set.lower()).cwiseMin(set.upper());
      const double res = (y - p).norm();
      return {std::move(p), res};
    }
    case DecisionSet::Kind::Ball: {
      const Vec d = y - set.center();
      const double n2 = d.squaredNorm();
      const double r = set.radius();
      if (n2 <= r * r * (1.0 + 8.0 * kEps)) return {y, 0.0};
      const double n = std::sqrt(n2);
      Vec p = set.center() + d * (r / n);
      return {std::move(p), n - r};
    }
    case DecisionSet::Kind::SimplexProduct: {
      const int m = set.block_size();
      Vec p(y.size());
      for (int b = 0; b < set.num_blocks(); ++b) {
        const auto seg = y.segment(b * m, m);
        if (block_feasible_exact(seg, set.floor_eps()))
          p.segment(b * m, m) = seg;
        else
          p.segment(b * m, m) = project_simplex_block(seg, set.floor_eps());
      }
      const double res = (y - p).norm();
      return {std::move(p), res};
    }
  }
  throw InternalError("project: unknown set kind");
}

Vec project_point(const DecisionSet& set, const Vec& y) { return project(set, y).point; }

double diameter(const DecisionSet& set) { return set.diameter(); }

}  // namespace col
