#pragma once

#include "col/decision_set.hpp"
#include "col/types.hpp"

namespace col {

struct ProjectionResult {
  Vec point;
  double residual = 0.0;  // ||input - point||
};

// Euclidean projection onto the set: coordinate clipping for boxes, radial
// scaling for balls, sort-and-threshold per block for simplex products with
// the floor handled by the substitution p = eps + (1 - m*eps) q.
// Already-feasible inputs are returned unchanged, which makes the projection
// exactly idempotent.
ProjectionResult project(const DecisionSet& set, const Vec& y);

// Projected point only.
Vec project_point(const DecisionSet& set, const Vec& y);

// Projection of one length-m block onto {p : p_i >= eps, sum_i p_i = 1}.
// Sort ties are broken by coordinate index.
Vec project_simplex_block(const Vec& y, double eps);

// Closed-form set diameter: box ||upper-lower||, ball 2r, product of k
// m-simplices sqrt(2k)(1 - m*eps).
double diameter(const DecisionSet& set);

}  // namespace col
