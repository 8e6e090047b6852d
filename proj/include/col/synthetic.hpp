#pragma once

#include <string>

#include "col/problem.hpp"
#include "col/types.hpp"

namespace col {

// Quadratic bifunction family f_x(x') = (alpha/2) ||x' - A x - b||^2 with
// analytic constants: strong convexity alpha, beta = alpha ||A||_2,
// L = alpha, G = alpha max_{x in X} ||(I - A) x - b||. When ||A||_2 < 1 and
// (I - A)^{-1} b lies inside the set, the equilibrium is stored in closed form.
COLProblem make_quadratic(const Mat& A, const Vec& b, double alpha, const DecisionSet& set,
                          std::string name = "quadratic");

// Largest singular value by power iteration on A^T A, relative tolerance 1e-10.
double spectral_norm(const Mat& A);

// max_{x in X} ||M x - v||: exact vertex enumeration for boxes and simplex
// products (norm maximization attains at extreme points), upper bound for
// balls and very high dimensional sets.
double max_affine_norm(const Mat& M, const Vec& v, const DecisionSet& set);

}  // namespace col
