#pragma once

#include <vector>

#include "col/imitation.hpp"
#include "col/problem.hpp"

namespace col {
namespace instances {

// Canonical quadratic instances on d = 2 sets. q0/q1: A = 0.5 I on the box
// [-1,1]^2 (beta = 0.5, mu = 0.5); q_negative flips the sign of A;
// q_decoupled has A = 0 (query-independent losses); q_ball and q_simplex move
// the same family onto a ball and a single 2-simplex.
COLProblem q0();
COLProblem q1();
COLProblem q_negative();
COLProblem q_decoupled();
COLProblem q_ball();
COLProblem q_simplex();

// Every d = 2 instance above (used by the equilibrium brute-force checks).
std::vector<COLProblem> planar_quadratics();

// Two-state MDP where both actions self-loop: d^pi is policy independent.
TabularMDP selfloop_mdp();
// Two-state deterministic chain (action 0 stays, action 1 swaps) with the
// mass started in state 0; demo dynamics for state-distribution tests.
TabularMDP swap_chain_mdp();

// IL instances with floor 0.1 and a deterministic expert outside the class.
// il_selfloop has policy-independent dynamics (beta_hat = 0); il_chain and
// il_chain3 have weak action coupling chosen so that alpha > beta_hat holds
// with margin.
ILProblem il_selfloop();
ILProblem il_chain();
ILProblem il_chain3();

// Seeded random quadratic instance generator for certification sweeps.
COLProblem random_quadratic(RandomStream& rng);

}  // namespace instances
}  // namespace col
