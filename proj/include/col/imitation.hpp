#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "col/problem.hpp"
#include "col/random.hpp"
#include "col/types.hpp"

namespace col {

// Finite episodic MDP. transitions[s] is an (actions x states) row-stochastic
// matrix: transitions[s](a, s') is the probability of moving to s'.
struct TabularMDP {
  int num_states = 0;
  int num_actions = 0;
  int horizon = 0;
  std::vector<Mat> transitions;
  Vec initial;

  void validate() const;
};

// Row-stochastic policy tables (states x actions) flattened state-major into
// decision vectors over a product-of-simplices set.
Mat policy_from_vector(const Vec& x, int num_states, int num_actions);
Vec vector_from_policy(const Mat& policy);

// Average state distribution d^pi(s) = (1/T) sum_t d_t^pi(s), by exact forward
// recursion.
Vec state_distribution(const TabularMDP& mdp, const Mat& policy);

// Online imitation learning as a bifunction problem: the query policy sets the
// state weights, the decision policy is compared to the expert with the
// squared-distance loss c(s, pi) = 1/2 ||pi(.|s) - expert(.|s)||^2.
struct ILProblem {
  TabularMDP mdp;
  Mat expert;          // may violate the floor ("expert not in class")
  double floor = 0.0;  // entrywise policy floor
  double beta_hat = 0.0;
  COLProblem col;      // bifunction problem over flattened policies
};

// Builds the problem; constants: alpha = min_s d1(s)/T (certified lower bound),
// L = max_s (d1(s)+T-1)/T (certified upper bound), beta = estimate_beta with
// `beta_pairs` samples from a stream seeded with `beta_seed`.
ILProblem make_il_problem(TabularMDP mdp, Mat expert, double floor, long beta_pairs = 2000,
                          uint64_t beta_seed = 0x11bea7);

// f_query(decision) and its gradient.
double il_loss(const ILProblem& ilp, const Vec& query, const Vec& decision);
Vec il_loss_gradient(const ILProblem& ilp, const Vec& query, const Vec& decision);

// One-episode empirical-risk gradient: g = (1/T) sum_t grad c(s_t, .) at the
// rollout policy, with s_t sampled along a trajectory of that policy.
// Unbiased for the exact gradient.
Vec rollout_feedback(const ILProblem& ilp, const Vec& policy, RandomStream& rng);

// Sampled query-Lipschitz estimate: 1.5 x the worst observed ratio
// ||grad f_{p1}(p) - grad f_{p2}(p)|| / ||p1 - p2||. A lower estimate of the
// true modulus, inflated by the 1.5 safety factor.
double estimate_beta(const ILProblem& ilp, long num_pairs, RandomStream& rng);

// Root of the empirical noise second moment of rollout feedback at `policy`.
double estimate_rollout_sigma(const ILProblem& ilp, const Vec& policy, long num_draws,
                              RandomStream& rng);

}  // namespace col
