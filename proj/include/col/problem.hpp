#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "col/decision_set.hpp"
#include "col/random.hpp"
#include "col/types.hpp"

namespace col {

// A bifunction loss problem: the opponent answers decision x_n with the loss
// l_n = f_{x_n}(.). `eval` and `grad` take (query, decision); the gradient is
// with respect to the decision argument.
struct COLProblem {
  DecisionSet set;
  std::function<double(const Vec& query, const Vec& decision)> eval;
  std::function<Vec(const Vec& query, const Vec& decision)> grad;

  double alpha = 0.0;       // strong convexity of f_x(.)
  double beta = 0.0;        // Lipschitz modulus of x -> grad f_x(x')
  double smoothness = 0.0;  // Lipschitz modulus of grad f_x(.) for fixed query
  double grad_bound = 0.0;  // bound on ||grad f_x(x)|| over the set

  // Optional closed forms. round_minimizer(q) solves min_x f_q(x);
  // ftl_minimizer(mean_query, n) solves min_x sum_{k<=n} f_{q_k}(x);
  // sample_grad draws an unbiased estimate of grad f_x(x).
  std::function<Vec(const Vec& query)> round_minimizer;
  std::function<Vec(const Vec& mean_query, long n)> ftl_minimizer;
  std::function<Vec(const Vec& x, RandomStream& rng)> sample_grad;

  // Known equilibrium (VI solution of F(x) = grad f_x(x)), when available.
  std::optional<Vec> equilibrium;

  std::string name = "problem";

  double mu() const { return alpha - beta; }

  // The map F(x) = grad f_x(x) whose VI the protocol is equivalent to.
  Vec operator_at(const Vec& x) const { return grad(x, x); }
};

enum class FeedbackMode { Deterministic, Gaussian, Rollout, FullInformation };

const char* feedback_mode_name(FeedbackMode mode);

// First-order feedback channel: g_n = grad l_n(x_n) plus mode-specific noise.
// Gaussian noise is isotropic with total second moment sigma^2; Rollout defers
// to the problem's sampled-gradient hook.
struct FeedbackOracle {
  FeedbackMode mode = FeedbackMode::Deterministic;
  double sigma = 0.0;  // sqrt(E||xi||^2) for Gaussian; recorded estimate for Rollout
  uint64_t rng_seed = 0;

  bool stochastic() const {
    return (mode == FeedbackMode::Gaussian && sigma > 0.0) || mode == FeedbackMode::Rollout;
  }

  Vec draw(const COLProblem& problem, const Vec& x, RandomStream& rng) const;
};

struct RunLog {
  long rounds = 0;
  std::vector<Vec> decisions;
  std::vector<double> losses;
  std::vector<Vec> feedbacks;
  uint64_t seed = 0;
  std::vector<double> round_seconds;  // diagnostic; excluded from determinism contracts
};

class OnlineAlgorithm;  // algorithms.hpp

// One protocol round at decision x: returns (f_x(x), feedback).
std::pair<double, Vec> play_round(const COLProblem& problem, const FeedbackOracle& oracle,
                                  const Vec& x, RandomStream& rng);

// Full protocol loop; x_{n+1} = algorithm step on feedback n. Bitwise
// reproducible given (oracle seed, configuration).
RunLog run(const COLProblem& problem, const FeedbackOracle& oracle, OnlineAlgorithm& algorithm,
           const Vec& x1, long rounds);

// Sampled certification of the strong-convexity modulus: minimum over sampled
// (query, decision pair) triples of the secant curvature ratio.
double certify_alpha(const COLProblem& problem, long num_samples, RandomStream& rng);
double certify_alpha(const COLProblem& problem, RandomStream& rng);  // 10^4 samples

// Sampled certification of the query-Lipschitz modulus: maximum ratio
// ||grad f_{x1}(x') - grad f_{x2}(x')|| / ||x1 - x2||.
double certify_beta(const COLProblem& problem, long num_samples, RandomStream& rng);
double certify_beta(const COLProblem& problem, RandomStream& rng);  // 10^4 samples

}  // namespace col
