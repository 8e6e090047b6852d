#pragma once

#include <functional>
#include <string>

#include "col/decision_set.hpp"
#include "col/problem.hpp"
#include "col/types.hpp"

namespace col {

enum class StepSizeKind { Constant, InverseSqrt, Auto };

struct StepSize {
  StepSizeKind kind = StepSizeKind::Auto;
  double eta0 = 0.0;

  static StepSize constant(double eta);
  static StepSize inverse_sqrt(double eta0);
  static StepSize automatic() { return StepSize{}; }

  double at(long round) const;
};

enum class AlgorithmKind { Ogd, MirrorDescent, Ftl, Extragradient };

AlgorithmKind algorithm_kind_from_name(const std::string& name);
const char* algorithm_kind_name(AlgorithmKind kind);

// Rounds are 1-indexed. The FTL accumulator holds the running sum of query
// points; other algorithms leave it empty.
struct AlgorithmState {
  std::string name;
  Vec x;
  long round = 1;
  StepSize stepsize;
  Vec ftl_query_sum;
};

// x_{n+1} = project(x_n - eta_n g_n).
AlgorithmState ogd_step(const AlgorithmState& state, const DecisionSet& set, const Vec& g);

// Entropic mirror step on a product of simplices: per block p ~ p exp(-eta g),
// renormalized, then floored by Euclidean projection if violated.
AlgorithmState mirror_descent_step(const AlgorithmState& state, const DecisionSet& set,
                                   const Vec& g);

// Exact follow-the-leader; requires the problem's leader oracle.
AlgorithmState ftl_step(const AlgorithmState& state, const COLProblem& problem);

// Two-projection extragradient step with operator F.
AlgorithmState extragradient_step(const AlgorithmState& state, const DecisionSet& set,
                                  const std::function<Vec(const Vec&)>& F);

// Stateful wrapper used by the run loop. Mirror descent falls back to the
// Euclidean step on non-simplex sets. With an Auto stepsize, deterministic
// strongly monotone runs use eta = mu/(L+beta)^2, stochastic runs eta_n =
// 1/sqrt(n), and remaining cases the regret schedule D/(G sqrt(n)).
class OnlineAlgorithm {
 public:
  explicit OnlineAlgorithm(AlgorithmKind kind, StepSize stepsize = StepSize::automatic());

  AlgorithmKind kind() const { return kind_; }
  const AlgorithmState& state() const { return state_; }
  const Vec& decision() const { return state_.x; }

  // Validates x1 and resolves the stepsize against problem constants.
  void start(const COLProblem& problem, const FeedbackOracle& oracle, const Vec& x1);

  // Advance one round given the feedback for the current decision. The
  // extragradient variant issues one extra oracle query at the midpoint.
  void advance(const COLProblem& problem, const FeedbackOracle& oracle, RandomStream& rng,
               const Vec& feedback);

 private:
  AlgorithmKind kind_;
  StepSize requested_;
  AlgorithmState state_;
};

}  // namespace col
