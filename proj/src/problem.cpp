#include "col/problem.hpp"

#include <chrono>
#include <cmath>

#include "col/algorithms.hpp"
#include "col/errors.hpp"

namespace col {

const char* feedback_mode_name(FeedbackMode mode) {
  switch (mode) {
    case FeedbackMode::Deterministic:
      return "deterministic";
    case FeedbackMode::Gaussian:
      return "gaussian";
    case FeedbackMode::Rollout:
      return "rollout";
    case FeedbackMode::FullInformation:
      return "full-information";
  }
  return "unknown";
}

Vec FeedbackOracle::draw(const COLProblem& problem, const Vec& x, RandomStream& rng) const {
  switch (mode) {
    case FeedbackMode::Deterministic:
    case FeedbackMode::FullInformation:
      return problem.grad(x, x);
    case FeedbackMode::Gaussian: {
      Vec g = problem.grad(x, x);
      if (sigma > 0.0) {
        const double per_coord = sigma / std::sqrt(static_cast<double>(x.size()));
        for (Eigen::Index i = 0; i < g.size(); ++i) g[i] += per_coord * rng.gaussian();
      }
      return g;
    }
    case FeedbackMode::Rollout:
      if (!problem.sample_grad)
        throw UnsupportedError("rollout feedback requires a problem with a sampled gradient");
      return problem.sample_grad(x, rng);
  }
  throw InternalError("draw: unknown feedback mode");
}

std::pair<double, Vec> play_round(const COLProblem& problem, const FeedbackOracle& oracle,
                                  const Vec& x, RandomStream& rng) {
  if (!problem.set.contains(x))
    throw DomainError("play_round: decision lies outside the decision set");
  const double loss = problem.eval(x, x);
  Vec g = oracle.draw(problem, x, rng);
  return {loss, std::move(g)};
}

RunLog run(const COLProblem& problem, const FeedbackOracle& oracle, OnlineAlgorithm& algorithm,
           const Vec& x1, long rounds) {
  if (rounds < 1) throw DomainError("run: rounds must be at least 1");
  RandomStream rng(oracle.rng_seed);
  algorithm.start(problem, oracle, x1);

  RunLog log;
  log.seed = oracle.rng_seed;
  log.rounds = rounds;
  log.decisions.reserve(rounds);
  log.losses.reserve(rounds);
  log.feedbacks.reserve(rounds);
  log.round_seconds.reserve(rounds);

  for (long n = 1; n <= rounds; ++n) {
    const auto t0 = std::chrono::steady_clock::now();
    const Vec x = algorithm.decision();
    auto [loss, g] = play_round(problem, oracle, x, rng);
    log.decisions.push_back(x);
    log.losses.push_back(loss);
    log.feedbacks.push_back(g);
    if (n < rounds) {
      algorithm.advance(problem, oracle, rng, g);
      if (!problem.set.contains(algorithm.decision()))
        throw InternalError("run: algorithm step left the decision set");
    }
    const auto t1 = std::chrono::steady_clock::now();
    log.round_seconds.push_back(std::chrono::duration<double>(t1 - t0).count());
  }
  return log;
}

namespace {

constexpr double kDegeneratePairTol = 1e-12;
constexpr int kMaxResample = 1000;

// Draws a pair of points at least kDegeneratePairTol apart.
std::pair<Vec, Vec> sample_distinct_pair(const DecisionSet& set, RandomStream& rng) {
  for (int attempt = 0; attempt < kMaxResample; ++attempt) {
    Vec a = set.sample(rng);
    Vec b = set.sample(rng);
    if ((a - b).norm() >= kDegeneratePairTol) return {std::move(a), std::move(b)};
  }
  throw NumericError("sampling could not produce a non-degenerate pair");
}

}  // namespace

double certify_alpha(const COLProblem& problem, long num_samples, RandomStream& rng) {
  if (num_samples < 1) throw DomainError("certify_alpha: num_samples must be at least 1");
  double worst = std::numeric_limits<double>::infinity();
  for (long i = 0; i < num_samples; ++i) {
    const Vec x = problem.set.sample(rng);
    auto [a, b] = sample_distinct_pair(problem.set, rng);
    const Vec d = a - b;
    const double ratio = (problem.grad(x, a) - problem.grad(x, b)).dot(d) / d.squaredNorm();
    worst = std::min(worst, ratio);
  }
  return worst;
}

double certify_beta(const COLProblem& problem, long num_samples, RandomStream& rng) {
  if (num_samples < 1) throw DomainError("certify_beta: num_samples must be at least 1");
  double worst = 0.0;
  for (long i = 0; i < num_samples; ++i) {
    const Vec xp = problem.set.sample(rng);
    auto [x1, x2] = sample_distinct_pair(problem.set, rng);
    const double ratio = (problem.grad(x1, xp) - problem.grad(x2, xp)).norm() / (x1 - x2).norm();
    worst = std::max(worst, ratio);
  }
  return worst;
}

double certify_alpha(const COLProblem& problem, RandomStream& rng) {
  return certify_alpha(problem, 10000, rng);
}

double certify_beta(const COLProblem& problem, RandomStream& rng) {
  return certify_beta(problem, 10000, rng);
}

}  // namespace col
