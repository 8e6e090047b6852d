#include "col/algorithms.hpp"

#include <cmath>

#include "col/errors.hpp"
#include "col/geometry.hpp"

namespace col {

StepSize StepSize::constant(double eta) {
  if (!(eta > 0.0)) throw DomainError("stepsize: eta must be positive");
  return StepSize{StepSizeKind::Constant, eta};
}

StepSize StepSize::inverse_sqrt(double eta0) {
  if (!(eta0 > 0.0)) throw DomainError("stepsize: eta0 must be positive");
  return StepSize{StepSizeKind::InverseSqrt, eta0};
}

double StepSize::at(long round) const {
  switch (kind) {
    case StepSizeKind::Constant:
      return eta0;
    case StepSizeKind::InverseSqrt:
      return eta0 / std::sqrt(static_cast<double>(round));
    case StepSizeKind::Auto:
      throw InternalError("stepsize: Auto schedule was not resolved before use");
  }
  throw InternalError("stepsize: unknown kind");
}

AlgorithmKind algorithm_kind_from_name(const std::string& name) {
  if (name == "ogd") return AlgorithmKind::Ogd;
  if (name == "mirror-descent" || name == "mirror") return AlgorithmKind::MirrorDescent;
  if (name == "ftl") return AlgorithmKind::Ftl;
  if (name == "extragradient") return AlgorithmKind::Extragradient;
  throw ConfigError("unknown algorithm: " + name);
}

const char* algorithm_kind_name(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::Ogd:
      return "ogd";
    case AlgorithmKind::MirrorDescent:
      return "mirror-descent";
    case AlgorithmKind::Ftl:
      return "ftl";
    case AlgorithmKind::Extragradient:
      return "extragradient";
  }
  return "unknown";
}

namespace {

void require_finite(const Vec& g, const char* who) {
  if (!g.allFinite()) throw NumericError(std::string(who) + ": non-finite feedback vector");
}

}  // namespace

AlgorithmState ogd_step(const AlgorithmState& state, const DecisionSet& set, const Vec& g) {
  require_finite(g, "ogd_step");
  const double eta = state.stepsize.at(state.round);
  AlgorithmState next = state;
  next.x = project_point(set, state.x - eta * g);
  next.round = state.round + 1;
  return next;
}

AlgorithmState mirror_descent_step(const AlgorithmState& state, const DecisionSet& set,
                                   const Vec& g) {
  if (set.kind() != DecisionSet::Kind::SimplexProduct)
    throw DomainError("mirror_descent_step: requires a product-of-simplices set");
  require_finite(g, "mirror_descent_step");
  const double eta = state.stepsize.at(state.round);
  const int m = set.block_size();
  const double eps = set.floor_eps();

  AlgorithmState next = state;
  next.round = state.round + 1;
  for (int b = 0; b < set.num_blocks(); ++b) {
    const auto p = state.x.segment(b * m, m);
    if (p.minCoeff() <= 0.0)
      throw NumericError("mirror_descent_step: block entries must be strictly positive");
    // Log-space update keeps the exponentiation stable for large eta*g.
    Eigen::ArrayXd logw = p.array().log() - eta * g.segment(b * m, m).array();
    logw -= logw.maxCoeff();
    Vec w = logw.exp().matrix();
    const double mass = w.sum();
    if (!(mass > 0.0) || !std::isfinite(mass))
      throw NumericError("mirror_descent_step: block mass underflow");
    Vec q = w / mass;
    if (eps > 0.0 && q.minCoeff() < eps) q = project_simplex_block(q, eps);
    next.x.segment(b * m, m) = q;
  }
  return next;
}

AlgorithmState ftl_step(const AlgorithmState& state, const COLProblem& problem) {
  if (!problem.ftl_minimizer)
    throw UnsupportedError("ftl_step: problem does not expose a closed-form leader minimizer");
  AlgorithmState next = state;
  if (next.ftl_query_sum.size() == 0) next.ftl_query_sum = Vec::Zero(state.x.size());
  next.ftl_query_sum += state.x;
  const long n = state.round;
  next.x = problem.ftl_minimizer(next.ftl_query_sum / static_cast<double>(n), n);
  next.round = n + 1;
  return next;
}

AlgorithmState extragradient_step(const AlgorithmState& state, const DecisionSet& set,
                                  const std::function<Vec(const Vec&)>& F) {
  const double eta = state.stepsize.at(state.round);
  const Vec f1 = F(state.x);
  require_finite(f1, "extragradient_step");
  const Vec half = project_point(set, state.x - eta * f1);
  const Vec f2 = F(half);
  require_finite(f2, "extragradient_step");
  AlgorithmState next = state;
  next.x = project_point(set, state.x - eta * f2);
  next.round = state.round + 1;
  return next;
}

OnlineAlgorithm::OnlineAlgorithm(AlgorithmKind kind, StepSize stepsize)
    : kind_(kind), requested_(stepsize) {}

void OnlineAlgorithm::start(const COLProblem& problem, const FeedbackOracle& oracle,
                            const Vec& x1) {
  if (!problem.set.contains(x1)) throw DomainError("start: x1 lies outside the decision set");
  if (kind_ == AlgorithmKind::Ftl && !problem.ftl_minimizer)
    throw UnsupportedError("start: follow-the-leader needs a problem with a leader minimizer");

  StepSize resolved = requested_;
  if (resolved.kind == StepSizeKind::Auto) {
    const double lam = problem.smoothness + problem.beta;
    if (oracle.stochastic()) {
      resolved = StepSize::inverse_sqrt(1.0);
    } else if (problem.mu() > 0.0 && lam > 0.0) {
      resolved = StepSize::constant(problem.mu() / (lam * lam));
    } else {
      const double g = std::max(problem.grad_bound, 1e-12);
      resolved = StepSize::inverse_sqrt(problem.set.diameter() > 0.0
                                            ? problem.set.diameter() / g
                                            : 1.0);
    }
  }

  state_ = AlgorithmState{};
  state_.name = algorithm_kind_name(kind_);
  state_.x = x1;
  state_.round = 1;
  state_.stepsize = resolved;
}

void OnlineAlgorithm::advance(const COLProblem& problem, const FeedbackOracle& oracle,
                              RandomStream& rng, const Vec& feedback) {
  switch (kind_) {
    case AlgorithmKind::Ogd:
      state_ = ogd_step(state_, problem.set, feedback);
      return;
    case AlgorithmKind::MirrorDescent:
      if (problem.set.kind() == DecisionSet::Kind::SimplexProduct)
        state_ = mirror_descent_step(state_, problem.set, feedback);
      else
        state_ = ogd_step(state_, problem.set, feedback);  // Euclidean mirror map
      return;
    case AlgorithmKind::Ftl:
      state_ = ftl_step(state_, problem);
      return;
    case AlgorithmKind::Extragradient: {
      // Reuse the round's feedback for the first operator call; the midpoint
      // call issues a fresh oracle query.
      bool first = true;
      auto F = [&](const Vec& z) -> Vec {
        if (first) {
          first = false;
          return feedback;
        }
        return oracle.draw(problem, z, rng);
      };
      state_ = extragradient_step(state_, problem.set, F);
      return;
    }
  }
  throw InternalError("advance: unknown algorithm kind");
}

}  // namespace col
