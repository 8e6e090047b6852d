#include "col/imitation.hpp"

#include <cmath>
#include <memory>

#include "col/errors.hpp"
#include "col/geometry.hpp"

namespace col {

void TabularMDP::validate() const {
  if (num_states < 1 || num_actions < 1 || horizon < 1)
    throw DomainError("mdp: states, actions and horizon must be positive");
  if (initial.size() != num_states) throw DomainError("mdp: initial distribution size mismatch");
  if (initial.minCoeff() < 0.0) throw DomainError("mdp: negative initial probability");
  if (std::abs(initial.sum() - 1.0) > 1e-9)
    throw DomainError("mdp: initial distribution must sum to 1");
  if (static_cast<int>(transitions.size()) != num_states)
    throw DomainError("mdp: one transition matrix per state required");
  for (const Mat& t : transitions) {
    if (t.rows() != num_actions || t.cols() != num_states)
      throw DomainError("mdp: transition matrix must be actions x states");
    if (t.minCoeff() < 0.0) throw DomainError("mdp: negative transition probability");
    for (int a = 0; a < num_actions; ++a)
      if (std::abs(t.row(a).sum() - 1.0) > 1e-9)
        throw DomainError("mdp: transition rows must sum to 1");
  }
}

Mat policy_from_vector(const Vec& x, int num_states, int num_actions) {
  if (x.size() != static_cast<Eigen::Index>(num_states) * num_actions)
    throw DomainError("policy_from_vector: dimension mismatch");
  Mat pi(num_states, num_actions);
  for (int s = 0; s < num_states; ++s) pi.row(s) = x.segment(s * num_actions, num_actions);
  return pi;
}

Vec vector_from_policy(const Mat& policy) {
  Vec x(policy.rows() * policy.cols());
  for (int s = 0; s < policy.rows(); ++s)
    x.segment(s * policy.cols(), policy.cols()) = policy.row(s);
  return x;
}

Vec state_distribution(const TabularMDP& mdp, const Mat& policy) {
  if (policy.rows() != mdp.num_states || policy.cols() != mdp.num_actions)
    throw DomainError("state_distribution: policy shape mismatch");
  Vec d = mdp.initial;
  Vec acc = d;
  for (int t = 2; t <= mdp.horizon; ++t) {
    Vec next = Vec::Zero(mdp.num_states);
    for (int s = 0; s < mdp.num_states; ++s) {
      if (d[s] == 0.0) continue;
      for (int a = 0; a < mdp.num_actions; ++a) {
        const double w = d[s] * policy(s, a);
        if (w == 0.0) continue;
        next += w * mdp.transitions[s].row(a).transpose();
      }
    }
    d = std::move(next);
    acc += d;
  }
  return acc / static_cast<double>(mdp.horizon);
}

namespace {

struct ILData {
  TabularMDP mdp;
  Mat expert;
  double floor = 0.0;
  DecisionSet set;
  Vec projected_expert;  // blockwise projection of the expert onto the class
};

double loss_impl(const ILData& d, const Vec& query, const Vec& decision) {
  const Mat q = policy_from_vector(query, d.mdp.num_states, d.mdp.num_actions);
  const Vec w = state_distribution(d.mdp, q);
  double loss = 0.0;
  const int a_n = d.mdp.num_actions;
  for (int s = 0; s < d.mdp.num_states; ++s) {
    const Vec diff = decision.segment(s * a_n, a_n) - d.expert.row(s).transpose();
    loss += w[s] * 0.5 * diff.squaredNorm();
  }
  return loss;
}

Vec grad_impl(const ILData& d, const Vec& query, const Vec& decision) {
  const Mat q = policy_from_vector(query, d.mdp.num_states, d.mdp.num_actions);
  const Vec w = state_distribution(d.mdp, q);
  const int a_n = d.mdp.num_actions;
  Vec g(decision.size());
  for (int s = 0; s < d.mdp.num_states; ++s)
    g.segment(s * a_n, a_n) =
        w[s] * (decision.segment(s * a_n, a_n) - d.expert.row(s).transpose());
  return g;
}

Vec rollout_impl(const ILData& d, const Vec& policy, RandomStream& rng) {
  const int a_n = d.mdp.num_actions;
  const Mat pi = policy_from_vector(policy, d.mdp.num_states, a_n);
  Vec g = Vec::Zero(policy.size());
  const double w = 1.0 / d.mdp.horizon;
  int s = rng.categorical(d.mdp.initial);
  for (int t = 1; t <= d.mdp.horizon; ++t) {
    g.segment(s * a_n, a_n) +=
        w * (policy.segment(s * a_n, a_n) - d.expert.row(s).transpose());
    const int a = rng.categorical(pi.row(s).transpose());
    if (t < d.mdp.horizon) s = rng.categorical(d.mdp.transitions[s].row(a).transpose());
  }
  return g;
}

}  // namespace

ILProblem make_il_problem(TabularMDP mdp, Mat expert, double floor, long beta_pairs,
                          uint64_t beta_seed) {
  mdp.validate();
  if (mdp.initial.minCoeff() <= 0.0)
    throw DomainError("make_il_problem: initial distribution must be strictly positive");
  if (expert.rows() != mdp.num_states || expert.cols() != mdp.num_actions)
    throw DomainError("make_il_problem: expert shape mismatch");
  if (expert.minCoeff() < 0.0) throw DomainError("make_il_problem: negative expert probability");
  for (int s = 0; s < mdp.num_states; ++s)
    if (std::abs(expert.row(s).sum() - 1.0) > 1e-9)
      throw DomainError("make_il_problem: expert rows must sum to 1");

  auto data = std::make_shared<ILData>();
  data->mdp = std::move(mdp);
  data->expert = std::move(expert);
  data->floor = floor;
  data->set = DecisionSet::simplex_product(data->mdp.num_states, data->mdp.num_actions, floor);

  const int s_n = data->mdp.num_states;
  const int a_n = data->mdp.num_actions;
  const int horizon = data->mdp.horizon;

  Vec proj(s_n * a_n);
  for (int s = 0; s < s_n; ++s)
    proj.segment(s * a_n, a_n) =
        project_simplex_block(data->expert.row(s).transpose(), floor);
  data->projected_expert = proj;

  ILProblem ilp;
  ilp.mdp = data->mdp;
  ilp.expert = data->expert;
  ilp.floor = floor;

  COLProblem& p = ilp.col;
  p.set = data->set;
  p.name = "il";
  p.alpha = data->mdp.initial.minCoeff() / horizon;
  p.smoothness = (data->mdp.initial.maxCoeff() + (horizon - 1)) / horizon;

  // G: ||grad||^2 = sum_s d(s)^2 ||pi_s - expert_s||^2 <= L * max_s dist_s^2.
  double max_dist = 0.0;
  const double peak = floor + (1.0 - a_n * floor);
  for (int s = 0; s < s_n; ++s) {
    for (int a = 0; a < a_n; ++a) {
      Vec v = Vec::Constant(a_n, floor);
      v[a] = peak;
      max_dist = std::max(max_dist, (v - data->expert.row(s).transpose()).norm());
    }
  }
  p.grad_bound = std::sqrt(p.smoothness) * max_dist;

  p.eval = [data](const Vec& q, const Vec& x) { return loss_impl(*data, q, x); };
  p.grad = [data](const Vec& q, const Vec& x) { return grad_impl(*data, q, x); };
  p.sample_grad = [data](const Vec& x, RandomStream& rng) { return rollout_impl(*data, x, rng); };
  // Positive state weights decouple the per-state quadratics, so the argmin is
  // the projected expert for every query; the same point is the leader
  // minimizer and the equilibrium.
  p.round_minimizer = [data](const Vec&) { return data->projected_expert; };
  p.ftl_minimizer = [data](const Vec&, long) { return data->projected_expert; };
  p.equilibrium = data->projected_expert;

  RandomStream beta_rng(beta_seed);
  ilp.beta_hat = estimate_beta(ilp, beta_pairs, beta_rng);
  p.beta = ilp.beta_hat;
  return ilp;
}

double il_loss(const ILProblem& ilp, const Vec& query, const Vec& decision) {
  return ilp.col.eval(query, decision);
}

Vec il_loss_gradient(const ILProblem& ilp, const Vec& query, const Vec& decision) {
  return ilp.col.grad(query, decision);
}

Vec rollout_feedback(const ILProblem& ilp, const Vec& policy, RandomStream& rng) {
  return ilp.col.sample_grad(policy, rng);
}

double estimate_beta(const ILProblem& ilp, long num_pairs, RandomStream& rng) {
  if (num_pairs < 1) throw DomainError("estimate_beta: num_pairs must be >= 1");
  const DecisionSet& set = ilp.col.set;
  double worst = 0.0;
  for (long i = 0; i < num_pairs; ++i) {
    Vec p1 = set.sample(rng);
    Vec p2 = set.sample(rng);
    int guard = 0;
    while ((p1 - p2).norm() < 1e-12) {
      if (++guard > 1000) throw NumericError("estimate_beta: degenerate sampling");
      p2 = set.sample(rng);
    }
    const Vec dec = set.sample(rng);
    const double ratio =
        (ilp.col.grad(p1, dec) - ilp.col.grad(p2, dec)).norm() / (p1 - p2).norm();
    worst = std::max(worst, ratio);
  }
  return 1.5 * worst;
}

double estimate_rollout_sigma(const ILProblem& ilp, const Vec& policy, long num_draws,
                              RandomStream& rng) {
  if (num_draws < 1) throw DomainError("estimate_rollout_sigma: num_draws must be >= 1");
  const Vec exact = ilp.col.grad(policy, policy);
  double second_moment = 0.0;
  for (long i = 0; i < num_draws; ++i)
    second_moment += (rollout_feedback(ilp, policy, rng) - exact).squaredNorm();
  return std::sqrt(second_moment / num_draws);
}

}  // namespace col
