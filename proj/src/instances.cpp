#include "col/instances.hpp"

#include "col/synthetic.hpp"

namespace col {
namespace instances {

namespace {

DecisionSet unit_box2() {
  return DecisionSet::box(Vec::Constant(2, -1.0), Vec::Constant(2, 1.0));
}

}  // namespace

COLProblem q0() {
  return make_quadratic(0.5 * Mat::Identity(2, 2), Vec::Zero(2), 1.0, unit_box2(), "q0");
}

COLProblem q1() {
  return make_quadratic(0.5 * Mat::Identity(2, 2), Vec::Constant(2, 0.2), 1.0, unit_box2(),
                        "q1");
}

COLProblem q_negative() {
  return make_quadratic(-0.5 * Mat::Identity(2, 2), Vec::Zero(2), 1.0, unit_box2(),
                        "q-negative");
}

COLProblem q_decoupled() {
  Vec b(2);
  b << 0.2, -0.3;
  return make_quadratic(Mat::Zero(2, 2), b, 1.0, unit_box2(), "q-decoupled");
}

COLProblem q_ball() {
  Mat rot(2, 2);  // rotation by 90 degrees scaled by 0.4
  rot << 0.0, -0.4, 0.4, 0.0;
  Vec b(2);
  b << 0.1, 0.2;
  return make_quadratic(rot, b, 1.0, DecisionSet::ball(Vec::Zero(2), 1.0), "q-ball");
}

COLProblem q_simplex() {
  Mat swap(2, 2);
  swap << 0.0, 0.5, 0.5, 0.0;
  // b chosen so the stationary point (0.3, 0.7) lies on the simplex.
  Vec b(2);
  b << -0.05, 0.55;
  return make_quadratic(swap, b, 1.0, DecisionSet::simplex_product(1, 2), "q-simplex");
}

std::vector<COLProblem> planar_quadratics() {
  std::vector<COLProblem> out;
  out.push_back(q0());
  out.push_back(q1());
  out.push_back(q_negative());
  out.push_back(q_decoupled());
  out.push_back(q_ball());
  out.push_back(q_simplex());
  return out;
}

TabularMDP selfloop_mdp() {
  TabularMDP m;
  m.num_states = 2;
  m.num_actions = 2;
  m.horizon = 2;
  m.initial = Vec::Constant(2, 0.5);
  m.transitions.resize(2);
  for (int s = 0; s < 2; ++s) {
    Mat t = Mat::Zero(2, 2);
    t(0, s) = 1.0;
    t(1, s) = 1.0;
    m.transitions[s] = t;
  }
  return m;
}

TabularMDP swap_chain_mdp() {
  TabularMDP m;
  m.num_states = 2;
  m.num_actions = 2;
  m.horizon = 2;
  m.initial = Vec::Zero(2);
  m.initial[0] = 1.0;
  m.transitions.resize(2);
  for (int s = 0; s < 2; ++s) {
    Mat t = Mat::Zero(2, 2);
    t(0, s) = 1.0;      // action 0: stay
    t(1, 1 - s) = 1.0;  // action 1: swap
    m.transitions[s] = t;
  }
  return m;
}

namespace {

Mat deterministic_expert2() {
  Mat e(2, 2);
  e << 1.0, 0.0,  // state 0 -> action 0
      0.0, 1.0;   // state 1 -> action 1
  return e;
}

}  // namespace

ILProblem il_selfloop() { return make_il_problem(selfloop_mdp(), deterministic_expert2(), 0.1); }

ILProblem il_chain() {
  TabularMDP m;
  m.num_states = 2;
  m.num_actions = 2;
  m.horizon = 2;
  m.initial = Vec::Constant(2, 0.5);
  m.transitions.resize(2);
  Mat t0(2, 2), t1(2, 2);
  // Mild action dependence keeps the sampled query-Lipschitz estimate well
  // below alpha = 0.25.
  t0 << 0.95, 0.05,  // state 0, action 0
      0.85, 0.15;    // state 0, action 1
  t1 << 0.05, 0.95,  // state 1, action 0
      0.15, 0.85;    // state 1, action 1
  m.transitions[0] = t0;
  m.transitions[1] = t1;
  return make_il_problem(m, deterministic_expert2(), 0.1);
}

ILProblem il_chain3() {
  TabularMDP m;
  m.num_states = 3;
  m.num_actions = 2;
  m.horizon = 2;
  m.initial = Vec::Constant(3, 1.0 / 3.0);
  m.transitions.resize(3);
  for (int s = 0; s < 3; ++s) {
    Mat t(2, 3);
    Vec base = Vec::Constant(3, 0.05);
    base[s] = 0.9;
    t.row(0) = base.transpose();
    // action 1 drifts a little mass toward the next state
    Vec drift = base;
    drift[s] -= 0.06;
    drift[(s + 1) % 3] += 0.06;
    t.row(1) = drift.transpose();
    m.transitions[s] = t;
  }
  Mat expert(3, 2);
  expert << 1.0, 0.0, 0.0, 1.0, 1.0, 0.0;
  return make_il_problem(m, expert, 0.1);
}

COLProblem random_quadratic(RandomStream& rng) {
  const int d = 2 + rng.uniform_int(3);  // 2..4
  Mat a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
  const double target = rng.uniform(0.1, 0.9);
  a *= target / std::max(spectral_norm(a), 1e-12);
  Vec b(d);
  for (int i = 0; i < d; ++i) b[i] = rng.uniform(-0.3, 0.3);
  const double alpha = rng.uniform(0.5, 2.0);

  const int kind = rng.uniform_int(3);
  DecisionSet set = [&] {
    switch (kind) {
      case 0: {
        Vec lo(d), hi(d);
        for (int i = 0; i < d; ++i) {
          lo[i] = rng.uniform(-2.0, -0.5);
          hi[i] = rng.uniform(0.5, 2.0);
        }
        return DecisionSet::box(std::move(lo), std::move(hi));
      }
      case 1:
        return DecisionSet::ball(Vec::Zero(d), rng.uniform(0.5, 2.0));
      default:
        // product of d/2-ish 2-simplices only fits even d; use one d-simplex
        return DecisionSet::simplex_product(1, d, 0.0);
    }
  }();
  return make_quadratic(a, b, alpha, set, "q-random");
}

}  // namespace instances
}  // namespace col
