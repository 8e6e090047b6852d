#include <cmath>
#include <cstring>

#include "col/algorithms.hpp"
#include "col/instances.hpp"
#include "col/problem.hpp"
#include "col/synthetic.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace col;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("play_round on the canonical quadratic") {
  const COLProblem q0 = instances::q0();
  RandomStream rng(0);
  const FeedbackOracle det{FeedbackMode::Deterministic, 0.0, 0};

  SUBCASE("equilibrium point has zero loss and zero feedback") {
    auto [loss, g] = play_round(q0, det, v2(0, 0), rng);
    CHECK(loss == 0.0);
    CHECK(g == v2(0, 0));
  }
  SUBCASE("hand-evaluated loss and gradient at (1,1)") {
    auto [loss, g] = play_round(q0, det, v2(1, 1), rng);
    CHECK(loss == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(g[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(g[1] == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("zero-noise stochastic feedback degenerates to deterministic") {
    const FeedbackOracle sto{FeedbackMode::Gaussian, 0.0, 9};
    auto [l1, g1] = play_round(q0, det, v2(1, 1), rng);
    auto [l2, g2] = play_round(q0, sto, v2(1, 1), rng);
    CHECK(l1 == l2);
    CHECK(g1 == g2);
  }
  SUBCASE("decisions outside the set are rejected") {
    CHECK_THROWS_AS(play_round(q0, det, v2(2, 0), rng), DomainError);
  }
}

TEST_CASE("run produces the protocol trajectory") {
  const COLProblem q0 = instances::q0();
  const FeedbackOracle det{FeedbackMode::Deterministic, 0.0, 0};

  SUBCASE("a single round logs exactly x1") {
    OnlineAlgorithm algo(AlgorithmKind::Ogd, StepSize::constant(1.0));
    const RunLog log = run(q0, det, algo, v2(1, 1), 1);
    CHECK(log.rounds == 1);
    CHECK(log.decisions.size() == 1);
    CHECK(log.decisions[0] == v2(1, 1));
    CHECK(log.losses[0] == doctest::Approx(0.25));
  }
  SUBCASE("unit-step OGD reaches (0.5, 0.5) in one update") {
    OnlineAlgorithm algo(AlgorithmKind::Ogd, StepSize::constant(1.0));
    const RunLog log = run(q0, det, algo, v2(1, 1), 2);
    CHECK(log.decisions[1][0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(log.decisions[1][1] == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("500 rounds contract like the closed form") {
    OnlineAlgorithm algo(AlgorithmKind::Ogd, StepSize::automatic());
    const RunLog log = run(q0, det, algo, v2(1, 1), 500);
    // interior iterates obey x_{n+1} = (1 - 0.5 eta) x_n
    const double eta = q0.mu() / std::pow(q0.smoothness + q0.beta, 2);
    const double c = 1.0 - 0.5 * eta;
    double factor = 1.0;
    for (long n = 0; n < log.rounds; ++n) {
      CHECK((log.decisions[n] - factor * v2(1, 1)).norm() <= 1e-10);
      factor *= c;
    }
    CHECK(log.decisions.back().norm() <= 1e-10);
  }
  SUBCASE("rounds must be positive") {
    OnlineAlgorithm algo(AlgorithmKind::Ogd, StepSize::constant(1.0));
    CHECK_THROWS_AS(run(q0, det, algo, v2(1, 1), 0), DomainError);
  }
}

TEST_CASE("seeded runs are bitwise reproducible") {
  const COLProblem q0 = instances::q0();
  const FeedbackOracle oracle{FeedbackMode::Gaussian, 0.7, 42};
  auto once = [&]() {
    OnlineAlgorithm algo(AlgorithmKind::Ogd, StepSize::automatic());
    return run(q0, oracle, algo, v2(1, 1), 80);
  };
  const RunLog a = once();
  const RunLog b = once();
  for (long n = 0; n < a.rounds; ++n) {
    REQUIRE(a.decisions[n] == b.decisions[n]);
    REQUIRE(a.feedbacks[n] == b.feedbacks[n]);
    REQUIRE(std::memcmp(&a.losses[n], &b.losses[n], sizeof(double)) == 0);
  }
}

TEST_CASE("certify_alpha recovers curvature") {
  RandomStream rng(5);
  SUBCASE("identity-Hessian quadratic has modulus one") {
    const double cert = certify_alpha(instances::q0(), 2000, rng);
    CHECK(cert >= 1.0 - 1e-8);
    CHECK(cert == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("linear losses have zero curvature and no NaNs") {
    const auto set = DecisionSet::box(v2(-1, -1), v2(1, 1));
    const double cert = certify_alpha(col_test::linear_problem(set), 2000, rng);
    CHECK(std::isfinite(cert));
    CHECK(cert >= -1e-8);
    CHECK(cert <= 1e-8);
  }
  SUBCASE("sample count must be positive") {
    CHECK_THROWS_AS(certify_alpha(instances::q0(), 0, rng), DomainError);
  }
}

TEST_CASE("certify_beta bounds the query sensitivity") {
  RandomStream rng(6);
  SUBCASE("A = 0.5 I gives ratio 0.5") {
    const double cert = certify_beta(instances::q0(), 2000, rng);
    CHECK(cert <= 0.5 + 1e-8);
    CHECK(cert == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("query-independent losses give ratio zero") {
    const double cert = certify_beta(instances::q_decoupled(), 2000, rng);
    CHECK(cert <= 1e-8);
  }
}

TEST_CASE("analytic gradients match finite differences") {
  RandomStream rng(7);
  for (const COLProblem& p : instances::planar_quadratics()) {
    for (int k = 0; k < 20; ++k) {
      const Vec q = p.set.sample(rng);
      const Vec x = p.set.sample(rng);
      const Vec g = p.grad(q, x);
      const Vec fd = col_test::finite_diff(p.eval, q, x);
      CHECK((fd - g).norm() / std::max(1.0, g.norm()) < 1e-5);
    }
  }
}

TEST_CASE("gaussian feedback is unbiased") {
  const COLProblem q0 = instances::q0();
  const double sigma = 0.5;
  const FeedbackOracle oracle{FeedbackMode::Gaussian, sigma, 0};
  RandomStream rng(123);
  const Vec x = v2(0.3, -0.4);
  const Vec exact = q0.grad(x, x);
  Vec mean = Vec::Zero(2);
  const long draws = 10000;
  for (long i = 0; i < draws; ++i) mean += oracle.draw(q0, x, rng);
  mean /= static_cast<double>(draws);
  CHECK((mean - exact).cwiseAbs().maxCoeff() <= 3.0 * sigma / 100.0);
}

TEST_CASE("rollout feedback requires a sampled-gradient hook") {
  const COLProblem q0 = instances::q0();
  const FeedbackOracle oracle{FeedbackMode::Rollout, 0.0, 0};
  RandomStream rng(1);
  CHECK_THROWS_AS(oracle.draw(q0, v2(0, 0), rng), UnsupportedError);
}
