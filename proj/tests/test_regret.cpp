#include "col/regret.hpp"

#include <cmath>

#include "col/algorithms.hpp"
#include "col/imitation.hpp"
#include "col/instances.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace col;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

EquilibriumSolution closed_form(const COLProblem& p) {
  EquilibriumSolution sol;
  sol.x_star = *p.equilibrium;
  sol.solver = "closed-form";
  return sol;
}

}  // namespace

TEST_CASE("per_round_minimizer") {
  SUBCASE("quadratic closed form") {
    const Vec m = per_round_minimizer(instances::q0(), v2(1, 1), 1e-9);
    CHECK(m[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(m[1] == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("expert inside the class is the exact minimizer") {
    Mat expert(2, 2);
    expert << 0.8, 0.2, 0.3, 0.7;
    const ILProblem ilp = make_il_problem(instances::selfloop_mdp(), expert, 0.1);
    const Vec m = per_round_minimizer(ilp.col, ilp.col.set.center_point(), 1e-9);
    CHECK((m - vector_from_policy(expert)).norm() <= 1e-15);
  }
  SUBCASE("floored class with a deterministic expert") {
    const ILProblem ilp = instances::il_selfloop();
    const Vec m = per_round_minimizer(ilp.col, ilp.col.set.center_point(), 1e-9);
    for (int s = 0; s < 2; ++s) {
      const int lead = s == 0 ? 0 : 1;
      CHECK(m[2 * s + lead] == doctest::Approx(0.9).epsilon(1e-12));
      CHECK(m[2 * s + 1 - lead] == doctest::Approx(0.1).epsilon(1e-12));
    }
  }
  SUBCASE("projected-gradient route agrees with the closed form") {
    RandomStream rng(91);
    const COLProblem q1 = instances::q1();
    COLProblem stripped = q1;
    stripped.round_minimizer = nullptr;
    for (int k = 0; k < 10; ++k) {
      const Vec q = q1.set.sample(rng);
      CHECK((per_round_minimizer(q1, q, 1e-9) - per_round_minimizer(stripped, q, 1e-10))
                .norm() <= 1e-6);
    }
  }
  SUBCASE("tolerance must be positive") {
    CHECK_THROWS_AS(per_round_minimizer(instances::q0(), v2(0, 0), 0.0), DomainError);
  }
}

TEST_CASE("compute_report single-round arithmetic") {
  const COLProblem q0 = instances::q0();
  FeedbackOracle det{FeedbackMode::Deterministic, 0.0, 0};
  OnlineAlgorithm algo(AlgorithmKind::Ogd, StepSize::constant(1.0));
  const RunLog log = run(q0, det, algo, v2(1, 1), 1);
  const RegretReport rep = compute_report(q0, log, closed_form(q0), 1e-9);

  CHECK(rep.dynamic_regret[0] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(rep.delta[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  // static regret at x* is exactly zero here, so the first min-term vanishes
  // and the bound reduces to min{beta D delta, beta^2/(2 alpha) delta^2} = 0.25
  CHECK(rep.static_regret[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(rep.reduction_bound[0] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(rep.dynamic_regret[0] <= rep.reduction_bound[0] + 1e-9);
}

TEST_CASE("constant play at the equilibrium accumulates nothing") {
  const COLProblem q0 = instances::q0();
  FeedbackOracle det{FeedbackMode::Deterministic, 0.0, 0};
  OnlineAlgorithm algo(AlgorithmKind::Ogd, StepSize::constant(0.5));
  const RunLog log = run(q0, det, algo, v2(0, 0), 25);
  const RegretReport rep = compute_report(q0, log, closed_form(q0), 1e-9);
  for (long n = 0; n < rep.rounds; ++n) {
    CHECK(rep.dynamic_regret[n] == 0.0);
    CHECK(rep.static_regret[n] == 0.0);
    CHECK(rep.delta[n] == 0.0);
    CHECK(rep.reduction_bound[n] == 0.0);
    CHECK(rep.residual[n] == 0.0);
  }
}

TEST_CASE("certificates hold on a full deterministic run") {
  const COLProblem q1 = instances::q1();
  FeedbackOracle det{FeedbackMode::Deterministic, 0.0, 0};
  OnlineAlgorithm algo(AlgorithmKind::Ogd, StepSize::automatic());
  const RunLog log = run(q1, det, algo, v2(-1, 1), 300);
  const RegretReport rep = compute_report(q1, log, closed_form(q1), 1e-9);
  REQUIRE(rep.has_comparator);
  REQUIRE_FALSE(rep.static_reduction_bound.empty());
  for (long n = 0; n < rep.rounds; ++n) {
    const double slack = (n + 1) * rep.tol_inner;
    CHECK(rep.dynamic_regret[n] <= rep.reduction_bound[n] + slack);
    CHECK(rep.dynamic_regret[n] <= rep.static_reduction_bound[n] + slack);
  }
  SUBCASE("dynamic regret dominates static regret at random comparators") {
    RandomStream rng(19);
    for (int k = 0; k < 10; ++k) {
      const Vec c = q1.set.sample(rng);
      double stat = 0.0;
      for (long n = 0; n < log.rounds; ++n)
        stat += log.losses[n] - q1.eval(log.decisions[n], c);
      CHECK(rep.dynamic_regret.back() >= stat - log.rounds * rep.tol_inner);
    }
  }
  SUBCASE("dynamic regret is nondecreasing up to inner tolerance") {
    for (long n = 1; n < rep.rounds; ++n)
      CHECK(rep.dynamic_regret[n] >= rep.dynamic_regret[n - 1] - rep.tol_inner);
  }
}

TEST_CASE("reports without a comparator skip the bound series") {
  const COLProblem q0 = instances::q0();
  FeedbackOracle det{FeedbackMode::Deterministic, 0.0, 0};
  OnlineAlgorithm algo(AlgorithmKind::Ogd, StepSize::automatic());
  const RunLog log = run(q0, det, algo, v2(1, 1), 5);
  const RegretReport rep = compute_report(q0, log, std::nullopt, 1e-9);
  CHECK_FALSE(rep.has_comparator);
  CHECK(rep.static_regret.empty());
  CHECK(rep.reduction_bound.empty());
  CHECK(rep.dynamic_regret.size() == 5);
}

TEST_CASE("fit_regret_rate") {
  SUBCASE("linear series has slope one") {
    std::vector<double> series(5000);
    for (long n = 1; n <= 5000; ++n) series[n - 1] = 0.37 * n;
    CHECK(fit_regret_rate(series, 10, 5000).slope == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("square-root series has slope one half") {
    std::vector<double> series(5000);
    for (long n = 1; n <= 5000; ++n) series[n - 1] = 4.2 * std::sqrt(double(n));
    CHECK(fit_regret_rate(series, 10, 5000).slope == doctest::Approx(0.5).epsilon(1e-6));
  }
  SUBCASE("converged deterministic run has near-zero slope") {
    const COLProblem q0 = instances::q0();
    FeedbackOracle det{FeedbackMode::Deterministic, 0.0, 0};
    OnlineAlgorithm algo(AlgorithmKind::Ogd, StepSize::automatic());
    const RunLog log = run(q0, det, algo, v2(1, 1), 1000);
    const RegretReport rep = compute_report(q0, log, closed_form(q0), 1e-9);
    CHECK(fit_regret_rate(rep.dynamic_regret, 100, 1000).slope <= 0.1);
  }
  SUBCASE("non-positive values are excluded and counted") {
    std::vector<double> series(100, 1.0);
    series[10] = 0.0;
    series[11] = -1.0;
    const RateFit fit = fit_regret_rate(series, 10, 100);
    CHECK(fit.excluded == 2);
    CHECK(fit.used == 89);
  }
  SUBCASE("all-excluded windows raise a rate-undefined error") {
    std::vector<double> series(100, 0.0);
    CHECK_THROWS_AS(fit_regret_rate(series, 10, 100), NumericError);
  }
  SUBCASE("window preconditions") {
    std::vector<double> series(100, 1.0);
    CHECK_THROWS_AS(fit_regret_rate(series, 5, 50), DomainError);
    CHECK_THROWS_AS(fit_regret_rate(series, 10, 101), DomainError);
  }
}
