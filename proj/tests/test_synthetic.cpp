#include "col/synthetic.hpp"

#include <cmath>

#include "col/geometry.hpp"
#include "col/instances.hpp"
#include "doctest.h"

using namespace col;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("make_quadratic analytic constants") {
  SUBCASE("q0: A = 0.5 I on the unit box") {
    const COLProblem p = instances::q0();
    CHECK(p.alpha == 1.0);
    CHECK(p.beta == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(p.smoothness == 1.0);
    CHECK(p.mu() == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(p.grad_bound == doctest::Approx(0.5 * std::sqrt(2.0)).epsilon(1e-10));
    REQUIRE(p.equilibrium.has_value());
    CHECK(p.equilibrium->norm() == 0.0);
  }
  SUBCASE("q1 has the shifted fixed point") {
    const COLProblem p = instances::q1();
    REQUIRE(p.equilibrium.has_value());
    CHECK(((*p.equilibrium) - v2(0.4, 0.4)).norm() <= 1e-12);
  }
  SUBCASE("A = 0 decouples the rounds") {
    const COLProblem p = instances::q_decoupled();
    CHECK(p.beta == 0.0);
    REQUIRE(p.equilibrium.has_value());
    CHECK(((*p.equilibrium) - v2(0.2, -0.3)).norm() <= 1e-15);
  }
  SUBCASE("dimension mismatches are rejected") {
    const auto set = DecisionSet::box(v2(-1, -1), v2(1, 1));
    CHECK_THROWS_AS(make_quadratic(Mat::Identity(3, 3), Vec::Zero(3), 1.0, set), DomainError);
    CHECK_THROWS_AS(make_quadratic(Mat::Identity(2, 2), Vec::Zero(2), 0.0, set), DomainError);
  }
}

TEST_CASE("spectral_norm by power iteration") {
  CHECK(spectral_norm(0.5 * Mat::Identity(2, 2)) == doctest::Approx(0.5).epsilon(1e-10));
  {
    Mat d = Mat::Zero(2, 2);
    d(0, 0) = 0.9;
    d(1, 1) = 0.1;
    CHECK(spectral_norm(d) == doctest::Approx(0.9).epsilon(1e-10));
  }
  {
    // rotation by 90 degrees scaled by c has both singular values equal to c
    Mat r(2, 2);
    r << 0.0, -0.7, 0.7, 0.0;
    CHECK(spectral_norm(r) == doctest::Approx(0.7).epsilon(1e-10));
  }
  CHECK(spectral_norm(Mat::Zero(3, 3)) == 0.0);
  CHECK_THROWS_AS(spectral_norm(Mat::Zero(2, 3)), DomainError);
}

TEST_CASE("sampled certification matches analytic constants") {
  RandomStream rng(41);
  for (const COLProblem& p : {instances::q0(), instances::q1(), instances::q_ball()}) {
    CHECK(std::abs(certify_alpha(p, 10000, rng) - p.alpha) <= 1e-6);
    CHECK(std::abs(certify_beta(p, 10000, rng) - p.beta) <= 1e-6);
  }
}

TEST_CASE("equilibria on non-box sets") {
  SUBCASE("ball instance solves inside the ball") {
    const COLProblem p = instances::q_ball();
    REQUIRE(p.equilibrium.has_value());
    CHECK(p.set.contains(*p.equilibrium));
    CHECK(p.operator_at(*p.equilibrium).norm() <= 1e-12);
  }
  SUBCASE("simplex instance has its stationary point on the simplex") {
    const COLProblem p = instances::q_simplex();
    REQUIRE(p.equilibrium.has_value());
    CHECK(((*p.equilibrium) - v2(0.3, 0.7)).norm() <= 1e-12);
  }
}

TEST_CASE("instances without contraction guarantees are constructible") {
  // ||A||_2 >= 1 is allowed; there is just no closed-form equilibrium claim
  const auto set = DecisionSet::box(v2(-1, -1), v2(1, 1));
  const COLProblem p = make_quadratic(1.5 * Mat::Identity(2, 2), Vec::Zero(2), 1.0, set);
  CHECK(p.mu() < 0.0);
  CHECK_FALSE(p.equilibrium.has_value());
}
