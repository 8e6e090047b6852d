#include "col/equilibrium.hpp"

#include <cmath>

#include "col/instances.hpp"
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

TEST_CASE("natural residual") {
  const COLProblem q0 = instances::q0();
  const auto F = [&q0](const Vec& x) { return q0.operator_at(x); };
  SUBCASE("zero at the solution") {
    CHECK(natural_residual(q0.set, F, v2(0, 0)) == 0.0);
  }
  SUBCASE("hand value at (1, 1)") {
    CHECK(natural_residual(q0.set, F, v2(1, 1)) ==
          doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  }
  SUBCASE("zero wherever the operator vanishes in the interior") {
    const COLProblem qd = instances::q_decoupled();
    const auto Fd = [&qd](const Vec& x) { return qd.operator_at(x); };
    CHECK(natural_residual(qd.set, Fd, *qd.equilibrium) == 0.0);
  }
}

TEST_CASE("solve_vi reaches closed-form equilibria") {
  SUBCASE("origin instance") {
    const auto sol = solve_vi(instances::q0(), 1e-10);
    CHECK(sol.x_star.norm() <= 1e-9);
    CHECK(sol.natural_residual <= 1e-10);
    CHECK(sol.solver == "extragradient");
  }
  SUBCASE("shifted instance lands on (0.4, 0.4)") {
    const auto sol = solve_vi(instances::q1(), 1e-10);
    CHECK((sol.x_star - v2(0.4, 0.4)).norm() <= 1e-9);
  }
  SUBCASE("distinct starts agree under strong monotonicity") {
    const COLProblem p = instances::q1();
    const double tol = 1e-10;
    const auto a = solve_vi(p, tol, 1000000, v2(-1, 1));
    const auto b = solve_vi(p, tol, 1000000, v2(0.9, -0.7));
    CHECK((a.x_star - b.x_star).norm() <= 2.0 * tol);
  }
  SUBCASE("iteration budget exhaustion carries the best iterate") {
    try {
      solve_vi(instances::q0(), 1e-12, 3, v2(1, 1));
      FAIL("expected NonConvergenceError");
    } catch (const NonConvergenceError& e) {
      CHECK(e.best.size() == 2);
      CHECK(e.residual > 1e-12);
      CHECK(e.iterations == 3);
    }
  }
}

TEST_CASE("brute-force equilibrium check") {
  const COLProblem q0 = instances::q0();
  SUBCASE("the origin is an equilibrium") {
    const auto ep = check_ep_solution(q0, v2(0, 0), 101);
    CHECK(ep.is_solution);
    CHECK(ep.worst_violation >= -1e-6);
    CHECK(ep.worst_violation <= 1e-12);  // Phi(0, x) = ||x||^2/2 has min 0 on the grid
  }
  SUBCASE("(1,1) is rejected with quantified violation") {
    const auto ep = check_ep_solution(q0, v2(1, 1), 101);
    CHECK_FALSE(ep.is_solution);
    CHECK(ep.worst_violation <= -0.2);
    CHECK(ep.worst_violation == doctest::Approx(-0.25).epsilon(1e-12));
  }
  SUBCASE("the bifunction vanishes on the diagonal") {
    // candidate itself is on the grid for odd resolutions, so worst <= 0
    const auto ep = check_ep_solution(q0, v2(0.5, 0.5), 3);
    CHECK(ep.worst_violation <= 0.0);
  }
  SUBCASE("dimension cap and resolution floor") {
    const auto set4 = DecisionSet::box(Vec::Constant(4, -1.0), Vec::Constant(4, 1.0));
    const COLProblem p4 =
        make_quadratic(0.5 * Mat::Identity(4, 4), Vec::Zero(4), 1.0, set4);
    CHECK_THROWS_AS(check_ep_solution(p4, Vec::Zero(4), 11), UnsupportedError);
    CHECK_THROWS_AS(check_ep_solution(q0, v2(0, 0), 1), DomainError);
  }
}

TEST_CASE("monotonicity certificate") {
  RandomStream rng(77);
  SUBCASE("symmetric case is exactly tight") {
    const double cert = monotonicity_certificate(instances::q0(), 500, rng);
    CHECK(cert == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("negative-definite coupling overshoots the bound") {
    const COLProblem p = instances::q_negative();
    const double cert = monotonicity_certificate(p, 500, rng);
    CHECK(cert == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(cert >= p.mu() - 1e-8);  // bound not tight here
  }
  SUBCASE("IL instance with certified margin") {
    const COLProblem il = instances::il_chain().col;
    const double cert = monotonicity_certificate(il, 2000, rng);
    CHECK(cert >= il.mu() - 1e-8);
  }
}
