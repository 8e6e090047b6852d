#include "col/imitation.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "col/geometry.hpp"
#include "col/instances.hpp"
#include "col/mdp_io.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace col;

TEST_CASE("tabular MDP validation") {
  TabularMDP m = instances::selfloop_mdp();
  CHECK_NOTHROW(m.validate());

  SUBCASE("transition rows must be stochastic") {
    m.transitions[0](0, 0) = 0.5;  // row now sums to 0.5
    CHECK_THROWS_AS(m.validate(), DomainError);
  }
  SUBCASE("initial distribution must sum to one") {
    m.initial[0] = 0.75;
    CHECK_THROWS_AS(m.validate(), DomainError);
  }
  SUBCASE("negative probabilities are rejected") {
    m.transitions[1](1, 0) = -0.1;
    m.transitions[1](1, 1) = 1.1;
    CHECK_THROWS_AS(m.validate(), DomainError);
  }
}

TEST_CASE("state_distribution") {
  SUBCASE("horizon one returns the initial distribution for any policy") {
    TabularMDP m = instances::selfloop_mdp();
    m.horizon = 1;
    Mat pi(2, 2);
    pi << 0.3, 0.7, 0.9, 0.1;
    CHECK((state_distribution(m, pi) - m.initial).norm() == 0.0);
  }
  SUBCASE("self-loop dynamics are policy independent") {
    const TabularMDP m = instances::selfloop_mdp();
    Mat pi1(2, 2), pi2(2, 2);
    pi1 << 1, 0, 1, 0;
    pi2 << 0.2, 0.8, 0.6, 0.4;
    CHECK((state_distribution(m, pi1) - m.initial).norm() <= 1e-15);
    CHECK((state_distribution(m, pi2) - m.initial).norm() <= 1e-15);
  }
  SUBCASE("deterministic swap chain, hand simulated") {
    const TabularMDP m = instances::swap_chain_mdp();  // d1 = (1, 0), T = 2
    Mat swap_policy(2, 2);
    swap_policy << 0, 1, 0, 1;  // always swap
    const Vec d = state_distribution(m, swap_policy);
    CHECK(d[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(d[1] == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("output is a distribution") {
    RandomStream rng(3);
    const ILProblem ilp = instances::il_chain3();
    for (int k = 0; k < 20; ++k) {
      const Mat pi = policy_from_vector(ilp.col.set.sample(rng), 3, 2);
      const Vec d = state_distribution(ilp.mdp, pi);
      CHECK(std::abs(d.sum() - 1.0) <= 1e-10);
      CHECK(d.minCoeff() >= 0.0);
    }
  }
}

TEST_CASE("il_loss and gradient") {
  const ILProblem ilp = instances::il_selfloop();
  const int a_n = 2;

  SUBCASE("expert inside the class has zero loss") {
    Mat expert(2, 2);
    expert << 0.8, 0.2, 0.3, 0.7;
    const ILProblem in_class = make_il_problem(instances::selfloop_mdp(), expert, 0.1);
    const Vec pi_star = vector_from_policy(expert);
    CHECK(il_loss(in_class, pi_star, pi_star) == 0.0);
    CHECK(il_loss_gradient(in_class, pi_star, pi_star).norm() == 0.0);
  }
  SUBCASE("uniform policy against a deterministic expert") {
    // both states weighted 0.5; per state c = 1/2 ||(.5,.5) - (1,0)||^2 = 0.25
    const Vec uniform = ilp.col.set.center_point();
    CHECK(il_loss(ilp, uniform, uniform) == doctest::Approx(0.25).epsilon(1e-15));
  }
  SUBCASE("gradient blocks are the weighted action-distribution gaps") {
    RandomStream rng(6);
    const Vec q = ilp.col.set.sample(rng);
    const Vec x = ilp.col.set.sample(rng);
    const Vec g = il_loss_gradient(ilp, q, x);
    const Vec d = state_distribution(ilp.mdp, policy_from_vector(q, 2, 2));
    for (int s = 0; s < 2; ++s) {
      const Vec expected =
          d[s] * (x.segment(s * a_n, a_n) - ilp.expert.row(s).transpose());
      CHECK((g.segment(s * a_n, a_n) - expected).norm() <= 1e-15);
    }
  }
  SUBCASE("gradient matches finite differences") {
    RandomStream rng(7);
    const ILProblem chain = instances::il_chain();
    for (int k = 0; k < 10; ++k) {
      const Vec q = chain.col.set.sample(rng);
      const Vec x = chain.col.set.sample(rng);
      const Vec fd = col_test::finite_diff(chain.col.eval, q, x);
      const Vec g = chain.col.grad(q, x);
      CHECK((fd - g).norm() / std::max(1.0, g.norm()) < 1e-5);
    }
  }
}

TEST_CASE("rollout_feedback") {
  SUBCASE("horizon one supports a single state block") {
    TabularMDP m = instances::selfloop_mdp();
    m.horizon = 1;
    Mat expert(2, 2);
    expert << 1, 0, 0, 1;
    const ILProblem ilp = make_il_problem(m, expert, 0.1);
    RandomStream rng(11);
    const Vec pi = ilp.col.set.center_point();
    const Vec g = rollout_feedback(ilp, pi, rng);
    int nonzero_blocks = 0;
    for (int s = 0; s < 2; ++s)
      if (g.segment(2 * s, 2).norm() > 0) ++nonzero_blocks;
    CHECK(nonzero_blocks == 1);
  }
  SUBCASE("swap dynamics visit both states once from either start") {
    // deterministic transitions and a deterministic policy make the episode
    // gradient equal to the (1/T)-weighted visitation gradient exactly
    TabularMDP m;
    m.num_states = 2;
    m.num_actions = 2;
    m.horizon = 2;
    m.initial = Vec::Constant(2, 0.5);
    m.transitions.resize(2);
    for (int s = 0; s < 2; ++s) {
      Mat t = Mat::Zero(2, 2);
      t(0, s) = 1.0;
      t(1, 1 - s) = 1.0;
      m.transitions[s] = t;
    }
    Mat expert(2, 2);
    expert << 1, 0, 0, 1;
    const ILProblem ilp = make_il_problem(m, expert, 0.0);
    Mat swap_policy(2, 2);
    swap_policy << 0, 1, 0, 1;
    const Vec pi = vector_from_policy(swap_policy);
    RandomStream rng(13);
    const Vec expected = 0.5 * (pi - vector_from_policy(expert));
    for (int k = 0; k < 20; ++k)
      CHECK((rollout_feedback(ilp, pi, rng) - expected).norm() <= 1e-15);
  }
  SUBCASE("sample mean approaches the exact gradient") {
    const ILProblem ilp = instances::il_chain();
    const Vec pi = ilp.col.set.center_point();
    const Vec exact = ilp.col.grad(pi, pi);
    RandomStream rng(17);
    const long draws = 20000;
    Vec mean = Vec::Zero(pi.size());
    for (long i = 0; i < draws; ++i) mean += rollout_feedback(ilp, pi, rng);
    mean /= static_cast<double>(draws);
    RandomStream srng(18);
    const double sigma = estimate_rollout_sigma(ilp, pi, 1000, srng);
    CHECK((mean - exact).cwiseAbs().maxCoeff() <=
          3.0 * sigma / std::sqrt(static_cast<double>(draws)));
  }
}

TEST_CASE("estimate_beta") {
  RandomStream rng(21);
  SUBCASE("policy-independent dynamics give exactly zero") {
    CHECK(estimate_beta(instances::il_selfloop(), 500, rng) == 0.0);
  }
  SUBCASE("horizon one gives exactly zero") {
    TabularMDP m = instances::il_chain().mdp;
    m.horizon = 1;
    Mat expert(2, 2);
    expert << 1, 0, 0, 1;
    const ILProblem ilp = make_il_problem(m, expert, 0.1, 500, 1);
    CHECK(ilp.beta_hat == 0.0);
  }
  SUBCASE("coupled chain is positive and finite") {
    const double b = estimate_beta(instances::il_chain(), 500, rng);
    CHECK(b > 0.0);
    CHECK(std::isfinite(b));
  }
}

TEST_CASE("IL problem constants") {
  const ILProblem chain = instances::il_chain();
  CHECK(chain.col.alpha == doctest::Approx(0.25));        // d1_min / T
  CHECK(chain.col.smoothness == doctest::Approx(0.75));   // (d1_max + T - 1)/T
  CHECK(chain.col.alpha > chain.col.beta);                // certified margin
  CHECK(chain.col.set.dimension() == 4);
  SUBCASE("equilibrium is the blockwise projected expert") {
    REQUIRE(chain.col.equilibrium.has_value());
    const Vec& eq = *chain.col.equilibrium;
    for (int s = 0; s < 2; ++s) {
      const Vec proj =
          project_simplex_block(chain.expert.row(s).transpose(), chain.floor);
      CHECK((eq.segment(2 * s, 2) - proj).norm() == 0.0);
    }
  }
  SUBCASE("strictly positive initial distribution is required") {
    Mat expert(2, 2);
    expert << 1, 0, 0, 1;
    CHECK_THROWS_AS(make_il_problem(instances::swap_chain_mdp(), expert, 0.1), DomainError);
  }
}

TEST_CASE("MDP text format") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "col_mdp_io_test";
  fs::create_directories(dir);
  const fs::path path = dir / "chain.mdp";

  SUBCASE("write and parse round trip") {
    MdpFile file;
    file.mdp = instances::il_chain().mdp;
    file.expert = instances::il_chain().expert;
    write_mdp_file(path, file);
    const MdpFile back = load_mdp_file(path);
    CHECK(back.mdp.num_states == file.mdp.num_states);
    CHECK(back.mdp.horizon == file.mdp.horizon);
    CHECK((back.mdp.initial - file.mdp.initial).norm() == 0.0);
    for (int s = 0; s < 2; ++s)
      CHECK((back.mdp.transitions[s] - file.mdp.transitions[s]).norm() == 0.0);
    CHECK((back.expert - file.expert).norm() == 0.0);
  }
  SUBCASE("comments and missing rows") {
    std::ofstream out(path);
    out << "# tiny fixture\nstates 1\nactions 1\nhorizon 1\ninit 1\n";
    out << "P 0 0 : 1\n";  // expert row missing
    out.close();
    CHECK_THROWS_AS(load_mdp_file(path), ConfigError);
  }
  SUBCASE("unknown directives are rejected") {
    std::ofstream out(path);
    out << "states 1\nactions 1\nhorizon 1\ninit 1\nP 0 0 : 1\nexpert 0 : 1\nbogus 3\n";
    out.close();
    CHECK_THROWS_AS(load_mdp_file(path), ConfigError);
  }
  SUBCASE("out-of-range indices are rejected") {
    std::ofstream out(path);
    out << "states 1\nactions 1\nhorizon 1\ninit 1\nP 0 5 : 1\nexpert 0 : 1\n";
    out.close();
    CHECK_THROWS_AS(load_mdp_file(path), ConfigError);
  }
  fs::remove_all(dir);
}
