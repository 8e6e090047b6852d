#include "col/verify.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>

#include "col/csv.hpp"
#include "col/config.hpp"
#include "col/equilibrium.hpp"
#include "col/errors.hpp"
#include "col/experiment.hpp"
#include "col/geometry.hpp"
#include "col/instances.hpp"
#include "col/regret.hpp"
#include "col/synthetic.hpp"

namespace col {
namespace verify {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Context {
  std::string fault;
  std::vector<CheckResult> results;

  void add(const std::string& module, const std::string& name, bool pass, double measured,
           double limit, const std::string& detail = "") {
    results.push_back(CheckResult{module, name, pass, measured, limit, detail});
  }
};

bool bitwise_equal(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) return false;
  return std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0;
}

Vec finite_difference_gradient(const COLProblem& p, const Vec& query, const Vec& decision,
                               double h) {
  Vec g(decision.size());
  Vec d = decision;
  for (Eigen::Index i = 0; i < decision.size(); ++i) {
    d[i] = decision[i] + h;
    const double up = p.eval(query, d);
    d[i] = decision[i] - h;
    const double down = p.eval(query, d);
    d[i] = decision[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

std::vector<COLProblem> gradient_fixtures() {
  auto out = instances::planar_quadratics();
  out.push_back(instances::il_chain().col);
  return out;
}

// ----- core ---------------------------------------------------------------

void check_core(Context& ctx) {
  {  // finite differences vs analytic gradients
    RandomStream rng(101);
    double worst = 0.0;
    for (const COLProblem& p : gradient_fixtures()) {
      for (int k = 0; k < 20; ++k) {
        const Vec q = p.set.sample(rng);
        const Vec x = p.set.sample(rng);
        const Vec g = p.grad(q, x);
        const Vec fd = finite_difference_gradient(p, q, x, 1e-5);
        worst = std::max(worst, (fd - g).norm() / std::max(1.0, g.norm()));
      }
    }
    ctx.add("core", "gradient-consistency", worst < 1e-5, worst, 1e-5);
  }

  {  // bitwise determinism of seeded runs
    auto run_once = [](const COLProblem& p, FeedbackMode mode, double sigma) {
      FeedbackOracle oracle{mode, sigma, 7};
      OnlineAlgorithm algo(AlgorithmKind::Ogd, StepSize::automatic());
      return run(p, oracle, algo, p.set.center_point(), 60);
    };
    int mismatches = 0;
    const COLProblem q0 = instances::q0();
    const COLProblem il = instances::il_chain().col;
    for (const auto& [p, mode, sigma] :
         {std::tuple<const COLProblem*, FeedbackMode, double>{&q0, FeedbackMode::Gaussian, 0.5},
          std::tuple<const COLProblem*, FeedbackMode, double>{&il, FeedbackMode::Rollout, 0.0}}) {
      const RunLog a = run_once(*p, mode, sigma);
      const RunLog b = run_once(*p, mode, sigma);
      for (long n = 0; n < a.rounds; ++n) {
        if (!bitwise_equal(a.decisions[n], b.decisions[n])) ++mismatches;
        if (!bitwise_equal(a.feedbacks[n], b.feedbacks[n])) ++mismatches;
        if (std::memcmp(&a.losses[n], &b.losses[n], sizeof(double)) != 0) ++mismatches;
      }
    }
    ctx.add("core", "run-determinism", mismatches == 0, mismatches, 0, "bitwise series compare");
  }

  {  // gaussian feedback unbiasedness: mean of 1e4 draws per coordinate
    const COLProblem p = instances::q0();
    Vec x(2);
    x << 0.3, -0.4;
    const double sigma = 0.5;
    const FeedbackOracle oracle{FeedbackMode::Gaussian, sigma, 0};
    RandomStream rng(2024);
    const Vec exact = p.grad(x, x);
    Vec mean = Vec::Zero(2);
    const long draws = 10000;
    for (long i = 0; i < draws; ++i) mean += oracle.draw(p, x, rng);
    mean /= static_cast<double>(draws);
    const double dev = (mean - exact).cwiseAbs().maxCoeff();
    const double limit = 3.0 * sigma / 100.0;
    ctx.add("core", "feedback-unbiasedness-gaussian", dev <= limit, dev, limit);
  }

  {  // rollout feedback unbiasedness against the exact gradient
    const ILProblem ilp = instances::il_chain();
    const Vec x = ilp.col.set.center_point();
    RandomStream sigma_rng(11);
    const double sigma = estimate_rollout_sigma(ilp, x, 1000, sigma_rng);
    RandomStream rng(12);
    const Vec exact = ilp.col.grad(x, x);
    Vec mean = Vec::Zero(x.size());
    const long draws = 10000;
    for (long i = 0; i < draws; ++i) mean += rollout_feedback(ilp, x, rng);
    mean /= static_cast<double>(draws);
    const double dev = (mean - exact).cwiseAbs().maxCoeff();
    const double limit = 3.0 * sigma / 100.0;
    ctx.add("core", "feedback-unbiasedness-rollout", dev <= limit, dev, limit);
  }

  {  // the opponent answers the same decision with the same loss, exactly
    RandomStream rng(55);
    int mismatches = 0;
    for (const COLProblem& p : gradient_fixtures()) {
      for (int k = 0; k < 10; ++k) {
        const Vec x = p.set.sample(rng);
        const double l1 = p.eval(x, x);
        const double l2 = p.eval(x, x);
        if (std::memcmp(&l1, &l2, sizeof(double)) != 0) ++mismatches;
      }
    }
    ctx.add("core", "opponent-consistency", mismatches == 0, mismatches, 0);
  }
}

// ----- geometry -------------------------------------------------------------

std::vector<DecisionSet> geometry_sets() {
  std::vector<DecisionSet> sets;
  sets.push_back(DecisionSet::box(Vec::Constant(2, -1.0), Vec::Constant(2, 1.0)));
  {
    Vec lo(3), hi(3);
    lo << -1.2, -0.5, -2.0;
    hi << 0.4, 1.5, 0.3;
    sets.push_back(DecisionSet::box(lo, hi));
  }
  sets.push_back(DecisionSet::ball(Vec::Zero(2), 1.0));
  {
    Vec c(3);
    c << 0.2, -0.1, 0.4;
    sets.push_back(DecisionSet::ball(c, 1.3));
  }
  sets.push_back(DecisionSet::simplex_product(1, 2, 0.0));
  sets.push_back(DecisionSet::simplex_product(2, 2, 0.1));
  sets.push_back(DecisionSet::simplex_product(1, 3, 0.05));
  return sets;
}

// Best feasible competitor on a 2-D slice through the projection.
double slice_search_gap(const DecisionSet& set, const Vec& y, const Vec& p, RandomStream& rng) {
  const double base = (y - p).norm();
  const int d = set.dimension();
  double best = base;
  const int grid = 41;
  const double span = std::max(set.diameter(), 1e-6);

  auto consider = [&](const Vec& cand) {
    if (set.contains(cand, 1e-12)) best = std::min(best, (y - cand).norm());
  };

  if (set.kind() == DecisionSet::Kind::SimplexProduct) {
    const int m = set.block_size();
    const int blocks = set.num_blocks();
    const int b1 = rng.uniform_int(blocks);
    const int b2 = blocks > 1 ? (b1 + 1 + rng.uniform_int(blocks - 1)) % blocks : b1;
    const int i1 = rng.uniform_int(m);
    int j1 = rng.uniform_int(m);
    if (m > 1)
      while (j1 == i1) j1 = rng.uniform_int(m);
    const int i2 = rng.uniform_int(m);
    int j2 = rng.uniform_int(m);
    if (m > 1)
      while (j2 == i2) j2 = rng.uniform_int(m);
    for (int a = 0; a < grid; ++a) {
      const double t1 = -span + 2.0 * span * a / (grid - 1);
      for (int b = 0; b < grid; ++b) {
        const double t2 = -span + 2.0 * span * b / (grid - 1);
        Vec cand = p;
        cand[b1 * m + i1] += t1;
        cand[b1 * m + j1] -= t1;
        if (b2 != b1) {
          cand[b2 * m + i2] += t2;
          cand[b2 * m + j2] -= t2;
        } else if (b != 0) {
          continue;
        }
        consider(cand);
      }
    }
  } else {
    const int i = rng.uniform_int(d);
    int j = rng.uniform_int(d);
    if (d > 1)
      while (j == i) j = rng.uniform_int(d);
    for (int a = 0; a < grid; ++a) {
      for (int b = 0; b < grid; ++b) {
        Vec cand = p;
        cand[i] += -span + 2.0 * span * a / (grid - 1);
        if (j != i) cand[j] += -span + 2.0 * span * b / (grid - 1);
        if (set.kind() == DecisionSet::Kind::Box)
          cand = cand.cwiseMax(set.lower()).cwiseMin(set.upper());
        consider(cand);
      }
    }
  }
  return base - best;  // positive when the slice found a closer feasible point
}

void check_geometry(Context& ctx) {
  const auto sets = geometry_sets();

  {  // projection optimality vs brute-force slices
    RandomStream rng(301);
    double worst = -kInf;
    for (int c = 0; c < 1000; ++c) {
      const DecisionSet& set = sets[c % sets.size()];
      const Vec y = set.sample(rng) +
                    0.7 * std::max(set.diameter(), 1.0) * rng.gaussian_vector(set.dimension());
      const Vec p = project(set, y).point;
      worst = std::max(worst, slice_search_gap(set, y, p, rng));
    }
    ctx.add("geometry", "projection-optimality", worst <= 1e-6, worst, 1e-6,
            "max improvement found by slice search");
  }

  {  // nonexpansiveness
    RandomStream rng(302);
    double worst = -kInf;
    for (const DecisionSet& set : sets) {
      for (int k = 0; k < 200; ++k) {
        const double s = std::max(set.diameter(), 1.0);
        const Vec y1 = set.sample(rng) + s * rng.gaussian_vector(set.dimension());
        const Vec y2 = set.sample(rng) + s * rng.gaussian_vector(set.dimension());
        const double lhs = (project(set, y1).point - project(set, y2).point).norm();
        worst = std::max(worst, lhs - (y1 - y2).norm());
      }
    }
    ctx.add("geometry", "nonexpansiveness", worst <= 1e-12, worst, 1e-12);
  }

  {  // exact idempotence
    RandomStream rng(303);
    int mismatches = 0;
    for (const DecisionSet& set : sets) {
      for (int k = 0; k < 500; ++k) {
        const double s = std::max(set.diameter(), 1.0);
        const Vec y = set.sample(rng) + s * rng.gaussian_vector(set.dimension());
        const Vec p1 = project(set, y).point;
        const Vec p2 = project(set, p1).point;
        if (!bitwise_equal(p1, p2)) ++mismatches;
      }
    }
    ctx.add("geometry", "idempotence", mismatches == 0, mismatches, 0);
  }
}

// ----- algorithms -----------------------------------------------------------

void check_algorithms(Context& ctx) {
  {  // every step lands inside the set
    RandomStream rng(401);
    double worst = 0.0;
    const COLProblem q0 = instances::q0();
    const COLProblem il = instances::il_chain().col;
    for (const COLProblem* p : {&q0, &il}) {
      for (AlgorithmKind kind : {AlgorithmKind::Ogd, AlgorithmKind::MirrorDescent,
                                 AlgorithmKind::Ftl, AlgorithmKind::Extragradient}) {
        FeedbackOracle oracle{FeedbackMode::Gaussian, 0.3, rng.next_u64()};
        OnlineAlgorithm algo(kind, StepSize::automatic());
        const RunLog log = run(*p, oracle, algo, p->set.center_point(), 50);
        for (const Vec& x : log.decisions)
          worst = std::max(worst, project(p->set, x).residual);
      }
    }
    ctx.add("algorithms", "feasibility", worst <= 1e-12, worst, 1e-12);
  }

  {  // strongly monotone OGD contraction on the quadratic instance
    const COLProblem p = instances::q0();
    const double lam = p.smoothness + p.beta;
    const double eta = p.mu() / (lam * lam);
    const double rho = 1.0 + lam * lam * eta * eta - 2.0 * p.mu() * eta;
    FeedbackOracle oracle{FeedbackMode::Deterministic, 0.0, 0};
    OnlineAlgorithm algo(AlgorithmKind::Ogd, StepSize::constant(eta));
    Vec x1(2);
    x1 << 1.0, 1.0;
    const RunLog log = run(p, oracle, algo, x1, 300);
    const Vec xs = *p.equilibrium;
    const double d1 = (x1 - xs).squaredNorm();
    double worst = -kInf;
    double bound = d1;
    for (long n = 0; n < log.rounds; ++n) {
      const double dn = (log.decisions[n] - xs).squaredNorm();
      worst = std::max(worst, dn - bound * (1.0 + 1e-9));
      bound *= rho;
    }
    ctx.add("algorithms", "ogd-contraction", worst <= 0.0, worst, 0.0,
            "max excess over the geometric bound");
  }

  {  // static regret of the D/(G sqrt(n)) schedule stays under 1.5 G D sqrt(N)
    double worst_ratio = 0.0;
    for (const COLProblem& p : {instances::q0(), instances::q1()}) {
      const double diam = p.set.diameter();
      const double eta0 = diam / p.grad_bound;
      FeedbackOracle oracle{FeedbackMode::Deterministic, 0.0, 0};
      OnlineAlgorithm algo(AlgorithmKind::Ogd, StepSize::inverse_sqrt(eta0));
      Vec x1 = Vec::Constant(2, 1.0);
      const RunLog log = run(p, oracle, algo, x1, 10000);
      const Vec xs = *p.equilibrium;
      double stat = 0.0;
      for (long n = 0; n < log.rounds; ++n) {
        stat += log.losses[n] - p.eval(log.decisions[n], xs);
        const double cap = 1.5 * p.grad_bound * diam * std::sqrt(static_cast<double>(n + 1));
        worst_ratio = std::max(worst_ratio, stat / cap);
      }
    }
    ctx.add("algorithms", "static-regret-sanity", worst_ratio <= 1.0, worst_ratio, 1.0,
            "max Regret_s / (1.5 G D sqrt(N))");
  }
}

// ----- equilibrium ----------------------------------------------------------

void check_equilibrium(Context& ctx) {
  {  // solver output passes the brute-force equilibrium check (d = 2)
    double worst = kInf;
    for (const COLProblem& p : instances::planar_quadratics()) {
      const EquilibriumSolution sol = solve_vi(p, 1e-10);
      worst = std::min(worst, check_ep_solution(p, sol.x_star, 101).worst_violation);
    }
    ctx.add("equilibrium", "oracle-coincidence", worst >= -1e-6, worst, -1e-6,
            "min grid violation at the solved point");
  }

  {  // residual soundness: per-round regret at a solved point
    double worst = -kInf;
    const double tol = 1e-8;
    auto fixtures = instances::planar_quadratics();
    fixtures.push_back(instances::il_selfloop().col);
    fixtures.push_back(instances::il_chain().col);
    for (const COLProblem& p : fixtures) {
      const EquilibriumSolution sol = solve_vi(p, tol);
      const Vec xm = per_round_minimizer(p, sol.x_star, 1e-12);
      const double gap = p.eval(sol.x_star, sol.x_star) - p.eval(sol.x_star, xm);
      const double budget =
          p.grad_bound * tol + (p.alpha > 0 ? p.beta * p.beta / (2.0 * p.alpha) * tol * tol : 0.0);
      worst = std::max(worst, gap - budget);
    }
    ctx.add("equilibrium", "residual-soundness", worst <= 0.0, worst, 0.0);
  }

  {  // uniqueness under strong monotonicity: multi-start agreement
    RandomStream rng(501);
    const double tol = 1e-8;
    double worst = 0.0;
    const COLProblem fixtures[] = {instances::q0(), instances::q_ball(), instances::q_simplex()};
    for (const COLProblem& p : fixtures) {
      std::vector<Vec> sols;
      for (int s = 0; s < 10; ++s)
        sols.push_back(solve_vi(p, tol, 1000000, p.set.sample(rng)).x_star);
      for (size_t i = 0; i < sols.size(); ++i)
        for (size_t j = i + 1; j < sols.size(); ++j)
          worst = std::max(worst, (sols[i] - sols[j]).norm());
    }
    ctx.add("equilibrium", "uniqueness", worst <= 2.0 * tol, worst, 2.0 * tol);
  }

  {  // sampled strong monotonicity certificates
    RandomStream rng(502);
    double worst_margin = kInf;
    auto fixtures = instances::planar_quadratics();
    fixtures.push_back(instances::il_selfloop().col);
    fixtures.push_back(instances::il_chain().col);
    fixtures.push_back(instances::il_chain3().col);
    for (const COLProblem& p : fixtures) {
      const double cert = monotonicity_certificate(p, 2000, rng);
      worst_margin = std::min(worst_margin, cert - p.mu());
    }
    ctx.add("equilibrium", "monotonicity-certificate", worst_margin >= -1e-8, worst_margin,
            -1e-8, "min certificate minus (alpha - beta)");
  }
}

// ----- regret ---------------------------------------------------------------

struct CertifiedRun {
  std::string label;
  RegretReport report;
};

std::vector<CertifiedRun> certified_runs(long rounds) {
  std::vector<CertifiedRun> out;
  const COLProblem fixtures[] = {instances::q0(), instances::q1()};
  for (const COLProblem& p : fixtures) {
    for (AlgorithmKind kind : {AlgorithmKind::Ogd, AlgorithmKind::MirrorDescent,
                               AlgorithmKind::Ftl, AlgorithmKind::Extragradient}) {
      FeedbackOracle oracle{kind == AlgorithmKind::Ftl ? FeedbackMode::FullInformation
                                                       : FeedbackMode::Deterministic,
                            0.0, 0};
      OnlineAlgorithm algo(kind, StepSize::automatic());
      Vec x1 = Vec::Constant(2, 1.0);
      const RunLog log = run(p, oracle, algo, x1, rounds);
      EquilibriumSolution sol;
      sol.x_star = *p.equilibrium;
      sol.solver = "closed-form";
      CertifiedRun cr;
      cr.label = p.name + "/" + algorithm_kind_name(kind);
      cr.report = compute_report(p, log, sol, 1e-9);
      out.push_back(std::move(cr));
    }
  }
  const COLProblem il = instances::il_chain().col;
  for (AlgorithmKind kind : {AlgorithmKind::Ogd, AlgorithmKind::MirrorDescent}) {
    FeedbackOracle oracle{FeedbackMode::Deterministic, 0.0, 0};
    OnlineAlgorithm algo(kind, StepSize::automatic());
    const RunLog log = run(il, oracle, algo, il.set.center_point(), rounds);
    EquilibriumSolution sol;
    sol.x_star = *il.equilibrium;
    sol.solver = "closed-form";
    CertifiedRun cr;
    cr.label = std::string("il-chain/") + algorithm_kind_name(kind);
    cr.report = compute_report(il, log, sol, 1e-9);
    out.push_back(std::move(cr));
  }
  return out;
}

// Recomputes the reduction bound from the report's delta and static series;
// the fault fixture corrupts delta first.
std::vector<double> recompute_reduction_bound(const RegretReport& rep, const COLProblem& p) {
  std::vector<double> bound(rep.rounds);
  double sum_delta = 0.0, sum_curv = 0.0;
  const double diam = p.set.diameter();
  for (long n = 0; n < rep.rounds; ++n) {
    const double d = rep.delta[n];
    sum_delta += d;
    const double curv = p.alpha > 0 ? p.beta * p.beta / (2.0 * p.alpha) * d * d : kInf;
    sum_curv += std::min(p.beta * diam * d, curv);
    bound[n] = std::min(p.grad_bound * sum_delta, rep.static_regret[n]) + sum_curv;
  }
  return bound;
}

void check_regret(Context& ctx) {
  auto runs = certified_runs(400);
  const COLProblem q0 = instances::q0();
  const COLProblem q1 = instances::q1();
  const COLProblem il = instances::il_chain().col;
  auto problem_for = [&](const std::string& label) -> const COLProblem& {
    if (label.rfind("q0", 0) == 0) return q0;
    if (label.rfind("q1", 0) == 0) return q1;
    return il;
  };

  {  // reduction-bound certificate at every prefix
    double worst = -kInf;
    std::string worst_label;
    for (auto& cr : runs) {
      RegretReport rep = cr.report;
      if (ctx.fault == "regret-delta")
        for (long n = 0; n < rep.rounds; ++n) rep.delta[n] *= 1e-3;
      const auto bound = recompute_reduction_bound(rep, problem_for(cr.label));
      for (long n = 0; n < rep.rounds; ++n) {
        const double v = rep.dynamic_regret[n] - bound[n] - (n + 1) * rep.tol_inner;
        if (v > worst) {
          worst = v;
          worst_label = cr.label;
        }
      }
      if (ctx.fault.empty()) {
        // stored bound must agree with the recomputation
        for (long n = 0; n < rep.rounds; ++n)
          if (std::abs(bound[n] - rep.reduction_bound[n]) > 1e-12 * std::max(1.0, bound[n]))
            worst = std::max(worst, std::abs(bound[n] - rep.reduction_bound[n]));
      }
    }
    ctx.add("regret", "reduction-certificate", worst <= 0.0, worst, 0.0, worst_label);
  }

  {  // static-reduction certificate (alpha > beta instances)
    double worst = -kInf;
    for (const auto& cr : runs) {
      const RegretReport& rep = cr.report;
      if (rep.static_reduction_bound.empty()) continue;
      for (long n = 0; n < rep.rounds; ++n)
        worst = std::max(worst,
                         rep.dynamic_regret[n] - rep.static_reduction_bound[n] - (n + 1) * rep.tol_inner);
    }
    ctx.add("regret", "static-reduction-certificate", worst <= 0.0, worst, 0.0);
  }

  {  // dynamic regret dominates static regret at any fixed comparator
    RandomStream rng(601);
    double worst = -kInf;
    for (const COLProblem* p : {&q0, &il}) {
      FeedbackOracle oracle{FeedbackMode::Deterministic, 0.0, 0};
      OnlineAlgorithm algo(AlgorithmKind::Ogd, StepSize::automatic());
      const RunLog log = run(*p, oracle, algo, p->set.center_point(), 200);
      const RegretReport rep = compute_report(*p, log, std::nullopt, 1e-9);
      for (int k = 0; k < 10; ++k) {
        const Vec comparator = p->set.sample(rng);
        double stat = 0.0;
        for (long n = 0; n < log.rounds; ++n)
          stat += log.losses[n] - p->eval(log.decisions[n], comparator);
        worst = std::max(worst, stat - rep.dynamic_regret.back() - log.rounds * rep.tol_inner);
      }
    }
    ctx.add("regret", "comparator-dominance", worst <= 0.0, worst, 0.0);
  }

  {  // rate fitting on synthetic series and on a converged run
    std::vector<double> linear(2000), sqrt_series(2000);
    for (long n = 1; n <= 2000; ++n) {
      linear[n - 1] = 3.7 * n;
      sqrt_series[n - 1] = 2.1 * std::sqrt(static_cast<double>(n));
    }
    const double e1 = std::abs(fit_regret_rate(linear, 10, 2000).slope - 1.0);
    const double e2 = std::abs(fit_regret_rate(sqrt_series, 10, 2000).slope - 0.5);
    double slope_converged = 0.0;
    {
      FeedbackOracle oracle{FeedbackMode::Deterministic, 0.0, 0};
      OnlineAlgorithm algo(AlgorithmKind::Ogd, StepSize::automatic());
      const RunLog log = run(q0, oracle, algo, Vec::Constant(2, 1.0), 1000);
      const RegretReport rep = compute_report(q0, log, std::nullopt, 1e-9);
      slope_converged = fit_regret_rate(rep.dynamic_regret, 100, 1000).slope;
    }
    const bool pass = e1 <= 1e-6 && e2 <= 1e-6 && slope_converged <= 0.1;
    ctx.add("regret", "rate-fit", pass, std::max({e1, e2, slope_converged}), 0.1,
            "synthetic slopes and converged-run slope");
  }

  {  // inner projected-gradient route agrees with the closed forms
    RandomStream rng(602);
    double worst = 0.0;
    for (const COLProblem* p : {&q0, &q1, &il}) {
      COLProblem stripped = *p;
      stripped.round_minimizer = nullptr;
      for (int k = 0; k < 20; ++k) {
        const Vec q = p->set.sample(rng);
        const Vec a = per_round_minimizer(*p, q, 1e-9);
        const Vec b = per_round_minimizer(stripped, q, 1e-10);
        worst = std::max(worst, (a - b).norm());
      }
    }
    ctx.add("regret", "minimizer-route-agreement", worst <= 1e-6, worst, 1e-6);
  }
}

// ----- problems_synthetic ---------------------------------------------------

void check_synthetic(Context& ctx) {
  {  // sampled certification matches the analytic constants (d = 2)
    RandomStream rng(701);
    double worst = 0.0;
    for (const COLProblem& p : instances::planar_quadratics()) {
      const double ca = certify_alpha(p, 10000, rng);
      const double cb = certify_beta(p, 10000, rng);
      worst = std::max(worst, std::abs(ca - p.alpha));
      worst = std::max(worst, std::abs(cb - p.beta));
    }
    ctx.add("problems_synthetic", "certify-constants", worst <= 1e-6, worst, 1e-6);
  }

  {  // solver recovers the closed-form equilibrium
    const double tol = 1e-9;
    double worst = 0.0;
    for (const COLProblem& p : instances::planar_quadratics()) {
      const EquilibriumSolution sol = solve_vi(p, tol);
      worst = std::max(worst, (sol.x_star - *p.equilibrium).norm());
    }
    ctx.add("problems_synthetic", "solve-recovers-xstar", worst <= 10.0 * tol, worst,
            10.0 * tol);
  }

  {  // symmetric instances make the monotonicity bound tight
    RandomStream rng(702);
    const double c1 = monotonicity_certificate(instances::q0(), 200, rng);
    const double c2 = monotonicity_certificate(instances::q_negative(), 200, rng);
    const double worst = std::max(std::abs(c1 - 0.5), std::abs(c2 - 1.5));
    ctx.add("problems_synthetic", "prop1-tightness", worst <= 1e-12, worst, 1e-12,
            "A = +-0.5 I certificates");
  }

  {  // the stored gradient bound really bounds ||grad f_x(x)||
    RandomStream rng(703);
    double worst = 0.0;
    auto fixtures = instances::planar_quadratics();
    fixtures.push_back(instances::il_selfloop().col);
    fixtures.push_back(instances::il_chain().col);
    for (const COLProblem& p : fixtures) {
      for (int k = 0; k < 2000; ++k) {
        const Vec x = p.set.sample(rng);
        worst = std::max(worst, p.operator_at(x).norm() - p.grad_bound);
      }
    }
    ctx.add("problems_synthetic", "grad-bound", worst <= 1e-12, worst, 1e-12);
  }
}

// ----- problems_il ----------------------------------------------------------

void check_il(Context& ctx) {
  const ILProblem chain = instances::il_chain();

  {  // alpha > beta_hat holds on the certified instance
    const double margin = chain.col.alpha - chain.col.beta;
    ctx.add("problems_il", "certified-margin", margin > 0.0, margin, 0.0,
            "alpha - beta_hat on the chain instance");
  }

  {  // unique self-consistent policy: multi-start agreement and fixed point
    RandomStream rng(801);
    std::vector<Vec> sols;
    for (int s = 0; s < 5; ++s)
      sols.push_back(solve_vi(chain.col, 1e-10, 1000000, chain.col.set.sample(rng)).x_star);
    double spread = 0.0;
    for (size_t i = 0; i < sols.size(); ++i)
      for (size_t j = i + 1; j < sols.size(); ++j)
        spread = std::max(spread, (sols[i] - sols[j]).norm());
    const Vec fixed = per_round_minimizer(chain.col, sols[0], 1e-12);
    const double fp_gap = (fixed - sols[0]).norm();
    const bool pass = spread <= 1e-6 && fp_gap <= 1e-8;
    ctx.add("problems_il", "self-consistent-policy", pass, std::max(spread, fp_gap), 1e-6,
            "multi-start spread and fixed-point gap");
  }

  {  // deterministic linear convergence on the chain instance
    const COLProblem& p = chain.col;
    const double lam = p.smoothness + p.beta;
    const double eta = p.mu() / (lam * lam);
    const double rho = 1.0 + lam * lam * eta * eta - 2.0 * p.mu() * eta;
    FeedbackOracle oracle{FeedbackMode::Deterministic, 0.0, 0};
    OnlineAlgorithm algo(AlgorithmKind::Ogd, StepSize::constant(eta));
    const RunLog log = run(p, oracle, algo, p.set.center_point(), 300);
    const Vec xs = *p.equilibrium;
    double bound = (p.set.center_point() - xs).squaredNorm();
    double worst = -kInf;
    for (long n = 0; n < log.rounds; ++n) {
      worst = std::max(worst, (log.decisions[n] - xs).squaredNorm() - bound * (1.0 + 1e-9));
      bound *= rho;
    }
    ctx.add("problems_il", "linear-convergence", worst <= 0.0, worst, 0.0);
  }

  {  // analytic gradients vs finite differences on the other IL instances
    RandomStream rng(802);
    double worst = 0.0;
    for (const ILProblem& ilp : {instances::il_selfloop(), instances::il_chain3()}) {
      for (int k = 0; k < 10; ++k) {
        const Vec q = ilp.col.set.sample(rng);
        const Vec x = ilp.col.set.sample(rng);
        const Vec g = ilp.col.grad(q, x);
        const Vec fd = finite_difference_gradient(ilp.col, q, x, 1e-5);
        worst = std::max(worst, (fd - g).norm() / std::max(1.0, g.norm()));
      }
    }
    ctx.add("problems_il", "gradient-fd", worst < 1e-5, worst, 1e-5);
  }

  {  // Monte Carlo visitation agrees with the exact state distribution
    RandomStream rng(803);
    const TabularMDP& mdp = chain.mdp;
    const Mat policy = policy_from_vector(chain.col.set.sample(rng), mdp.num_states,
                                          mdp.num_actions);
    const Vec exact = state_distribution(mdp, policy);
    const long episodes = 100000;
    Vec mean = Vec::Zero(mdp.num_states);
    Vec sq = Vec::Zero(mdp.num_states);
    for (long e = 0; e < episodes; ++e) {
      Vec contrib = Vec::Zero(mdp.num_states);
      int s = rng.categorical(mdp.initial);
      for (int t = 1; t <= mdp.horizon; ++t) {
        contrib[s] += 1.0 / mdp.horizon;
        const int a = rng.categorical(policy.row(s).transpose());
        if (t < mdp.horizon) s = rng.categorical(mdp.transitions[s].row(a).transpose());
      }
      mean += contrib;
      sq += contrib.cwiseProduct(contrib);
    }
    mean /= static_cast<double>(episodes);
    double worst_z = 0.0;
    for (int s = 0; s < mdp.num_states; ++s) {
      const double var = sq[s] / episodes - mean[s] * mean[s];
      const double se = std::sqrt(std::max(var, 1e-300) / episodes);
      worst_z = std::max(worst_z, std::abs(mean[s] - exact[s]) / se);
    }
    ctx.add("problems_il", "state-distribution-mc", worst_z <= 3.0, worst_z, 3.0,
            "max z-score over states");
  }

  {  // degenerate dynamics give a zero query-Lipschitz estimate
    RandomStream rng(804);
    const double b1 = estimate_beta(instances::il_selfloop(), 500, rng);
    TabularMDP one_step = instances::il_chain().mdp;
    one_step.horizon = 1;
    Mat expert(2, 2);
    expert << 1.0, 0.0, 0.0, 1.0;
    const ILProblem t1 = make_il_problem(one_step, expert, 0.1, 500, 805);
    const double worst = std::max(b1, t1.beta_hat);
    ctx.add("problems_il", "beta-degenerate-zero", worst <= 1e-15, worst, 1e-15,
            "self-loop and horizon-1 instances");
  }

  {  // sampled strong-convexity certificate respects the stored alpha
    RandomStream rng(806);
    double worst_margin = kInf;
    for (const ILProblem* ilp : {&chain}) {
      const double cert = certify_alpha(ilp->col, 2000, rng);
      worst_margin = std::min(worst_margin, cert - ilp->col.alpha);
    }
    ctx.add("problems_il", "certify-alpha", worst_margin >= -1e-8, worst_margin, -1e-8);
  }
}

// ----- harness ----------------------------------------------------------

void check_harness_csv(Context& ctx) {
  // CSV round trip reproduces every numeric field exactly
  const COLProblem p = instances::q0();
  FeedbackOracle oracle{FeedbackMode::Gaussian, 0.4, 3};
  OnlineAlgorithm algo(AlgorithmKind::Ogd, StepSize::automatic());
  const RunLog log = run(p, oracle, algo, Vec::Constant(2, 1.0), 25);
  EquilibriumSolution sol;
  sol.x_star = *p.equilibrium;
  const RegretReport rep = compute_report(p, log, sol, 1e-9);
  std::string content = rounds_csv_content(rep);
  if (ctx.fault == "harness-csv") {
    // Prepend a digit to the final row's loss field; past-precision digits
    // would round back to the same double.
    const auto line = content.find_last_of('\n', content.size() - 2);
    const auto comma = content.find(',', line);
    content.insert(comma + 1, "9");
  }
  const RoundsCsv csv = parse_rounds_csv(content, "roundtrip");
  int mismatches = 0;
  auto expect = [&](long row, int field, double v) {
    const auto& cell = csv.rows[row][field];
    if (!cell || std::memcmp(&*cell, &v, sizeof(double)) != 0) ++mismatches;
  };
  for (long n = 0; n < rep.rounds; ++n) {
    expect(n, 1, rep.loss[n]);
    expect(n, 2, rep.dynamic_regret[n]);
    expect(n, 3, rep.static_regret[n]);
    expect(n, 4, rep.delta[n]);
    expect(n, 5, rep.reduction_bound[n]);
    expect(n, 6, rep.static_reduction_bound[n]);
    expect(n, 7, rep.residual[n]);
  }
  ctx.add("harness", "csv-roundtrip", mismatches == 0, mismatches, 0);
}

void check_harness(Context& ctx) {
  check_harness_csv(ctx);

  {  // same config and seed produce byte-identical outputs
    namespace fs = std::filesystem;
    const fs::path base = fs::temp_directory_path() /
                          ("col_verify_determinism_" + std::to_string(::getpid()));
    fs::remove_all(base);
    KeyValues kv;
    kv["problem.type"] = "quadratic";
    kv["problem.a"] = "identity-scale";
    kv["problem.a_scale"] = "0.5";
    kv["problem.alpha"] = "1";
    kv["set.kind"] = "box";
    kv["set.lower"] = "-1 -1";
    kv["set.upper"] = "1 1";
    kv["algorithm.name"] = "ogd";
    kv["oracle.mode"] = "gaussian";
    kv["oracle.sigma"] = "0.3";
    kv["run.rounds"] = "40";
    kv["run.seeds"] = "0 1";
    ExperimentConfig cfg = config_from_keyvalues(kv);
    int mismatches = 0;
    std::vector<std::string> outputs;
    for (int rep = 0; rep < 2; ++rep) {
      cfg.out_dir = (base / ("run" + std::to_string(rep))).string();
      const ExperimentOutcome out = run_experiment(cfg, true);
      std::ostringstream all;
      for (const auto& seed : out.per_seed) all << rounds_csv_content(seed.report);
      all << summary_csv_content(out);
      outputs.push_back(all.str());
    }
    if (outputs[0] != outputs[1]) ++mismatches;
    fs::remove_all(base);
    ctx.add("harness", "config-determinism", mismatches == 0, mismatches, 0);
  }

  {  // negative controls: injected faults must be detected
    const auto regret_faulty = run_checks("regret", "regret-delta");
    const auto csv_faulty = run_checks("harness-csv-only", "harness-csv");
    const bool regret_detected = !all_pass(regret_faulty);
    const bool csv_detected = !all_pass(csv_faulty);
    ctx.add("harness", "negative-controls", regret_detected && csv_detected,
            (regret_detected ? 0 : 1) + (csv_detected ? 0 : 1), 0,
            "fault fixtures must fail their suites");
  }
}

}  // namespace

std::vector<CheckResult> run_checks(const std::string& scope, const std::string& fault) {
  if (!fault.empty() && fault != "regret-delta" && fault != "harness-csv")
    throw ConfigError("unknown fault fixture: " + fault);

  Context ctx;
  ctx.fault = fault;
  const bool all = scope == "all";
  bool matched = false;

  if (all || scope == "core") {
    check_core(ctx);
    matched = true;
  }
  if (all || scope == "geometry") {
    check_geometry(ctx);
    matched = true;
  }
  if (all || scope == "algorithms") {
    check_algorithms(ctx);
    matched = true;
  }
  if (all || scope == "equilibrium") {
    check_equilibrium(ctx);
    matched = true;
  }
  if (all || scope == "regret") {
    check_regret(ctx);
    matched = true;
  }
  if (all || scope == "problems_synthetic") {
    check_synthetic(ctx);
    matched = true;
  }
  if (all || scope == "problems_il") {
    check_il(ctx);
    matched = true;
  }
  if (scope == "harness-csv-only") {  // internal scope for the negative control
    check_harness_csv(ctx);
    matched = true;
  }
  if (all || scope == "harness") {
    check_harness(ctx);
    matched = true;
  }
  if (!matched) throw ConfigError("unknown verify scope: " + scope);
  return ctx.results;
}

bool all_pass(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

void print_results(const std::vector<CheckResult>& results, std::ostream& os) {
  for (const auto& r : results) {
    os << (r.pass ? "[PASS] " : "[FAIL] ") << r.module << '/' << r.name
       << "  measured=" << r.measured << " limit=" << r.limit;
    if (!r.detail.empty()) os << "  (" << r.detail << ")";
    os << "\n";
  }
}

}  // namespace verify
}  // namespace col
