#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "col/algorithms.hpp"
#include "col/config.hpp"
#include "col/csv.hpp"
#include "col/equilibrium.hpp"
#include "col/errors.hpp"
#include "col/experiment.hpp"
#include "col/geometry.hpp"
#include "col/imitation.hpp"
#include "col/instances.hpp"
#include "col/mdp_io.hpp"
#include "col/regret.hpp"
#include "col/synthetic.hpp"
#include "col/verify.hpp"

namespace py = pybind11;
using namespace col;

namespace {

DecisionSet make_set(const std::string& kind, py::kwargs kw) {
  if (kind == "box")
    return DecisionSet::box(kw["lower"].cast<Vec>(), kw["upper"].cast<Vec>());
  if (kind == "ball")
    return DecisionSet::ball(kw["center"].cast<Vec>(), kw["radius"].cast<double>());
  if (kind == "simplices")
    return DecisionSet::simplex_product(kw["blocks"].cast<int>(), kw["block_size"].cast<int>(),
                                        kw.contains("floor") ? kw["floor"].cast<double>() : 0.0);
  throw DomainError("set kind must be box, ball or simplices");
}

FeedbackOracle make_oracle(const std::string& mode, double sigma, uint64_t seed) {
  FeedbackOracle o;
  if (mode == "deterministic")
    o.mode = FeedbackMode::Deterministic;
  else if (mode == "gaussian")
    o.mode = FeedbackMode::Gaussian;
  else if (mode == "rollout")
    o.mode = FeedbackMode::Rollout;
  else if (mode == "full-information")
    o.mode = FeedbackMode::FullInformation;
  else
    throw DomainError("oracle mode must be deterministic, gaussian, rollout or full-information");
  o.sigma = sigma;
  o.rng_seed = seed;
  return o;
}

py::dict report_to_dict(const RegretReport& rep) {
  py::dict d;
  d["rounds"] = rep.rounds;
  d["loss"] = rep.loss;
  d["dynamic_regret"] = rep.dynamic_regret;
  d["residual"] = rep.residual;
  d["round_min_value"] = rep.round_min_value;
  if (rep.has_comparator) {
    d["static_regret"] = rep.static_regret;
    d["delta"] = rep.delta;
    d["linearized_static"] = rep.linearized_static;
    d["reduction_bound"] = rep.reduction_bound;
    if (!rep.static_reduction_bound.empty()) d["static_reduction_bound"] = rep.static_reduction_bound;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "continuous online learning laboratory: bifunction losses, online "
            "algorithms, equilibrium solvers and regret accounting";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  py::class_<DecisionSet>(m, "DecisionSet")
      .def_property_readonly("dimension", &DecisionSet::dimension)
      .def_property_readonly("diameter", &DecisionSet::diameter)
      .def("contains", &DecisionSet::contains, py::arg("x"), py::arg("tol") = 1e-12)
      .def("center_point", &DecisionSet::center_point)
      .def("__repr__", &DecisionSet::describe);

  m.def("make_set", &make_set, py::arg("kind"),
        "make_set('box', lower=.., upper=..) / ('ball', center=.., radius=..) / "
        "('simplices', blocks=.., block_size=.., floor=..)");

  py::class_<COLProblem>(m, "Problem")
      .def_property_readonly("set", [](const COLProblem& p) { return p.set; })
      .def_readonly("alpha", &COLProblem::alpha)
      .def_readonly("beta", &COLProblem::beta)
      .def_readonly("smoothness", &COLProblem::smoothness)
      .def_readonly("grad_bound", &COLProblem::grad_bound)
      .def_readonly("name", &COLProblem::name)
      .def_property_readonly("equilibrium",
                             [](const COLProblem& p) -> py::object {
                               if (!p.equilibrium) return py::none();
                               return py::cast(*p.equilibrium);
                             })
      .def("eval", [](const COLProblem& p, const Vec& q, const Vec& x) { return p.eval(q, x); },
           py::arg("query"), py::arg("decision"))
      .def("grad", [](const COLProblem& p, const Vec& q, const Vec& x) { return p.grad(q, x); },
           py::arg("query"), py::arg("decision"))
      .def("mu", &COLProblem::mu);

  m.def("make_quadratic", &make_quadratic, py::arg("A"), py::arg("b"), py::arg("alpha"),
        py::arg("set"), py::arg("name") = "quadratic");
  m.def("spectral_norm", &spectral_norm);
  m.def("project", [](const DecisionSet& s, const Vec& y) {
    const auto r = project(s, y);
    return py::make_tuple(r.point, r.residual);
  });
  m.def("diameter", [](const DecisionSet& s) { return diameter(s); });

  m.def("play_round",
        [](const COLProblem& p, const std::string& mode, double sigma, uint64_t seed,
           const Vec& x) {
          RandomStream rng(seed);
          return play_round(p, make_oracle(mode, sigma, seed), x, rng);
        },
        py::arg("problem"), py::arg("mode"), py::arg("sigma"), py::arg("seed"), py::arg("x"));

  m.def("run",
        [](const COLProblem& p, const std::string& algorithm, const std::string& mode,
           double sigma, uint64_t seed, const Vec& x1, long rounds,
           py::object eta) {
          StepSize ss = StepSize::automatic();
          if (!eta.is_none()) ss = StepSize::constant(eta.cast<double>());
          OnlineAlgorithm algo(algorithm_kind_from_name(algorithm), ss);
          const FeedbackOracle oracle = make_oracle(mode, sigma, seed);
          const RunLog log = run(p, oracle, algo, x1, rounds);
          py::dict d;
          d["decisions"] = log.decisions;
          d["losses"] = log.losses;
          d["feedbacks"] = log.feedbacks;
          d["seed"] = log.seed;
          return d;
        },
        py::arg("problem"), py::arg("algorithm"), py::arg("mode"), py::arg("sigma"),
        py::arg("seed"), py::arg("x1"), py::arg("rounds"), py::arg("eta") = py::none());

  m.def("run_report",
        [](const COLProblem& p, const std::string& algorithm, const std::string& mode,
           double sigma, uint64_t seed, const Vec& x1, long rounds, py::object eta,
           double tol_inner) {
          StepSize ss = StepSize::automatic();
          if (!eta.is_none()) ss = StepSize::constant(eta.cast<double>());
          OnlineAlgorithm algo(algorithm_kind_from_name(algorithm), ss);
          const FeedbackOracle oracle = make_oracle(mode, sigma, seed);
          const RunLog log = run(p, oracle, algo, x1, rounds);
          std::optional<EquilibriumSolution> sol;
          if (p.equilibrium) {
            EquilibriumSolution s;
            s.x_star = *p.equilibrium;
            s.solver = "closed-form";
            sol = s;
          } else {
            try {
              sol = solve_vi(p, 1e-10);
            } catch (const NonConvergenceError&) {
            }
          }
          return report_to_dict(compute_report(p, log, sol, tol_inner));
        },
        py::arg("problem"), py::arg("algorithm"), py::arg("mode"), py::arg("sigma"),
        py::arg("seed"), py::arg("x1"), py::arg("rounds"), py::arg("eta") = py::none(),
        py::arg("tol_inner") = 1e-9);

  m.def("certify_alpha",
        [](const COLProblem& p, long n, uint64_t seed) {
          RandomStream rng(seed);
          return certify_alpha(p, n, rng);
        },
        py::arg("problem"), py::arg("num_samples") = 10000, py::arg("seed") = 0);
  m.def("certify_beta",
        [](const COLProblem& p, long n, uint64_t seed) {
          RandomStream rng(seed);
          return certify_beta(p, n, rng);
        },
        py::arg("problem"), py::arg("num_samples") = 10000, py::arg("seed") = 0);

  py::class_<EquilibriumSolution>(m, "EquilibriumSolution")
      .def_readonly("x_star", &EquilibriumSolution::x_star)
      .def_readonly("natural_residual", &EquilibriumSolution::natural_residual)
      .def_readonly("iterations", &EquilibriumSolution::iterations)
      .def_readonly("solver", &EquilibriumSolution::solver);

  m.def("solve_vi",
        [](const COLProblem& p, double tol, long max_iter) { return solve_vi(p, tol, max_iter); },
        py::arg("problem"), py::arg("tolerance") = 1e-10, py::arg("max_iter") = 1000000);
  m.def("natural_residual", [](const COLProblem& p, const Vec& x) {
    return natural_residual(p.set, [&p](const Vec& z) { return p.operator_at(z); }, x);
  });
  m.def("check_ep_solution",
        [](const COLProblem& p, const Vec& cand, int res) {
          const EpCheck c = check_ep_solution(p, cand, res);
          return py::make_tuple(c.is_solution, c.worst_violation);
        },
        py::arg("problem"), py::arg("candidate"), py::arg("grid_resolution") = 101);
  m.def("monotonicity_certificate",
        [](const COLProblem& p, long pairs, uint64_t seed) {
          RandomStream rng(seed);
          return monotonicity_certificate(p, pairs, rng);
        },
        py::arg("problem"), py::arg("num_pairs") = 10000, py::arg("seed") = 0);

  m.def("per_round_minimizer",
        [](const COLProblem& p, const Vec& q, double tol) {
          return per_round_minimizer(p, q, tol);
        },
        py::arg("problem"), py::arg("query"), py::arg("tol_inner") = 1e-9);
  m.def("fit_regret_rate",
        [](const std::vector<double>& series, long lo, long hi) {
          const RateFit f = fit_regret_rate(series, lo, hi);
          return py::make_tuple(f.slope, f.used, f.excluded);
        },
        py::arg("cumulative_regret"), py::arg("n_lo"), py::arg("n_hi"));

  py::class_<TabularMDP>(m, "TabularMDP")
      .def_readonly("num_states", &TabularMDP::num_states)
      .def_readonly("num_actions", &TabularMDP::num_actions)
      .def_readonly("horizon", &TabularMDP::horizon)
      .def_readonly("initial", &TabularMDP::initial)
      .def_readonly("transitions", &TabularMDP::transitions);

  py::class_<ILProblem>(m, "ILProblem")
      .def_readonly("mdp", &ILProblem::mdp)
      .def_readonly("expert", &ILProblem::expert)
      .def_readonly("floor", &ILProblem::floor)
      .def_readonly("beta_hat", &ILProblem::beta_hat)
      .def_property_readonly("problem", [](const ILProblem& p) { return p.col; });

  m.def("load_mdp",
        [](const std::string& path, double floor, long beta_pairs, uint64_t beta_seed) {
          MdpFile f = load_mdp_file(path);
          return make_il_problem(std::move(f.mdp), std::move(f.expert), floor, beta_pairs,
                                 beta_seed);
        },
        py::arg("path"), py::arg("floor") = 0.0, py::arg("beta_pairs") = 2000,
        py::arg("beta_seed") = 0x11bea7);
  m.def("state_distribution", &state_distribution, py::arg("mdp"), py::arg("policy"));
  m.def("il_loss", &il_loss, py::arg("il_problem"), py::arg("query"), py::arg("decision"));
  m.def("rollout_feedback",
        [](const ILProblem& ilp, const Vec& policy, uint64_t seed) {
          RandomStream rng(seed);
          return rollout_feedback(ilp, policy, rng);
        },
        py::arg("il_problem"), py::arg("policy"), py::arg("seed") = 0);
  m.def("estimate_beta",
        [](const ILProblem& ilp, long pairs, uint64_t seed) {
          RandomStream rng(seed);
          return estimate_beta(ilp, pairs, rng);
        },
        py::arg("il_problem"), py::arg("num_pairs") = 2000, py::arg("seed") = 0);
  m.def("policy_from_vector", &policy_from_vector);
  m.def("vector_from_policy", &vector_from_policy);

  auto inst = m.def_submodule("instances", "canonical problem instances");
  inst.def("q0", &instances::q0);
  inst.def("q1", &instances::q1);
  inst.def("q_negative", &instances::q_negative);
  inst.def("q_ball", &instances::q_ball);
  inst.def("q_simplex", &instances::q_simplex);
  inst.def("il_selfloop", &instances::il_selfloop);
  inst.def("il_chain", &instances::il_chain);
  inst.def("il_chain3", &instances::il_chain3);

  m.def("run_experiment_config",
        [](const std::string& config_path, const std::vector<std::string>& overrides,
           bool write_files) {
          const ExperimentConfig cfg = load_config(config_path, overrides);
          const ExperimentOutcome out = run_experiment(cfg, write_files);
          py::dict d;
          d["mean_dynamic_regret"] = out.mean_dynamic_regret;
          d["summary_csv"] = out.summary_csv;
          py::list seeds;
          for (const auto& s : out.per_seed) {
            py::dict row;
            row["seed"] = s.seed;
            row["final_dyn_regret"] = s.row.final_dyn_regret;
            row["rounds_csv"] = s.rounds_csv;
            seeds.append(row);
          }
          d["seeds"] = seeds;
          return d;
        },
        py::arg("config_path"), py::arg("overrides") = std::vector<std::string>{},
        py::arg("write_files") = true);

  m.def("verify",
        [](const std::string& scope, const std::string& fault) {
          py::list out;
          for (const auto& r : verify::run_checks(scope, fault)) {
            py::dict d;
            d["module"] = r.module;
            d["name"] = r.name;
            d["pass"] = r.pass;
            d["measured"] = r.measured;
            d["limit"] = r.limit;
            out.append(d);
          }
          return out;
        },
        py::arg("scope") = "all", py::arg("fault") = "");
}
