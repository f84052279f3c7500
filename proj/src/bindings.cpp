#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <sstream>

#include "ucbvi/agents.hpp"
#include "ucbvi/bonus.hpp"
#include "ucbvi/envs.hpp"
#include "ucbvi/harness.hpp"
#include "ucbvi/mdp.hpp"
#include "ucbvi/rng.hpp"
#include "ucbvi/stats.hpp"

namespace py = pybind11;
using namespace ucbvi;

namespace {

ExperimentConfig config_from_kwargs(const std::string& env_kind, int S, int A,
                                    int H, std::uint64_t env_seed,
                                    const std::vector<std::string>& agents,
                                    std::int64_t episodes, int runs,
                                    std::uint64_t master_seed, double delta,
                                    std::int64_t regret_eval_stride,
                                    double mvp_c1) {
  ExperimentConfig cfg;
  cfg.env.kind = env_kind_from_string(env_kind);
  cfg.env.num_states = S;
  cfg.env.num_actions = cfg.env.kind == EnvSpec::Kind::riverswim ? 2 : A;
  cfg.env.horizon = H;
  cfg.env.seed = env_seed;
  for (const std::string& token : agents)
    cfg.agents.push_back(parse_agent_spec(token));
  cfg.episodes = episodes;
  cfg.runs = runs;
  cfg.master_seed = master_seed;
  cfg.delta = delta;
  cfg.regret_eval_stride = regret_eval_stride;
  cfg.mvp_c1 = mvp_c1;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Tabular finite-horizon RL laboratory: optimistic value iteration "
            "agents with count-only and variance-aware exploration bonuses, "
            "exact regret experiments, and regret bound evaluation.";

  py::class_<TabularMdp>(m, "TabularMdp")
      .def(py::init<>())
      .def_readwrite("num_states", &TabularMdp::num_states)
      .def_readwrite("num_actions", &TabularMdp::num_actions)
      .def_readwrite("horizon", &TabularMdp::horizon)
      .def_readwrite("initial_state", &TabularMdp::initial_state)
      .def_readwrite("transition", &TabularMdp::transition)
      .def_readwrite("reward", &TabularMdp::reward)
      .def("p", &TabularMdp::p)
      .def("r", &TabularMdp::r)
      .def("validate", &TabularMdp::validate)
      .def("__repr__", [](const TabularMdp& mdp) {
        std::ostringstream os;
        os << "<TabularMdp S=" << mdp.num_states << " A=" << mdp.num_actions
           << " H=" << mdp.horizon << ">";
        return os.str();
      });

  py::class_<ValueFunctions>(m, "ValueFunctions")
      .def_readonly("horizon", &ValueFunctions::horizon)
      .def_readonly("num_states", &ValueFunctions::num_states)
      .def_readonly("num_actions", &ValueFunctions::num_actions)
      .def_readonly("v", &ValueFunctions::v)
      .def_readonly("q", &ValueFunctions::q)
      .def("value", &ValueFunctions::value)
      .def("action_value", &ValueFunctions::action_value);

  py::class_<Policy>(m, "Policy")
      .def_readonly("horizon", &Policy::horizon)
      .def_readonly("num_states", &Policy::num_states)
      .def_readonly("action", &Policy::action)
      .def("at", &Policy::at);

  m.def("exact_value_iteration", &exact_value_iteration, py::arg("mdp"));
  m.def("evaluate_policy", &evaluate_policy, py::arg("mdp"), py::arg("policy"));
  m.def("random_mdp", &random_mdp, py::arg("num_states"), py::arg("num_actions"),
        py::arg("horizon"), py::arg("seed"));
  m.def(
      "riverswim",
      [](int S, int H, double left_reward, double right_reward,
         double forward_success_prob, double backward_slip_prob) {
        RiverswimParams params;
        params.left_reward = left_reward;
        params.right_reward = right_reward;
        params.forward_success_prob = forward_success_prob;
        params.backward_slip_prob = backward_slip_prob;
        return riverswim(S, H, params);
      },
      py::arg("num_states"), py::arg("horizon"),
      py::arg("left_reward") = RiverswimParams{}.left_reward,
      py::arg("right_reward") = RiverswimParams{}.right_reward,
      py::arg("forward_success_prob") = RiverswimParams{}.forward_success_prob,
      py::arg("backward_slip_prob") = RiverswimParams{}.backward_slip_prob);
  m.def("save_mdp", &save_mdp, py::arg("mdp"), py::arg("path"));
  m.def("load_mdp", &load_mdp, py::arg("path"));

  m.def("log_term", &log_term, py::arg("horizon"), py::arg("num_states"),
        py::arg("num_actions"), py::arg("total_steps"), py::arg("delta"));
  m.def("bernstein_bernoulli_bound", &bernstein_bernoulli_bound, py::arg("p"),
        py::arg("n"), py::arg("delta"));
  m.def(
      "empirical_next_value_variance",
      [](const std::vector<double>& p_row, const std::vector<double>& values) {
        return empirical_next_value_variance(p_row, values);
      },
      py::arg("p_row"), py::arg("values"));
  m.def(
      "bonus_ch",
      [](std::int64_t n, const std::string& constant_set, int H, int S, int A,
         std::int64_t T, double delta) {
        const ConstantSet set = constant_set == "original"
                                    ? ConstantSet::original
                                    : ConstantSet::refined;
        return bonus_ch(n, BonusConfig::make(BonusFamily::chernoff_hoeffding,
                                             set, H, S, A, T, delta));
      },
      py::arg("n"), py::arg("constant_set"), py::arg("horizon"),
      py::arg("num_states"), py::arg("num_actions"), py::arg("total_steps"),
      py::arg("delta"));

  m.def("theorem1_bound", &theorem1_bound, py::arg("horizon"),
        py::arg("num_states"), py::arg("num_actions"), py::arg("total_steps"),
        py::arg("delta"));
  m.def("theorem2_bound", &theorem2_bound, py::arg("horizon"),
        py::arg("num_states"), py::arg("num_actions"), py::arg("total_steps"),
        py::arg("delta"));
  m.def("ratio_table", [] {
    const RatioTable t = ratio_table();
    py::dict d;
    d["ch_bonus"] = t.ch_bonus;
    d["ch_regret"] = t.ch_regret;
    d["bf_bonus"] = t.bf_bonus;
    d["bf_regret"] = t.bf_regret;
    return d;
  });

  m.def(
      "run_experiment",
      [](const std::string& env_kind, int S, int A, int H,
         std::uint64_t env_seed, const std::vector<std::string>& agents,
         std::int64_t episodes, int runs, std::uint64_t master_seed,
         double delta, std::int64_t regret_eval_stride, double mvp_c1,
         int parallelism, const std::string& out_dir) {
        const ExperimentConfig cfg = config_from_kwargs(
            env_kind, S, A, H, env_seed, agents, episodes, runs, master_seed,
            delta, regret_eval_stride, mvp_c1);
        const ExperimentResult result = run_experiment(cfg, parallelism);
        if (!out_dir.empty()) emit_outputs(cfg, result, out_dir);
        py::dict out;
        for (const AgentSummary& s : result.summaries) {
          py::dict entry;
          entry["episodes"] = s.episodes;
          entry["mean_cum_regret"] = s.mean_cum;
          entry["ci_low"] = s.ci_low;
          entry["ci_high"] = s.ci_high;
          out[py::str(s.agent_id)] = entry;
        }
        return out;
      },
      py::arg("env_kind"), py::arg("num_states"), py::arg("num_actions"),
      py::arg("horizon"), py::arg("env_seed") = 0,
      py::arg("agents") = std::vector<std::string>{"bf-refined"},
      py::arg("episodes") = 1000, py::arg("runs") = 1,
      py::arg("master_seed") = 1, py::arg("delta") = 0.05,
      py::arg("regret_eval_stride") = 1, py::arg("mvp_c1") = 46.0,
      py::arg("parallelism") = 1, py::arg("out_dir") = "");

  m.attr("rng_algorithm_id") = kRngAlgorithmId;
  m.attr("__version__") = "0.1.0";
}
