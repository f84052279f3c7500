#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ucbvi/agents.hpp"
#include "ucbvi/bonus.hpp"
#include "ucbvi/envs.hpp"
#include "ucbvi/harness.hpp"
#include "ucbvi/mdp.hpp"
#include "ucbvi/rng.hpp"
#include "ucbvi/stats.hpp"

namespace {

using namespace ucbvi;

int cmd_run(const std::string& config_path, int parallel,
            const std::string& out_override) {
  ExperimentConfig cfg = load_config(config_path);
  if (!out_override.empty()) cfg.output_dir = out_override;
  std::cout << "running " << cfg.agents.size() << " agent(s) x " << cfg.runs
            << " run(s), K=" << cfg.episodes << " on " << to_string(cfg.env.kind)
            << " (S=" << cfg.env.num_states << ", A=" << cfg.env.num_actions
            << ", H=" << cfg.env.horizon << ")\n";
  const ExperimentResult result = run_experiment(cfg, parallel);
  emit_outputs(cfg, result, cfg.output_dir);
  for (const AgentSummary& s : result.summaries)
    std::cout << "  " << s.agent_id << ": mean cumulative regret at K = "
              << format_g17(s.mean_cum.back()) << "\n";
  std::cout << "outputs written to " << cfg.output_dir << "\n";
  return 0;
}

int cmd_bounds(int H, int S, int A, std::int64_t K, double delta, bool table) {
  const std::int64_t T = K * H;
  const BoundReport report = bound_report(H, S, A, T, delta);
  const double L = log_term(H, S, A, T, delta);
  std::cout << "T = " << T << ", L = ln(5HSAT/delta) = " << format_g17(L) << "\n";
  std::cout << "count-only bonus regret bound:      " << format_g17(report.theorem1)
            << "  (dominant term " << format_g17(report.theorem1_dominant) << ")\n";
  std::cout << "variance-aware bonus regret bound:  " << format_g17(report.theorem2)
            << "  (dominant term " << format_g17(report.theorem2_dominant) << ")\n";
  if (table) {
    const RatioTable& r = report.ratios;
    std::printf("\nimprovement ratios (original / refined)\n");
    std::printf("  %-20s %-12s %s\n", "family", "bonus", "regret bound");
    std::printf("  %-20s %-12.10g %.10g\n", "chernoff-hoeffding", r.ch_bonus,
                r.ch_regret);
    std::printf("  %-20s %-12.10g %.10g\n", "bernstein-freedman", r.bf_bonus,
                r.bf_regret);
  }
  return 0;
}

// Built-in invariant suite plus a diagnostic counter dump.
int cmd_validate() {
  int failures = 0;
  auto check = [&](const std::string& name, bool ok) {
    std::cout << (ok ? "[ok]   " : "[FAIL] ") << name << "\n";
    if (!ok) ++failures;
  };

  {
    const TabularMdp river = riverswim(5, 10);
    bool exact = true;
    for (int x = 0; x < river.num_states; ++x)
      for (int a = 0; a < river.num_actions; ++a) {
        double sum = 0.0;
        for (int y = 0; y < river.num_states; ++y) sum += river.p(x, a, y);
        exact = exact && sum == 1.0;
      }
    check("riverswim transition rows sum to 1 exactly", exact);
  }
  {
    const TabularMdp a = random_mdp(4, 3, 6, 99);
    const TabularMdp b = random_mdp(4, 3, 6, 99);
    check("random_mdp is deterministic in the seed",
          a.transition == b.transition && a.reward == b.reward);
    bool rows_ok = true;
    for (int x = 0; x < a.num_states; ++x)
      for (int ac = 0; ac < a.num_actions; ++ac) {
        double sum = 0.0;
        for (int y = 0; y < a.num_states; ++y) sum += a.p(x, ac, y);
        rows_ok = rows_ok && std::abs(sum - 1.0) < 1e-12;
      }
    check("random_mdp rows sum to 1 within 1e-12", rows_ok);
  }
  {
    const BonusConfig cfg = BonusConfig::make(BonusFamily::chernoff_hoeffding,
                                              ConstantSet::refined, 5, 3, 3,
                                              1000, 0.05);
    bool monotone = true;
    double prev = bonus_ch(0, cfg);
    for (std::int64_t n = 1; n <= 64; n *= 2) {
      const double b = bonus_ch(n, cfg);
      monotone = monotone && b <= prev;
      prev = b;
    }
    check("count-only bonus is nonincreasing in N(x,a)", monotone);
  }
  {
    bool monotone = true;
    double prev = bernstein_bernoulli_bound(0.3, 1, 0.05);
    for (std::int64_t n = 2; n <= 1024; n *= 2) {
      const double b = bernstein_bernoulli_bound(0.3, n, 0.05);
      monotone = monotone && b < prev;
      prev = b;
    }
    check("bernoulli deviation bound is decreasing in n", monotone);
  }

  // Drive one agent for a while and re-check the counter and clipping
  // invariants after every episode.
  const TabularMdp env = random_mdp(3, 3, 5, 7);
  const std::int64_t T = 200 * env.horizon;
  UcbviAgent agent(env.num_states, env.num_actions, env.horizon, env.reward,
                   BonusConfig::make(BonusFamily::bernstein_freedman,
                                     ConstantSet::refined, env.horizon,
                                     env.num_states, env.num_actions, T, 0.05));
  RngStream rng(derive_seed(1, "validate", 0));
  bool counts_ok = true, monotone_ok = true, range_ok = true;
  std::vector<double> prev_q = agent.values().q;
  for (std::int64_t k = 0; k < 200; ++k) {
    agent.begin_episode();
    for (std::size_t i = 0; i < prev_q.size(); ++i)
      monotone_ok = monotone_ok && agent.values().q[i] <= prev_q[i];
    prev_q = agent.values().q;
    for (int h = 0; h < env.horizon; ++h)
      for (int x = 0; x < env.num_states; ++x) {
        const double v = agent.values().value(h, x);
        range_ok = range_ok && v >= 0.0 && v <= double(env.horizon - h);
      }
    run_episode(env, agent, rng);
    try {
      agent.counts().check_consistent(agent.episodes_completed());
    } catch (const std::exception&) {
      counts_ok = false;
    }
  }
  check("visit counters stay consistent across 200 episodes", counts_ok);
  check("optimistic Q is elementwise nonincreasing", monotone_ok);
  check("optimistic V stays within [0, H-h]", range_ok);

  std::cout << "\ncounter dump after 200 episodes (S=3, A=3, H=5, seed 7):\n";
  const VisitCounts& counts = agent.counts();
  std::cout << "N(x,a):\n";
  for (int x = 0; x < env.num_states; ++x) {
    std::cout << "  x=" << x << ":";
    for (int a = 0; a < env.num_actions; ++a)
      std::cout << ' ' << counts.pair_count(x, a);
    std::cout << "\n";
  }
  std::cout << "N'_h(x):\n";
  for (int h = 0; h < env.horizon; ++h) {
    std::cout << "  h=" << h << ":";
    for (int x = 0; x < env.num_states; ++x)
      std::cout << ' ' << counts.stage_state_count(h, x);
    std::cout << "\n";
  }

  std::cout << (failures == 0 ? "\nvalidate: PASS\n" : "\nvalidate: FAIL\n");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ucbvi-lab: tabular finite-horizon RL regret experiments"};
  app.require_subcommand(1);

  // run
  std::string config_path, out_override;
  int parallel = 1;
  CLI::App* run = app.add_subcommand("run", "run an experiment from a config file");
  run->add_option("--config", config_path, "config file (key = value lines)")
      ->required();
  run->add_option("--parallel", parallel, "worker threads (agent x run cells)")
      ->default_val(1);
  run->add_option("--out", out_override, "output directory override");

  // bounds
  int bH = 5, bS = 3, bA = 3;
  std::int64_t bK = 100000;
  double bdelta = 0.05;
  bool btable = false;
  CLI::App* bounds = app.add_subcommand("bounds", "evaluate the regret upper bounds");
  bounds->add_option("--H", bH, "horizon")->required();
  bounds->add_option("--S", bS, "number of states")->required();
  bounds->add_option("--A", bA, "number of actions")->required();
  bounds->add_option("--K", bK, "number of episodes")->required();
  bounds->add_option("--delta", bdelta, "confidence parameter")->default_val(0.05);
  bounds->add_flag("--table", btable, "also print the improvement ratio table");

  // make-env
  CLI::App* make_env = app.add_subcommand("make-env", "write an environment file");
  make_env->require_subcommand(1);
  int eS = 3, eA = 3, eH = 5;
  std::uint64_t eseed = 0;
  std::string eout;
  CLI::App* mk_random = make_env->add_subcommand("random", "seeded random MDP");
  mk_random->add_option("--S", eS, "states")->required();
  mk_random->add_option("--A", eA, "actions")->required();
  mk_random->add_option("--H", eH, "horizon")->required();
  mk_random->add_option("--seed", eseed, "seed")->required();
  mk_random->add_option("--out", eout, "output file")->required();
  int rS = 5, rH = 10;
  double rleft = RiverswimParams{}.left_reward;
  std::string rout;
  CLI::App* mk_river = make_env->add_subcommand("riverswim", "RiverSwim chain");
  mk_river->add_option("--S", rS, "states")->required();
  mk_river->add_option("--H", rH, "horizon")->required();
  mk_river->add_option("--left-reward", rleft, "reward of turning back at state 0");
  mk_river->add_option("--out", rout, "output file")->required();

  // validate
  app.add_subcommand("validate", "run the built-in invariant suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, parallel, out_override);
    if (bounds->parsed()) return cmd_bounds(bH, bS, bA, bK, bdelta, btable);
    if (make_env->parsed()) {
      if (mk_random->parsed()) {
        save_mdp(random_mdp(eS, eA, eH, eseed), eout);
        std::cout << "wrote " << eout << "\n";
      } else {
        RiverswimParams params;
        params.left_reward = rleft;
        save_mdp(riverswim(rS, rH, params), rout);
        std::cout << "wrote " << rout << "\n";
      }
      return 0;
    }
    return cmd_validate();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
