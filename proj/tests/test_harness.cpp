#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "ucbvi/agents.hpp"
#include "ucbvi/envs.hpp"
#include "ucbvi/harness.hpp"
#include "ucbvi/rng.hpp"

using namespace ucbvi;

namespace {

// Tag-balance check: enough to certify the emitted SVG is well-formed XML
// for the subset of syntax the writer produces.
bool xml_well_formed(const std::string& text) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '<') {
      ++i;
      continue;
    }
    const std::size_t close = text.find('>', i);
    if (close == std::string::npos) return false;
    std::string tag = text.substr(i + 1, close - i - 1);
    i = close + 1;
    if (tag.empty()) return false;
    if (tag.front() == '?') {
      if (tag.back() != '?') return false;
      continue;
    }
    if (tag.back() == '/') continue;  // self-closing
    if (tag.front() == '/') {
      const std::string name = tag.substr(1);
      if (stack.empty() || stack.back() != name) return false;
      stack.pop_back();
      continue;
    }
    const std::size_t space = tag.find_first_of(" \t\n");
    stack.push_back(space == std::string::npos ? tag : tag.substr(0, space));
  }
  return stack.empty();
}

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.env.kind = EnvSpec::Kind::random;
  cfg.env.num_states = 3;
  cfg.env.num_actions = 3;
  cfg.env.horizon = 5;
  cfg.env.seed = 0;
  cfg.agents = {parse_agent_spec("bf-refined"), parse_agent_spec("mvp")};
  cfg.episodes = 120;
  cfg.runs = 3;
  cfg.master_seed = 99;
  return cfg;
}

}  // namespace

TEST_CASE("the optimal policy has zero instantaneous regret") {
  const TabularMdp env = random_mdp(3, 3, 5, 2);
  const auto [vstar, pi] = exact_value_iteration(env);
  CHECK(std::abs(instantaneous_regret(env, vstar, pi)) < 1e-12);
}

TEST_CASE("instantaneous regret of any policy lies in [0, H]") {
  const TabularMdp env = random_mdp(3, 2, 4, 6);
  const auto [vstar, pi_star] = exact_value_iteration(env);
  RngStream rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    Policy pi{4, 3, std::vector<int>(12)};
    for (int& a : pi.action) a = static_cast<int>(rng.next_u64() % 2);
    const double regret = instantaneous_regret(env, vstar, pi);
    CHECK(regret >= -1e-12);
    CHECK(regret <= 4.0);
  }
}

TEST_CASE("instantaneous regret matches a hand-computed gap") {
  // Two states, two actions, H = 2, deterministic. Action 1 in state 0 pays
  // 0.9 now but strands the agent in state 1; action 0 pays 0.5 and stays.
  TabularMdp env;
  env.num_states = 2;
  env.num_actions = 2;
  env.horizon = 2;
  env.transition = {
      1.0, 0.0,  // (x=0, a=0) -> stay at 0
      0.0, 1.0,  // (x=0, a=1) -> move to 1
      0.0, 1.0,  // (x=1, a=0) -> stay at 1
      0.0, 1.0,  // (x=1, a=1) -> stay at 1
  };
  env.reward = {0.5, 0.9, 0.1, 0.0};
  const auto [vstar, pi_star] = exact_value_iteration(env);
  // V*_2(0) = 0.9, V*_2(1) = 0.1; V*_1(0) = max(0.5 + 0.9, 0.9 + 0.1) = 1.4.
  CHECK(vstar.value(0, 0) == doctest::Approx(1.4));
  // The always-move policy earns 0.9 + 0.0 = 0.9, so it loses exactly 0.5.
  Policy always_move{2, 2, {1, 1, 1, 1}};
  CHECK(instantaneous_regret(env, vstar, always_move) == doctest::Approx(0.5));
}

TEST_CASE("experiment results are identical under any parallelism degree") {
  const ExperimentConfig cfg = small_config();
  const ExperimentResult serial = run_experiment(cfg, 1);
  const ExperimentResult parallel = run_experiment(cfg, 4);
  REQUIRE(serial.traces.size() == parallel.traces.size());
  for (std::size_t i = 0; i < serial.traces.size(); ++i) {
    CHECK(serial.traces[i].agent_id == parallel.traces[i].agent_id);
    CHECK(serial.traces[i].run_index == parallel.traces[i].run_index);
    CHECK(serial.traces[i].instant == parallel.traces[i].instant);
    CHECK(serial.traces[i].cumulative == parallel.traces[i].cumulative);
  }
}

TEST_CASE("cumulative regret is nondecreasing and bounded by K * H") {
  const ExperimentConfig cfg = small_config();
  const ExperimentResult result = run_experiment(cfg, 2);
  for (const RegretTrace& trace : result.traces) {
    double prev = 0.0;
    for (std::size_t i = 0; i < trace.cumulative.size(); ++i) {
      CHECK(trace.cumulative[i] >= prev - 1e-9);
      CHECK(trace.instant[i] >= -1e-9);
      prev = trace.cumulative[i];
    }
    CHECK(trace.cumulative.back() <=
          double(cfg.episodes) * cfg.env.horizon + 1e-9);
  }
}

TEST_CASE("aggregation of identical traces has zero-width intervals") {
  ExperimentConfig cfg = small_config();
  cfg.agents = {parse_agent_spec("bf-refined")};
  RegretTrace trace;
  trace.agent_id = "bf-refined";
  trace.episodes = {1, 2, 3};
  trace.instant = {0.5, 0.25, 0.125};
  trace.cumulative = {0.5, 0.75, 0.875};
  std::vector<RegretTrace> traces{trace, trace, trace};
  traces[1].run_index = 1;
  traces[2].run_index = 2;
  const std::vector<AgentSummary> summaries = aggregate_traces(cfg, traces);
  REQUIRE(summaries.size() == 1);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(summaries[0].mean_cum[i] == doctest::Approx(trace.cumulative[i]));
    CHECK(summaries[0].ci_high[i] - summaries[0].ci_low[i] == 0.0);
  }
}

TEST_CASE("a single run degenerates to a zero-width interval") {
  ExperimentConfig cfg = small_config();
  cfg.runs = 1;
  cfg.episodes = 40;
  const ExperimentResult result = run_experiment(cfg, 1);
  for (const AgentSummary& s : result.summaries)
    for (std::size_t i = 0; i < s.episodes.size(); ++i)
      CHECK(s.ci_high[i] == s.ci_low[i]);
}

TEST_CASE("exact regret agrees with Monte Carlo rollouts at checkpoints") {
  const TabularMdp env = random_mdp(3, 3, 5, 1234);
  const auto [vstar, pi_star] = exact_value_iteration(env);
  UcbviAgent agent(3, 3, 5, env.reward,
                   BonusConfig::make(BonusFamily::bernstein_freedman,
                                     ConstantSet::refined, 5, 3, 3, 500 * 5,
                                     0.05));
  RngStream rng(derive_seed(3, "mc", 0));
  const std::vector<int> checkpoints{1, 50, 150, 300, 500};
  std::size_t next_checkpoint = 0;
  for (int k = 1; k <= 500; ++k) {
    agent.begin_episode();
    if (next_checkpoint < checkpoints.size() && k == checkpoints[next_checkpoint]) {
      ++next_checkpoint;
      const Policy policy = agent.greedy();
      const double exact = evaluate_policy(env, policy).value(0, env.initial_state);
      const int rollouts = 10000;
      RngStream mc(derive_seed(3, "rollout", k));
      double sum = 0.0, sum_sq = 0.0;
      for (int i = 0; i < rollouts; ++i) {
        double ret = 0.0;
        int x = env.initial_state;
        for (int h = 0; h < env.horizon; ++h) {
          const int a = policy.at(h, x);
          ret += env.r(x, a);
          x = mc.categorical(env.transition_row(x, a));
        }
        sum += ret;
        sum_sq += ret * ret;
      }
      const double mean = sum / rollouts;
      const double variance = std::max(0.0, sum_sq / rollouts - mean * mean);
      const double standard_error = std::sqrt(variance / rollouts);
      CHECK(std::abs(mean - exact) <= 3.0 * standard_error + 1e-12);
    }
    run_episode(env, agent, rng);
  }
}

TEST_CASE("the refined variance-aware agent wins most seed pairs at K = 1e4") {
  ExperimentConfig cfg;
  cfg.env.kind = EnvSpec::Kind::random;
  cfg.env.num_states = 3;
  cfg.env.num_actions = 3;
  cfg.env.horizon = 5;
  cfg.agents = {parse_agent_spec("bf-refined"), parse_agent_spec("bf-original")};
  cfg.episodes = 10000;
  cfg.runs = 10;
  cfg.master_seed = 20240810;
  const ExperimentResult result = run_experiment(cfg, 8);
  int wins = 0;
  for (int run = 0; run < cfg.runs; ++run) {
    double refined = -1.0, original = -1.0;
    for (const RegretTrace& t : result.traces)
      if (t.run_index == run) {
        if (t.agent_id == "bf-refined") refined = t.cumulative.back();
        if (t.agent_id == "bf-original") original = t.cumulative.back();
      }
    REQUIRE(refined >= 0.0);
    REQUIRE(original >= 0.0);
    if (refined < original) ++wins;
  }
  MESSAGE("bf-refined beat bf-original in ", wins, " of 10 runs");
  CHECK(wins >= 8);
}

TEST_CASE("regret bound formulas evaluate correctly") {
  const int H = 5, S = 3, A = 3;
  const std::int64_t K = 100000, T = K * H;
  const double delta = 0.05;
  const long double L = std::log(5.0L * H * S * A * static_cast<long double>(T) / delta);
  const long double e = std::numbers::e_v<long double>;
  const long double th1 = 10.0L * e * H * L * std::sqrt(1.0L * S * A * T) +
                          (8.0L / 3.0L) * e * H * H * S * S * A * L * L;
  const long double th2 = 24.0L * e * L * std::sqrt(1.0L * H * S * A * T) +
                          616.0L * e * H * H * S * S * A * L * L +
                          4.0L * e * std::sqrt(1.0L * H * H * T * L);
  CHECK(theorem1_bound(H, S, A, T, delta) ==
        doctest::Approx(static_cast<double>(th1)).epsilon(1e-12));
  CHECK(theorem2_bound(H, S, A, T, delta) ==
        doctest::Approx(static_cast<double>(th2)).epsilon(1e-12));
  CHECK(theorem2_bound(10, 5, 2, 1000000, 0.05) > 0.0);
}

TEST_CASE("regret bounds are monotone in T") {
  double prev1 = theorem1_bound(4, 3, 2, 10, 0.05);
  double prev2 = theorem2_bound(4, 3, 2, 10, 0.05);
  for (std::int64_t t = 100; t <= 10000000; t *= 10) {
    const double b1 = theorem1_bound(4, 3, 2, t, 0.05);
    const double b2 = theorem2_bound(4, 3, 2, t, 0.05);
    CHECK(b1 > prev1);
    CHECK(b2 > prev2);
    prev1 = b1;
    prev2 = b2;
  }
}

TEST_CASE("dominant-term improvement ratios against the original analysis") {
  const int H = 7, S = 4, A = 2;
  const std::int64_t T = 70000;
  const double delta = 0.1;
  const double L = log_term(H, S, A, T, delta);
  const double e = std::numbers::e;
  // The original analysis' dominant terms: 20 e H L sqrt(SAT), 30 e L sqrt(HSAT).
  const double original_ch =
      kRegretBoundConstants.ch_lead_original * e * H * L * std::sqrt(1.0 * S * A * T);
  const double original_bf =
      kRegretBoundConstants.bf_lead_original * e * L * std::sqrt(1.0 * H * S * A * T);
  CHECK(original_ch / theorem1_dominant_term(H, S, A, T, delta) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(original_bf / theorem2_dominant_term(H, S, A, T, delta) ==
        doctest::Approx(1.25).epsilon(1e-12));
}

TEST_CASE("improvement ratio table comes out of the constant sets") {
  const RatioTable t = ratio_table();
  CHECK(std::abs(t.ch_bonus - 3.5) < 1e-12);
  CHECK(std::abs(t.ch_regret - 2.0) < 1e-12);
  CHECK(std::abs(t.bf_bonus - std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(t.bf_regret - 1.25) < 1e-12);
  const BoundReport report = bound_report(5, 3, 3, 50000, 0.05);
  CHECK(report.theorem1 > 0.0);
  CHECK(report.theorem1_dominant > 0.0);
  CHECK(report.theorem2 > 0.0);
  CHECK(report.theorem2_dominant > 0.0);
}

TEST_CASE("config files parse into experiment configs") {
  std::stringstream in(
      "# regret experiment\n"
      "env.kind = random\n"
      "env.S = 3\n"
      "env.A = 3\n"
      "env.H = 5\n"
      "env.seed = 17\n"
      "agents = bf-refined, bf-original, ch-refined, mvp\n"
      "K = 10000\n"
      "runs = 10\n"
      "master_seed = 4711   # trailing comment\n"
      "delta = 0.05\n"
      "regret_eval_stride = 2\n"
      "mvp_c1 = 46\n");
  const ExperimentConfig cfg = parse_config(in);
  CHECK(cfg.env.kind == EnvSpec::Kind::random);
  CHECK(cfg.env.num_states == 3);
  CHECK(cfg.env.seed == 17);
  REQUIRE(cfg.agents.size() == 4);
  CHECK(cfg.agents[0].id == "bf-refined");
  CHECK(cfg.agents[3].kind == AgentSpec::Kind::mvp);
  CHECK(cfg.episodes == 10000);
  CHECK(cfg.runs == 10);
  CHECK(cfg.master_seed == 4711);
  CHECK(cfg.delta == 0.05);
  CHECK(cfg.regret_eval_stride == 2);
  CHECK(cfg.mvp_c1 == 46.0);
}

TEST_CASE("config parser rejects unknown keys and bad values") {
  std::stringstream unknown("foo = 1\n");
  CHECK_THROWS_AS(parse_config(unknown), std::invalid_argument);
  std::stringstream bad_value("K = ten\n");
  CHECK_THROWS_AS(parse_config(bad_value), std::invalid_argument);
  std::stringstream bad_agent("agents = qlearning\n");
  CHECK_THROWS_AS(parse_config(bad_agent), std::invalid_argument);
  std::stringstream no_eq("K 5\n");
  CHECK_THROWS_AS(parse_config(no_eq), std::invalid_argument);
  std::stringstream duplicate("agents = mvp, mvp\n");
  CHECK_THROWS_AS(parse_config(duplicate), std::invalid_argument);
}

TEST_CASE("riverswim configs default to two actions") {
  std::stringstream in(
      "env.kind = riverswim\nenv.S = 5\nenv.H = 10\nagents = bf-refined\nK = 10\n");
  const ExperimentConfig cfg = parse_config(in);
  CHECK(cfg.env.num_actions == 2);
}

TEST_CASE("emitted outputs round-trip and validate") {
  ExperimentConfig cfg = small_config();
  cfg.episodes = 50;
  cfg.regret_eval_stride = 4;
  const ExperimentResult result = run_experiment(cfg, 2);

  // Logged rows: episodes 4, 8, ..., 48 plus the final episode 50.
  const std::size_t expected_rows = 50 / 4 + 1;
  for (const RegretTrace& trace : result.traces)
    CHECK(trace.episodes.size() == expected_rows);

  const std::string dir = "harness_test_out";
  std::filesystem::remove_all(dir);
  emit_outputs(cfg, result, dir);

  // Re-parse one trace file and compare exactly.
  const RegretTrace& trace = result.traces.front();
  std::ifstream in(dir + "/trace_" + trace.agent_id + "_0.csv");
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header == "episode,instant_regret,cum_regret");
  std::size_t row = 0;
  std::string line;
  while (std::getline(in, line)) {
    REQUIRE(row < trace.episodes.size());
    std::stringstream ss(line);
    std::string episode_str, instant_str, cum_str;
    std::getline(ss, episode_str, ',');
    std::getline(ss, instant_str, ',');
    std::getline(ss, cum_str, ',');
    CHECK(std::stoll(episode_str) == trace.episodes[row]);
    CHECK(std::stod(instant_str) == trace.instant[row]);  // exact round trip
    CHECK(std::stod(cum_str) == trace.cumulative[row]);
    ++row;
  }
  CHECK(row == expected_rows);

  // Summary rows: one block of logged episodes per agent.
  std::ifstream summary(dir + "/summary.csv");
  REQUIRE(summary.good());
  std::getline(summary, header);
  CHECK(header == "episode,agent,mean_cum_regret,ci_low,ci_high");
  std::size_t summary_rows = 0;
  while (std::getline(summary, line))
    if (!line.empty()) ++summary_rows;
  CHECK(summary_rows == expected_rows * cfg.agents.size());

  // The chart must be well-formed XML.
  std::ifstream svg(dir + "/regret.svg");
  REQUIRE(svg.good());
  std::stringstream svg_text;
  svg_text << svg.rdbuf();
  CHECK(xml_well_formed(svg_text.str()));

  // Metadata records the generator identity.
  std::ifstream meta(dir + "/meta.txt");
  REQUIRE(meta.good());
  std::stringstream meta_text;
  meta_text << meta.rdbuf();
  CHECK(meta_text.str().find(kRngAlgorithmId) != std::string::npos);
  CHECK(meta_text.str().find("master_seed = 99") != std::string::npos);

  std::filesystem::remove_all(dir);
}

TEST_CASE("a failing cell aborts the experiment with its identity") {
  ExperimentConfig cfg = small_config();
  cfg.output_dir = "";
  // mvp_c1 = 0 passes construction-time parsing but validate() rejects it.
  cfg.mvp_c1 = -1.0;
  CHECK_THROWS_AS(run_experiment(cfg, 1), std::invalid_argument);
}
