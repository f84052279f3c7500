#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ucbvi/agents.hpp"
#include "ucbvi/envs.hpp"
#include "ucbvi/mdp.hpp"

namespace ucbvi {

inline constexpr const char* kCodeVersion = "ucbvi-lab 0.1.0";

// One experiment cell runs one of these agents.
struct AgentSpec {
  enum class Kind { ucbvi, mvp };
  Kind kind = Kind::ucbvi;
  BonusFamily family = BonusFamily::bernstein_freedman;
  ConstantSet constant_set = ConstantSet::refined;
  std::string id;  // ch-refined | ch-original | bf-refined | bf-original | mvp
};

// Accepts the ids listed above; throws std::invalid_argument otherwise.
AgentSpec parse_agent_spec(const std::string& token);

struct ExperimentConfig {
  EnvSpec env;
  std::vector<AgentSpec> agents;
  std::int64_t episodes = 1000;  // K
  int runs = 1;
  std::uint64_t master_seed = 1;
  double delta = 0.05;
  std::int64_t regret_eval_stride = 1;
  double mvp_c1 = 46.0;
  std::string output_dir = "out";

  void validate() const;
};

// Plain-text config: one `key = value` per line, '#' starts a comment.
// Keys: env.kind, env.S, env.A, env.H, env.seed, agents (comma list), K,
// runs, master_seed, delta, regret_eval_stride, mvp_c1.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

// Exact per-episode regret trace of one (agent, run) cell at the logged
// episodes: instantaneous regret V*_1(x_1) - V^{pi_k}_1(x_1) and its running
// sum.
struct RegretTrace {
  std::string agent_id;
  int run_index = 0;
  std::vector<std::int64_t> episodes;
  std::vector<double> instant;
  std::vector<double> cumulative;
};

// Across-run aggregate per agent: mean cumulative regret with a 95% normal
// approximation confidence band (z = 1.96).
struct AgentSummary {
  std::string agent_id;
  std::vector<std::int64_t> episodes;
  std::vector<double> mean_cum;
  std::vector<double> ci_low;
  std::vector<double> ci_high;
};

struct ExperimentResult {
  std::vector<RegretTrace> traces;      // runs-major per agent
  std::vector<AgentSummary> summaries;  // one per agent, config order
};

// Exact instantaneous regret of a policy, by policy evaluation (never Monte
// Carlo): V*_1(init) - V^pi_1(init).
double instantaneous_regret(const TabularMdp& env, const ValueFunctions& optimal,
                            const Policy& policy);

// Runs every (agent, run) cell and aggregates. Random environments are
// resampled per run (shared by all agents of that run); RiverSwim reuses the
// one fixed environment and varies only the trajectory randomness. The
// result is a pure function of (config, master_seed): cell streams derive
// from hash(master_seed, agent_id, run_index), so any parallelism degree
// produces identical output. A failed cell aborts the whole experiment.
ExperimentResult run_experiment(const ExperimentConfig& cfg, int parallelism = 1);

std::vector<AgentSummary> aggregate_traces(const ExperimentConfig& cfg,
                                           const std::vector<RegretTrace>& traces);

// Writes trace_<agent>_<run>.csv per cell, summary.csv, regret.svg and
// meta.txt into out_dir (created if missing). Floats carry 17 significant
// digits so a re-parse reproduces the in-memory values exactly.
void emit_outputs(const ExperimentConfig& cfg, const ExperimentResult& result,
                  const std::string& out_dir);

// Regret upper bound coefficients. The dominant-term coefficients of the
// original analysis are 2x (CH) and 5/4x (BF) the refined ones.
struct RegretBoundConstants {
  double ch_lead_refined = 10.0;
  double ch_lead_original = 20.0;
  double bf_lead_refined = 24.0;
  double bf_lead_original = 30.0;
};
inline constexpr RegretBoundConstants kRegretBoundConstants{};

// Regret bound for the count-only bonus:
// 10 e H L sqrt(SAT) + (8/3) e H^2 S^2 A L^2, L = ln(5HSAT/delta).
double theorem1_bound(int horizon, int num_states, int num_actions,
                      std::int64_t total_steps, double delta);
double theorem1_dominant_term(int horizon, int num_states, int num_actions,
                              std::int64_t total_steps, double delta);

// Regret bound for the variance-aware bonus:
// 24 e L sqrt(HSAT) + 616 e H^2 S^2 A L^2 + 4 e sqrt(H^2 T L).
double theorem2_bound(int horizon, int num_states, int num_actions,
                      std::int64_t total_steps, double delta);
double theorem2_dominant_term(int horizon, int num_states, int num_actions,
                              std::int64_t total_steps, double delta);

// Original-vs-refined improvement ratios, computed from the constant tables
// rather than hard-coded values.
struct RatioTable {
  double ch_bonus = 0.0;   // 7/2
  double ch_regret = 0.0;  // 2
  double bf_bonus = 0.0;   // sqrt(2)
  double bf_regret = 0.0;  // 5/4
};
RatioTable ratio_table();

struct BoundReport {
  double theorem1 = 0.0;
  double theorem1_dominant = 0.0;
  double theorem2 = 0.0;
  double theorem2_dominant = 0.0;
  RatioTable ratios;
};
BoundReport bound_report(int horizon, int num_states, int num_actions,
                         std::int64_t total_steps, double delta);

void write_regret_svg(const std::vector<AgentSummary>& summaries,
                      std::ostream& out);

}  // namespace ucbvi
