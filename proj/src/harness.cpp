#include "ucbvi/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <memory>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ucbvi/rng.hpp"

namespace ucbvi {

AgentSpec parse_agent_spec(const std::string& token) {
  AgentSpec spec;
  spec.id = token;
  if (token == "mvp") {
    spec.kind = AgentSpec::Kind::mvp;
    return spec;
  }
  spec.kind = AgentSpec::Kind::ucbvi;
  if (token == "ch-refined") {
    spec.family = BonusFamily::chernoff_hoeffding;
    spec.constant_set = ConstantSet::refined;
  } else if (token == "ch-original") {
    spec.family = BonusFamily::chernoff_hoeffding;
    spec.constant_set = ConstantSet::original;
  } else if (token == "bf-refined") {
    spec.family = BonusFamily::bernstein_freedman;
    spec.constant_set = ConstantSet::refined;
  } else if (token == "bf-original") {
    spec.family = BonusFamily::bernstein_freedman;
    spec.constant_set = ConstantSet::original;
  } else {
    throw std::invalid_argument(
        "unknown agent '" + token +
        "' (expected ch-refined, ch-original, bf-refined, bf-original or mvp)");
  }
  return spec;
}

void ExperimentConfig::validate() const {
  if (episodes < 1) throw std::invalid_argument("config: K must be >= 1");
  if (runs < 1) throw std::invalid_argument("config: runs must be >= 1");
  if (regret_eval_stride < 1)
    throw std::invalid_argument("config: regret_eval_stride must be >= 1");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("config: delta must be in (0,1)");
  if (agents.empty()) throw std::invalid_argument("config: no agents listed");
  for (std::size_t i = 0; i < agents.size(); ++i)
    for (std::size_t j = i + 1; j < agents.size(); ++j)
      if (agents[i].id == agents[j].id)
        throw std::invalid_argument("config: agent '" + agents[i].id +
                                    "' listed twice");
  if (env.num_states < 1 || env.num_actions < 1 || env.horizon < 1)
    throw std::invalid_argument("config: env dimensions must be >= 1");
  if (env.kind == EnvSpec::Kind::riverswim) {
    if (env.num_states < 2)
      throw std::invalid_argument("config: riverswim needs env.S >= 2");
    if (env.num_actions != 2)
      throw std::invalid_argument("config: riverswim has exactly 2 actions");
  }
  if (mvp_c1 <= 0.0) throw std::invalid_argument("config: mvp_c1 must be > 0");
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(s);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  std::stringstream ss(value);
  T parsed{};
  if (!(ss >> parsed) || !(ss >> std::ws).eof())
    throw std::invalid_argument("config: bad value for " + key + ": '" + value + "'");
  return parsed;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  bool env_actions_given = false;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "env.kind") {
      cfg.env.kind = env_kind_from_string(value);
    } else if (key == "env.S") {
      cfg.env.num_states = parse_number<int>(key, value);
    } else if (key == "env.A") {
      cfg.env.num_actions = parse_number<int>(key, value);
      env_actions_given = true;
    } else if (key == "env.H") {
      cfg.env.horizon = parse_number<int>(key, value);
    } else if (key == "env.seed") {
      cfg.env.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "agents") {
      cfg.agents.clear();
      for (const auto& token : split_csv(value))
        cfg.agents.push_back(parse_agent_spec(token));
    } else if (key == "K") {
      cfg.episodes = parse_number<std::int64_t>(key, value);
    } else if (key == "runs") {
      cfg.runs = parse_number<int>(key, value);
    } else if (key == "master_seed") {
      cfg.master_seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "delta") {
      cfg.delta = parse_number<double>(key, value);
    } else if (key == "regret_eval_stride") {
      cfg.regret_eval_stride = parse_number<std::int64_t>(key, value);
    } else if (key == "mvp_c1") {
      cfg.mvp_c1 = parse_number<double>(key, value);
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  if (cfg.env.kind == EnvSpec::Kind::riverswim && !env_actions_given)
    cfg.env.num_actions = 2;
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_config: cannot open " + path);
  return parse_config(in);
}

double instantaneous_regret(const TabularMdp& env, const ValueFunctions& optimal,
                            const Policy& policy) {
  const ValueFunctions achieved = evaluate_policy(env, policy);
  return optimal.value(0, env.initial_state) -
         achieved.value(0, env.initial_state);
}

namespace {

TabularMdp env_for_run(const ExperimentConfig& cfg, int run_index) {
  if (cfg.env.kind == EnvSpec::Kind::random) {
    const std::uint64_t base = derive_seed(cfg.master_seed, "env", cfg.env.seed);
    return random_mdp(cfg.env.num_states, cfg.env.num_actions, cfg.env.horizon,
                      derive_seed(base, "run", static_cast<std::uint64_t>(run_index)));
  }
  return build_env(cfg.env);
}

std::unique_ptr<EpisodicAgent> make_agent(const ExperimentConfig& cfg,
                                          const AgentSpec& spec,
                                          const TabularMdp& env) {
  const std::int64_t total_steps = cfg.episodes * env.horizon;
  if (spec.kind == AgentSpec::Kind::mvp)
    return std::make_unique<MvpAgent>(
        env.num_states, env.num_actions, env.horizon, env.reward, cfg.mvp_c1,
        log_term(env.horizon, env.num_states, env.num_actions, total_steps,
                 cfg.delta));
  return std::make_unique<UcbviAgent>(
      env.num_states, env.num_actions, env.horizon, env.reward,
      BonusConfig::make(spec.family, spec.constant_set, env.horizon,
                        env.num_states, env.num_actions, total_steps,
                        cfg.delta));
}

RegretTrace run_cell(const ExperimentConfig& cfg, int agent_index,
                     int run_index) {
  const AgentSpec& spec = cfg.agents[agent_index];
  const TabularMdp env = env_for_run(cfg, run_index);
  const auto [optimal, optimal_policy] = exact_value_iteration(env);
  auto agent = make_agent(cfg, spec, env);
  RngStream rng(derive_seed(cfg.master_seed, spec.id,
                            static_cast<std::uint64_t>(run_index)));

  RegretTrace trace;
  trace.agent_id = spec.id;
  trace.run_index = run_index;
  const std::int64_t K = cfg.episodes;
  const std::int64_t stride = cfg.regret_eval_stride;
  double cumulative = 0.0;
  double last_instant = 0.0;
  for (std::int64_t k = 1; k <= K; ++k) {
    agent->begin_episode();
    if (k == 1 || k % stride == 0 || k == K) {
      last_instant = instantaneous_regret(env, optimal, agent->greedy());
      if (last_instant < -1e-9)
        throw std::logic_error("negative instantaneous regret in cell " +
                               spec.id + " run " + std::to_string(run_index));
    }
    cumulative += last_instant;
    run_episode(env, *agent, rng);
    if (k % stride == 0 || k == K) {
      trace.episodes.push_back(k);
      trace.instant.push_back(last_instant);
      trace.cumulative.push_back(cumulative);
    }
  }
  return trace;
}

}  // namespace

std::vector<AgentSummary> aggregate_traces(const ExperimentConfig& cfg,
                                           const std::vector<RegretTrace>& traces) {
  std::vector<AgentSummary> summaries;
  summaries.reserve(cfg.agents.size());
  for (const AgentSpec& spec : cfg.agents) {
    std::vector<const RegretTrace*> cells;
    for (const RegretTrace& t : traces)
      if (t.agent_id == spec.id) cells.push_back(&t);
    if (cells.empty())
      throw std::logic_error("aggregate_traces: no traces for " + spec.id);
    AgentSummary summary;
    summary.agent_id = spec.id;
    summary.episodes = cells.front()->episodes;
    const std::size_t points = summary.episodes.size();
    const double n = static_cast<double>(cells.size());
    summary.mean_cum.resize(points);
    summary.ci_low.resize(points);
    summary.ci_high.resize(points);
    for (std::size_t i = 0; i < points; ++i) {
      double mean = 0.0;
      for (const RegretTrace* t : cells) mean += t->cumulative[i];
      mean /= n;
      double sd = 0.0;
      if (cells.size() > 1) {
        double ss = 0.0;
        for (const RegretTrace* t : cells) {
          const double d = t->cumulative[i] - mean;
          ss += d * d;
        }
        sd = std::sqrt(ss / (n - 1.0));
      }
      const double half_width = 1.96 * sd / std::sqrt(n);
      summary.mean_cum[i] = mean;
      summary.ci_low[i] = mean - half_width;
      summary.ci_high[i] = mean + half_width;
    }
    summaries.push_back(std::move(summary));
  }
  return summaries;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, int parallelism) {
  cfg.validate();
  const int num_agents = static_cast<int>(cfg.agents.size());
  const int num_cells = num_agents * cfg.runs;
  std::vector<RegretTrace> traces(num_cells);
  std::vector<std::string> errors(num_cells);

  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      const int cell = next.fetch_add(1);
      if (cell >= num_cells) return;
      const int agent_index = cell % num_agents;
      const int run_index = cell / num_agents;
      try {
        traces[cell] = run_cell(cfg, agent_index, run_index);
      } catch (const std::exception& e) {
        errors[cell] = e.what();
      }
    }
  };

  const int threads = std::clamp(parallelism, 1, num_cells);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  for (int cell = 0; cell < num_cells; ++cell)
    if (!errors[cell].empty())
      throw std::runtime_error("experiment cell (agent=" +
                               cfg.agents[cell % num_agents].id + ", run=" +
                               std::to_string(cell / num_agents) +
                               ") failed: " + errors[cell]);

  ExperimentResult result;
  result.traces = std::move(traces);
  result.summaries = aggregate_traces(cfg, result.traces);
  return result;
}

namespace {

void write_trace_csv(const RegretTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit_outputs: cannot open " + path);
  out << "episode,instant_regret,cum_regret\n";
  for (std::size_t i = 0; i < trace.episodes.size(); ++i)
    out << trace.episodes[i] << ',' << format_g17(trace.instant[i]) << ','
        << format_g17(trace.cumulative[i]) << '\n';
  if (!out) throw std::runtime_error("emit_outputs: write failed for " + path);
}

}  // namespace

void emit_outputs(const ExperimentConfig& cfg, const ExperimentResult& result,
                  const std::string& out_dir) {
  if (result.traces.empty())
    throw std::invalid_argument("emit_outputs: no traces to write");
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec && !fs::is_directory(out_dir))
    throw std::runtime_error("emit_outputs: cannot create directory " + out_dir);

  for (const RegretTrace& trace : result.traces)
    write_trace_csv(trace, out_dir + "/trace_" + trace.agent_id + "_" +
                               std::to_string(trace.run_index) + ".csv");

  {
    const std::string path = out_dir + "/summary.csv";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_outputs: cannot open " + path);
    out << "episode,agent,mean_cum_regret,ci_low,ci_high\n";
    for (const AgentSummary& s : result.summaries)
      for (std::size_t i = 0; i < s.episodes.size(); ++i)
        out << s.episodes[i] << ',' << s.agent_id << ','
            << format_g17(s.mean_cum[i]) << ',' << format_g17(s.ci_low[i])
            << ',' << format_g17(s.ci_high[i]) << '\n';
    if (!out) throw std::runtime_error("emit_outputs: write failed for " + path);
  }

  {
    std::ofstream out(out_dir + "/regret.svg");
    if (!out) throw std::runtime_error("emit_outputs: cannot open regret.svg");
    write_regret_svg(result.summaries, out);
  }

  {
    std::ofstream out(out_dir + "/meta.txt");
    if (!out) throw std::runtime_error("emit_outputs: cannot open meta.txt");
    out << "code_version = " << kCodeVersion << '\n';
    out << "rng_algorithm = " << kRngAlgorithmId << '\n';
    out << "env.kind = " << to_string(cfg.env.kind) << '\n';
    out << "env.S = " << cfg.env.num_states << '\n';
    out << "env.A = " << cfg.env.num_actions << '\n';
    out << "env.H = " << cfg.env.horizon << '\n';
    out << "env.seed = " << cfg.env.seed << '\n';
    if (cfg.env.kind == EnvSpec::Kind::riverswim) {
      const RiverswimParams& p = cfg.env.riverswim_params;
      out << "env.left_reward = " << format_g17(p.left_reward) << '\n';
      out << "env.right_reward = " << format_g17(p.right_reward) << '\n';
      out << "env.forward_success_prob = " << format_g17(p.forward_success_prob) << '\n';
      out << "env.backward_slip_prob = " << format_g17(p.backward_slip_prob) << '\n';
    }
    out << "agents = ";
    for (std::size_t i = 0; i < cfg.agents.size(); ++i)
      out << (i ? "," : "") << cfg.agents[i].id;
    out << '\n';
    out << "K = " << cfg.episodes << '\n';
    out << "runs = " << cfg.runs << '\n';
    out << "master_seed = " << cfg.master_seed << '\n';
    out << "delta = " << format_g17(cfg.delta) << '\n';
    out << "regret_eval_stride = " << cfg.regret_eval_stride << '\n';
    out << "mvp_c1 = " << format_g17(cfg.mvp_c1) << '\n';
  }
}

namespace {

constexpr double kEuler = std::numbers::e;

double checked_log_term(int H, int S, int A, std::int64_t T, double delta) {
  return log_term(H, S, A, T, delta);
}

}  // namespace

double theorem1_dominant_term(int H, int S, int A, std::int64_t T, double delta) {
  const double L = checked_log_term(H, S, A, T, delta);
  return kRegretBoundConstants.ch_lead_refined * kEuler * H * L *
         std::sqrt(static_cast<double>(S) * A * static_cast<double>(T));
}

double theorem1_bound(int H, int S, int A, std::int64_t T, double delta) {
  const double L = checked_log_term(H, S, A, T, delta);
  return theorem1_dominant_term(H, S, A, T, delta) +
         (8.0 / 3.0) * kEuler * static_cast<double>(H) * H * S * S * A * L * L;
}

double theorem2_dominant_term(int H, int S, int A, std::int64_t T, double delta) {
  const double L = checked_log_term(H, S, A, T, delta);
  return kRegretBoundConstants.bf_lead_refined * kEuler * L *
         std::sqrt(static_cast<double>(H) * S * A * static_cast<double>(T));
}

double theorem2_bound(int H, int S, int A, std::int64_t T, double delta) {
  const double L = checked_log_term(H, S, A, T, delta);
  return theorem2_dominant_term(H, S, A, T, delta) +
         616.0 * kEuler * static_cast<double>(H) * H * S * S * A * L * L +
         4.0 * kEuler *
             std::sqrt(static_cast<double>(H) * H * static_cast<double>(T) * L);
}

RatioTable ratio_table() {
  RatioTable table;
  table.ch_bonus = kOriginalConstants.ch_scale / kRefinedConstants.ch_scale;
  table.ch_regret = kRegretBoundConstants.ch_lead_original /
                    kRegretBoundConstants.ch_lead_refined;
  table.bf_bonus = std::sqrt(kOriginalConstants.bf_variance_scale /
                             kRefinedConstants.bf_variance_scale);
  table.bf_regret = kRegretBoundConstants.bf_lead_original /
                    kRegretBoundConstants.bf_lead_refined;
  return table;
}

BoundReport bound_report(int H, int S, int A, std::int64_t T, double delta) {
  BoundReport report;
  report.theorem1 = theorem1_bound(H, S, A, T, delta);
  report.theorem1_dominant = theorem1_dominant_term(H, S, A, T, delta);
  report.theorem2 = theorem2_bound(H, S, A, T, delta);
  report.theorem2_dominant = theorem2_dominant_term(H, S, A, T, delta);
  report.ratios = ratio_table();
  return report;
}

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

}  // namespace

void write_regret_svg(const std::vector<AgentSummary>& summaries,
                      std::ostream& out) {
  const double width = 880.0, height = 520.0;
  const double left = 80.0, right = width - 170.0, top = 30.0, bottom = height - 60.0;

  double x_max = 1.0, y_max = 0.0;
  for (const AgentSummary& s : summaries) {
    if (!s.episodes.empty())
      x_max = std::max(x_max, static_cast<double>(s.episodes.back()));
    for (double v : s.ci_high) y_max = std::max(y_max, v);
  }
  if (y_max <= 0.0) y_max = 1.0;
  y_max *= 1.05;

  const auto x_px = [&](double episode) {
    return left + (right - left) * (episode / x_max);
  };
  const auto y_px = [&](double value) {
    return bottom - (bottom - top) * (value / y_max);
  };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
      << height << "\">\n";
  out << "<rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";

  // Axes and ticks (linear scales).
  out << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right
      << "\" y2=\"" << bottom << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left
      << "\" y2=\"" << bottom << "\" stroke=\"black\"/>\n";
  const int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    const double fx = x_max * i / ticks;
    const double px = x_px(fx);
    out << "<line x1=\"" << fmt2(px) << "\" y1=\"" << bottom << "\" x2=\""
        << fmt2(px) << "\" y2=\"" << bottom + 5 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fmt2(px) << "\" y=\"" << bottom + 20
        << "\" font-size=\"12\" text-anchor=\"middle\">" << fmt_tick(fx)
        << "</text>\n";
    const double fy = y_max * i / ticks;
    const double py = y_px(fy);
    out << "<line x1=\"" << left - 5 << "\" y1=\"" << fmt2(py) << "\" x2=\""
        << left << "\" y2=\"" << fmt2(py) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << left - 8 << "\" y=\"" << fmt2(py + 4)
        << "\" font-size=\"12\" text-anchor=\"end\">" << fmt_tick(fy)
        << "</text>\n";
  }
  out << "<text x=\"" << (left + right) / 2 << "\" y=\"" << height - 15
      << "\" font-size=\"13\" text-anchor=\"middle\">episode</text>\n";
  out << "<text x=\"20\" y=\"" << (top + bottom) / 2
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << (top + bottom) / 2 << ")\">cumulative regret</text>\n";

  for (std::size_t s = 0; s < summaries.size(); ++s) {
    const AgentSummary& summary = summaries[s];
    const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
    const std::size_t n = summary.episodes.size();
    if (n == 0) continue;
    const std::size_t step = std::max<std::size_t>(1, n / 512);
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; i += step) idx.push_back(i);
    if (idx.back() != n - 1) idx.push_back(n - 1);

    // 95% confidence band.
    out << "<polygon fill=\"" << color
        << "\" fill-opacity=\"0.15\" stroke=\"none\" points=\"";
    for (std::size_t i : idx)
      out << fmt2(x_px(static_cast<double>(summary.episodes[i]))) << ','
          << fmt2(y_px(summary.ci_high[i])) << ' ';
    for (auto it = idx.rbegin(); it != idx.rend(); ++it)
      out << fmt2(x_px(static_cast<double>(summary.episodes[*it]))) << ','
          << fmt2(y_px(summary.ci_low[*it])) << ' ';
    out << "\"/>\n";

    // Mean cumulative regret.
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.8\" points=\"";
    for (std::size_t i : idx)
      out << fmt2(x_px(static_cast<double>(summary.episodes[i]))) << ','
          << fmt2(y_px(summary.mean_cum[i])) << ' ';
    out << "\"/>\n";

    // Legend entry.
    const double ly = top + 18.0 * static_cast<double>(s);
    out << "<line x1=\"" << right + 12 << "\" y1=\"" << fmt2(ly) << "\" x2=\""
        << right + 40 << "\" y2=\"" << fmt2(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << right + 46 << "\" y=\"" << fmt2(ly + 4)
        << "\" font-size=\"12\">" << summary.agent_id << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace ucbvi
