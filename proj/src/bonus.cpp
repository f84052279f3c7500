#include "ucbvi/bonus.hpp"

#include <cmath>
#include <stdexcept>

namespace ucbvi {

double log_term(int horizon, int num_states, int num_actions,
                std::int64_t total_steps, double delta) {
  if (horizon < 1 || num_states < 1 || num_actions < 1 || total_steps < 1)
    throw std::invalid_argument("log_term: dimensions must all be >= 1");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("log_term: delta must be in (0,1)");
  return std::log(5.0 * horizon * num_states * num_actions *
                  static_cast<double>(total_steps) / delta);
}

BonusConfig BonusConfig::make(BonusFamily family, ConstantSet set, int horizon,
                              int num_states, int num_actions,
                              std::int64_t total_steps, double delta) {
  BonusConfig cfg;
  cfg.family = family;
  cfg.constant_set = set;
  cfg.delta = delta;
  cfg.horizon = horizon;
  cfg.num_states = num_states;
  cfg.num_actions = num_actions;
  cfg.total_steps = total_steps;
  cfg.log_term = ucbvi::log_term(horizon, num_states, num_actions, total_steps, delta);
  return cfg;
}

double bonus_ch(std::int64_t n_sa, const BonusConfig& cfg) {
  const double n = static_cast<double>(n_sa < 1 ? 1 : n_sa);
  return cfg.c().ch_scale * cfg.horizon * cfg.log_term / std::sqrt(n);
}

double bprime(std::int64_t stage_state_count, const BonusConfig& cfg) {
  const double H = cfg.horizon;
  const double n = static_cast<double>(stage_state_count < 1 ? 1 : stage_state_count);
  const double numerator = cfg.c().bf_bprime_scale * H * H * H *
                           static_cast<double>(cfg.num_states) * cfg.num_states *
                           cfg.num_actions * cfg.log_term * cfg.log_term;
  return std::min(numerator / n, H * H);
}

BfBonusTerms bonus_bf_terms(double sigma2, std::span<const double> phat_row,
                            std::span<const std::int64_t> next_stage_counts,
                            std::int64_t n_sa, const BonusConfig& cfg) {
  const BonusConstants& c = cfg.c();
  const double n = static_cast<double>(n_sa < 1 ? 1 : n_sa);
  const double n_minus_one = static_cast<double>(n_sa - 1 < 1 ? 1 : n_sa - 1);
  BfBonusTerms terms;
  terms.variance_term = std::sqrt(c.bf_variance_scale * cfg.log_term * sigma2 / n);
  terms.count_term = c.bf_count_scale * cfg.horizon * cfg.log_term / n_minus_one;
  double expected_bprime = 0.0;
  for (std::size_t y = 0; y < phat_row.size(); ++y)
    if (phat_row[y] > 0.0)
      expected_bprime += phat_row[y] * bprime(next_stage_counts[y], cfg);
  terms.next_stage_term = std::sqrt(c.bf_next_stage_scale * expected_bprime / n);
  return terms;
}

double bonus_bf(const VisitCounts& counts, std::span<const double> v_next,
                int x, int a, int h, const BonusConfig& cfg) {
  if (h == cfg.horizon - 1) return 0.0;
  const std::vector<double> phat = empirical_transition(counts, x, a);
  const double sigma2 = empirical_next_value_variance(phat, v_next);
  return bonus_bf_terms(sigma2, phat, counts.stage_state_row(h + 1),
                        counts.pair_count(x, a), cfg)
      .total();
}

std::string to_string(BonusFamily family) {
  return family == BonusFamily::chernoff_hoeffding ? "chernoff-hoeffding"
                                                   : "bernstein-freedman";
}

std::string to_string(ConstantSet set) {
  return set == ConstantSet::refined ? "refined" : "original";
}

}  // namespace ucbvi
