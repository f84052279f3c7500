#include "ucbvi/agents.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ucbvi {

OptimisticValues OptimisticValues::optimistic_init(int horizon, int num_states,
                                                   int num_actions) {
  OptimisticValues vals;
  vals.horizon = horizon;
  vals.num_states = num_states;
  vals.num_actions = num_actions;
  vals.q.resize(static_cast<std::size_t>(horizon) * num_states * num_actions);
  vals.v.assign(static_cast<std::size_t>(horizon + 1) * num_states, 0.0);
  for (int h = 0; h < horizon; ++h) {
    const double cap = static_cast<double>(horizon - h);
    for (int x = 0; x < num_states; ++x) {
      vals.v[static_cast<std::size_t>(h) * num_states + x] = cap;
      for (int a = 0; a < num_actions; ++a)
        vals.q[(static_cast<std::size_t>(h) * num_states + x) * num_actions + a] = cap;
    }
  }
  return vals;
}

UcbviAgent::UcbviAgent(int num_states, int num_actions, int horizon,
                       std::vector<double> reward, const BonusConfig& cfg)
    : S_(num_states),
      A_(num_actions),
      H_(horizon),
      reward_(std::move(reward)),
      cfg_(cfg),
      counts_(num_states, num_actions, horizon),
      values_(OptimisticValues::optimistic_init(horizon, num_states, num_actions)),
      phat_(static_cast<std::size_t>(num_states) * num_actions * num_states, 0.0) {
  if (reward_.size() != static_cast<std::size_t>(S_) * A_)
    throw std::invalid_argument("UcbviAgent: reward table size mismatch");
}

void UcbviAgent::begin_episode() {
  for (int x = 0; x < S_; ++x)
    for (int a = 0; a < A_; ++a)
      empirical_transition_row(
          counts_, x, a,
          {phat_.data() + (static_cast<std::size_t>(x) * A_ + a) * S_,
           static_cast<std::size_t>(S_)});
  auto row = [&](int x, int a) {
    return std::span<const double>(
        phat_.data() + (static_cast<std::size_t>(x) * A_ + a) * S_,
        static_cast<std::size_t>(S_));
  };
  if (cfg_.family == BonusFamily::chernoff_hoeffding) {
    auto bonus = [&](int x, int a, int, std::span<const double>) {
      return bonus_ch(counts_.pair_count(x, a), cfg_);
    };
    optimistic_backward_induction(H_, S_, A_, reward_, row, bonus, values_);
  } else {
    auto bonus = [&](int x, int a, int h, std::span<const double> v_next) {
      if (h == H_ - 1) return 0.0;
      const auto p_row = row(x, a);
      const double sigma2 = empirical_next_value_variance(p_row, v_next);
      return bonus_bf_terms(sigma2, p_row, counts_.stage_state_row(h + 1),
                            counts_.pair_count(x, a), cfg_)
          .total();
    };
    optimistic_backward_induction(H_, S_, A_, reward_, row, bonus, values_);
  }
}

int UcbviAgent::act(int x, int h) const {
  return argmax_lowest(values_.q_row(h, x));
}

void UcbviAgent::observe(int x, int a, int y, int h) {
  counts_.update(x, a, y, h);
}

Policy UcbviAgent::greedy() const {
  return greedy_from_q(H_, S_, A_, values_.q);
}

MvpAgent::MvpAgent(int num_states, int num_actions, int horizon,
                   std::vector<double> reward, double c1, double log_term)
    : S_(num_states),
      A_(num_actions),
      H_(horizon),
      reward_(std::move(reward)),
      c1_(c1),
      log_term_(log_term),
      counts_(num_states, num_actions, horizon),
      values_(OptimisticValues::optimistic_init(horizon, num_states, num_actions)),
      phat_(static_cast<std::size_t>(num_states) * num_actions * num_states, 0.0),
      replan_threshold_(static_cast<std::size_t>(num_states) * num_actions, 1) {
  if (reward_.size() != static_cast<std::size_t>(S_) * A_)
    throw std::invalid_argument("MvpAgent: reward table size mismatch");
}

void MvpAgent::begin_episode() {
  if (!replan_pending_) return;
  replan_pending_ = false;
  ++replans_;
  for (int x = 0; x < S_; ++x)
    for (int a = 0; a < A_; ++a)
      empirical_transition_row(
          counts_, x, a,
          {phat_.data() + (static_cast<std::size_t>(x) * A_ + a) * S_,
           static_cast<std::size_t>(S_)});
  auto row = [&](int x, int a) {
    return std::span<const double>(
        phat_.data() + (static_cast<std::size_t>(x) * A_ + a) * S_,
        static_cast<std::size_t>(S_));
  };
  auto bonus = [&](int x, int a, int, std::span<const double> v_next) {
    const std::int64_t n = counts_.pair_count(x, a);
    if (n == 0) return std::numeric_limits<double>::infinity();
    const double sigma2 = empirical_next_value_variance(row(x, a), v_next);
    const double dn = static_cast<double>(n);
    return c1_ * std::max(std::sqrt(sigma2 * log_term_ / dn),
                          H_ * log_term_ / dn);
  };
  optimistic_backward_induction(H_, S_, A_, reward_, row, bonus, values_);
}

int MvpAgent::act(int x, int h) const {
  return argmax_lowest(values_.q_row(h, x));
}

void MvpAgent::observe(int x, int a, int y, int h) {
  counts_.update(x, a, y, h);
  std::int64_t& threshold = replan_threshold_[static_cast<std::size_t>(x) * A_ + a];
  if (counts_.pair_count(x, a) >= threshold) {
    replan_pending_ = true;
    threshold *= 2;
  }
}

Policy MvpAgent::greedy() const { return greedy_from_q(H_, S_, A_, values_.q); }

EpisodeResult run_episode(const TabularMdp& env, EpisodicAgent& agent,
                          RngStream& rng) {
  EpisodeResult result;
  result.policy = agent.greedy();
  int x = env.initial_state;
  for (int h = 0; h < env.horizon; ++h) {
    const int a = agent.act(x, h);
    result.episode_return += env.r(x, a);
    const int y = rng.categorical(env.transition_row(x, a));
    agent.observe(x, a, y, h);
    x = y;
  }
  agent.finish_episode();
  return result;
}

}  // namespace ucbvi
