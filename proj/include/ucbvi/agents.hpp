#pragma once

#include <cassert>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "ucbvi/bonus.hpp"
#include "ucbvi/mdp.hpp"
#include "ucbvi/rng.hpp"
#include "ucbvi/stats.hpp"

namespace ucbvi {

// Optimistic Q/V tables. Q starts at the largest return still collectable
// from each stage (H - h with 0-based h) and is only ever lowered by the
// min-clipping planner, so it is elementwise nonincreasing across episodes.
struct OptimisticValues {
  int horizon = 0;
  int num_states = 0;
  int num_actions = 0;
  std::vector<double> q;  // [(h * S + x) * A + a]
  std::vector<double> v;  // [h * S + x], h in [0, H], v[H] = 0

  static OptimisticValues optimistic_init(int horizon, int num_states,
                                          int num_actions);

  double action_value(int h, int x, int a) const {
    return q[(static_cast<std::size_t>(h) * num_states + x) * num_actions + a];
  }
  double value(int h, int x) const {
    return v[static_cast<std::size_t>(h) * num_states + x];
  }
  std::span<const double> q_row(int h, int x) const {
    return {q.data() +
                (static_cast<std::size_t>(h) * num_states + x) * num_actions,
            static_cast<std::size_t>(num_actions)};
  }
  std::span<const double> v_row(int h) const {
    return {v.data() + static_cast<std::size_t>(h) * num_states,
            static_cast<std::size_t>(num_states)};
  }
};

// One optimistic backward induction pass, clipping against the Q values
// already stored in `vals`:
//   Q_h(x,a) <- min{ Q_h(x,a), R(x,a) + phat(.|x,a) . V_{h+1} + b(x,a,h) }
//   V_h(x)   <- max_a Q_h(x,a)
// `row(x, a)` must return a span of S transition probabilities (an all-zero
// row is legal and stands for "no data"); `bonus(x, a, h, v_next)` may return
// +infinity to leave a cell untouched.
template <class RowFn, class BonusFn>
void optimistic_backward_induction(int horizon, int num_states, int num_actions,
                                   std::span<const double> reward, RowFn&& row,
                                   BonusFn&& bonus, OptimisticValues& vals) {
  const int S = num_states, A = num_actions;
  for (int x = 0; x < S; ++x)
    vals.v[static_cast<std::size_t>(horizon) * S + x] = 0.0;
  for (int h = horizon - 1; h >= 0; --h) {
    const std::span<const double> v_next = vals.v_row(h + 1);
    for (int x = 0; x < S; ++x) {
      double* q_row =
          vals.q.data() + (static_cast<std::size_t>(h) * S + x) * A;
      double best = q_row[0];
      for (int a = 0; a < A; ++a) {
        const std::span<const double> p_row = row(x, a);
        double expected_next = 0.0;
        for (int y = 0; y < S; ++y) expected_next += p_row[y] * v_next[y];
        const double candidate = reward[static_cast<std::size_t>(x) * A + a] +
                                 expected_next + bonus(x, a, h, v_next);
        if (candidate < q_row[a]) q_row[a] = candidate;
        assert(q_row[a] >= 0.0);  // all addends are nonnegative
        if (a == 0 || q_row[a] > best) best = q_row[a];
      }
      vals.v[static_cast<std::size_t>(h) * S + x] = best;
    }
  }
}

// Common surface of the episodic learners: plan, then interact for one
// episode, observing one transition per stage. The agent knows the reward
// table exactly and never sees the true transition kernel.
class EpisodicAgent {
 public:
  virtual ~EpisodicAgent() = default;
  virtual void begin_episode() = 0;
  virtual int act(int x, int h) const = 0;
  virtual void observe(int x, int a, int y, int h) = 0;
  virtual void finish_episode() = 0;
  virtual Policy greedy() const = 0;
  virtual std::int64_t episodes_completed() const = 0;
};

// UCBVI: recompute the empirical model from the counters, run one optimistic
// min-clipped induction pass with the configured exploration bonus, then act
// greedily on the optimistic Q.
class UcbviAgent : public EpisodicAgent {
 public:
  UcbviAgent(int num_states, int num_actions, int horizon,
             std::vector<double> reward, const BonusConfig& cfg);

  void begin_episode() override;
  int act(int x, int h) const override;
  void observe(int x, int a, int y, int h) override;
  void finish_episode() override { ++episode_; }
  Policy greedy() const override;
  std::int64_t episodes_completed() const override { return episode_; }

  const OptimisticValues& values() const { return values_; }
  const VisitCounts& counts() const { return counts_; }
  const BonusConfig& config() const { return cfg_; }

 private:
  int S_, A_, H_;
  std::vector<double> reward_;
  BonusConfig cfg_;
  VisitCounts counts_;
  OptimisticValues values_;
  std::vector<double> phat_;  // scratch, rebuilt from counts_ at planning time
  std::int64_t episode_ = 0;
};

// MVP-style baseline: merged stage-independent counts, doubling-trick
// replanning (a pass runs only when some N(x,a) reaches its next power of
// two), and the max-form Bernstein bonus c1 * max{sqrt(Var L / n), H L / n}.
// The reward-noise bonus term is dropped because rewards here are
// deterministic and known. Pairs without data keep their optimistic
// initialization.
class MvpAgent : public EpisodicAgent {
 public:
  MvpAgent(int num_states, int num_actions, int horizon,
           std::vector<double> reward, double c1, double log_term);

  void begin_episode() override;
  int act(int x, int h) const override;
  void observe(int x, int a, int y, int h) override;
  void finish_episode() override { ++episode_; }
  Policy greedy() const override;
  std::int64_t episodes_completed() const override { return episode_; }

  const OptimisticValues& values() const { return values_; }
  const VisitCounts& counts() const { return counts_; }
  std::int64_t replans_performed() const { return replans_; }

 private:
  int S_, A_, H_;
  std::vector<double> reward_;
  double c1_;
  double log_term_;
  VisitCounts counts_;
  OptimisticValues values_;
  std::vector<double> phat_;
  std::vector<std::int64_t> replan_threshold_;  // next doubling count per pair
  bool replan_pending_ = true;
  std::int64_t replans_ = 0;
  std::int64_t episode_ = 0;
};

struct EpisodeResult {
  double episode_return = 0.0;
  Policy policy;  // the greedy policy the agent followed, for exact scoring
};

// Simulates one episode from env.initial_state, sampling next states from the
// true kernel, feeding every transition back to the agent. Planning for the
// episode must already have happened (begin_episode).
EpisodeResult run_episode(const TabularMdp& env, EpisodicAgent& agent,
                          RngStream& rng);

}  // namespace ucbvi
