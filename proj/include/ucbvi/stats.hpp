#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ucbvi {

// Running visit counters maintained by a learning agent: pair counts N(x,a),
// transition counts N(x,a,y) and per-stage state counts N'_h(x). One episode
// contributes exactly one transition per stage.
struct VisitCounts {
  int num_states = 0;
  int num_actions = 0;
  int horizon = 0;
  std::vector<std::int64_t> n_sa;           // [x * A + a]
  std::vector<std::int64_t> n_say;          // [(x * A + a) * S + y]
  std::vector<std::int64_t> n_stage_state;  // [h * S + x]

  VisitCounts() = default;
  VisitCounts(int S, int A, int H)
      : num_states(S),
        num_actions(A),
        horizon(H),
        n_sa(static_cast<std::size_t>(S) * A, 0),
        n_say(static_cast<std::size_t>(S) * A * S, 0),
        n_stage_state(static_cast<std::size_t>(H) * S, 0) {}

  void update(int x, int a, int y, int h);

  std::int64_t pair_count(int x, int a) const {
    return n_sa[static_cast<std::size_t>(x) * num_actions + a];
  }
  std::int64_t triple_count(int x, int a, int y) const {
    return n_say[(static_cast<std::size_t>(x) * num_actions + a) * num_states + y];
  }
  std::int64_t stage_state_count(int h, int x) const {
    return n_stage_state[static_cast<std::size_t>(h) * num_states + x];
  }
  std::span<const std::int64_t> stage_state_row(int h) const {
    return {n_stage_state.data() + static_cast<std::size_t>(h) * num_states,
            static_cast<std::size_t>(num_states)};
  }

  // Throws std::logic_error when the internal consistency invariants fail:
  // sum_y N(x,a,y) == N(x,a) for every pair, and sum_x N'_h(x) equals the
  // number of completed episodes at every stage.
  void check_consistent(std::int64_t episodes_completed) const;
};

// Row of the empirical transition model: N(x,a,y) / max{1, N(x,a)}. An
// unvisited pair yields the all-zero row; callers must not renormalize it
// (the optimistic min against the previous Q makes unvisited pairs keep
// their initialization).
void empirical_transition_row(const VisitCounts& counts, int x, int a,
                              std::span<double> out);
std::vector<double> empirical_transition(const VisitCounts& counts, int x, int a);

// Variance of values under a probability row: sum_y p(y) v(y)^2 -
// (sum_y p(y) v(y))^2, clamped at 0 against floating point artifacts.
// Returns 0 for the all-zero row.
double empirical_next_value_variance(std::span<const double> p_row,
                                     std::span<const double> values);

// Deviation bound for a Bernoulli(p) mean estimate from n samples:
// sqrt(2 p (1-p) L / n) + 2L / (3n) with L = ln(2/delta). Holds with
// probability at least 1 - delta.
double bernstein_bernoulli_bound(double p, std::int64_t n, double delta);

}  // namespace ucbvi
