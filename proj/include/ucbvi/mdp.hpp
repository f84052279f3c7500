#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ucbvi {

// Finite-horizon tabular MDP with stage-independent dynamics, deterministic
// known rewards in [0, 1], and a fixed initial state. Episodes last `horizon`
// stages; stage indices are 0-based throughout the codebase.
struct TabularMdp {
  int num_states = 0;
  int num_actions = 0;
  int horizon = 0;
  int initial_state = 0;
  std::vector<double> transition;  // [(x * A + a) * S + y]
  std::vector<double> reward;      // [x * A + a]

  double p(int x, int a, int y) const {
    return transition[(static_cast<std::size_t>(x) * num_actions + a) * num_states + y];
  }
  std::span<const double> transition_row(int x, int a) const {
    return {transition.data() +
                (static_cast<std::size_t>(x) * num_actions + a) * num_states,
            static_cast<std::size_t>(num_states)};
  }
  double r(int x, int a) const {
    return reward[static_cast<std::size_t>(x) * num_actions + a];
  }

  // Throws std::invalid_argument when dimensions are non-positive, a
  // transition row fails to sum to 1 within 1e-9 or has negative entries,
  // or a reward lies outside [0, 1].
  void validate() const;
};

// Stage-indexed value tables. v has horizon + 1 rows (the terminal row is
// identically zero); q has horizon rows.
struct ValueFunctions {
  int horizon = 0;
  int num_states = 0;
  int num_actions = 0;
  std::vector<double> v;  // [h * S + x], h in [0, H]
  std::vector<double> q;  // [(h * S + x) * A + a], h in [0, H)

  double value(int h, int x) const {
    return v[static_cast<std::size_t>(h) * num_states + x];
  }
  double action_value(int h, int x, int a) const {
    return q[(static_cast<std::size_t>(h) * num_states + x) * num_actions + a];
  }
};

// Deterministic stage-dependent policy.
struct Policy {
  int horizon = 0;
  int num_states = 0;
  std::vector<int> action;  // [h * S + x]

  int at(int h, int x) const {
    return action[static_cast<std::size_t>(h) * num_states + x];
  }
};

// Index of the largest entry; ties break to the lowest index.
int argmax_lowest(std::span<const double> row);

// Backward recursion Q*_h(x,a) = R(x,a) + sum_y P(y|x,a) V*_{h+1}(y),
// V*_h(x) = max_a Q*_h(x,a), V*_H = 0. Returns optimal values and a greedy
// optimal policy. Rejects malformed MDPs.
std::pair<ValueFunctions, Policy> exact_value_iteration(const TabularMdp& mdp);

// Exact policy evaluation by the same backward recursion with the action
// fixed to policy(x, h). Rejects out-of-range action indices.
ValueFunctions evaluate_policy(const TabularMdp& mdp, const Policy& policy);

// Greedy policy extraction from a stage-indexed Q table.
Policy greedy_from_q(int horizon, int num_states, int num_actions,
                     std::span<const double> q);
Policy greedy_policy(const ValueFunctions& values);

// Plain-text serialization, format "tabmdp v1". Values are printed with 17
// significant digits, which makes save/load round trips bit-stable.
void save_mdp(const TabularMdp& mdp, const std::string& path);
TabularMdp load_mdp(const std::string& path);
void write_mdp(const TabularMdp& mdp, std::ostream& out);
TabularMdp read_mdp(std::istream& in);

// Shortest decimal form that round-trips a double (%.17g).
std::string format_g17(double value);

}  // namespace ucbvi
