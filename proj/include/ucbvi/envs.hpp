#pragma once

#include <cstdint>
#include <string>

#include "ucbvi/mdp.hpp"

namespace ucbvi {

// RiverSwim shape parameters. left_reward is the tuning knob: 0.11 puts the
// exact suboptimality gap Q*_1(0, swim) - Q*_1(0, turn back) of the S=5,
// H=10 instance at ~0.115, with swimming still optimal (see README).
struct RiverswimParams {
  double left_reward = 0.11;
  double right_reward = 1.0;
  double forward_success_prob = 0.35;
  double backward_slip_prob = 0.05;
};

struct EnvSpec {
  enum class Kind { random, riverswim };
  Kind kind = Kind::random;
  int num_states = 3;
  int num_actions = 3;
  int horizon = 5;
  std::uint64_t seed = 0;  // random kind only
  RiverswimParams riverswim_params;
};

// Seeded random MDP: each transition row is uniform on the simplex (normalized
// standard exponentials, i.e. a flat Dirichlet draw) and each reward is
// uniform on [0, 1]. Initial state 0. Bit-identical for equal inputs.
TabularMdp random_mdp(int num_states, int num_actions, int horizon,
                      std::uint64_t seed);

// RiverSwim chain with A = 2 (action 0 = turn back / move left, action 1 =
// swim right). Action 0 is deterministic and stays put at state 0. Action 1
// advances with forward_success_prob, slips back with backward_slip_prob and
// stays otherwise; at the ends the impossible move's mass folds into staying.
// Rewards: left_reward at (0, action 0), right_reward at (S-1, action 1),
// zero elsewhere. Initial state 0. Requires S >= 2.
TabularMdp riverswim(int num_states, int horizon,
                     const RiverswimParams& params = {});

TabularMdp build_env(const EnvSpec& spec);

std::string to_string(EnvSpec::Kind kind);
EnvSpec::Kind env_kind_from_string(const std::string& name);

}  // namespace ucbvi
