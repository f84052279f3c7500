#include "ucbvi/envs.hpp"

#include <stdexcept>

#include "ucbvi/rng.hpp"

namespace ucbvi {

TabularMdp random_mdp(int num_states, int num_actions, int horizon,
                      std::uint64_t seed) {
  if (num_states < 1 || num_actions < 1 || horizon < 1)
    throw std::invalid_argument("random_mdp: S, A, H must all be >= 1");
  const int S = num_states, A = num_actions;
  TabularMdp mdp;
  mdp.num_states = S;
  mdp.num_actions = A;
  mdp.horizon = horizon;
  mdp.initial_state = 0;
  mdp.transition.resize(static_cast<std::size_t>(S) * A * S);
  mdp.reward.resize(static_cast<std::size_t>(S) * A);
  RngStream stream(seed);
  for (int x = 0; x < S; ++x) {
    for (int a = 0; a < A; ++a) {
      double* row =
          mdp.transition.data() + (static_cast<std::size_t>(x) * A + a) * S;
      double sum = 0.0;
      for (int y = 0; y < S; ++y) {
        row[y] = stream.exponential();
        sum += row[y];
      }
      for (int y = 0; y < S; ++y) row[y] /= sum;
    }
  }
  for (int x = 0; x < S; ++x)
    for (int a = 0; a < A; ++a)
      mdp.reward[static_cast<std::size_t>(x) * A + a] = stream.uniform01();
  return mdp;
}

namespace {

// Nudges the diagonal entry until the row sums to exactly 1.0 in double
// arithmetic (summed in index order). Terminates immediately for the rows
// built here; bounded in any case.
void compensate_row(double* row, int size, int same) {
  for (int pass = 0; pass < 4; ++pass) {
    double sum = 0.0;
    for (int y = 0; y < size; ++y) sum += row[y];
    if (sum == 1.0) return;
    row[same] += 1.0 - sum;
  }
}

}  // namespace

TabularMdp riverswim(int num_states, int horizon,
                     const RiverswimParams& params) {
  if (num_states < 2) throw std::invalid_argument("riverswim: S must be >= 2");
  if (horizon < 1) throw std::invalid_argument("riverswim: H must be >= 1");
  const double f = params.forward_success_prob;
  const double b = params.backward_slip_prob;
  if (!(f >= 0.0 && b >= 0.0 && f + b <= 1.0))
    throw std::invalid_argument("riverswim: invalid transition probabilities");
  if (!(params.left_reward >= 0.0 && params.left_reward <= 1.0 &&
        params.right_reward >= 0.0 && params.right_reward <= 1.0))
    throw std::invalid_argument("riverswim: rewards must lie in [0,1]");

  const int S = num_states, A = 2;
  TabularMdp mdp;
  mdp.num_states = S;
  mdp.num_actions = A;
  mdp.horizon = horizon;
  mdp.initial_state = 0;
  mdp.transition.assign(static_cast<std::size_t>(S) * A * S, 0.0);
  mdp.reward.assign(static_cast<std::size_t>(S) * A, 0.0);

  auto row = [&](int x, int a) {
    return mdp.transition.data() + (static_cast<std::size_t>(x) * A + a) * S;
  };
  for (int x = 0; x < S; ++x) {
    // Action 0: move one state left, deterministically; stays at state 0.
    row(x, 0)[x > 0 ? x - 1 : 0] = 1.0;
    // Action 1: swim against the current.
    double* swim = row(x, 1);
    if (x == 0) {
      swim[1] = f;
      swim[0] = 1.0 - f;
    } else if (x == S - 1) {
      swim[x - 1] = b;
      swim[x] = 1.0 - b;
    } else {
      swim[x - 1] = b;
      swim[x + 1] = f;
      swim[x] = (1.0 - b) - f;
    }
    compensate_row(swim, S, x);
  }
  mdp.reward[0 * A + 0] = params.left_reward;
  mdp.reward[static_cast<std::size_t>(S - 1) * A + 1] = params.right_reward;
  return mdp;
}

TabularMdp build_env(const EnvSpec& spec) {
  switch (spec.kind) {
    case EnvSpec::Kind::random:
      return random_mdp(spec.num_states, spec.num_actions, spec.horizon,
                        spec.seed);
    case EnvSpec::Kind::riverswim:
      return riverswim(spec.num_states, spec.horizon, spec.riverswim_params);
  }
  throw std::invalid_argument("build_env: unknown environment kind");
}

std::string to_string(EnvSpec::Kind kind) {
  return kind == EnvSpec::Kind::random ? "random" : "riverswim";
}

EnvSpec::Kind env_kind_from_string(const std::string& name) {
  if (name == "random") return EnvSpec::Kind::random;
  if (name == "riverswim") return EnvSpec::Kind::riverswim;
  throw std::invalid_argument("unknown environment kind '" + name + "'");
}

}  // namespace ucbvi
