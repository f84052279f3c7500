#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "ucbvi/stats.hpp"

namespace ucbvi {

enum class BonusFamily { chernoff_hoeffding, bernstein_freedman };

// "refined" is the tightened constant set; "original" follows the constants
// of Azar et al. (2017). The two sets differ only in multiplicative factors.
enum class ConstantSet { refined, original };

struct BonusConstants {
  double ch_scale;          // leading constant of the count-only bonus
  double bf_variance_scale; // under the square root of the variance term
  double bf_count_scale;    // multiplies H L / max{n - 1, 1}
  double bf_next_stage_scale;  // under the square root of the next-stage term
  double bf_bprime_scale;   // inside the next-stage correction b'
};

// The original Chernoff-Hoeffding constant 7 is reconstructed from the 7/2
// bonus improvement ratio against the refined constant 2.
inline constexpr BonusConstants kRefinedConstants{2.0, 4.0, 7.0 / 3.0, 4.0,
                                                  84.0 * 84.0};
inline constexpr BonusConstants kOriginalConstants{7.0, 8.0, 14.0 / 3.0, 8.0,
                                                   100.0 * 100.0};

inline const BonusConstants& constants_for(ConstantSet set) {
  return set == ConstantSet::refined ? kRefinedConstants : kOriginalConstants;
}

// Confidence log term L = ln(5 H S A T / delta), shared by every bonus and
// bound. T is the planned total number of interactions K * H, fixed at
// experiment start; L is computed once, not per episode.
double log_term(int horizon, int num_states, int num_actions,
                std::int64_t total_steps, double delta);

struct BonusConfig {
  BonusFamily family = BonusFamily::bernstein_freedman;
  ConstantSet constant_set = ConstantSet::refined;
  double delta = 0.05;
  double log_term = 0.0;  // L
  int horizon = 0;
  int num_states = 0;
  int num_actions = 0;
  std::int64_t total_steps = 0;  // T

  const BonusConstants& c() const { return constants_for(constant_set); }

  static BonusConfig make(BonusFamily family, ConstantSet set, int horizon,
                          int num_states, int num_actions,
                          std::int64_t total_steps, double delta);
};

// Count-only bonus c * H * L / sqrt(max{n, 1}), applied at every stage.
double bonus_ch(std::int64_t n_sa, const BonusConfig& cfg);

// Next-stage correction b'(y) = min{ c * H^3 S^2 A L^2 / max{1, n}, H^2 }
// where n counts visits to state y at the relevant stage.
double bprime(std::int64_t stage_state_count, const BonusConfig& cfg);

// Three-term decomposition of the variance-aware bonus, exposed so each term
// can be checked against hand arithmetic.
struct BfBonusTerms {
  double variance_term = 0.0;    // sqrt(c1 L sigma^2 / max{n, 1})
  double count_term = 0.0;       // c2 H L / max{n - 1, 1}
  double next_stage_term = 0.0;  // sqrt(c3 sum_y phat(y) b'(y) / max{n, 1})
  double total() const { return variance_term + count_term + next_stage_term; }
};

// Kernel on precomputed inputs: sigma2 is the empirical next-state value
// variance, phat_row the empirical transition row, next_stage_counts the
// per-state visit counts at stage h+1.
BfBonusTerms bonus_bf_terms(double sigma2, std::span<const double> phat_row,
                            std::span<const std::int64_t> next_stage_counts,
                            std::int64_t n_sa, const BonusConfig& cfg);

// Variance-aware bonus at 0-based stage h. Zero at the last stage: rewards
// are deterministic and known, so no exploration is needed there.
double bonus_bf(const VisitCounts& counts, std::span<const double> v_next,
                int x, int a, int h, const BonusConfig& cfg);

std::string to_string(BonusFamily family);
std::string to_string(ConstantSet set);

}  // namespace ucbvi
