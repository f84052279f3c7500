#include "ucbvi/stats.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ucbvi {

void VisitCounts::update(int x, int a, int y, int h) {
  if (x < 0 || x >= num_states || y < 0 || y >= num_states || a < 0 ||
      a >= num_actions || h < 0 || h >= horizon)
    throw std::out_of_range("VisitCounts::update: index out of range");
  ++n_sa[static_cast<std::size_t>(x) * num_actions + a];
  ++n_say[(static_cast<std::size_t>(x) * num_actions + a) * num_states + y];
  ++n_stage_state[static_cast<std::size_t>(h) * num_states + x];
}

void VisitCounts::check_consistent(std::int64_t episodes_completed) const {
  for (int x = 0; x < num_states; ++x)
    for (int a = 0; a < num_actions; ++a) {
      std::int64_t sum = 0;
      for (int y = 0; y < num_states; ++y) sum += triple_count(x, a, y);
      if (sum != pair_count(x, a))
        throw std::logic_error(
            "VisitCounts: sum_y N(x,a,y) != N(x,a) at (x=" + std::to_string(x) +
            ", a=" + std::to_string(a) + ")");
    }
  for (int h = 0; h < horizon; ++h) {
    std::int64_t sum = 0;
    for (int x = 0; x < num_states; ++x) sum += stage_state_count(h, x);
    if (sum != episodes_completed)
      throw std::logic_error("VisitCounts: stage " + std::to_string(h) +
                             " state counts sum to " + std::to_string(sum) +
                             ", expected " + std::to_string(episodes_completed));
  }
}

void empirical_transition_row(const VisitCounts& counts, int x, int a,
                              std::span<double> out) {
  const std::int64_t n = counts.pair_count(x, a);
  const double denom = static_cast<double>(n < 1 ? 1 : n);
  for (int y = 0; y < counts.num_states; ++y)
    out[y] = static_cast<double>(counts.triple_count(x, a, y)) / denom;
}

std::vector<double> empirical_transition(const VisitCounts& counts, int x,
                                         int a) {
  std::vector<double> row(counts.num_states, 0.0);
  empirical_transition_row(counts, x, a, row);
  return row;
}

double empirical_next_value_variance(std::span<const double> p_row,
                                     std::span<const double> values) {
  double mean = 0.0, second_moment = 0.0;
  for (std::size_t y = 0; y < p_row.size(); ++y) {
    mean += p_row[y] * values[y];
    second_moment += p_row[y] * values[y] * values[y];
  }
  const double variance = second_moment - mean * mean;
  // Popoviciu: the variance under a probability row is at most range^2 / 4.
  assert(([&] {
    double total = 0.0;
    double lo = values.empty() ? 0.0 : values[0];
    double hi = lo;
    for (double p : p_row) total += p;
    for (double v : values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    return std::abs(total - 1.0) > 1e-9 ||
           variance <= (hi - lo) * (hi - lo) / 4.0 + 1e-12;
  }()));
  return variance > 0.0 ? variance : 0.0;
}

double bernstein_bernoulli_bound(double p, std::int64_t n, double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("bernstein_bernoulli_bound: delta must be in (0,1)");
  if (n < 1)
    throw std::invalid_argument("bernstein_bernoulli_bound: n must be >= 1");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("bernstein_bernoulli_bound: p must be in [0,1]");
  const double log_term = std::log(2.0 / delta);
  const double dn = static_cast<double>(n);
  return std::sqrt(2.0 * p * (1.0 - p) * log_term / dn) +
         2.0 * log_term / (3.0 * dn);
}

}  // namespace ucbvi
