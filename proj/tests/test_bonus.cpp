#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ucbvi/bonus.hpp"
#include "ucbvi/rng.hpp"

using namespace ucbvi;

namespace {

// Config with a hand-picked L, bypassing the factory (which derives L from
// the dimensions); keeps the arithmetic checks exact.
BonusConfig manual_config(BonusFamily family, ConstantSet set, int H, int S,
                          int A, double L) {
  BonusConfig cfg;
  cfg.family = family;
  cfg.constant_set = set;
  cfg.horizon = H;
  cfg.num_states = S;
  cfg.num_actions = A;
  cfg.log_term = L;
  return cfg;
}

}  // namespace

TEST_CASE("log term evaluates ln(5HSAT/delta)") {
  CHECK(std::abs(log_term(2, 3, 3, 20, 0.1) - std::log(18000.0)) < 1e-12);
}

TEST_CASE("factory-made configs recompute L consistently") {
  const BonusConfig cfg = BonusConfig::make(BonusFamily::bernstein_freedman,
                                            ConstantSet::refined, 5, 3, 3,
                                            50000, 0.05);
  CHECK(std::abs(cfg.log_term -
                 log_term(cfg.horizon, cfg.num_states, cfg.num_actions,
                          cfg.total_steps, cfg.delta)) < 1e-12);
}

TEST_CASE("log term is strictly increasing in T") {
  double prev = log_term(3, 2, 2, 1, 0.05);
  for (std::int64_t t = 2; t <= 1 << 20; t *= 2) {
    const double L = log_term(3, 2, 2, t, 0.05);
    CHECK(L > prev);
    prev = L;
  }
}

TEST_CASE("log term rejects bad arguments") {
  CHECK_THROWS_AS(log_term(0, 1, 1, 1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(log_term(1, 1, 1, 1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(log_term(1, 1, 1, 1, 1.0), std::invalid_argument);
}

TEST_CASE("count-only bonus arithmetic") {
  const BonusConfig refined =
      manual_config(BonusFamily::chernoff_hoeffding, ConstantSet::refined, 5, 2, 2, 1.0);
  CHECK(bonus_ch(0, refined) == doctest::Approx(10.0));  // max{0,1} denominator
  CHECK(bonus_ch(4, refined) == doctest::Approx(5.0));
  const BonusConfig original =
      manual_config(BonusFamily::chernoff_hoeffding, ConstantSet::original, 5, 2, 2, 1.0);
  CHECK(bonus_ch(4, refined) / bonus_ch(4, original) == doctest::Approx(2.0 / 7.0));
}

TEST_CASE("count-only bonus is monotone nonincreasing in the count") {
  const BonusConfig cfg = BonusConfig::make(BonusFamily::chernoff_hoeffding,
                                            ConstantSet::refined, 4, 3, 2,
                                            10000, 0.05);
  double prev = bonus_ch(0, cfg);
  for (std::int64_t n = 1; n <= 1 << 16; n *= 2) {
    const double b = bonus_ch(n, cfg);
    CHECK(b <= prev);
    prev = b;
  }
}

TEST_CASE("next-stage correction clips at H^2 and vanishes with data") {
  const BonusConfig cfg = manual_config(BonusFamily::bernstein_freedman,
                                        ConstantSet::refined, 2, 2, 1, 1.0);
  CHECK(bprime(0, cfg) == doctest::Approx(4.0));  // min{84^2*8*4, 4} = H^2
  double prev = bprime(0, cfg);
  for (std::int64_t n = 1; n <= 1 << 24; n *= 4) {
    const double b = bprime(n, cfg);
    CHECK(b <= prev);
    prev = b;
  }
  CHECK(bprime(1LL << 50, cfg) < 1e-5);
}

TEST_CASE("variance-aware bonus term-by-term hand arithmetic") {
  // H=2, S=2, A=1, L=1, n=4, sigma^2=1, phat=[1,0], one visit to state 0 at
  // the next stage. Refined terms: A=1, B=14/9, C=2, total 41/9.
  const BonusConfig refined = manual_config(BonusFamily::bernstein_freedman,
                                            ConstantSet::refined, 2, 2, 1, 1.0);
  const std::vector<double> phat{1.0, 0.0};
  const std::vector<std::int64_t> next_counts{1, 0};
  const BfBonusTerms terms = bonus_bf_terms(1.0, phat, next_counts, 4, refined);
  CHECK(terms.variance_term == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(terms.count_term == doctest::Approx(14.0 / 9.0).epsilon(1e-15));
  CHECK(terms.next_stage_term == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(terms.total() == doctest::Approx(41.0 / 9.0).epsilon(1e-15));

  const BonusConfig original = manual_config(BonusFamily::bernstein_freedman,
                                             ConstantSet::original, 2, 2, 1, 1.0);
  const BfBonusTerms orig = bonus_bf_terms(1.0, phat, next_counts, 4, original);
  // The refined variance term improves on the original one by sqrt(2).
  CHECK(terms.variance_term / orig.variance_term ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(orig.count_term == doctest::Approx(28.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("variance-aware bonus is zero at the last stage") {
  VisitCounts counts(2, 1, 2);
  counts.update(0, 0, 1, 0);
  counts.update(1, 0, 1, 1);
  const BonusConfig cfg = BonusConfig::make(BonusFamily::bernstein_freedman,
                                            ConstantSet::refined, 2, 2, 1, 100,
                                            0.05);
  const std::vector<double> v_next{0.0, 0.0};
  CHECK(bonus_bf(counts, v_next, 0, 0, cfg.horizon - 1, cfg) == 0.0);
  CHECK(bonus_bf(counts, v_next, 0, 0, 0, cfg) > 0.0);
}

TEST_CASE("with zero variance and saturated next-stage counts only the count term remains") {
  const BonusConfig cfg = manual_config(BonusFamily::bernstein_freedman,
                                        ConstantSet::refined, 5, 3, 2, 2.0);
  const std::vector<double> phat{0.5, 0.25, 0.25};
  const std::vector<std::int64_t> huge(3, 1LL << 60);
  const BfBonusTerms terms = bonus_bf_terms(0.0, phat, huge, 100, cfg);
  CHECK(terms.variance_term == 0.0);
  CHECK(terms.next_stage_term < 1e-5);
  CHECK(std::abs(terms.total() - terms.count_term) < 1e-5);
}

TEST_CASE("refined bonuses never exceed original ones") {
  RngStream rng(2718);
  const BonusConfig refined = BonusConfig::make(
      BonusFamily::bernstein_freedman, ConstantSet::refined, 6, 4, 3, 60000, 0.1);
  BonusConfig original = refined;
  original.constant_set = ConstantSet::original;
  for (int trial = 0; trial < 200; ++trial) {
    const int S = 4;
    std::vector<double> phat(S);
    std::vector<std::int64_t> next_counts(S);
    double sum = 0.0;
    for (int y = 0; y < S; ++y) {
      phat[y] = rng.exponential();
      sum += phat[y];
      next_counts[y] = static_cast<std::int64_t>(rng.next_u64() % 1000);
    }
    for (int y = 0; y < S; ++y) phat[y] /= sum;
    const double sigma2 = 9.0 * rng.uniform01();
    const std::int64_t n = static_cast<std::int64_t>(rng.next_u64() % 5000);
    CHECK(bonus_bf_terms(sigma2, phat, next_counts, n, refined).total() <=
          bonus_bf_terms(sigma2, phat, next_counts, n, original).total());
    CHECK(bonus_ch(n, refined) <= bonus_ch(n, original));
  }
}

TEST_CASE("variance-aware bonus is monotone nonincreasing in the pair count") {
  const BonusConfig cfg = BonusConfig::make(
      BonusFamily::bernstein_freedman, ConstantSet::refined, 5, 3, 2, 50000, 0.05);
  const std::vector<double> phat{0.2, 0.5, 0.3};
  const std::vector<std::int64_t> next_counts{3, 14, 9};
  double prev = bonus_bf_terms(2.0, phat, next_counts, 0, cfg).total();
  for (std::int64_t n = 1; n <= 1 << 18; n *= 2) {
    const double b = bonus_bf_terms(2.0, phat, next_counts, n, cfg).total();
    CHECK(b <= prev);
    prev = b;
  }
}
