#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "random_posterior.hpp"
#include "settag/setpred.hpp"

using namespace settag;

namespace {

const std::vector<double> kBetaGrid{0.25, 0.5, 1.0, 2.0, 4.0};

double best_subset_utility(const Posterior& p, const UtilityConfig& cfg) {
  const std::size_t s = p.size();
  double best = 0.0;
  std::vector<TagId> subset;
  for (std::uint32_t mask = 1; mask < (1u << s); ++mask) {
    subset.clear();
    for (std::size_t t = 0; t < s; ++t) {
      if (mask >> t & 1u) subset.push_back(static_cast<TagId>(t));
    }
    best = std::max(best, expected_utility(p, subset, cfg));
  }
  return best;
}

}  // namespace

TEST_SUITE("setpred") {
  TEST_CASE("set-size discount values") {
    for (std::size_t s : {2u, 3u, 10u, 24u}) {
      for (double beta : {0.001, 0.5, 1.0, 64.0}) {
        const UtilityConfig cfg(beta, s);
        CHECK(g_beta(1, cfg) == 1.0);
        CHECK(g_beta(s, cfg) == 0.0);
      }
    }
    CHECK(std::abs(g_beta(2, UtilityConfig(2.0, 4)) - 8.0 / 9.0) <= 1e-15);
    CHECK(g_beta(3, UtilityConfig(1.0, 5)) == doctest::Approx(0.5));
    CHECK_THROWS_AS(g_beta(0, UtilityConfig(1.0, 4)), std::out_of_range);
    CHECK_THROWS_AS(g_beta(5, UtilityConfig(1.0, 4)), std::out_of_range);
  }

  TEST_CASE("discount decreases in k and increases in beta") {
    for (std::size_t k = 1; k < 10; ++k) CHECK(g_beta(k + 1, UtilityConfig(1.5, 10)) < g_beta(k, UtilityConfig(1.5, 10)));
    for (std::size_t k = 2; k < 10; ++k) {
      for (std::size_t b = 1; b < kBetaGrid.size(); ++b) {
        CHECK(g_beta(k, UtilityConfig(kBetaGrid[b], 10)) > g_beta(k, UtilityConfig(kBetaGrid[b - 1], 10)));
      }
    }
  }

  TEST_CASE("configuration limits") {
    CHECK_THROWS_AS(UtilityConfig(0.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(UtilityConfig(-1.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(UtilityConfig(kMaxBeta * 2, 4), std::invalid_argument);
    CHECK_THROWS_AS(UtilityConfig(std::numeric_limits<double>::infinity(), 4), std::invalid_argument);
    CHECK_THROWS_AS(UtilityConfig(std::nan(""), 4), std::invalid_argument);
    CHECK_THROWS_AS(UtilityConfig(1.0, 0), std::invalid_argument);
    CHECK_NOTHROW(UtilityConfig(kMinBeta, 1));
    CHECK_NOTHROW(UtilityConfig(kMaxBeta, 2));
  }

  TEST_CASE("utility examples") {
    const UtilityConfig cfg(1.0, 4);
    CHECK(utility(TagId{3}, PredictionSet{{0, 1}, 0.0}, cfg) == 0.0);
    CHECK(utility(TagId{0}, PredictionSet{{0}, 0.0}, cfg) == 1.0);
    CHECK(utility(TagId{1}, PredictionSet{{0, 1}, 0.0}, cfg) == doctest::Approx(2.0 / 3.0));
    CHECK(utility(std::nullopt, PredictionSet{{0, 1}, 0.0}, cfg) == 0.0);
  }

  TEST_CASE("covering supersets never score higher") {
    std::mt19937_64 rng(5);
    for (int n = 0; n < 300; ++n) {
      const std::size_t s = 2 + n % 9;
      const UtilityConfig cfg(kBetaGrid[n % kBetaGrid.size()], s);
      std::vector<TagId> all(s);
      std::iota(all.begin(), all.end(), TagId{0});
      std::shuffle(all.begin(), all.end(), rng);
      const std::size_t a = 1 + rng() % s;
      const std::size_t b = a + rng() % (s - a + 1);
      const PredictionSet small{{all.begin(), all.begin() + a}, 0.0};
      const PredictionSet big{{all.begin(), all.begin() + b}, 0.0};
      const TagId gold = all[rng() % a];
      CHECK(utility(gold, small, cfg) >= utility(gold, big, cfg));
      for (TagId g = 0; g < s; ++g) {
        const double u = utility(g, big, cfg);
        CHECK(u >= 0.0);
        CHECK(u <= 1.0);
      }
    }
  }

  TEST_CASE("expected utility examples") {
    const Posterior p{{0.5, 0.3, 0.1, 0.1}};
    const UtilityConfig cfg(1.0, 4);
    const std::vector<TagId> pair{0, 1}, all{0, 1, 2, 3}, top{0}, dup{1, 1};
    CHECK(expected_utility(p, pair, cfg) == doctest::Approx(8.0 / 15.0));
    CHECK(expected_utility(p, all, cfg) == 0.0);
    CHECK(expected_utility(p, top, cfg) == 0.5);
    CHECK_THROWS_AS(expected_utility(p, std::vector<TagId>{}, cfg), std::invalid_argument);
    CHECK_THROWS_AS(expected_utility(p, dup, cfg), std::invalid_argument);
  }

  TEST_CASE("ubop examples") {
    const UtilityConfig cfg(1.0, 4);
    auto set = ubop(Posterior{{1.0, 0.0, 0.0, 0.0}}, cfg);
    CHECK(set.tags == std::vector<TagId>{0});
    CHECK(set.expected_utility == 1.0);

    set = ubop(Posterior{{0.5, 0.3, 0.1, 0.1}}, cfg);
    CHECK(set.tags == std::vector<TagId>{0, 1});
    CHECK(set.expected_utility == doctest::Approx(8.0 / 15.0).epsilon(1e-12));

    set = ubop(Posterior{{0.25, 0.25, 0.25, 0.25}}, cfg);
    CHECK(set.tags == std::vector<TagId>{0, 1});
    CHECK(set.expected_utility == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    set = ubop(Posterior{{0.1, 0.3, 0.5, 0.1}}, cfg);
    CHECK(set.tags == std::vector<TagId>{2, 1});

    set = ubop(Posterior{{1.0}}, UtilityConfig(1.0, 1));
    CHECK(set.tags == std::vector<TagId>{0});
    CHECK(set.expected_utility == 1.0);

    CHECK_THROWS_AS(ubop(Posterior{{0.5, 0.5}}, cfg), std::invalid_argument);
  }

  TEST_CASE("argmax examples") {
    CHECK(argmax_tag(Posterior{{0.2, 0.7, 0.1}}) == 1);
    CHECK(argmax_tag(Posterior{{0.25, 0.25, 0.25, 0.25}}) == 0);
    CHECK(rank_tags(Posterior{{0.2, 0.4, 0.2, 0.2}}) == std::vector<TagId>{1, 0, 2, 3});
  }

  TEST_CASE("ubop is Bayes-optimal over all subsets") {
    std::mt19937_64 rng(99);
    for (std::size_t s = 2; s <= 12; ++s) {
      const int draws = s <= 10 ? 1000 : 200;
      for (int n = 0; n < draws; ++n) {
        const auto p = testing::random_posterior(rng, s);
        const UtilityConfig cfg(kBetaGrid[n % kBetaGrid.size()], s);
        const auto set = ubop(p, cfg);
        const double best = best_subset_utility(p, cfg);
        CHECK(std::abs(set.expected_utility - best) <= 1e-12);
        CHECK(std::abs(expected_utility(p, set.tags, cfg) - set.expected_utility) <= 1e-12);
      }
    }
  }

  TEST_CASE("sets are prefixes of the ranking and contain the argmax") {
    std::mt19937_64 rng(7);
    for (int n = 0; n < 2000; ++n) {
      const std::size_t s = 1 + n % 15;
      const auto p = testing::random_posterior(rng, s);
      const auto set = ubop(p, UtilityConfig(kBetaGrid[n % kBetaGrid.size()], s));
      const auto order = rank_tags(p);
      REQUIRE(!set.tags.empty());
      CHECK(std::equal(set.tags.begin(), set.tags.end(), order.begin()));
      CHECK(set.contains(argmax_tag(p)));
      CHECK(set.expected_utility >= 0.0);
      CHECK(set.expected_utility <= 1.0);
    }
  }

  TEST_CASE("tiny beta gives singletons") {
    std::mt19937_64 rng(8);
    int checked = 0;
    for (int n = 0; n < 2000; ++n) {
      const std::size_t s = 2 + n % 20;
      const auto p = testing::random_posterior(rng, s);
      const auto order = rank_tags(p);
      if (p[order[0]] - p[order[1]] <= 1e-6) continue;
      CHECK(ubop(p, UtilityConfig(0.001, s)).tags.size() == 1);
      ++checked;
    }
    CHECK(checked > 1000);
  }

  TEST_CASE("set size grows with beta") {
    std::mt19937_64 rng(9);
    for (int n = 0; n < 1000; ++n) {
      const std::size_t s = 2 + n % 23;
      const auto p = testing::random_posterior(rng, s);
      std::size_t prev = 0;
      for (double beta : kBetaGrid) {
        const auto size = ubop(p, UtilityConfig(beta, s)).tags.size();
        CHECK(size >= prev);
        prev = size;
      }
    }
  }

  TEST_CASE("permuting the posterior permutes the set") {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> unit(0.01, 1.0);
    for (int n = 0; n < 500; ++n) {
      const std::size_t s = 2 + n % 10;
      std::vector<double> w(s);
      double z = 0.0;
      for (auto& x : w) z += (x = unit(rng));
      for (auto& x : w) x /= z;
      std::vector<std::size_t> perm(s);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      std::vector<double> pw(s);
      for (std::size_t i = 0; i < s; ++i) pw[perm[i]] = w[i];
      const UtilityConfig cfg(kBetaGrid[n % kBetaGrid.size()], s);
      const auto a = ubop(Posterior{w}, cfg), b = ubop(Posterior{pw}, cfg);
      REQUIRE(a.tags.size() == b.tags.size());
      for (std::size_t k = 0; k < a.tags.size(); ++k) CHECK(perm[a.tags[k]] == b.tags[k]);
      CHECK(a.expected_utility == doctest::Approx(b.expected_utility).epsilon(1e-12));
    }
  }
}
