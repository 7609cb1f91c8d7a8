#include "auctionlearn/learning.h"

#include <cmath>
#include <numeric>
#include <random>

#include "auctionlearn/errors.h"
#include "auctionlearn/oracles/oracles.h"
#include "auctionlearn/rng.h"
#include "doctest.h"

namespace auctionlearn {
namespace {

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

TEST_CASE("mwu_update examples") {
  const auto w = mwu_update(std::vector<double>{0.5, 0.5}, std::vector<double>{1, 0}, std::log(2.0));
  CHECK(w[0] == doctest::Approx(1.0 / 3).epsilon(1e-14));
  CHECK(w[1] == doctest::Approx(2.0 / 3).epsilon(1e-14));

  const std::vector<double> start{0.1, 0.2, 0.7};
  for (const auto& loss : {std::vector<double>{0, 0, 0}, std::vector<double>{3.5, 3.5, 3.5}}) {
    const auto same = mwu_update(start, loss, 0.3);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(same[i] - start[i]) <= 1e-12);
  }
  CHECK_THROWS_AS(mwu_update(start, std::vector<double>{1, 1}, 0.1), ConfigError);
}

TEST_CASE("mwu_update survives huge estimates") {
  const auto w = mwu_update(std::vector<double>{0.5, 0.5}, std::vector<double>{1e6, 0}, 1.0);
  CHECK(w[0] == 0.0);
  CHECK(w[1] == 1.0);
}

TEST_CASE("mwu_update preserves the simplex and ignores shifts") {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(0, 1), big(0, 50);
  std::uniform_int_distribution<int> k_dist(2, 15);
  for (int trial = 0; trial < 2000; ++trial) {
    const int k = k_dist(gen);
    std::vector<double> w(k);
    for (auto& x : w) x = u(gen) + 1e-3;
    const double s = sum(w);
    for (auto& x : w) x /= s;
    std::vector<double> loss(k), shifted(k);
    const double c = big(gen);
    for (int i = 0; i < k; ++i) {
      loss[i] = big(gen);
      shifted[i] = loss[i] + c;
    }
    const double eta = u(gen);
    const auto a = mwu_update(w, loss, eta);
    const auto b = mwu_update(w, shifted, eta);
    REQUIRE(std::abs(sum(a) - 1.0) <= 1e-12);
    for (int i = 0; i < k; ++i) {
      REQUIRE(a[i] >= 0.0);
      REQUIRE(std::abs(a[i] - b[i]) <= 1e-12);
    }
  }
}

TEST_CASE("sample_action") {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) REQUIRE(sample_action(std::vector<double>{1, 0, 0}, rng) == 0);
  for (int i = 0; i < 1000; ++i) REQUIRE(sample_action(std::vector<double>{0, 0, 1}, rng) == 2);
  std::size_t hits = 0;
  for (int i = 0; i < 100000; ++i) hits += sample_action(std::vector<double>{0.5, 0.5}, rng) == 0;
  CHECK(hits >= 49000);
  CHECK(hits <= 51000);

  Rng a(77), b(77);
  const std::vector<double> w{0.2, 0.3, 0.5};
  for (int i = 0; i < 1000; ++i) REQUIRE(sample_action(w, a) == sample_action(w, b));
}

TEST_CASE("estimate_full and estimate_bandit") {
  CHECK(estimate_full(std::vector<double>{0.2, 0.7}) == std::vector<double>{0.2, 0.7});
  CHECK(estimate_full(std::vector<double>{0, 0}) == std::vector<double>{0, 0});
  CHECK(estimate_full(std::vector<double>{0.4}) == std::vector<double>{0.4});

  const auto b = estimate_bandit(1, 0.6, std::vector<double>{0.25, 0.75});
  CHECK(b[0] == 0.0);
  CHECK(b[1] == doctest::Approx(0.8));
  CHECK(estimate_bandit(1, 0.0, std::vector<double>{0.25, 0.75}) == std::vector<double>{0, 0});
  CHECK(estimate_bandit(0, 0.3, std::vector<double>{1.0})[0] == doctest::Approx(0.3));
  CHECK_THROWS_AS(estimate_bandit(0, 0.3, std::vector<double>{0.0, 1.0}), InvalidRevelation);
}

TEST_CASE("estimate_extended examples") {
  const std::vector<double> w{0.2, 0.3, 0.5};
  const auto lost = estimate_extended(Lost{0, {0, 1}}, 0.4, std::vector<double>{0.5, 0.5, 0.5}, w);
  CHECK(lost[0] == doctest::Approx(0.8));
  CHECK(lost[1] == doctest::Approx(0.8));
  CHECK(lost[2] == 0.0);

  const auto won = estimate_extended(Won{2, 0.2}, 0.4, w, w);
  CHECK(won[0] == 0.0);
  CHECK(won[1] == 0.0);
  CHECK(won[2] == doctest::Approx(0.4));

  const auto everything = estimate_extended(Lost{1, {0, 1, 2}}, 0.4, std::vector<double>{1, 1, 1}, w);
  for (double x : everything) CHECK(x == doctest::Approx(0.4));

  CHECK_THROWS_AS(estimate_extended(Lost{2, {0, 1}}, 0.4, std::vector<double>{0.5, 0.5, 0.5}, w),
                  InvalidRevelation);
  CHECK_THROWS_AS(estimate_extended(Lost{0, {0, 1}}, 0.4, std::vector<double>{0.1, 0.5, 0.5}, w),
                  InvalidRevelation);
}

TEST_CASE("estimate_extended with bandit revelation is the bandit estimator") {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(0.01, 1);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> w(5);
    for (auto& x : w) x = u(gen);
    const double s = sum(w);
    for (auto& x : w) x /= s;
    const std::size_t k = trial % 5;
    const double loss = u(gen);
    REQUIRE(estimate_extended(Lost{k, {k}}, loss, w, w) == estimate_bandit(k, loss, w));
    REQUIRE(estimate_extended(Won{k, loss}, 0.9, w, w) == estimate_bandit(k, loss, w));
  }
}

TEST_CASE("extended estimator is unbiased and beats bandit variance") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> k_dist(2, 8);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = k_dist(gen);
    std::vector<double> w(k);
    for (auto& x : w) x = u(gen) + 1e-3;
    const double s = sum(w);
    for (auto& x : w) x /= s;
    const double loser_loss = u(gen);
    ActionSet losing;
    std::vector<double> losses(k);
    for (int i = 0; i < k; ++i) {
      if (u(gen) < 0.5) {
        losing.push_back(i);
        losses[i] = loser_loss;
      } else {
        losses[i] = u(gen);
      }
    }
    const auto ext = oracles::extended_moments(w, losses, losing, loser_loss);
    const auto ban = oracles::bandit_moments(w, losses);
    for (int i = 0; i < k; ++i) {
      REQUIRE(std::abs(ext.mean[i] - losses[i]) <= 1e-12);
      REQUIRE(std::abs(ban.mean[i] - losses[i]) <= 1e-12);
      REQUIRE(ext.second_moment[i] <= ban.second_moment[i] + 1e-12);
    }
  }
}

TEST_CASE("default_eta") {
  CHECK(default_eta(FeedbackMode::kBandit, 15, 600) ==
        doctest::Approx(std::sqrt(2 * std::log(15.0) / 9000)));
  CHECK(default_eta(FeedbackMode::kBandit, 15, 600) == doctest::Approx(0.02453).epsilon(1e-4));
  CHECK(default_eta(FeedbackMode::kExtendedTrue, 15, 600, 1.0) ==
        default_eta(FeedbackMode::kBandit, 15, 600));
  CHECK(default_eta(FeedbackMode::kExtendedTrue, 15, 600, 15.0) ==
        doctest::Approx(std::sqrt(2 * std::log(15.0) / 600)));
  CHECK(default_eta(FeedbackMode::kFullInformation, 15, 600) ==
        doctest::Approx(std::sqrt(8 * std::log(15.0) / 600)));
  CHECK_THROWS_AS(default_eta(FeedbackMode::kExtendedTrue, 15, 600, 20.0), BadAlpha);
  CHECK_THROWS_AS(default_eta(FeedbackMode::kExtendedHeuristic, 15, 600, 0.5), BadAlpha);
  CHECK_THROWS_AS(default_eta(FeedbackMode::kBandit, 1, 600), ConfigError);
}

TEST_CASE("Learner starts uniform and moves away from losses") {
  Learner learner(4, 0.5);
  for (double x : learner.strategy()) CHECK(x == doctest::Approx(0.25));
  learner.update(std::vector<double>{1, 0, 0, 0});
  CHECK(learner.strategy()[0] < learner.strategy()[1]);
  CHECK(std::abs(sum(learner.strategy()) - 1.0) <= 1e-12);
  // Many large updates must not underflow the remaining mass.
  for (int t = 0; t < 600; ++t) learner.update(std::vector<double>{0, 40, 40, 40});
  CHECK(learner.strategy()[0] == doctest::Approx(1.0));
}

}  // namespace
}  // namespace auctionlearn
