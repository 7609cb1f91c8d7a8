#include "auctionlearn/feedback.h"

#include <random>

#include "auctionlearn/bids.h"
#include "auctionlearn/errors.h"
#include "doctest.h"

namespace auctionlearn {
namespace {

const std::vector<double> kW{0.2, 0.3, 0.5};
const std::vector<ActionSet> kChain{{0}, {0, 1}, {0, 1, 2}};

void check_close(const RevelationProbs& got, const std::vector<double>& want) {
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]));
}

TEST_CASE("revelation_simple") {
  check_close(revelation_simple(kW, {0, 1}, false), {0.5, 0.5, 0.5});
  check_close(revelation_simple(kW, {0, 1}, true), kW);
  check_close(revelation_simple(kW, {0, 1, 2}, false), {1, 1, 1});
}

TEST_CASE("revelation_general") {
  check_close(revelation_general(kW, {0, 1, 2}, {0, 1, 2}, kChain, false), {0.2, 0.5, 1.0});
  const std::vector<ActionSet> alone{{0}, {1}, {2}};
  check_close(revelation_general(kW, {0, 1, 2}, {0, 1, 2}, alone, false), kW);
  check_close(revelation_general(kW, {1}, {1, 2}, kChain, true), kW);
  CHECK_THROWS_AS(revelation_general(kW, {0, 1}, {1}, kChain, false), InvalidRevelation);
}

TEST_CASE("revelation_general reduces to revelation_simple on marginal-price families") {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(0.01, 1), d_dist(1, 30);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<BidFunction> bids;
    for (int k = 0; k < 4; ++k) bids.push_back(QuadraticBid{0.1, d_dist(gen), 10});
    const StrategySet set(bids);
    const double price = d_dist(gen);
    const ActionSet losing = losing_set_from_price(set, price);
    if (losing.empty()) continue;
    std::vector<double> w(4);
    double s = 0;
    for (auto& x : w) s += (x = u(gen));
    for (auto& x : w) x /= s;
    // Price feedback: every losing action certifies the whole losing set.
    std::vector<ActionSet> full(4);
    for (ActionIndex k : losing) full[k] = losing;
    const auto a = revelation_general(w, losing, losing, full, false);
    const auto b = revelation_simple(w, losing, false);
    for (int k = 0; k < 4; ++k) REQUIRE(a[k] == b[k]);
  }
}

TEST_CASE("revelation_heuristic") {
  check_close(revelation_heuristic(kW, {0, 1, 2}, kChain, {}, false), {0.2, 0.5, 1.0});
  check_close(revelation_heuristic(kW, {2}, kChain, {0}, false), {0.2, 0.3, 0.8});
  check_close(revelation_heuristic(kW, {2}, kChain, {0}, true), kW);
  const std::vector<double> heavy{0.6, 0.6, 0.6};
  CHECK(revelation_heuristic(heavy, {2}, kChain, {}, false)[2] == 1.0);
}

TEST_CASE("WinnerHistory") {
  WinnerHistory h(3);
  h.record(0, 5.0);
  CHECK(h.contains(0));
  h.record(1, 5.0);
  h.record(1, 0.0);
  CHECK(!h.contains(1));
  CHECK(!h.contains(2));
  CHECK(h.winners() == ActionSet{0});
}

TEST_CASE("AlphaAccumulator") {
  AlphaAccumulator bandit(3);
  for (int t = 0; t < 10; ++t) bandit.record(kW, kW);
  CHECK(bandit.finalize() == doctest::Approx(1.0));

  AlphaAccumulator full(3);
  for (int t = 0; t < 10; ++t) full.record(kW, std::vector<double>{1, 1, 1});
  CHECK(full.finalize() == doctest::Approx(3.0));

  AlphaAccumulator mixed(2);
  mixed.record(std::vector<double>{0.5, 0.5}, std::vector<double>{0.5, 1.0});
  CHECK(mixed.finalize() == doctest::Approx(4.0 / 3));

  AlphaAccumulator empty(2);
  CHECK_THROWS_AS(empty.finalize(), BadAlpha);
  CHECK_THROWS_AS(empty.record(kW, std::vector<double>{0.1, 0.3, 0.5}), InvalidRevelation);
}

TEST_CASE("validate_revelation") {
  CHECK_NOTHROW(validate_revelation(kW, kW));
  CHECK_THROWS_AS(validate_revelation(kW, std::vector<double>{0.2, 0.3, 1.1}), InvalidRevelation);
  CHECK_THROWS_AS(validate_revelation(kW, std::vector<double>{0.2, 0.3}), InvalidRevelation);
}

}  // namespace
}  // namespace auctionlearn
