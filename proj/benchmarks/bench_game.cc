#include <benchmark/benchmark.h>

#include <vector>

#include "auctionlearn/bids.h"
#include "auctionlearn/clearing.h"
#include "auctionlearn/simulation.h"

namespace al = auctionlearn;

namespace {

al::StrategySet shifted_set(double a, double d, double x_max, std::size_t k) {
  std::vector<al::BidFunction> bids;
  for (std::size_t i = 0; i < k; ++i) {
    bids.emplace_back(al::QuadraticBid(a, d + 2.0 * static_cast<double>(i), x_max));
  }
  return al::StrategySet(std::move(bids));
}

}  // namespace

// One full repeated game on a three-bidder convex market, T = range(0).
static void BM_ConvexGame(benchmark::State& state) {
  const std::size_t k = 15;
  const auto horizon = static_cast<std::size_t>(state.range(0));
  al::MarketInstance market(15, al::PaymentRule::kMarginalPrice,
                            {shifted_set(0.1, 5, 10, k), shifted_set(0.2, 4, 10, k),
                             shifted_set(0.15, 6, 10, k)});
  const double eta = al::default_eta(al::FeedbackMode::kExtendedTrue, k, horizon, 2.0);
  al::GameConfig cfg{market,
                     std::vector<al::BidderLearning>(3, {al::FeedbackMode::kExtendedTrue, eta}),
                     horizon, false, {}};
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(al::run_auction_game(cfg, seed++));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ConvexGame)->Arg(100)->Arg(600)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
