#include <benchmark/benchmark.h>

#include <vector>

#include "auctionlearn/clearing.h"
#include "auctionlearn/rng.h"

namespace al = auctionlearn;

static void BM_ClearConvex(benchmark::State& state) {
  al::Rng rng(7);
  std::vector<al::QuadraticBid> bids;
  double cap = 0.0;
  for (int i = 0; i < state.range(0); ++i) {
    bids.emplace_back(rng.uniform(0.05, 0.5), rng.uniform(1, 30), rng.uniform(1, 20));
    cap += bids.back().x_max;
  }
  const double q = 0.6 * cap;
  for (auto _ : state) benchmark::DoNotOptimize(al::clear_convex(bids, q));
}
BENCHMARK(BM_ClearConvex)->Arg(3)->Arg(10)->Arg(100);

// Enumeration is exponential in the bidder count, so keep n small.
static void BM_ClearDiscrete(benchmark::State& state) {
  al::Rng rng(11);
  std::vector<al::DiscreteBid> bids;
  double cap = 0.0;
  for (int i = 0; i < state.range(0); ++i) {
    std::vector<al::BidStep> steps;
    for (int j = 0; j < 2; ++j) steps.push_back({rng.uniform(5, 20), rng.uniform(10, 60)});
    bids.emplace_back(steps);
    cap += bids.back().capacity();
  }
  const double q = 0.5 * cap;
  for (auto _ : state) benchmark::DoNotOptimize(al::clear_discrete(bids, q));
}
BENCHMARK(BM_ClearDiscrete)->DenseRange(2, 8, 2);
