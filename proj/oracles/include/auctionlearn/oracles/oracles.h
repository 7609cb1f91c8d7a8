#pragma once

// Brute-force reference computations. These are deliberately slow and share
// no code path with the solvers they check; they back the test suites and
// the `verify` subcommand only.

#include <cstddef>
#include <span>
#include <vector>

#include "auctionlearn/bids.h"
#include "auctionlearn/learning.h"

namespace auctionlearn::oracles {

struct GridClearing {
  double price = 0.0;
  std::vector<double> allocation;
};

// Scans the price on a uniform grid from 0 and returns the first grid point
// whose aggregate supply reaches the demand.
GridClearing grid_clear_convex(std::span<const QuadraticBid> bids, double demand,
                               double step = 1e-5);

struct EnumeratedClearing {
  std::vector<std::size_t> prefixes;
  std::vector<double> allocation;
  double cost = 0.0;
  bool feasible = false;
};

// Recursively lists every joint prefix choice, then picks the cheapest,
// breaking near-ties (1e-9) by the smallest prefix vector.
EnumeratedClearing enumerate_discrete(std::span<const DiscreteBid> bids, double demand);

// True when sampling `points` uniform points on [0, x_max_k] plus both
// endpoints finds no x where j exceeds k by more than `slack`, and j's
// domain contains k's.
bool dominates_on_grid(const QuadraticBid& j, const QuadraticBid& k,
                       std::size_t points = 10000, double slack = 1e-9);

// Exact expectation and second moment of the extended estimator when the
// bidder samples its action from w. `losses` is the true loss vector;
// `all_losing` lists the actions that lose this round, every one of which
// reveals the whole set (the marginal-price structure). A nonzero
// `revelation_fault` f replaces the losing actions' r with (1 - f) w, below
// the valid range, so negative controls can break unbiasedness.
struct EstimatorMoments {
  std::vector<double> mean;
  std::vector<double> second_moment;
};

EstimatorMoments extended_moments(std::span<const double> w, std::span<const double> losses,
                                  const ActionSet& all_losing, double loser_loss,
                                  double revelation_fault = 0.0);

// Same for the bandit estimator.
EstimatorMoments bandit_moments(std::span<const double> w, std::span<const double> losses);

}  // namespace auctionlearn::oracles
