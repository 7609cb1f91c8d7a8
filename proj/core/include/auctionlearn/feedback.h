#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "auctionlearn/bids.h"

namespace auctionlearn {

// r[k]: probability that the loss of action k is discovered this round.
// Always w[k] <= r[k] <= 1.
using RevelationProbs = std::vector<double>;

// Throws InvalidRevelation unless w[k] - 1e-12 <= r[k] <= 1 + 1e-12.
void validate_revelation(std::span<const double> w, std::span<const double> r);

// Marginal-price markets: each losing action reveals the whole losing set,
// so r[k] = sum_{j in L_t} w[j] for losing k.
RevelationProbs revelation_simple(std::span<const double> w, const ActionSet& losing,
                                  bool won);

// General markets: r[k] = sum over j in (all losing actions) intersect R_k
// of w[j], for k in the observed losing set. Needs the full losing set,
// which only the simulator knows.
RevelationProbs revelation_general(std::span<const double> w, const ActionSet& losing,
                                   const ActionSet& all_losing,
                                   std::span<const ActionSet> reveal_sets, bool won);

// Bidder-side approximation of revelation_general that treats the
// historical winners as the current round's winners. Clamped to 1.
RevelationProbs revelation_heuristic(std::span<const double> w,
                                     const ActionSet& losing,
                                     std::span<const ActionSet> reveal_sets,
                                     const ActionSet& historical_winners, bool won);

// Tracks W_t: actions played at least once that received a nonzero
// allocation every time they were played.
class WinnerHistory {
 public:
  explicit WinnerHistory(std::size_t num_actions)
      : played_(num_actions, 0), won_(num_actions, 0) {}

  void record(ActionIndex played, double allocation);
  bool contains(ActionIndex k) const { return played_[k] > 0 && won_[k] == played_[k]; }
  ActionSet winners() const;

 private:
  std::vector<std::size_t> played_;
  std::vector<std::size_t> won_;
};

// Accumulates sum_t sum_k w_t[k] / r_t[k] for the average feedback
// information alpha_avg.
class AlphaAccumulator {
 public:
  explicit AlphaAccumulator(std::size_t num_actions) : num_actions_(num_actions) {}

  void record(std::span<const double> w, std::span<const double> r);
  std::size_t rounds() const { return rounds_; }
  // Harmonic-mean style aggregate in [1, K].
  double finalize() const;

 private:
  std::size_t num_actions_;
  std::size_t rounds_ = 0;
  double inverse_sum_ = 0.0;
};

}  // namespace auctionlearn
