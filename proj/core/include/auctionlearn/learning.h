#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "auctionlearn/bids.h"
#include "auctionlearn/rng.h"

namespace auctionlearn {

// Probability vector over a bidder's actions.
using MixedStrategy = std::vector<double>;
// Nonnegative loss estimate per action; entries may exceed 1.
using LossEstimate = std::vector<double>;

enum class FeedbackMode { kFullInformation, kBandit, kExtendedTrue, kExtendedHeuristic };

std::string_view to_string(FeedbackMode mode);

MixedStrategy uniform_strategy(std::size_t num_actions);

// w'[i] proportional to w[i] exp(-eta l[i]), computed in log space.
MixedStrategy mwu_update(std::span<const double> w, std::span<const double> loss,
                         double eta);

// Inverse-CDF draw of an action index.
ActionIndex sample_action(std::span<const double> w, Rng& rng);

LossEstimate estimate_full(std::span<const double> counterfactual_losses);

LossEstimate estimate_bandit(ActionIndex played, double realized_loss,
                             std::span<const double> w);

struct Won {
  ActionIndex played = 0;
  double loss = 0.0;
};
struct Lost {
  ActionIndex played = 0;
  ActionSet losing_set;  // L_t, must contain `played`
};
using RoundOutcome = std::variant<Won, Lost>;

// Importance-weighted estimator that also credits every action the loser
// can certify as losing, each weighted by its revelation probability.
LossEstimate estimate_extended(const RoundOutcome& outcome, double loser_loss,
                               std::span<const double> revelation,
                               std::span<const double> w);

// Learning rate: sqrt(8 ln K / T) for full information, sqrt(2 ln K / (K T))
// for bandit, sqrt(2 alpha ln K / (K T)) for the extended modes.
double default_eta(FeedbackMode mode, std::size_t num_actions, std::size_t horizon,
                   double alpha_hat = 1.0);

// A bidder's MWU state. Weights are kept as normalized log-weights.
class Learner {
 public:
  Learner(std::size_t num_actions, double eta);

  std::size_t num_actions() const { return log_w_.size(); }
  double eta() const { return eta_; }
  const MixedStrategy& strategy() const { return w_; }

  ActionIndex sample(Rng& rng) const { return sample_action(w_, rng); }
  void update(std::span<const double> loss_estimate);

 private:
  double eta_;
  std::vector<double> log_w_;
  MixedStrategy w_;
};

}  // namespace auctionlearn
