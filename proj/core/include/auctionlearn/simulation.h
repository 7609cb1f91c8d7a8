#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "auctionlearn/clearing.h"
#include "auctionlearn/feedback.h"
#include "auctionlearn/learning.h"
#include "auctionlearn/payments.h"

namespace auctionlearn {

struct BidderLearning {
  FeedbackMode mode = FeedbackMode::kBandit;
  double eta = 0.1;
};

struct GameConfig {
  MarketInstance market;
  std::vector<BidderLearning> learning;  // one per bidder
  std::size_t horizon = 1;
  bool keep_records = false;
  // Profiles played in rounds 1..size() instead of sampled ones. The
  // learners still update as if they had drawn them.
  std::vector<Profile> scripted_rounds;
};

// What one bidder saw and did in one round.
struct BidderRound {
  MixedStrategy strategy;  // w_t before the update
  ActionIndex action = 0;
  bool won = false;
  double allocation = 0.0;
  double payment = 0.0;
  double utility = 0.0;
  double loss = 0.0;
  // Indexed by action, opponents held fixed at B_-l(t).
  std::vector<double> counterfactual_utilities;
  std::vector<double> counterfactual_losses;
  ActionSet losing_set;      // L_t as observed by the bidder (empty if won)
  ActionSet all_losing;      // every action that would have lost this round
  RevelationProbs revelation;       // used by the loss estimator
  RevelationProbs true_revelation;  // used for alpha_avg accounting
};

struct RoundRecord {
  std::size_t round = 0;  // 1-based
  std::optional<double> price;
  double social_cost = 0.0;
  std::vector<BidderRound> bidders;
};

struct BidderReport {
  std::vector<double> regret;       // $, prefix t = 1..T
  std::vector<double> loss_regret;  // loss units, prefix t = 1..T
  double alpha_avg = 1.0;
  double bound_loss = 0.0;     // theorem bound at the realized alpha_avg
  double bound_dollars = 0.0;  // bound_loss times the loss-map span
  std::size_t zero_allocations = 0;
  double cce_gap = 0.0;  // regret(T) / T
  double eta = 0.0;
  FeedbackMode mode = FeedbackMode::kBandit;
};

struct RunReport {
  std::uint64_t seed = 0;
  std::size_t horizon = 0;
  std::vector<BidderReport> bidders;
  std::vector<double> social_cost;  // per round
  double average_social_cost = 0.0;
  double cce_gap = 0.0;  // max over bidders of the positive part
  std::map<Profile, std::size_t> joint_distribution;
  std::vector<RoundRecord> records;  // filled when keep_records is set
};

// Plays the repeated auction for `horizon` rounds. Deterministic in
// (config, seed).
RunReport run_auction_game(const GameConfig& config, std::uint64_t seed);

// Regret in $: best fixed action's cumulative counterfactual
// utility minus realized cumulative utility, for every prefix.
std::vector<double> regret(std::span<const RoundRecord> records, std::size_t bidder);
// Same in loss units: realized cumulative loss minus the best fixed action's.
std::vector<double> loss_regret(std::span<const RoundRecord> records, std::size_t bidder);

// sqrt(2 (K / alpha) T ln K), in loss units.
double theorem_bound(std::size_t num_actions, std::size_t horizon, double alpha_avg);

// Per-bidder max_k mean counterfactual utility minus mean realized utility
// under the empirical joint distribution of played profiles.
std::vector<double> cce_gap(std::span<const RoundRecord> records);

// (1/T) sum_t sum_l c_l(x*_l(t)).
double social_cost(std::span<const RoundRecord> records);

// Runs one game per seed on `workers` threads; results in seed order.
std::vector<RunReport> run_seeds(const GameConfig& config,
                                 std::span<const std::uint64_t> seeds,
                                 std::size_t workers = 1);

struct Stat {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single run
};

Stat summarize(std::span<const double> values);

struct BidderSummary {
  std::vector<Stat> regret;  // per round
  Stat final_regret;
  Stat final_loss_regret;
  Stat alpha_avg;
  Stat zero_allocations;
  Stat cce_gap;
  Stat bound_loss;
};

struct RunSummary {
  std::size_t runs = 0;
  std::vector<BidderSummary> bidders;
  std::vector<Stat> mean_regret;  // per round, bidder average then seed stats
  Stat final_mean_regret;
  Stat final_mean_loss_regret;
  Stat mean_alpha_avg;
  Stat social_cost;
  Stat cce_gap;
};

RunSummary aggregate_runs(std::span<const RunReport> runs);

}  // namespace auctionlearn
