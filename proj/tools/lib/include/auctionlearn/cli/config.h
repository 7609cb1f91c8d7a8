#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "auctionlearn/clearing.h"
#include "auctionlearn/learning.h"
#include "auctionlearn/simulation.h"

namespace auctionlearn::cli {

inline constexpr int kConfigSchemaVersion = 1;

// Strategy-set generation. Convex: action 0 is the true cost, the rest shift
// the linear (and optionally the quadratic) term by uniform draws. Discrete:
// one action per price multiplier, the first of which must be 1.
struct GenerateSpec {
  std::size_t actions = 0;
  std::optional<std::pair<double, double>> linear_shift;
  std::optional<std::pair<double, double>> quadratic_shift;
  std::vector<double> multipliers;
};

struct BidderSpec {
  std::string name;
  BidFunction true_cost;
  std::vector<BidFunction> strategies;  // explicit actions after the true cost
  std::optional<GenerateSpec> generate;
};

struct LearnerSpec {
  FeedbackMode mode = FeedbackMode::kBandit;
  std::optional<double> eta;  // absolute
  double eta_scale = 1.0;     // multiplies the default rate when eta is unset
  double alpha_hat = 1.0;
};

struct ArmSpec {
  std::string name;
  LearnerSpec learner;
  std::vector<std::optional<LearnerSpec>> per_bidder;  // overrides by index
};

struct ExperimentConfig {
  std::string source;  // path or "<string>"
  MarketFamily family = MarketFamily::kConvexSingleGood;
  double demand = 0.0;
  PaymentRule payment_rule = PaymentRule::kMarginalPrice;
  VcgSign vcg_sign = VcgSign::kStandard;
  std::vector<UtilityBounds> utility_bounds;  // empty: defaults
  std::vector<BidderSpec> bidders;
  std::uint64_t strategy_seed = 0;
  std::size_t horizon = 0;
  std::vector<ArmSpec> arms;
  std::vector<std::uint64_t> seeds;
  std::size_t workers = 1;
  std::string out_dir = "out";
  std::vector<std::string> formats{"csv", "json"};
};

// Parses YAML (JSON is accepted as a subset). Throws ConfigError whose
// message carries "file:line:" for the offending node.
ExperimentConfig load_config_file(const std::string& path);
ExperimentConfig load_config_string(const std::string& text,
                                    const std::string& source = "<string>");

// Materialized strategy sets, in bidder order.
std::vector<StrategySet> build_strategy_sets(const ExperimentConfig& config);
MarketInstance build_market(const ExperimentConfig& config);

// Resolves eta for every bidder of an arm against the market.
std::vector<BidderLearning> resolve_learning(const ExperimentConfig& config,
                                             const MarketInstance& market,
                                             const ArmSpec& arm);

}  // namespace auctionlearn::cli
