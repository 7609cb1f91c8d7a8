#pragma once

#include <string>
#include <vector>

#include "auctionlearn/cli/config.h"
#include "auctionlearn/simulation.h"

namespace auctionlearn::cli {

struct ArmResult {
  std::string name;
  std::vector<BidderLearning> learning;
  std::vector<RunReport> runs;
  RunSummary summary;
};

struct ExperimentResult {
  MarketInstance market;
  double truthful_social_cost = 0.0;  // cost of the all-truthful profile
  std::vector<ArmResult> arms;
};

// Runs every arm over every seed. `log` receives one line per arm.
ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t workers,
                                std::ostream* log = nullptr);

// Sweepable parameters.
enum class SweepParameter { kActions, kAlphaHat, kEta, kHorizon, kDemand };

SweepParameter parse_sweep_parameter(const std::string& name);
std::string_view to_string(SweepParameter p);

// Copy of `config` with one parameter set to `value` on the arms listed in
// `arms` (all arms when empty). Eta accepts a number or a multiple of the
// default rate written as "0.5x".
ExperimentConfig apply_sweep(const ExperimentConfig& config, SweepParameter p,
                             const std::string& value, const std::vector<std::string>& arms);

}  // namespace auctionlearn::cli
