#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "auctionlearn/bids.h"
#include "auctionlearn/clearing.h"

namespace auctionlearn {

// Affine utility-to-loss map: u_max -> 0, u_min -> 1, clamped outside.
class LossMap {
 public:
  explicit LossMap(UtilityBounds bounds);
  LossMap(double u_min, double u_max) : LossMap(UtilityBounds{u_min, u_max}) {}

  double loss(double utility) const;
  double span() const { return bounds_.u_max - bounds_.u_min; }
  const UtilityBounds& bounds() const { return bounds_; }

 private:
  UtilityBounds bounds_;
};

double pay_marginal(double price, double allocation);
double pay_as_bid(const BidFunction& bid, double allocation);
// `cost` is J(B) and `cost_without` is J(B_-l) for the same profile.
double pay_vcg(const BidFunction& bid, double allocation, double cost,
               double cost_without, VcgSign sign = VcgSign::kStandard);

struct UtilityLoss {
  double utility = 0.0;
  double loss = 0.0;
};

UtilityLoss utility_and_loss(double payment, const BidFunction& true_cost,
                             double allocation, const LossMap& loss_map);

// Per-bidder outcome of one cleared profile.
struct ClearingResult {
  std::vector<double> allocation;
  std::optional<double> price;
  double cost = 0.0;  // J
  std::vector<double> payments;
  std::vector<double> utilities;
  std::vector<double> losses;

  bool won(std::size_t l) const { return allocation[l] > 0.0; }
};

// Clears `profile` and applies the market's payment rule.
ClearingResult settle(const MarketInstance& market, const Profile& profile);

// Default [u_min, u_max] for bidder l: u_min is minus the largest true cost
// over the strategy set's capacity, u_max an upper bound on the payment the
// rule can produce for this bidder.
UtilityBounds default_utility_bounds(const MarketInstance& market, std::size_t l);

}  // namespace auctionlearn
