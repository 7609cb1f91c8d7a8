#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "auctionlearn/bids.h"

namespace auctionlearn {

// Feasibility slack on the demand constraint, in MW.
inline constexpr double kDemandTolerance = 1e-6;
// Bisection stops once the price bracket is this narrow.
inline constexpr double kPriceTolerance = 1e-9;
inline constexpr int kMaxBisectionIterations = 200;
// Upper bound on the number of joint prefix choices enumerated by
// clear_discrete.
inline constexpr double kMaxDiscreteProfiles = 1e7;

enum class MarketFamily { kConvexSingleGood, kDiscreteSingleGood };
enum class PaymentRule { kMarginalPrice, kPayAsBid, kVcg };
// kStandard pays b(x*) + (J(B_-l) - J(B)); kReversed pays b(x*) + (J(B) - J(B_-l)).
enum class VcgSign { kStandard, kReversed };

std::string_view to_string(MarketFamily family);
std::string_view to_string(PaymentRule rule);
std::string_view to_string(VcgSign sign);

struct UtilityBounds {
  double u_min = 0.0;
  double u_max = 1.0;
};

// One action index per bidder.
using Profile = std::vector<ActionIndex>;

class MarketInstance {
 public:
  // Empty `bounds` selects default_utility_bounds() for every bidder.
  MarketInstance(double demand, PaymentRule rule, std::vector<StrategySet> bidders,
                 std::vector<UtilityBounds> bounds = {},
                 VcgSign vcg_sign = VcgSign::kStandard);

  double demand() const { return demand_; }
  MarketFamily family() const { return family_; }
  PaymentRule payment_rule() const { return rule_; }
  VcgSign vcg_sign() const { return vcg_sign_; }
  std::size_t num_bidders() const { return bidders_.size(); }
  const StrategySet& bidder(std::size_t l) const { return bidders_.at(l); }
  const std::vector<StrategySet>& bidders() const { return bidders_; }
  const UtilityBounds& bounds(std::size_t l) const { return bounds_.at(l); }

  // The profile where every bidder submits its true cost.
  Profile truthful_profile() const { return Profile(bidders_.size(), 0); }

 private:
  double demand_;
  MarketFamily family_;
  PaymentRule rule_;
  VcgSign vcg_sign_;
  std::vector<StrategySet> bidders_;
  std::vector<UtilityBounds> bounds_;
};

struct ConvexClearing {
  std::vector<double> allocation;
  double price = 0.0;  // lambda*, multiplier of the demand constraint
  double cost = 0.0;   // J
};

// KKT water-filling: x_l(lambda) = clamp((lambda - d_l) / (2 a_l), 0, x_max_l)
// with lambda found by bisection on aggregate supply, then polished by solving
// the linear supply equation on the identified active set.
ConvexClearing clear_convex(std::span<const QuadraticBid> bids, double demand);

struct DiscreteClearing {
  std::vector<double> allocation;
  std::vector<std::size_t> prefixes;  // accepted steps per bidder
  double cost = 0.0;
};

// Exhaustive search over joint prefix choices. Among choices whose cost is
// within kValueTolerance of the optimum the lexicographically smallest prefix
// vector wins.
DiscreteClearing clear_discrete(std::span<const DiscreteBid> bids, double demand);

// Family-independent view of a clearing.
struct Allocation {
  std::vector<double> x;
  std::optional<double> price;
  double cost = 0.0;
};

Allocation clear(const MarketInstance& market, const Profile& profile);

// J(B_-l): optimal cost with bidder l's allocation forced to zero.
double clear_without(const MarketInstance& market, const Profile& profile,
                     std::size_t excluded);

}  // namespace auctionlearn
