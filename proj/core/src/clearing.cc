#include "auctionlearn/clearing.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <variant>

#include "auctionlearn/errors.h"
#include "auctionlearn/payments.h"

namespace auctionlearn {
namespace {

double supply_at(std::span<const QuadraticBid> bids, double price) {
  double total = 0.0;
  for (const QuadraticBid& b : bids) {
    total += std::clamp((price - b.d) / (2.0 * b.a), 0.0, b.x_max);
  }
  return total;
}

void require_coverage(double capacity, double demand, std::string_view what) {
  if (capacity < demand - kDemandTolerance) {
    throw Infeasible(std::string(what) + ": capacity " + std::to_string(capacity) +
                     " MW cannot cover demand " + std::to_string(demand) + " MW");
  }
}

template <typename Bid>
std::vector<Bid> bids_of(const MarketInstance& market, const Profile& profile,
                         std::size_t excluded) {
  std::vector<Bid> out;
  out.reserve(profile.size());
  for (std::size_t l = 0; l < profile.size(); ++l) {
    if (l == excluded) continue;
    out.push_back(std::get<Bid>(market.bidder(l).bid(profile[l])));
  }
  return out;
}

}  // namespace

std::string_view to_string(MarketFamily family) {
  switch (family) {
    case MarketFamily::kConvexSingleGood: return "convex";
    case MarketFamily::kDiscreteSingleGood: return "discrete";
  }
  return "?";
}

std::string_view to_string(PaymentRule rule) {
  switch (rule) {
    case PaymentRule::kMarginalPrice: return "marginal_price";
    case PaymentRule::kPayAsBid: return "pay_as_bid";
    case PaymentRule::kVcg: return "vcg";
  }
  return "?";
}

std::string_view to_string(VcgSign sign) {
  return sign == VcgSign::kStandard ? "standard" : "reversed";
}

MarketInstance::MarketInstance(double demand, PaymentRule rule,
                               std::vector<StrategySet> bidders,
                               std::vector<UtilityBounds> bounds, VcgSign vcg_sign)
    : demand_(demand), rule_(rule), vcg_sign_(vcg_sign), bidders_(std::move(bidders)) {
  if (!(demand_ > 0.0) || !std::isfinite(demand_)) {
    throw ConfigError("demand must be positive");
  }
  if (bidders_.empty()) throw ConfigError("market needs at least one bidder");
  const BidFamily bid_family = bidders_.front().family();
  for (const StrategySet& s : bidders_) {
    if (s.family() != bid_family) {
      throw FamilyMismatch("all bidders must use the same bid family");
    }
  }
  family_ = bid_family == BidFamily::kQuadratic ? MarketFamily::kConvexSingleGood
                                                : MarketFamily::kDiscreteSingleGood;
  if (rule_ == PaymentRule::kMarginalPrice &&
      family_ != MarketFamily::kConvexSingleGood) {
    throw ConfigError("marginal pricing requires the convex market family");
  }
  if (family_ == MarketFamily::kConvexSingleGood) {
    for (const StrategySet& s : bidders_) {
      for (const BidFunction& b : s.bids()) {
        if (!(std::get<QuadraticBid>(b).a > 0.0)) {
          throw ConfigError("convex market needs strictly convex bids (a > 0)");
        }
      }
    }
  }
  for (const StrategySet& s : bidders_) {
    const BidFunction& truth = s.true_cost();
    for (const BidFunction& b : s.bids()) {
      bool inside = true;
      if (const auto* q = std::get_if<QuadraticBid>(&b)) {
        inside = q->x_max <= std::get<QuadraticBid>(truth).x_max + kQuantityTolerance;
      } else {
        const auto& steps = std::get<DiscreteBid>(b);
        for (std::size_t p = 1; p <= steps.num_steps() && inside; ++p) {
          inside = std::get<DiscreteBid>(truth).prefix_for(steps.quantity_at(p)) >= 0;
        }
      }
      if (!inside) {
        throw ConfigError("every bid's domain must lie inside the true cost's domain");
      }
    }
  }
  // Every joint profile must be able to cover the demand.
  double worst_capacity = 0.0;
  for (const StrategySet& s : bidders_) {
    double smallest = capacity(s.bid(0));
    for (const BidFunction& b : s.bids()) smallest = std::min(smallest, capacity(b));
    worst_capacity += smallest;
  }
  if (worst_capacity < demand_ - kDemandTolerance) {
    throw Infeasible("some joint profile offers only " +
                     std::to_string(worst_capacity) + " MW for demand " +
                     std::to_string(demand_) + " MW");
  }

  if (bounds.empty()) {
    bounds_.reserve(bidders_.size());
    for (std::size_t l = 0; l < bidders_.size(); ++l) {
      bounds_.push_back(default_utility_bounds(*this, l));
    }
  } else {
    if (bounds.size() != bidders_.size()) {
      throw ConfigError("need one utility bound pair per bidder");
    }
    bounds_ = std::move(bounds);
  }
  for (const UtilityBounds& b : bounds_) {
    if (!(b.u_min < b.u_max)) throw ConfigError("utility bounds need u_min < u_max");
  }
}

ConvexClearing clear_convex(std::span<const QuadraticBid> bids, double demand) {
  if (bids.empty()) throw Infeasible("no bidders to clear");
  double total_capacity = 0.0;
  double high = 0.0;
  for (const QuadraticBid& b : bids) {
    if (!(b.a > 0.0)) throw DomainError("convex clearing needs a > 0");
    total_capacity += b.x_max;
    high = std::max(high, b.d + 2.0 * b.a * b.x_max);
  }
  require_coverage(total_capacity, demand, "convex clearing");

  double low = 0.0;
  for (int it = 0; it < kMaxBisectionIterations && high - low > kPriceTolerance; ++it) {
    const double mid = 0.5 * (low + high);
    if (supply_at(bids, mid) >= demand) {
      high = mid;
    } else {
      low = mid;
    }
  }

  // Polish: on the active set the supply curve is linear in the price.
  double price = high;
  const double probe = 0.5 * (low + high);
  double rhs = demand;
  double slope = 0.0;
  for (const QuadraticBid& b : bids) {
    const double top = b.d + 2.0 * b.a * b.x_max;
    if (probe >= top) {
      rhs -= b.x_max;
    } else if (probe > b.d) {
      rhs += b.d / (2.0 * b.a);
      slope += 1.0 / (2.0 * b.a);
    }
  }
  if (slope > 0.0) {
    const double polished = rhs / slope;
    if (std::abs(polished - probe) <= 1e-6) price = polished;
  }

  ConvexClearing out;
  out.price = price;
  out.allocation.reserve(bids.size());
  for (const QuadraticBid& b : bids) {
    const double x = std::clamp((price - b.d) / (2.0 * b.a), 0.0, b.x_max);
    out.allocation.push_back(x);
    out.cost += (b.a * x + b.d) * x;
  }
  return out;
}

DiscreteClearing clear_discrete(std::span<const DiscreteBid> bids, double demand) {
  if (bids.empty()) throw Infeasible("no bidders to clear");
  const std::size_t n = bids.size();
  double total_capacity = 0.0;
  double profiles = 1.0;
  for (const DiscreteBid& b : bids) {
    total_capacity += b.capacity();
    profiles *= static_cast<double>(b.num_steps() + 1);
  }
  require_coverage(total_capacity, demand, "discrete clearing");
  if (profiles > kMaxDiscreteProfiles) {
    throw InstanceTooLarge(std::to_string(profiles) +
                           " joint prefix choices exceed the enumeration cap");
  }

  // Odometer over prefix vectors in lexicographic order; the last bidder
  // varies fastest.
  auto for_each_feasible = [&](auto&& visit) {
    std::vector<std::size_t> idx(n, 0);
    while (true) {
      double quantity = 0.0;
      double cost = 0.0;
      for (std::size_t l = 0; l < n; ++l) {
        quantity += bids[l].quantity_at(idx[l]);
        cost += bids[l].cost_at(idx[l]);
      }
      if (quantity >= demand - kDemandTolerance) {
        if (visit(idx, cost)) return;
      }
      std::size_t pos = n;
      while (pos > 0) {
        --pos;
        if (++idx[pos] <= bids[pos].num_steps()) break;
        idx[pos] = 0;
        if (pos == 0) return;
      }
    }
  };

  double best = std::numeric_limits<double>::infinity();
  for_each_feasible([&](const std::vector<std::size_t>&, double cost) {
    best = std::min(best, cost);
    return false;
  });

  DiscreteClearing out;
  for_each_feasible([&](const std::vector<std::size_t>& idx, double cost) {
    if (cost <= best + kValueTolerance) {
      out.prefixes = idx;
      out.cost = cost;
      return true;
    }
    return false;
  });
  out.allocation.reserve(n);
  for (std::size_t l = 0; l < n; ++l) {
    out.allocation.push_back(bids[l].quantity_at(out.prefixes[l]));
  }
  return out;
}

Allocation clear(const MarketInstance& market, const Profile& profile) {
  if (profile.size() != market.num_bidders()) {
    throw ConfigError("profile size does not match the number of bidders");
  }
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  Allocation out;
  if (market.family() == MarketFamily::kConvexSingleGood) {
    const auto bids = bids_of<QuadraticBid>(market, profile, kNone);
    ConvexClearing c = clear_convex(bids, market.demand());
    out.x = std::move(c.allocation);
    out.price = c.price;
    out.cost = c.cost;
  } else {
    const auto bids = bids_of<DiscreteBid>(market, profile, kNone);
    DiscreteClearing c = clear_discrete(bids, market.demand());
    out.x = std::move(c.allocation);
    out.cost = c.cost;
  }
  return out;
}

double clear_without(const MarketInstance& market, const Profile& profile,
                     std::size_t excluded) {
  if (excluded >= market.num_bidders()) throw ConfigError("bidder index out of range");
  if (market.num_bidders() == 1) {
    throw Infeasible("excluding the only bidder leaves no supply");
  }
  if (market.family() == MarketFamily::kConvexSingleGood) {
    return clear_convex(bids_of<QuadraticBid>(market, profile, excluded),
                        market.demand())
        .cost;
  }
  return clear_discrete(bids_of<DiscreteBid>(market, profile, excluded),
                        market.demand())
      .cost;
}

}  // namespace auctionlearn
