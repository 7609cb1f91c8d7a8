#include "auctionlearn/payments.h"

#include <algorithm>
#include <cmath>
#include <variant>

#include "auctionlearn/errors.h"

namespace auctionlearn {
namespace {

// Largest value of bid k over its own domain.
double value_at_capacity(const BidFunction& bid) { return evaluate(bid, capacity(bid)); }

double max_value_at_capacity(const StrategySet& set) {
  double best = 0.0;
  for (const BidFunction& b : set.bids()) best = std::max(best, value_at_capacity(b));
  return best;
}

// Upper bound on the true cost of any allocation the bidder can receive.
double max_true_cost(const StrategySet& set) {
  const double cap = set.max_capacity();
  if (const auto* q = std::get_if<QuadraticBid>(&set.true_cost())) {
    return (q->a * cap + q->d) * cap;
  }
  double top_price = 0.0;
  for (const BidStep& s : std::get<DiscreteBid>(set.true_cost()).steps()) {
    top_price = std::max(top_price, s.unit_price);
  }
  return top_price * cap;
}

}  // namespace

LossMap::LossMap(UtilityBounds bounds) : bounds_(bounds) {
  if (!(bounds_.u_min < bounds_.u_max)) {
    throw ConfigError("loss map needs u_min < u_max");
  }
}

double LossMap::loss(double utility) const {
  const double s = std::clamp((utility - bounds_.u_min) / span(), 0.0, 1.0);
  return 1.0 - s;
}

double pay_marginal(double price, double allocation) {
  if (allocation == 0.0) return 0.0;
  return price * allocation;
}

double pay_as_bid(const BidFunction& bid, double allocation) {
  if (allocation == 0.0) return 0.0;
  return evaluate(bid, allocation);
}

double pay_vcg(const BidFunction& bid, double allocation, double cost,
               double cost_without, VcgSign sign) {
  const double externality =
      sign == VcgSign::kStandard ? cost_without - cost : cost - cost_without;
  const double p = evaluate(bid, allocation) + externality;
  // A loser's exclusion leaves J unchanged up to solver noise.
  if (allocation == 0.0 && std::abs(externality) <= 1e-6) return 0.0;
  return p;
}

UtilityLoss utility_and_loss(double payment, const BidFunction& true_cost,
                             double allocation, const LossMap& loss_map) {
  UtilityLoss out;
  out.utility = payment - evaluate(true_cost, allocation);
  out.loss = loss_map.loss(out.utility);
  return out;
}

ClearingResult settle(const MarketInstance& market, const Profile& profile) {
  Allocation a = clear(market, profile);
  ClearingResult out;
  const std::size_t n = market.num_bidders();
  out.payments.resize(n, 0.0);
  out.utilities.resize(n, 0.0);
  out.losses.resize(n, 0.0);
  for (std::size_t l = 0; l < n; ++l) {
    const BidFunction& bid = market.bidder(l).bid(profile[l]);
    const double x = a.x[l];
    double p = 0.0;
    switch (market.payment_rule()) {
      case PaymentRule::kMarginalPrice:
        p = pay_marginal(*a.price, x);
        break;
      case PaymentRule::kPayAsBid:
        p = pay_as_bid(bid, x);
        break;
      case PaymentRule::kVcg:
        p = x == 0.0 ? 0.0
                     : pay_vcg(bid, x, a.cost, clear_without(market, profile, l),
                               market.vcg_sign());
        break;
    }
    const UtilityLoss ul = utility_and_loss(p, market.bidder(l).true_cost(), x,
                                            LossMap(market.bounds(l)));
    out.payments[l] = p;
    out.utilities[l] = ul.utility;
    out.losses[l] = ul.loss;
  }
  out.allocation = std::move(a.x);
  out.price = a.price;
  out.cost = a.cost;
  return out;
}

UtilityBounds default_utility_bounds(const MarketInstance& market, std::size_t l) {
  const StrategySet& own = market.bidder(l);
  UtilityBounds b;
  b.u_min = -max_true_cost(own);
  switch (market.payment_rule()) {
    case PaymentRule::kMarginalPrice: {
      // lambda* never exceeds the top of the bisection bracket.
      double top_price = 0.0;
      for (const StrategySet& s : market.bidders()) {
        for (const BidFunction& bid : s.bids()) {
          const auto& q = std::get<QuadraticBid>(bid);
          top_price = std::max(top_price, q.d + 2.0 * q.a * q.x_max);
        }
      }
      b.u_max = top_price * own.max_capacity();
      break;
    }
    case PaymentRule::kPayAsBid:
      b.u_max = max_value_at_capacity(own);
      break;
    case PaymentRule::kVcg: {
      b.u_max = max_value_at_capacity(own);
      if (market.vcg_sign() == VcgSign::kStandard) {
        // J(B_-l) - J(B) <= J(B_-l) <= sum of the others' largest bid values.
        for (std::size_t j = 0; j < market.num_bidders(); ++j) {
          if (j != l) b.u_max += max_value_at_capacity(market.bidder(j));
        }
      }
      break;
    }
  }
  if (!(b.u_max > b.u_min)) b.u_max = b.u_min + 1.0;
  return b;
}

}  // namespace auctionlearn
