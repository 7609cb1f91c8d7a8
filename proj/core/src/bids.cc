#include "auctionlearn/bids.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "auctionlearn/errors.h"

namespace auctionlearn {
namespace {

bool same_quantity(double x, double y) {
  return std::abs(x - y) <= kQuantityTolerance;
}

// Maximum of (da) x^2 + (dd) x over [0, upper], found from the endpoints and
// the vertex when the parabola opens downward.
double max_difference(double da, double dd, double upper) {
  auto f = [&](double x) { return (da * x + dd) * x; };
  double best = std::max(0.0, f(upper));
  if (da < 0.0) {
    const double vertex = -dd / (2.0 * da);
    if (vertex > 0.0 && vertex < upper) best = std::max(best, f(vertex));
  }
  return best;
}

bool dominates_quadratic(const QuadraticBid& j, const QuadraticBid& k) {
  if (j.x_max < k.x_max - kQuantityTolerance) return false;
  return max_difference(j.a - k.a, j.d - k.d, k.x_max) <= kValueTolerance;
}

bool dominates_discrete(const DiscreteBid& j, const DiscreteBid& k) {
  for (std::size_t p = 1; p <= k.num_steps(); ++p) {
    const std::ptrdiff_t q = j.prefix_for(k.quantity_at(p));
    if (q < 0) return false;
    if (j.cost_at(static_cast<std::size_t>(q)) >
        k.cost_at(p) + kValueTolerance) {
      return false;
    }
  }
  return true;
}

}  // namespace

QuadraticBid::QuadraticBid(double a, double d, double x_max)
    : a(a), d(d), x_max(x_max) {
  if (!(a >= 0.0) || !(d >= 0.0) || !(x_max > 0.0) || !std::isfinite(a) ||
      !std::isfinite(d) || !std::isfinite(x_max)) {
    throw DomainError("quadratic bid needs a >= 0, d >= 0, x_max > 0 (got a=" +
                      std::to_string(a) + ", d=" + std::to_string(d) +
                      ", x_max=" + std::to_string(x_max) + ")");
  }
}

DiscreteBid::DiscreteBid(std::vector<BidStep> steps) : steps_(std::move(steps)) {
  if (steps_.empty()) throw DomainError("discrete bid needs at least one step");
  cum_quantity_.reserve(steps_.size() + 1);
  cum_cost_.reserve(steps_.size() + 1);
  for (const BidStep& s : steps_) {
    if (!(s.quantity > 0.0) || !(s.unit_price >= 0.0) ||
        !std::isfinite(s.quantity) || !std::isfinite(s.unit_price)) {
      throw DomainError("discrete bid steps need quantity > 0 and price >= 0");
    }
    cum_quantity_.push_back(cum_quantity_.back() + s.quantity);
    cum_cost_.push_back(cum_cost_.back() + s.quantity * s.unit_price);
  }
}

std::ptrdiff_t DiscreteBid::prefix_for(double x) const {
  for (std::size_t p = 0; p < cum_quantity_.size(); ++p) {
    if (same_quantity(cum_quantity_[p], x)) return static_cast<std::ptrdiff_t>(p);
  }
  return -1;
}

BidFamily family_of(const BidFunction& bid) {
  return std::holds_alternative<QuadraticBid>(bid) ? BidFamily::kQuadratic
                                                   : BidFamily::kDiscrete;
}

double capacity(const BidFunction& bid) {
  if (const auto* q = std::get_if<QuadraticBid>(&bid)) return q->x_max;
  return std::get<DiscreteBid>(bid).capacity();
}

double evaluate(const BidFunction& bid, double x) {
  if (x == 0.0) return 0.0;
  if (const auto* q = std::get_if<QuadraticBid>(&bid)) {
    if (x < -kQuantityTolerance || x > q->x_max + kQuantityTolerance) {
      throw DomainError("x=" + std::to_string(x) + " outside [0, " +
                        std::to_string(q->x_max) + "]");
    }
    const double xc = std::clamp(x, 0.0, q->x_max);
    return (q->a * xc + q->d) * xc;
  }
  const auto& discrete = std::get<DiscreteBid>(bid);
  const std::ptrdiff_t p = discrete.prefix_for(x);
  if (p < 0) {
    throw DomainError("x=" + std::to_string(x) +
                      " is not a cumulative quantity of the discrete bid");
  }
  return discrete.cost_at(static_cast<std::size_t>(p));
}

double marginal_at_zero(const QuadraticBid& bid) { return bid.d; }

bool dominates(const BidFunction& j, const BidFunction& k) {
  if (family_of(j) != family_of(k)) {
    throw FamilyMismatch("cannot compare quadratic and discrete bids");
  }
  if (const auto* qj = std::get_if<QuadraticBid>(&j)) {
    return dominates_quadratic(*qj, std::get<QuadraticBid>(k));
  }
  return dominates_discrete(std::get<DiscreteBid>(j), std::get<DiscreteBid>(k));
}

StrategySet::StrategySet(std::vector<BidFunction> bids) : bids_(std::move(bids)) {
  if (bids_.empty()) throw DomainError("strategy set must be nonempty");
  family_ = family_of(bids_.front());
  for (const BidFunction& b : bids_) {
    if (family_of(b) != family_) {
      throw FamilyMismatch("strategy set mixes quadratic and discrete bids");
    }
  }
  reveal_sets_.reserve(bids_.size());
  for (ActionIndex k = 0; k < bids_.size(); ++k) {
    reveal_sets_.push_back(auctionlearn::reveal_set(*this, k));
  }
}

double StrategySet::max_capacity() const {
  double cap = 0.0;
  for (const BidFunction& b : bids_) cap = std::max(cap, capacity(b));
  return cap;
}

ActionSet reveal_set(const StrategySet& set, ActionIndex k) {
  ActionSet out;
  const BidFunction& target = set.bid(k);
  for (ActionIndex j = 0; j < set.size(); ++j) {
    if (j == k || dominates(set.bid(j), target)) out.push_back(j);
  }
  return out;
}

ActionSet epigraph_losing_set(const StrategySet& set, ActionIndex played) {
  ActionSet out;
  const BidFunction& base = set.bid(played);
  for (ActionIndex k = 0; k < set.size(); ++k) {
    if (k == played || dominates(base, set.bid(k))) out.push_back(k);
  }
  return out;
}

ActionSet losing_set_from_price(const StrategySet& set, double price) {
  if (set.family() != BidFamily::kQuadratic) {
    throw FamilyMismatch("marginal price is only defined for quadratic bids");
  }
  ActionSet out;
  for (ActionIndex k = 0; k < set.size(); ++k) {
    if (marginal_at_zero(std::get<QuadraticBid>(set.bid(k))) >= price) {
      out.push_back(k);
    }
  }
  return out;
}

}  // namespace auctionlearn
