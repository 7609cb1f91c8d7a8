#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace auctionlearn {

// Quantities closer than this are treated as the same allocation point.
inline constexpr double kQuantityTolerance = 1e-9;
// Pointwise bid comparisons allow this much slack in $.
inline constexpr double kValueTolerance = 1e-9;

using ActionIndex = std::size_t;
using ActionSet = std::vector<ActionIndex>;  // sorted, unique

// b(x) = a x^2 + d x on [0, x_max].
struct QuadraticBid {
  double a = 0.0;
  double d = 0.0;
  double x_max = 0.0;

  QuadraticBid() = default;
  QuadraticBid(double a, double d, double x_max);
};

struct BidStep {
  double quantity = 0.0;
  double unit_price = 0.0;
};

// A bid curve given as quantity/price blocks that are accepted in order.
// Feasible allocations are the cumulative quantities {0, q1, q1+q2, ...}.
class DiscreteBid {
 public:
  DiscreteBid() = default;
  explicit DiscreteBid(std::vector<BidStep> steps);

  const std::vector<BidStep>& steps() const { return steps_; }
  std::size_t num_steps() const { return steps_.size(); }

  // Cumulative quantity and cost after accepting the first `prefix` steps.
  double quantity_at(std::size_t prefix) const { return cum_quantity_[prefix]; }
  double cost_at(std::size_t prefix) const { return cum_cost_[prefix]; }
  double capacity() const { return cum_quantity_.back(); }

  // Prefix length whose cumulative quantity equals x (within tolerance), or
  // -1 when x is not a feasible allocation.
  std::ptrdiff_t prefix_for(double x) const;

 private:
  std::vector<BidStep> steps_;
  std::vector<double> cum_quantity_{0.0};
  std::vector<double> cum_cost_{0.0};
};

using BidFunction = std::variant<QuadraticBid, DiscreteBid>;

enum class BidFamily { kQuadratic, kDiscrete };

BidFamily family_of(const BidFunction& bid);

// Largest feasible allocation.
double capacity(const BidFunction& bid);

// b(x); throws DomainError when x is not in the bid's domain.
double evaluate(const BidFunction& bid, double x);

double marginal_at_zero(const QuadraticBid& bid);

// True iff j's domain contains k's and j(x) <= k(x) on all of k's domain,
// i.e. k lies in the epigraph of j. Ties count as domination.
bool dominates(const BidFunction& j, const BidFunction& k);

// A bidder's finite strategy set. Action 0 is the bidder's true cost.
class StrategySet {
 public:
  explicit StrategySet(std::vector<BidFunction> bids);

  std::size_t size() const { return bids_.size(); }
  BidFamily family() const { return family_; }
  const BidFunction& bid(ActionIndex k) const { return bids_.at(k); }
  const BidFunction& true_cost() const { return bids_.front(); }
  const std::vector<BidFunction>& bids() const { return bids_; }
  double max_capacity() const;

  // R_k for every action, computed once at construction.
  const ActionSet& reveal_set(ActionIndex k) const { return reveal_sets_.at(k); }
  const std::vector<ActionSet>& reveal_sets() const { return reveal_sets_; }

 private:
  std::vector<BidFunction> bids_;
  BidFamily family_;
  std::vector<ActionSet> reveal_sets_;
};

// {j : dominates(bid_j, bid_k)}. Always contains k.
ActionSet reveal_set(const StrategySet& set, ActionIndex k);

// Actions whose bid lies in the epigraph of action `played`: the actions a
// loser can certify as losing from the domination relation alone.
ActionSet epigraph_losing_set(const StrategySet& set, ActionIndex played);

// {k : b_k'(0) >= price}. Quadratic sets only.
ActionSet losing_set_from_price(const StrategySet& set, double price);

}  // namespace auctionlearn
