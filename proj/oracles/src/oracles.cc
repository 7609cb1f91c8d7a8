#include "auctionlearn/oracles/oracles.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "auctionlearn/feedback.h"

namespace auctionlearn::oracles {

GridClearing grid_clear_convex(std::span<const QuadraticBid> bids, double demand,
                               double step) {
  double top = 0.0;
  for (const QuadraticBid& b : bids) top = std::max(top, b.d + 2.0 * b.a * b.x_max);
  auto allocation_at = [&](double price) {
    std::vector<double> x;
    for (const QuadraticBid& b : bids) {
      x.push_back(std::min(std::max((price - b.d) / (2.0 * b.a), 0.0), b.x_max));
    }
    return x;
  };
  GridClearing out;
  const auto steps = static_cast<long long>(std::ceil(top / step)) + 1;
  for (long long i = 0; i <= steps; ++i) {
    const double price = static_cast<double>(i) * step;
    double supply = 0.0;
    for (const QuadraticBid& b : bids) {
      supply += std::min(std::max((price - b.d) / (2.0 * b.a), 0.0), b.x_max);
    }
    if (supply >= demand - 1e-12) {
      out.price = price;
      out.allocation = allocation_at(price);
      return out;
    }
  }
  out.price = std::numeric_limits<double>::infinity();
  return out;
}

EnumeratedClearing enumerate_discrete(std::span<const DiscreteBid> bids, double demand) {
  struct Candidate {
    std::vector<std::size_t> prefixes;
    double quantity;
    double cost;
  };
  std::vector<Candidate> all;
  std::vector<std::size_t> current;
  std::function<void(std::size_t, double, double)> recurse =
      [&](std::size_t l, double quantity, double cost) {
        if (l == bids.size()) {
          all.push_back({current, quantity, cost});
          return;
        }
        double q = 0.0;
        double c = 0.0;
        for (std::size_t p = 0; p <= bids[l].num_steps(); ++p) {
          if (p > 0) {
            q += bids[l].steps()[p - 1].quantity;
            c += bids[l].steps()[p - 1].quantity * bids[l].steps()[p - 1].unit_price;
          }
          current.push_back(p);
          recurse(l + 1, quantity + q, cost + c);
          current.pop_back();
        }
      };
  recurse(0, 0.0, 0.0);

  EnumeratedClearing out;
  double best = std::numeric_limits<double>::infinity();
  for (const Candidate& c : all) {
    if (c.quantity >= demand - 1e-6) best = std::min(best, c.cost);
  }
  for (const Candidate& c : all) {
    if (c.quantity < demand - 1e-6 || c.cost > best + 1e-9) continue;
    if (!out.feasible || c.prefixes < out.prefixes) {
      out.feasible = true;
      out.prefixes = c.prefixes;
      out.cost = c.cost;
    }
  }
  if (out.feasible) {
    for (std::size_t l = 0; l < bids.size(); ++l) {
      double q = 0.0;
      for (std::size_t p = 0; p < out.prefixes[l]; ++p) q += bids[l].steps()[p].quantity;
      out.allocation.push_back(q);
    }
  }
  return out;
}

bool dominates_on_grid(const QuadraticBid& j, const QuadraticBid& k, std::size_t points,
                       double slack) {
  if (j.x_max < k.x_max - 1e-9) return false;
  for (std::size_t i = 0; i <= points + 1; ++i) {
    const double x = k.x_max * static_cast<double>(i) / static_cast<double>(points + 1);
    const double vj = j.a * x * x + j.d * x;
    const double vk = k.a * x * x + k.d * x;
    if (vj > vk + slack) return false;
  }
  return true;
}

EstimatorMoments extended_moments(std::span<const double> w, std::span<const double> losses,
                                  const ActionSet& all_losing, double loser_loss,
                                  double revelation_fault) {
  const std::size_t k_count = w.size();
  EstimatorMoments m{std::vector<double>(k_count, 0.0), std::vector<double>(k_count, 0.0)};
  for (ActionIndex played = 0; played < k_count; ++played) {
    const bool lost = std::binary_search(all_losing.begin(), all_losing.end(), played);
    RevelationProbs r = revelation_simple(w, lost ? all_losing : ActionSet{}, !lost);
    const RoundOutcome outcome =
        lost ? RoundOutcome{Lost{played, all_losing}} : RoundOutcome{Won{played, losses[played]}};
    LossEstimate estimate;
    if (lost && revelation_fault != 0.0) {
      // estimate_extended rejects r < w, so the faulty estimate is formed
      // by hand.
      estimate.assign(k_count, 0.0);
      for (ActionIndex j : all_losing) {
        estimate[j] = loser_loss / ((1.0 - revelation_fault) * w[j]);
      }
    } else {
      estimate = estimate_extended(outcome, loser_loss, r, w);
    }
    for (std::size_t i = 0; i < k_count; ++i) {
      m.mean[i] += w[played] * estimate[i];
      m.second_moment[i] += w[played] * estimate[i] * estimate[i];
    }
  }
  return m;
}

EstimatorMoments bandit_moments(std::span<const double> w, std::span<const double> losses) {
  const std::size_t k_count = w.size();
  EstimatorMoments m{std::vector<double>(k_count, 0.0), std::vector<double>(k_count, 0.0)};
  for (ActionIndex played = 0; played < k_count; ++played) {
    const LossEstimate estimate = estimate_bandit(played, losses[played], w);
    for (std::size_t i = 0; i < k_count; ++i) {
      m.mean[i] += w[played] * estimate[i];
      m.second_moment[i] += w[played] * estimate[i] * estimate[i];
    }
  }
  return m;
}

}  // namespace auctionlearn::oracles
