#include "auctionlearn/cli/verify.h"

#include <cmath>
#include <numeric>
#include <sstream>

#include "auctionlearn/clearing.h"
#include "auctionlearn/errors.h"
#include "auctionlearn/learning.h"
#include "auctionlearn/oracles/oracles.h"
#include "auctionlearn/payments.h"
#include "auctionlearn/rng.h"

namespace auctionlearn::cli {
namespace {

std::vector<double> random_simplex(Rng& rng, std::size_t k) {
  std::vector<double> w(k);
  for (double& x : w) x = rng.uniform() + 1e-3;
  const double s = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= s;
  return w;
}

PropertyResult convex_oracle(Rng& rng) {
  double worst_price = 0.0, worst_x = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<QuadraticBid> bids;
    double cap = 0.0;
    const int n = 2 + static_cast<int>(rng.uniform() * 4);
    for (int i = 0; i < n; ++i) {
      bids.emplace_back(rng.uniform(0.05, 0.5), rng.uniform(1, 30), rng.uniform(1, 20));
      cap += bids.back().x_max;
    }
    const double q = rng.uniform(0.05, 0.95) * cap;
    const ConvexClearing c = clear_convex(bids, q);
    const oracles::GridClearing g = oracles::grid_clear_convex(bids, q);
    worst_price = std::max(worst_price, std::abs(c.price - g.price));
    for (std::size_t i = 0; i < bids.size(); ++i) {
      worst_x = std::max(worst_x, std::abs(c.allocation[i] - g.allocation[i]));
    }
  }
  std::ostringstream d;
  d << "max |dprice| " << worst_price << ", max |dx| " << worst_x << " MW over 100 instances";
  return {"convex clearing matches price-grid oracle", worst_price <= 1e-4 && worst_x <= 1e-3,
          d.str()};
}

PropertyResult discrete_oracle(Rng& rng) {
  int mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<DiscreteBid> bids;
    double cap = 0.0;
    const int n = 1 + static_cast<int>(rng.uniform() * 4);
    for (int i = 0; i < n; ++i) {
      std::vector<BidStep> steps;
      const int s = 1 + static_cast<int>(rng.uniform() * 3);
      for (int j = 0; j < s; ++j) steps.push_back({rng.uniform(1, 10), rng.uniform(1, 20)});
      bids.emplace_back(steps);
      cap += bids.back().capacity();
    }
    const double q = rng.uniform(0.1, 0.9) * cap;
    const DiscreteClearing c = clear_discrete(bids, q);
    const oracles::EnumeratedClearing o = oracles::enumerate_discrete(bids, q);
    if (!o.feasible || o.prefixes != c.prefixes || o.cost != c.cost) ++mismatches;
  }
  return {"discrete clearing equals exhaustive enumeration", mismatches == 0,
          std::to_string(mismatches) + " mismatches over 200 instances"};
}

struct RandomCase {
  std::vector<double> w, losses;
  ActionSet losing;
  double loser_loss = 0.0;
};

RandomCase random_case(Rng& rng) {
  RandomCase c;
  const std::size_t k = 2 + static_cast<std::size_t>(rng.uniform() * 7);
  c.w = random_simplex(rng, k);
  c.loser_loss = rng.uniform();
  c.losses.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (rng.uniform() < 0.5) {
      c.losing.push_back(i);
      c.losses[i] = c.loser_loss;
    } else {
      c.losses[i] = rng.uniform();
    }
  }
  return c;
}

PropertyResult unbiasedness(Rng& rng, bool fault) {
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const RandomCase c = random_case(rng);
    const auto m = oracles::extended_moments(c.w, c.losses, c.losing, c.loser_loss,
                                             fault ? 0.05 : 0.0);
    for (std::size_t i = 0; i < c.w.size(); ++i) {
      worst = std::max(worst, std::abs(m.mean[i] - c.losses[i]));
    }
  }
  std::ostringstream d;
  d << "max |E[estimate] - loss| " << worst << " over 100 configurations";
  return {"extended estimator is unbiased", worst <= 1e-12, d.str()};
}

PropertyResult variance(Rng& rng) {
  int violations = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const RandomCase c = random_case(rng);
    const auto ext = oracles::extended_moments(c.w, c.losses, c.losing, c.loser_loss);
    const auto ban = oracles::bandit_moments(c.w, c.losses);
    for (std::size_t i = 0; i < c.w.size(); ++i) {
      if (ext.second_moment[i] > ban.second_moment[i] + 1e-12) ++violations;
    }
  }
  return {"extended second moment <= bandit second moment", violations == 0,
          std::to_string(violations) + " violations over 10000 trials"};
}

PropertyResult mwu_properties(Rng& rng) {
  int violations = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t k = 2 + static_cast<std::size_t>(rng.uniform() * 14);
    const auto w = random_simplex(rng, k);
    std::vector<double> loss(k), shifted(k);
    const double c = rng.uniform(0, 50);
    for (std::size_t i = 0; i < k; ++i) {
      loss[i] = rng.uniform(0, 50);
      shifted[i] = loss[i] + c;
    }
    const double eta = rng.uniform();
    const auto a = mwu_update(w, loss, eta);
    const auto b = mwu_update(w, shifted, eta);
    const double s = std::accumulate(a.begin(), a.end(), 0.0);
    bool ok = std::abs(s - 1.0) <= 1e-12;
    for (std::size_t i = 0; i < k; ++i) ok = ok && a[i] >= 0.0 && std::abs(a[i] - b[i]) <= 1e-12;
    if (!ok) ++violations;
  }
  return {"MWU keeps the simplex and ignores uniform shifts", violations == 0,
          std::to_string(violations) + " violations over 10000 trials"};
}

PropertyResult vcg_externality(Rng& rng, bool fault) {
  int violations = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<StrategySet> sets;
    for (int l = 0; l < 4; ++l) {
      sets.push_back(StrategySet({QuadraticBid(rng.uniform(0.05, 0.5), rng.uniform(1, 30), 10)}));
    }
    const MarketInstance m(rng.uniform(4, 24), PaymentRule::kVcg, sets, {},
                           fault ? VcgSign::kReversed : VcgSign::kStandard);
    const ClearingResult r = settle(m, m.truthful_profile());
    for (std::size_t l = 0; l < 4; ++l) {
      const double value = evaluate(m.bidder(l).bid(0), r.allocation[l]);
      // Removing a supplier can only raise the cost, so payment >= bid value.
      const double without = clear_without(m, m.truthful_profile(), l);
      if (without < r.cost - 1e-9 || r.payments[l] < value - 1e-6) ++violations;
    }
  }
  return {"VCG payment covers the bid value (nonnegative externality)", violations == 0,
          std::to_string(violations) + " violations over 800 bidder outcomes"};
}

}  // namespace

std::vector<PropertyResult> run_verify(const VerifyOptions& options) {
  Rng rng(mix_seed(options.seed));
  std::vector<PropertyResult> out;
  out.push_back(convex_oracle(rng));
  out.push_back(discrete_oracle(rng));
  out.push_back(unbiasedness(rng, options.fault_revelation));
  out.push_back(variance(rng));
  out.push_back(mwu_properties(rng));
  out.push_back(vcg_externality(rng, options.fault_vcg_sign));
  return out;
}

}  // namespace auctionlearn::cli
