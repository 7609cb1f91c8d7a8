// One line per acceptance criterion; exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "auctionlearn/cli/config.h"
#include "auctionlearn/cli/experiment.h"
#include "auctionlearn/clearing.h"
#include "auctionlearn/feedback.h"
#include "auctionlearn/learning.h"
#include "auctionlearn/oracles/oracles.h"
#include "auctionlearn/rng.h"
#include "auctionlearn/simulation.h"

namespace al = auctionlearn;

namespace {

constexpr double kUnbiasedTol = 1e-12;
constexpr double kPriceTol = 1e-4;
constexpr double kAllocTol = 1e-3;
constexpr double kExtendedVsExp3 = 0.60;
constexpr double kZeroAllocBand = 0.25;
constexpr double kZeroAllocExp3 = 183, kZeroAllocExtended = 131, kZeroAllocHedge = 98;
constexpr double kAlphaFraction = 0.8;
constexpr double kAlphaTol = 1e-12;
constexpr double kHeuristicTol = 1e-12;
constexpr double kMomentTol = 1e-12;
constexpr int kPropertyTrials = 10000;
constexpr double kUnbiasedBudget = 1.0;  // s
constexpr double kOracleBudget = 10.0;   // s
constexpr double kNoBudget = 0.0;

const std::string kSource = AUCTIONLEARN_SOURCE_DIR;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::vector<double> random_simplex(al::Rng& rng, std::size_t k) {
  std::vector<double> w(k);
  for (double& x : w) x = rng.uniform() + 1e-3;
  const double s = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= s;
  return w;
}

struct LossCase {
  std::vector<double> w, losses;
  al::ActionSet losing;
  double loser_loss = 0.0;
};

LossCase random_loss_case(al::Rng& rng, std::size_t max_k) {
  LossCase c;
  const std::size_t k = 2 + static_cast<std::size_t>(rng.uniform() * (max_k - 1));
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

Outcome unbiasedness() {
  al::Rng rng(101);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const LossCase c = random_loss_case(rng, 8);
    const auto m = al::oracles::extended_moments(c.w, c.losses, c.losing, c.loser_loss);
    for (std::size_t i = 0; i < c.w.size(); ++i) {
      worst = std::max(worst, std::abs(m.mean[i] - c.losses[i]));
    }
  }
  std::ostringstream d;
  d << "100 configurations, K <= 8, max |E[l~] - l| = " << worst;
  return {worst <= kUnbiasedTol, d.str()};
}

Outcome solver_oracles() {
  al::Rng rng(202);
  double dp = 0.0, dx = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<al::QuadraticBid> bids;
    double cap = 0.0;
    const int n = 2 + static_cast<int>(rng.uniform() * 4);
    for (int i = 0; i < n; ++i) {
      bids.emplace_back(rng.uniform(0.05, 0.5), rng.uniform(1, 30), rng.uniform(1, 20));
      cap += bids.back().x_max;
    }
    const double q = rng.uniform(0.05, 0.95) * cap;
    const auto c = al::clear_convex(bids, q);
    const auto g = al::oracles::grid_clear_convex(bids, q);
    dp = std::max(dp, std::abs(c.price - g.price));
    for (std::size_t i = 0; i < bids.size(); ++i) {
      dx = std::max(dx, std::abs(c.allocation[i] - g.allocation[i]));
    }
  }
  int mismatches = 0, instances = 0;
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<al::DiscreteBid> bids;
    double cap = 0.0;
    const int n = 1 + static_cast<int>(rng.uniform() * 5);
    for (int i = 0; i < n; ++i) {
      std::vector<al::BidStep> steps;
      const int s = 1 + static_cast<int>(rng.uniform() * 3);
      for (int j = 0; j < s; ++j) {
        // Integer blocks make exact ties common, which exercises tie-breaking.
        steps.push_back({std::floor(rng.uniform(1, 10)), std::floor(rng.uniform(1, 20))});
      }
      bids.emplace_back(steps);
      cap += bids.back().capacity();
    }
    const double q = std::max(1.0, std::floor(rng.uniform(0.1, 0.9) * cap));
    const auto c = al::clear_discrete(bids, q);
    const auto o = al::oracles::enumerate_discrete(bids, q);
    ++instances;
    if (!o.feasible || o.prefixes != c.prefixes || o.cost != c.cost) ++mismatches;
  }
  std::ostringstream d;
  d << "convex: max |dlambda| " << dp << ", max |dx| " << dx << " MW (100 instances); discrete: "
    << mismatches << " mismatches in " << instances;
  return {dp <= kPriceTol && dx <= kAllocTol && mismatches == 0, d.str()};
}

struct Table1 {
  al::cli::ExperimentResult result;
  const al::cli::ArmResult* hedge = nullptr;
  const al::cli::ArmResult* extended = nullptr;
  const al::cli::ArmResult* exp3 = nullptr;
  std::size_t k = 0, horizon = 0;
};

Table1 run_table1() {
  const al::cli::ExperimentConfig cfg = al::cli::load_config_file(kSource + "/configs/table1.config");
  Table1 t{al::cli::run_experiment(cfg, 1), nullptr, nullptr, nullptr, 15, cfg.horizon};
  for (const auto& arm : t.result.arms) {
    if (arm.learning[0].mode == al::FeedbackMode::kFullInformation) t.hedge = &arm;
    if (arm.learning[0].mode == al::FeedbackMode::kExtendedTrue) t.extended = &arm;
    if (arm.learning[0].mode == al::FeedbackMode::kBandit) t.exp3 = &arm;
  }
  t.k = t.result.market.bidder(0).size();
  return t;
}

Outcome table1_reproduction(const Table1& t) {
  const double h = t.hedge->summary.final_mean_regret.mean;
  const double e = t.extended->summary.final_mean_regret.mean;
  const double x = t.exp3->summary.final_mean_regret.mean;
  const bool order = h <= e && e <= x;
  const bool ratio = e <= kExtendedVsExp3 * x;

  auto zero = [](const al::cli::ArmResult* a) { return a->summary.bidders[1].zero_allocations.mean; };
  auto near = [](double got, double want) { return std::abs(got - want) <= kZeroAllocBand * want; };
  const double zx = zero(t.exp3), ze = zero(t.extended), zh = zero(t.hedge);
  const bool zero_ok = zh < ze && ze < zx && near(zx, kZeroAllocExp3) &&
                       near(ze, kZeroAllocExtended) && near(zh, kZeroAllocHedge);

  const double alpha = t.extended->summary.mean_alpha_avg.mean;
  const bool alpha_ok = alpha >= kAlphaFraction * static_cast<double>(t.k);

  std::ostringstream d;
  d << "(a) final regret $ hedge " << h << " <= extended " << e << " <= exp3 " << x
    << (order ? " ok" : " VIOLATED") << ", extended/exp3 = " << e / x
    << (ratio ? " <= 0.60" : " > 0.60") << "; (b) bidder-2 zero allocations exp3 " << zx
    << " / extended " << ze << " / hedge " << zh << " vs 183/131/98 +-25%"
    << (zero_ok ? " ok" : " MISSED") << "; (c) extended alpha_avg " << alpha
    << (alpha_ok ? " >= " : " < ") << kAlphaFraction * static_cast<double>(t.k);
  return {order && ratio && zero_ok && alpha_ok, d.str()};
}

Outcome theorem_bound(const Table1& t) {
  bool ok = true;
  std::ostringstream d;
  for (std::size_t l = 0; l < t.extended->summary.bidders.size(); ++l) {
    const auto& b = t.extended->summary.bidders[l];
    const double bound = al::theorem_bound(t.k, t.horizon, b.alpha_avg.mean);
    ok = ok && b.final_loss_regret.mean <= bound;
    d << (l ? "; " : "") << "bidder " << l + 1 << " mean loss regret "
      << b.final_loss_regret.mean << " vs bound " << bound << " (alpha " << b.alpha_avg.mean
      << ")";
  }
  return {ok, d.str()};
}

Outcome alpha_endpoints(const Table1& t) {
  double worst_full = 0.0, worst_bandit = 0.0;
  for (const auto& run : t.hedge->runs) {
    for (const auto& b : run.bidders) {
      worst_full = std::max(worst_full, std::abs(b.alpha_avg - static_cast<double>(t.k)));
    }
  }
  for (const auto& run : t.exp3->runs) {
    for (const auto& b : run.bidders) worst_bandit = std::max(worst_bandit, std::abs(b.alpha_avg - 1.0));
  }
  std::ostringstream d;
  d << "max |alpha - K| under full information " << worst_full
    << ", max |alpha - 1| under bandit " << worst_bandit << " (150 bidder runs each)";
  return {worst_full <= kAlphaTol && worst_bandit <= kAlphaTol, d.str()};
}

Outcome heuristic_coincidence() {
  // One learner against a fixed opponent: only its true-cost bid ever wins,
  // and round 1 plays it, so W_t equals the winner set from round 2 on.
  using al::BidStep;
  using al::DiscreteBid;
  const al::StrategySet learner({DiscreteBid({{5, 4}, {5, 4}}), DiscreteBid({{5, 6}, {5, 6}}),
                                 DiscreteBid({{5, 7}, {5, 9}}), DiscreteBid({{10, 6}}),
                                 DiscreteBid({{5, 8}}), DiscreteBid({{5, 6.5}, {5, 6.5}})});
  const al::StrategySet opponent({DiscreteBid({{10, 5}})});
  const al::MarketInstance market(10, al::PaymentRule::kPayAsBid, {learner, opponent});
  const std::size_t horizon = 300;
  al::GameConfig cfg{market,
                     {{al::FeedbackMode::kExtendedHeuristic,
                       al::default_eta(al::FeedbackMode::kExtendedHeuristic, learner.size(),
                                       horizon, 3.0)},
                      {al::FeedbackMode::kBandit, 1.0}},
                     horizon,
                     true,
                     {al::Profile{0, 0}}};
  double worst = 0.0;
  std::size_t lost_rounds = 0, winner_mismatch = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const al::RunReport r = al::run_auction_game(cfg, seed);
    for (const al::RoundRecord& rec : r.records) {
      if (rec.round < 2) continue;
      const al::BidderRound& b = rec.bidders[0];
      al::ActionSet winners;
      for (std::size_t k = 0; k < learner.size(); ++k) {
        if (!std::binary_search(b.all_losing.begin(), b.all_losing.end(), k)) winners.push_back(k);
      }
      if (winners != al::ActionSet{0}) ++winner_mismatch;
      const auto exact = al::revelation_general(b.strategy, b.losing_set, b.all_losing,
                                                learner.reveal_sets(), b.won);
      for (std::size_t k = 0; k < exact.size(); ++k) {
        worst = std::max(worst, std::abs(exact[k] - b.revelation[k]));
      }
      if (!b.won) ++lost_rounds;
    }
  }
  std::ostringstream d;
  d << "20 seeds x " << horizon - 1 << " rounds (" << lost_rounds
    << " lost), max |r_hat - r| = " << worst << ", winner-set mismatches " << winner_mismatch;
  return {worst <= kHeuristicTol && winner_mismatch == 0 && lost_rounds > 0, d.str()};
}

Outcome discrete_social_cost() {
  const al::cli::ExperimentConfig cfg =
      al::cli::load_config_file(kSource + "/configs/discrete_pay_as_bid.config");
  const al::cli::ExperimentResult r = al::cli::run_experiment(cfg, 1);
  bool ok = true;
  std::ostringstream d;
  d << "truthful " << r.truthful_social_cost << " $/round";
  for (const auto& arm : r.arms) {
    ok = ok && arm.summary.social_cost.mean >= r.truthful_social_cost;
    d << ", " << arm.name << " " << arm.summary.social_cost.mean;
  }
  d << " (" << cfg.seeds.size() << " seeds)";
  return {ok, d.str()};
}

Outcome learning_properties() {
  al::Rng rng(808);
  int simplex = 0, shift = 0, variance = 0;
  for (int trial = 0; trial < kPropertyTrials; ++trial) {
    const std::size_t k = 2 + static_cast<std::size_t>(rng.uniform() * 14);
    const auto w = random_simplex(rng, k);
    std::vector<double> loss(k), shifted(k);
    const double c = rng.uniform(0, 50);
    for (std::size_t i = 0; i < k; ++i) {
      loss[i] = rng.uniform(0, 50);
      shifted[i] = loss[i] + c;
    }
    const double eta = rng.uniform(0, 2);
    const auto a = al::mwu_update(w, loss, eta);
    const auto b = al::mwu_update(w, shifted, eta);
    const double s = std::accumulate(a.begin(), a.end(), 0.0);
    bool in_simplex = std::abs(s - 1.0) <= kMomentTol;
    bool same = true;
    for (std::size_t i = 0; i < k; ++i) {
      in_simplex = in_simplex && a[i] >= 0.0;
      same = same && std::abs(a[i] - b[i]) <= kMomentTol;
    }
    simplex += !in_simplex;
    shift += !same;

    const LossCase lc = random_loss_case(rng, 8);
    const auto ext = al::oracles::extended_moments(lc.w, lc.losses, lc.losing, lc.loser_loss);
    const auto ban = al::oracles::bandit_moments(lc.w, lc.losses);
    for (std::size_t i = 0; i < lc.w.size(); ++i) {
      if (ext.second_moment[i] > ban.second_moment[i] + kMomentTol) {
        ++variance;
        break;
      }
    }
  }
  std::ostringstream d;
  d << kPropertyTrials << " trials each: simplex violations " << simplex << ", shift violations "
    << shift << ", variance-dominance violations " << variance;
  return {simplex == 0 && shift == 0 && variance == 0, d.str()};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* name, double budget,
                    const std::function<Outcome()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (budget > kNoBudget && secs > budget) {
      o.pass = false;
      o.detail += ", over the " + std::to_string(budget) + " s budget";
    }
    std::printf("[%s] criterion %d: %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !o.pass;
  };

  report(1, "extended estimator is unbiased", kUnbiasedBudget, unbiasedness);
  report(2, "solvers match brute-force oracles", kOracleBudget, solver_oracles);
  std::optional<Table1> t;
  report(3, "three-bidder marginal-price experiment", kNoBudget, [&] {
    t.emplace(run_table1());
    return table1_reproduction(*t);
  });
  report(4, "mean loss regret within the feedback-information bound", kNoBudget, [&] {
    return t ? theorem_bound(*t) : Outcome{false, "experiment did not run"};
  });
  report(5, "alpha_avg endpoints", kNoBudget, [&] {
    return t ? alpha_endpoints(*t) : Outcome{false, "experiment did not run"};
  });
  report(6, "heuristic revelation matches the exact one", kNoBudget, heuristic_coincidence);
  report(7, "learners never beat truthful social cost under pay-as-bid", kNoBudget,
         discrete_social_cost);
  report(8, "learning-core properties", kNoBudget, learning_properties);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
