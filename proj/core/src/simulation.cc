#include "auctionlearn/simulation.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <memory>
#include <numeric>
#include <string>
#include <thread>
#include <unordered_map>

#include "auctionlearn/errors.h"

namespace auctionlearn {
namespace {

struct ProfileHash {
  std::size_t operator()(const Profile& p) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (ActionIndex k : p) {
      h ^= static_cast<std::uint64_t>(k) + 1;
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

// Memoized settle() over joint profiles seen within one run.
class OutcomeCache {
 public:
  explicit OutcomeCache(const MarketInstance& market) : market_(market) {}

  const ClearingResult& get(const Profile& profile) {
    auto it = cache_.find(profile);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(profile, settle(market_, profile)).first->second;
  }

 private:
  const MarketInstance& market_;
  std::unordered_map<Profile, ClearingResult, ProfileHash> cache_;
};

std::string describe(const Profile& profile) {
  std::string out = "[";
  for (std::size_t l = 0; l < profile.size(); ++l) {
    if (l) out += ", ";
    out += std::to_string(profile[l]);
  }
  return out + "]";
}

}  // namespace

RunReport run_auction_game(const GameConfig& config, std::uint64_t seed) {
  const MarketInstance& market = config.market;
  const std::size_t n = market.num_bidders();
  if (config.learning.size() != n) {
    throw ConfigError("need one learning configuration per bidder");
  }
  if (config.horizon == 0) throw ConfigError("horizon must be at least 1");
  for (const Profile& p : config.scripted_rounds) {
    if (p.size() != n) throw ConfigError("scripted profile has the wrong size");
    for (std::size_t l = 0; l < n; ++l) {
      if (p[l] >= market.bidder(l).size()) throw ConfigError("scripted action out of range");
    }
  }

  std::vector<Learner> learners;
  std::vector<Rng> rngs;
  std::vector<WinnerHistory> histories;
  std::vector<AlphaAccumulator> alphas;
  std::vector<double> loser_loss;
  for (std::size_t l = 0; l < n; ++l) {
    const std::size_t k = market.bidder(l).size();
    learners.emplace_back(k, config.learning[l].eta);
    rngs.emplace_back(bidder_stream_seed(seed, l));
    histories.emplace_back(k);
    alphas.emplace_back(k);
    loser_loss.push_back(LossMap(market.bounds(l)).loss(0.0));
  }

  OutcomeCache cache(market);
  RunReport report;
  report.seed = seed;
  report.horizon = config.horizon;
  std::vector<RoundRecord> records;
  records.reserve(config.horizon);

  Profile profile(n, 0);
  for (std::size_t t = 1; t <= config.horizon; ++t) {
    for (std::size_t l = 0; l < n; ++l) profile[l] = learners[l].sample(rngs[l]);
    if (t <= config.scripted_rounds.size()) profile = config.scripted_rounds[t - 1];

    const ClearingResult* realized = nullptr;
    try {
      realized = &cache.get(profile);
    } catch (const Infeasible& e) {
      throw Infeasible("round " + std::to_string(t) + ", profile " + describe(profile) +
                       ": " + e.what());
    }
    ++report.joint_distribution[profile];

    RoundRecord rec;
    rec.round = t;
    rec.price = realized->price;
    rec.bidders.resize(n);
    for (std::size_t l = 0; l < n; ++l) {
      const StrategySet& set = market.bidder(l);
      const std::size_t num_actions = set.size();
      const MixedStrategy w = learners[l].strategy();
      BidderRound& br = rec.bidders[l];
      if (config.keep_records) br.strategy = w;
      br.action = profile[l];
      br.allocation = realized->allocation[l];
      br.won = realized->won(l);
      br.payment = realized->payments[l];
      br.utility = realized->utilities[l];
      br.loss = realized->losses[l];
      rec.social_cost += evaluate(set.true_cost(), br.allocation);

      Profile counterfactual = profile;
      br.counterfactual_utilities.resize(num_actions);
      br.counterfactual_losses.resize(num_actions);
      for (ActionIndex k = 0; k < num_actions; ++k) {
        counterfactual[l] = k;
        const ClearingResult* cf = nullptr;
        try {
          cf = &cache.get(counterfactual);
        } catch (const Infeasible& e) {
          throw Infeasible("round " + std::to_string(t) + ", counterfactual profile " +
                           describe(counterfactual) + ": " + e.what());
        }
        br.counterfactual_utilities[k] = cf->utilities[l];
        br.counterfactual_losses[k] = cf->losses[l];
        if (!cf->won(l)) br.all_losing.push_back(k);
      }

      if (!br.won) {
        br.losing_set = market.family() == MarketFamily::kConvexSingleGood
                            ? losing_set_from_price(set, *realized->price)
                            : epigraph_losing_set(set, br.action);
      }
      const std::span<const ActionSet> reveal_sets = set.reveal_sets();

      // r_t over the bidder's own randomization: every action that would lose
      // is revealed whenever the sampled action is a loser that uncovers it.
      if (market.family() == MarketFamily::kConvexSingleGood) {
        if (!std::includes(br.all_losing.begin(), br.all_losing.end(),
                           br.losing_set.begin(), br.losing_set.end())) {
          throw InvalidRevelation("round " + std::to_string(t) +
                                  ": price-based losing set disagrees with clearing");
        }
        br.true_revelation = revelation_simple(w, br.all_losing, false);
      } else {
        br.true_revelation =
            revelation_general(w, br.all_losing, br.all_losing, reveal_sets, false);
      }

      // This round's result is already known to the bidder.
      histories[l].record(br.action, br.allocation);
      LossEstimate estimate;
      RoundOutcome outcome = br.won ? RoundOutcome{Won{br.action, br.loss}}
                                    : RoundOutcome{Lost{br.action, br.losing_set}};
      switch (config.learning[l].mode) {
        case FeedbackMode::kFullInformation:
          estimate = estimate_full(br.counterfactual_losses);
          br.revelation.assign(num_actions, 1.0);
          break;
        case FeedbackMode::kBandit:
          estimate = estimate_bandit(br.action, br.loss, w);
          br.revelation = w;
          break;
        case FeedbackMode::kExtendedTrue:
          br.revelation = br.true_revelation;
          estimate = estimate_extended(outcome, loser_loss[l], br.revelation, w);
          break;
        case FeedbackMode::kExtendedHeuristic:
          // With a posted price the bidder already knows the exact value.
          br.revelation = market.family() == MarketFamily::kConvexSingleGood
                              ? br.true_revelation
                              : revelation_heuristic(w, br.losing_set, reveal_sets,
                                                     histories[l].winners(), br.won);
          estimate = estimate_extended(outcome, loser_loss[l], br.revelation, w);
          break;
      }
      // The heuristic mode still reports the information structure's alpha.
      const bool heuristic = config.learning[l].mode == FeedbackMode::kExtendedHeuristic;
      alphas[l].record(w, heuristic ? br.true_revelation : br.revelation);
      learners[l].update(estimate);
    }
    records.push_back(std::move(rec));
  }

  report.bidders.assign(n, BidderReport{});
  const std::vector<double> gaps = cce_gap(records);
  for (std::size_t l = 0; l < n; ++l) {
    BidderReport& b = report.bidders[l];
    b.mode = config.learning[l].mode;
    b.eta = config.learning[l].eta;
    b.regret = regret(records, l);
    b.loss_regret = loss_regret(records, l);
    b.alpha_avg = alphas[l].finalize();
    b.bound_loss = theorem_bound(market.bidder(l).size(), config.horizon, b.alpha_avg);
    b.bound_dollars = b.bound_loss * LossMap(market.bounds(l)).span();
    b.cce_gap = gaps[l];
    for (const RoundRecord& r : records) {
      if (!r.bidders[l].won) ++b.zero_allocations;
    }
    report.cce_gap = std::max(report.cce_gap, std::max(0.0, gaps[l]));
  }
  report.social_cost.reserve(records.size());
  for (const RoundRecord& r : records) report.social_cost.push_back(r.social_cost);
  report.average_social_cost = social_cost(records);
  if (config.keep_records) report.records = std::move(records);
  return report;
}

std::vector<double> regret(std::span<const RoundRecord> records, std::size_t bidder) {
  std::vector<double> out;
  out.reserve(records.size());
  if (records.empty()) return out;
  std::vector<double> fixed(records.front().bidders.at(bidder).counterfactual_utilities.size(),
                            0.0);
  double realized = 0.0;
  for (const RoundRecord& r : records) {
    const BidderRound& b = r.bidders.at(bidder);
    for (std::size_t k = 0; k < fixed.size(); ++k) fixed[k] += b.counterfactual_utilities[k];
    realized += b.utility;
    out.push_back(*std::max_element(fixed.begin(), fixed.end()) - realized);
  }
  return out;
}

std::vector<double> loss_regret(std::span<const RoundRecord> records, std::size_t bidder) {
  std::vector<double> out;
  out.reserve(records.size());
  if (records.empty()) return out;
  std::vector<double> fixed(records.front().bidders.at(bidder).counterfactual_losses.size(),
                            0.0);
  double realized = 0.0;
  for (const RoundRecord& r : records) {
    const BidderRound& b = r.bidders.at(bidder);
    for (std::size_t k = 0; k < fixed.size(); ++k) fixed[k] += b.counterfactual_losses[k];
    realized += b.loss;
    out.push_back(realized - *std::min_element(fixed.begin(), fixed.end()));
  }
  return out;
}

double theorem_bound(std::size_t num_actions, std::size_t horizon, double alpha_avg) {
  const double k = static_cast<double>(num_actions);
  if (!(alpha_avg >= 1.0 && alpha_avg <= k)) {
    throw BadAlpha("alpha_avg=" + std::to_string(alpha_avg) + " outside [1, " +
                   std::to_string(num_actions) + "]");
  }
  return std::sqrt(2.0 * (k / alpha_avg) * static_cast<double>(horizon) * std::log(k));
}

std::vector<double> cce_gap(std::span<const RoundRecord> records) {
  if (records.empty()) return {};
  const std::size_t n = records.front().bidders.size();
  const double horizon = static_cast<double>(records.size());
  std::vector<double> out(n, 0.0);
  for (std::size_t l = 0; l < n; ++l) out[l] = regret(records, l).back() / horizon;
  return out;
}

double social_cost(std::span<const RoundRecord> records) {
  if (records.empty()) return 0.0;
  double total = 0.0;
  for (const RoundRecord& r : records) total += r.social_cost;
  return total / static_cast<double>(records.size());
}

std::vector<RunReport> run_seeds(const GameConfig& config,
                                 std::span<const std::uint64_t> seeds,
                                 std::size_t workers) {
  std::vector<RunReport> out(seeds.size());
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(seeds.size(), 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < seeds.size(); ++i) out[i] = run_auction_game(config, seeds[i]);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(seeds.size());
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < seeds.size(); i = next++) {
        try {
          out[i] = run_auction_game(config, seeds[i]);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

Stat summarize(std::span<const double> values) {
  Stat s;
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(sq / (n - 1.0));
  }
  return s;
}

RunSummary aggregate_runs(std::span<const RunReport> runs) {
  RunSummary out;
  out.runs = runs.size();
  if (runs.empty()) return out;
  const std::size_t n = runs.front().bidders.size();
  const std::size_t horizon = runs.front().horizon;
  for (const RunReport& r : runs) {
    if (r.bidders.size() != n || r.horizon != horizon) {
      throw ConfigError("cannot aggregate runs of different shapes");
    }
  }
  std::vector<double> column(runs.size());
  auto stat_of = [&](auto&& field) {
    for (std::size_t i = 0; i < runs.size(); ++i) column[i] = field(runs[i]);
    return summarize(column);
  };

  out.bidders.resize(n);
  for (std::size_t l = 0; l < n; ++l) {
    BidderSummary& b = out.bidders[l];
    b.regret.reserve(horizon);
    for (std::size_t t = 0; t < horizon; ++t) {
      b.regret.push_back(stat_of([&](const RunReport& r) { return r.bidders[l].regret[t]; }));
    }
    b.final_regret = b.regret.back();
    b.final_loss_regret =
        stat_of([&](const RunReport& r) { return r.bidders[l].loss_regret.back(); });
    b.alpha_avg = stat_of([&](const RunReport& r) { return r.bidders[l].alpha_avg; });
    b.zero_allocations = stat_of(
        [&](const RunReport& r) { return static_cast<double>(r.bidders[l].zero_allocations); });
    b.cce_gap = stat_of([&](const RunReport& r) { return r.bidders[l].cce_gap; });
    b.bound_loss = stat_of([&](const RunReport& r) { return r.bidders[l].bound_loss; });
  }

  auto bidder_mean = [&](const RunReport& r, auto&& field) {
    double total = 0.0;
    for (const BidderReport& b : r.bidders) total += field(b);
    return total / static_cast<double>(n);
  };
  out.mean_regret.reserve(horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    out.mean_regret.push_back(stat_of([&](const RunReport& r) {
      return bidder_mean(r, [&](const BidderReport& b) { return b.regret[t]; });
    }));
  }
  out.final_mean_regret = out.mean_regret.back();
  out.final_mean_loss_regret = stat_of([&](const RunReport& r) {
    return bidder_mean(r, [](const BidderReport& b) { return b.loss_regret.back(); });
  });
  out.mean_alpha_avg = stat_of([&](const RunReport& r) {
    return bidder_mean(r, [](const BidderReport& b) { return b.alpha_avg; });
  });
  out.social_cost = stat_of([](const RunReport& r) { return r.average_social_cost; });
  out.cce_gap = stat_of([](const RunReport& r) { return r.cce_gap; });
  return out;
}

}  // namespace auctionlearn
