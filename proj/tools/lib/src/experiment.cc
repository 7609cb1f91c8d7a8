#include "auctionlearn/cli/experiment.h"

#include <algorithm>
#include <ostream>

#include "auctionlearn/errors.h"

namespace auctionlearn::cli {

ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t workers,
                                std::ostream* log) {
  ExperimentResult out{build_market(config), 0.0, {}};
  out.truthful_social_cost = clear(out.market, out.market.truthful_profile()).cost;
  for (const ArmSpec& arm : config.arms) {
    ArmResult r;
    r.name = arm.name;
    r.learning = resolve_learning(config, out.market, arm);
    GameConfig game{out.market, r.learning, config.horizon, false, {}};
    r.runs = run_seeds(game, config.seeds, workers);
    r.summary = aggregate_runs(r.runs);
    if (log) {
      *log << "arm " << r.name << ": " << r.runs.size() << " runs, mean final regret "
           << r.summary.final_mean_regret.mean << " $, alpha_avg "
           << r.summary.mean_alpha_avg.mean << ", social cost " << r.summary.social_cost.mean
           << " $/round\n";
    }
    out.arms.push_back(std::move(r));
  }
  return out;
}

SweepParameter parse_sweep_parameter(const std::string& name) {
  if (name == "K" || name == "actions") return SweepParameter::kActions;
  if (name == "alpha_hat") return SweepParameter::kAlphaHat;
  if (name == "eta") return SweepParameter::kEta;
  if (name == "T" || name == "horizon") return SweepParameter::kHorizon;
  if (name == "Q" || name == "demand") return SweepParameter::kDemand;
  throw ConfigError("unknown sweep parameter '" + name + "' (K, alpha_hat, eta, T, Q)");
}

std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::kActions: return "K";
    case SweepParameter::kAlphaHat: return "alpha_hat";
    case SweepParameter::kEta: return "eta";
    case SweepParameter::kHorizon: return "T";
    case SweepParameter::kDemand: return "Q";
  }
  return "?";
}

namespace {

double to_number(const std::string& value, SweepParameter p) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || value.empty()) {
    throw ConfigError("sweep value '" + value + "' for " + std::string(to_string(p)) +
                      " is not a number");
  }
  return v;
}

std::size_t to_count(const std::string& value, SweepParameter p) {
  const double v = to_number(value, p);
  if (v < 1 || v != static_cast<double>(static_cast<std::size_t>(v))) {
    throw ConfigError("sweep value '" + value + "' for " + std::string(to_string(p)) +
                      " must be a positive integer");
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

ExperimentConfig apply_sweep(const ExperimentConfig& config, SweepParameter p,
                             const std::string& value, const std::vector<std::string>& arms) {
  ExperimentConfig out = config;
  auto selected = [&](const ArmSpec& a) {
    return arms.empty() || std::find(arms.begin(), arms.end(), a.name) != arms.end();
  };
  for (const std::string& name : arms) {
    if (std::none_of(out.arms.begin(), out.arms.end(),
                     [&](const ArmSpec& a) { return a.name == name; })) {
      throw ConfigError("no arm named '" + name + "'");
    }
  }
  auto each_learner = [&](auto&& fn) {
    for (ArmSpec& a : out.arms) {
      if (!selected(a)) continue;
      fn(a.learner);
      for (auto& o : a.per_bidder) {
        if (o) fn(*o);
      }
    }
  };

  switch (p) {
    case SweepParameter::kActions: {
      const std::size_t k = to_count(value, p);
      for (BidderSpec& b : out.bidders) {
        if (!b.generate) throw ConfigError(b.name + ": sweeping K needs a generate block");
        if (!b.generate->multipliers.empty()) {
          if (k > b.generate->multipliers.size()) {
            throw ConfigError(b.name + ": only " +
                              std::to_string(b.generate->multipliers.size()) + " multipliers");
          }
          b.generate->multipliers.resize(k);
        }
        b.generate->actions = k;
      }
      // A fixed alpha_hat above the new K is clamped to K.
      for (ArmSpec& a : out.arms) {
        a.learner.alpha_hat = std::min(a.learner.alpha_hat, static_cast<double>(k));
        for (auto& o : a.per_bidder) {
          if (o) o->alpha_hat = std::min(o->alpha_hat, static_cast<double>(k));
        }
      }
      break;
    }
    case SweepParameter::kAlphaHat: {
      const double v = to_number(value, p);
      each_learner([&](LearnerSpec& s) { s.alpha_hat = v; });
      break;
    }
    case SweepParameter::kEta: {
      if (!value.empty() && value.back() == 'x') {
        const double scale = to_number(value.substr(0, value.size() - 1), p);
        if (!(scale > 0)) throw ConfigError("eta multiplier must be positive");
        each_learner([&](LearnerSpec& s) {
          s.eta.reset();
          s.eta_scale = scale;
        });
      } else {
        const double v = to_number(value, p);
        if (!(v > 0)) throw ConfigError("eta must be positive");
        each_learner([&](LearnerSpec& s) { s.eta = v; });
      }
      break;
    }
    case SweepParameter::kHorizon:
      out.horizon = to_count(value, p);
      break;
    case SweepParameter::kDemand: {
      const double v = to_number(value, p);
      if (!(v > 0)) throw ConfigError("demand must be positive");
      out.demand = v;
      break;
    }
  }
  // Surface precondition failures before any run starts.
  const MarketInstance market = build_market(out);
  for (const ArmSpec& a : out.arms) resolve_learning(out, market, a);
  return out;
}

}  // namespace auctionlearn::cli
