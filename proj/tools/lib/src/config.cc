#include "auctionlearn/cli/config.h"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "auctionlearn/errors.h"
#include "auctionlearn/rng.h"

namespace auctionlearn::cli {
namespace {

class Context {
 public:
  explicit Context(std::string source) : source_(std::move(source)) {}

  std::string at(const YAML::Node& node) const {
    std::string where = source_;
    const YAML::Mark mark = node.Mark();
    if (mark.line >= 0) where += ":" + std::to_string(mark.line + 1);
    return where;
  }

  [[noreturn]] void fail(const YAML::Node& node, const std::string& what) const {
    throw ConfigError(at(node) + ": " + what);
  }

  void only(const YAML::Node& node, std::initializer_list<const char*> allowed,
            const std::string& where) const {
    if (!node.IsMap()) fail(node, where + " must be a mapping");
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (!keys.count(key)) fail(kv.first, "unknown field '" + key + "' in " + where);
    }
  }

  const YAML::Node need(const YAML::Node& map, const char* key,
                        const std::string& where) const {
    const YAML::Node n = map[key];
    if (!n) fail(map, where + " needs '" + key + "'");
    return n;
  }

  double number(const YAML::Node& n, const std::string& what) const {
    if (!n.IsScalar()) fail(n, what + " must be a number");
    try {
      const double v = n.as<double>();
      if (!std::isfinite(v)) fail(n, what + " must be finite");
      return v;
    } catch (const YAML::Exception&) {
      fail(n, what + " must be a number, got '" + n.Scalar() + "'");
    }
  }

  std::uint64_t count(const YAML::Node& n, const std::string& what) const {
    if (!n.IsScalar()) fail(n, what + " must be a non-negative integer");
    try {
      const std::string s = n.Scalar();
      if (s.empty() || s[0] == '-') throw YAML::Exception(YAML::Mark(), "");
      return n.as<std::uint64_t>();
    } catch (const YAML::Exception&) {
      fail(n, what + " must be a non-negative integer, got '" + n.Scalar() + "'");
    }
  }

  std::string text(const YAML::Node& n, const std::string& what) const {
    if (!n.IsScalar()) fail(n, what + " must be a string");
    return n.Scalar();
  }

  std::pair<double, double> interval(const YAML::Node& n, const std::string& what) const {
    if (!n.IsSequence() || n.size() != 2) fail(n, what + " must be [low, high]");
    const double lo = number(n[0], what), hi = number(n[1], what);
    if (lo > hi) fail(n, what + " needs low <= high");
    return {lo, hi};
  }

 private:
  std::string source_;
};

FeedbackMode parse_mode(const Context& ctx, const YAML::Node& n) {
  const std::string s = ctx.text(n, "mode");
  if (s == "full_information" || s == "hedge") return FeedbackMode::kFullInformation;
  if (s == "bandit" || s == "exp3") return FeedbackMode::kBandit;
  if (s == "extended_true") return FeedbackMode::kExtendedTrue;
  if (s == "extended_heuristic") return FeedbackMode::kExtendedHeuristic;
  ctx.fail(n, "unknown mode '" + s +
                  "' (full_information, bandit, extended_true, extended_heuristic)");
}

BidFunction parse_bid(const Context& ctx, const YAML::Node& n, MarketFamily family,
                      const std::string& where) {
  try {
    if (family == MarketFamily::kConvexSingleGood) {
      ctx.only(n, {"a", "d", "x_max"}, where);
      return QuadraticBid(ctx.number(ctx.need(n, "a", where), where + ".a"),
                          ctx.number(ctx.need(n, "d", where), where + ".d"),
                          ctx.number(ctx.need(n, "x_max", where), where + ".x_max"));
    }
    ctx.only(n, {"steps"}, where);
    const YAML::Node steps = ctx.need(n, "steps", where);
    if (!steps.IsSequence()) ctx.fail(steps, where + ".steps must be a list of [quantity, price]");
    std::vector<BidStep> out;
    for (const YAML::Node& s : steps) {
      const auto [q, p] = ctx.interval(s, where + ".steps entry");
      out.push_back({q, p});
    }
    return DiscreteBid(out);
  } catch (const DomainError& e) {
    ctx.fail(n, where + ": " + e.what());
  }
}

std::size_t action_count(const BidderSpec& b) {
  return b.generate ? b.generate->actions : 1 + b.strategies.size();
}

LearnerSpec parse_learner(const Context& ctx, const YAML::Node& n, LearnerSpec base,
                          const std::string& where, std::size_t max_k) {
  if (const YAML::Node m = n["mode"]) base.mode = parse_mode(ctx, m);
  if (const YAML::Node e = n["eta"]) {
    const std::string s = e.IsScalar() ? e.Scalar() : "";
    if (s == "default") {
      base.eta.reset();
    } else if (!s.empty() && s.back() == 'x') {
      try {
        base.eta_scale = std::stod(s.substr(0, s.size() - 1));
      } catch (const std::exception&) {
        ctx.fail(e, where + ".eta multiplier must look like '0.5x'");
      }
      if (!(base.eta_scale > 0)) ctx.fail(e, where + ".eta multiplier must be positive");
      base.eta.reset();
    } else {
      base.eta = ctx.number(e, where + ".eta");
      if (!(*base.eta > 0)) ctx.fail(e, where + ".eta must be positive");
    }
  }
  if (const YAML::Node a = n["alpha_hat"]) {
    base.alpha_hat = ctx.number(a, where + ".alpha_hat");
    if (!(base.alpha_hat >= 1.0 && base.alpha_hat <= static_cast<double>(max_k))) {
      throw BadAlpha(ctx.at(a) + ": " + where + ".alpha_hat=" + a.Scalar() +
                     " outside [1, K] with K=" + std::to_string(max_k));
    }
  }
  return base;
}

ExperimentConfig parse(const YAML::Node& root, const std::string& source) {
  const Context ctx(source);
  ExperimentConfig cfg;
  cfg.source = source;
  ctx.only(root, {"schema_version", "market", "bidders", "strategy_seed", "learning", "runs",
                  "outputs"},
           "config");
  if (const YAML::Node v = root["schema_version"]) {
    if (ctx.count(v, "schema_version") != kConfigSchemaVersion) {
      ctx.fail(v, "unsupported schema_version (expected " +
                      std::to_string(kConfigSchemaVersion) + ")");
    }
  }

  const YAML::Node market = ctx.need(root, "market", "config");
  ctx.only(market, {"family", "demand", "payment_rule", "vcg_sign", "utility_bounds"}, "market");
  {
    const YAML::Node f = ctx.need(market, "family", "market");
    const std::string s = ctx.text(f, "market.family");
    if (s == "convex") {
      cfg.family = MarketFamily::kConvexSingleGood;
    } else if (s == "discrete") {
      cfg.family = MarketFamily::kDiscreteSingleGood;
    } else {
      ctx.fail(f, "market.family must be convex or discrete");
    }
  }
  {
    const YAML::Node q = ctx.need(market, "demand", "market");
    cfg.demand = ctx.number(q, "market.demand");
    if (!(cfg.demand > 0)) ctx.fail(q, "market.demand must be positive");
  }
  {
    const YAML::Node r = ctx.need(market, "payment_rule", "market");
    const std::string s = ctx.text(r, "market.payment_rule");
    if (s == "marginal_price") {
      cfg.payment_rule = PaymentRule::kMarginalPrice;
    } else if (s == "pay_as_bid") {
      cfg.payment_rule = PaymentRule::kPayAsBid;
    } else if (s == "vcg") {
      cfg.payment_rule = PaymentRule::kVcg;
    } else {
      ctx.fail(r, "market.payment_rule must be marginal_price, pay_as_bid or vcg");
    }
    if (cfg.payment_rule == PaymentRule::kMarginalPrice &&
        cfg.family != MarketFamily::kConvexSingleGood) {
      ctx.fail(r, "marginal_price needs the convex family");
    }
  }
  if (const YAML::Node v = market["vcg_sign"]) {
    const std::string s = ctx.text(v, "market.vcg_sign");
    if (s == "standard") {
      cfg.vcg_sign = VcgSign::kStandard;
    } else if (s == "reversed") {
      cfg.vcg_sign = VcgSign::kReversed;
    } else {
      ctx.fail(v, "market.vcg_sign must be standard or reversed");
    }
  }

  const YAML::Node bidders = ctx.need(root, "bidders", "config");
  if (!bidders.IsSequence() || bidders.size() == 0) {
    ctx.fail(bidders, "bidders must be a non-empty list");
  }
  for (std::size_t l = 0; l < bidders.size(); ++l) {
    const YAML::Node b = bidders[l];
    const std::string where = "bidders[" + std::to_string(l) + "]";
    ctx.only(b, {"name", "true_cost", "strategies", "generate"}, where);
    BidderSpec spec;
    spec.name = b["name"] ? ctx.text(b["name"], where + ".name") : "bidder" + std::to_string(l + 1);
    spec.true_cost = parse_bid(ctx, ctx.need(b, "true_cost", where), cfg.family, where + ".true_cost");
    if (const YAML::Node s = b["strategies"]) {
      if (!s.IsSequence()) ctx.fail(s, where + ".strategies must be a list");
      for (std::size_t k = 0; k < s.size(); ++k) {
        spec.strategies.push_back(
            parse_bid(ctx, s[k], cfg.family, where + ".strategies[" + std::to_string(k) + "]"));
      }
    }
    if (const YAML::Node g = b["generate"]) {
      GenerateSpec gen;
      const std::string gw = where + ".generate";
      if (cfg.family == MarketFamily::kConvexSingleGood) {
        ctx.only(g, {"actions", "linear_shift", "quadratic_shift"}, gw);
        gen.actions = ctx.count(ctx.need(g, "actions", gw), gw + ".actions");
        if (gen.actions < 1) ctx.fail(g, gw + ".actions must be at least 1");
        gen.linear_shift = ctx.interval(ctx.need(g, "linear_shift", gw), gw + ".linear_shift");
        if (const YAML::Node q = g["quadratic_shift"]) {
          gen.quadratic_shift = ctx.interval(q, gw + ".quadratic_shift");
        }
      } else {
        ctx.only(g, {"multipliers"}, gw);
        const YAML::Node m = ctx.need(g, "multipliers", gw);
        if (!m.IsSequence() || m.size() == 0) ctx.fail(m, gw + ".multipliers must be a list");
        for (const YAML::Node& x : m) {
          const double v = ctx.number(x, gw + ".multipliers");
          if (!(v > 0)) ctx.fail(x, gw + ".multipliers must be positive");
          gen.multipliers.push_back(v);
        }
        if (gen.multipliers.front() != 1.0) {
          ctx.fail(m, gw + ".multipliers must start with 1 (the true cost)");
        }
        gen.actions = gen.multipliers.size();
      }
      if (!spec.strategies.empty()) ctx.fail(g, where + " cannot have both strategies and generate");
      spec.generate = gen;
    }
    cfg.bidders.push_back(std::move(spec));
  }

  if (const YAML::Node ub = market["utility_bounds"]) {
    if (ub.IsScalar() && ub.Scalar() == "default") {
      // keep empty
    } else {
      if (!ub.IsSequence() || ub.size() != cfg.bidders.size()) {
        ctx.fail(ub, "market.utility_bounds must be 'default' or one [u_min, u_max] per bidder");
      }
      for (const YAML::Node& pair : ub) {
        const auto [lo, hi] = ctx.interval(pair, "market.utility_bounds entry");
        if (!(lo < hi)) ctx.fail(pair, "utility bounds need u_min < u_max");
        cfg.utility_bounds.push_back({lo, hi});
      }
    }
  }

  if (const YAML::Node s = root["strategy_seed"]) cfg.strategy_seed = ctx.count(s, "strategy_seed");

  const YAML::Node learning = ctx.need(root, "learning", "config");
  ctx.only(learning, {"horizon", "arms"}, "learning");
  {
    const YAML::Node h = ctx.need(learning, "horizon", "learning");
    cfg.horizon = ctx.count(h, "learning.horizon");
    if (cfg.horizon < 1) ctx.fail(h, "learning.horizon must be at least 1");
  }
  const YAML::Node arms = ctx.need(learning, "arms", "learning");
  if (!arms.IsSequence() || arms.size() == 0) ctx.fail(arms, "learning.arms must be a non-empty list");
  std::set<std::string> names;
  std::size_t min_k = action_count(cfg.bidders.front());
  for (const BidderSpec& b : cfg.bidders) min_k = std::min(min_k, action_count(b));
  for (std::size_t i = 0; i < arms.size(); ++i) {
    const YAML::Node a = arms[i];
    const std::string where = "learning.arms[" + std::to_string(i) + "]";
    ctx.only(a, {"name", "mode", "eta", "alpha_hat", "per_bidder"}, where);
    ArmSpec arm;
    ctx.need(a, "mode", where);
    arm.learner = parse_learner(ctx, a, LearnerSpec{}, where, min_k);
    arm.name = a["name"] ? ctx.text(a["name"], where + ".name")
                         : std::string(to_string(arm.learner.mode));
    if (arm.name.empty() || arm.name.find_first_of("/\\ ") != std::string::npos) {
      ctx.fail(a, where + ".name must be a non-empty path-safe word");
    }
    if (!names.insert(arm.name).second) ctx.fail(a, "duplicate arm name '" + arm.name + "'");
    if (const YAML::Node pb = a["per_bidder"]) {
      if (!pb.IsSequence() || pb.size() != cfg.bidders.size()) {
        ctx.fail(pb, where + ".per_bidder needs one entry per bidder (use {} to inherit)");
      }
      for (std::size_t l = 0; l < pb.size(); ++l) {
        const std::string pw = where + ".per_bidder[" + std::to_string(l) + "]";
        if (pb[l].IsNull() || (pb[l].IsMap() && pb[l].size() == 0)) {
          arm.per_bidder.emplace_back();
          continue;
        }
        ctx.only(pb[l], {"mode", "eta", "alpha_hat"}, pw);
        arm.per_bidder.emplace_back(
            parse_learner(ctx, pb[l], arm.learner, pw, action_count(cfg.bidders[l])));
      }
    }
    cfg.arms.push_back(std::move(arm));
  }

  const YAML::Node runs = ctx.need(root, "runs", "config");
  ctx.only(runs, {"seeds", "first_seed", "workers"}, "runs");
  {
    const YAML::Node s = ctx.need(runs, "seeds", "runs");
    if (s.IsSequence()) {
      for (const YAML::Node& x : s) cfg.seeds.push_back(ctx.count(x, "runs.seeds entry"));
    } else {
      const std::uint64_t n = ctx.count(s, "runs.seeds");
      const std::uint64_t first = runs["first_seed"] ? ctx.count(runs["first_seed"], "runs.first_seed") : 0;
      for (std::uint64_t i = 0; i < n; ++i) cfg.seeds.push_back(first + i);
    }
    if (cfg.seeds.empty()) ctx.fail(s, "runs.seeds is empty");
  }
  if (const YAML::Node w = runs["workers"]) {
    cfg.workers = ctx.count(w, "runs.workers");
    if (cfg.workers < 1) ctx.fail(w, "runs.workers must be at least 1");
  }

  if (const YAML::Node out = root["outputs"]) {
    ctx.only(out, {"dir", "formats"}, "outputs");
    if (const YAML::Node d = out["dir"]) cfg.out_dir = ctx.text(d, "outputs.dir");
    if (const YAML::Node f = out["formats"]) {
      if (!f.IsSequence()) ctx.fail(f, "outputs.formats must be a list");
      cfg.formats.clear();
      for (const YAML::Node& x : f) {
        const std::string s = ctx.text(x, "outputs.formats entry");
        if (s != "csv" && s != "json") ctx.fail(x, "outputs.formats entries are csv or json");
        cfg.formats.push_back(s);
      }
    }
  }

  // Market-level preconditions surface here so errors point at the file.
  try {
    const MarketInstance market = build_market(cfg);
    for (const ArmSpec& arm : cfg.arms) resolve_learning(cfg, market, arm);
  } catch (const Infeasible&) {
    throw;
  } catch (const BadAlpha& e) {
    throw BadAlpha(source + ": " + e.what());
  } catch (const Error& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return cfg;
}

}  // namespace

ExperimentConfig load_config_string(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (!root.IsMap()) throw ConfigError(source + ": top level must be a mapping");
  return parse(root, source);
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot read config");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_config_string(ss.str(), path);
}

std::vector<StrategySet> build_strategy_sets(const ExperimentConfig& config) {
  std::vector<StrategySet> out;
  for (std::size_t l = 0; l < config.bidders.size(); ++l) {
    const BidderSpec& b = config.bidders[l];
    std::vector<BidFunction> bids{b.true_cost};
    bids.insert(bids.end(), b.strategies.begin(), b.strategies.end());
    if (b.generate) {
      const GenerateSpec& g = *b.generate;
      if (const auto* q = std::get_if<QuadraticBid>(&b.true_cost)) {
        Rng rng(bidder_stream_seed(config.strategy_seed, l));
        for (std::size_t k = 1; k < g.actions; ++k) {
          const double dd = rng.uniform(g.linear_shift->first, g.linear_shift->second);
          const double da = g.quadratic_shift
                                ? rng.uniform(g.quadratic_shift->first, g.quadratic_shift->second)
                                : 0.0;
          try {
            bids.push_back(QuadraticBid(q->a + da, q->d + dd, q->x_max));
          } catch (const DomainError& e) {
            throw ConfigError(b.name + ": generated action " + std::to_string(k) + ": " +
                              e.what());
          }
        }
      } else {
        const auto& truth = std::get<DiscreteBid>(b.true_cost);
        for (std::size_t k = 1; k < g.multipliers.size(); ++k) {
          std::vector<BidStep> steps = truth.steps();
          for (BidStep& s : steps) s.unit_price *= g.multipliers[k];
          bids.push_back(DiscreteBid(steps));
        }
      }
    }
    out.emplace_back(std::move(bids));
  }
  return out;
}

MarketInstance build_market(const ExperimentConfig& config) {
  return MarketInstance(config.demand, config.payment_rule, build_strategy_sets(config),
                        config.utility_bounds, config.vcg_sign);
}

std::vector<BidderLearning> resolve_learning(const ExperimentConfig& config,
                                             const MarketInstance& market,
                                             const ArmSpec& arm) {
  std::vector<BidderLearning> out;
  for (std::size_t l = 0; l < market.num_bidders(); ++l) {
    LearnerSpec spec = arm.learner;
    if (l < arm.per_bidder.size() && arm.per_bidder[l]) spec = *arm.per_bidder[l];
    const std::size_t k = market.bidder(l).size();
    double eta = 0.0;
    if (spec.eta) {
      eta = *spec.eta;
    } else if (k < 2) {
      eta = 1.0;  // a single action never moves
    } else {
      eta = spec.eta_scale * default_eta(spec.mode, k, config.horizon, spec.alpha_hat);
    }
    if (spec.mode == FeedbackMode::kExtendedTrue ||
        spec.mode == FeedbackMode::kExtendedHeuristic) {
      if (!(spec.alpha_hat >= 1.0 && spec.alpha_hat <= static_cast<double>(k))) {
        throw BadAlpha(arm.name + ": alpha_hat=" + std::to_string(spec.alpha_hat) +
                       " outside [1, " + std::to_string(k) + "]");
      }
    }
    out.push_back({spec.mode, eta});
  }
  return out;
}

}  // namespace auctionlearn::cli
