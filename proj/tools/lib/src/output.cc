#include "auctionlearn/cli/output.h"

#include <openssl/evp.h>

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "auctionlearn/errors.h"

namespace auctionlearn::cli {
namespace fs = std::filesystem;
using nlohmann::json;

#ifndef AUCTIONLEARN_VERSION
#define AUCTIONLEARN_VERSION "0.0.0"
#endif

std::string version_string() { return AUCTIONLEARN_VERSION; }

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) {
    out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return out.str();
}

namespace {

json bid_json(const BidFunction& bid) {
  if (const auto* q = std::get_if<QuadraticBid>(&bid)) {
    return {{"a", q->a}, {"d", q->d}, {"x_max", q->x_max}};
  }
  json steps = json::array();
  for (const BidStep& s : std::get<DiscreteBid>(bid).steps()) {
    steps.push_back({s.quantity, s.unit_price});
  }
  return {{"steps", steps}};
}

json stat_json(const Stat& s) { return {{"mean", s.mean}, {"std", s.std}}; }

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

bool wants(const ExperimentConfig& c, const char* format) {
  return std::find(c.formats.begin(), c.formats.end(), format) != c.formats.end();
}

std::string bidder_header(std::size_t n, const char* a, const char* b) {
  std::string h;
  for (std::size_t l = 0; l < n; ++l) {
    const std::string p = "bidder" + std::to_string(l + 1) + "_";
    h += "," + p + a + "," + p + b;
  }
  return h;
}

}  // namespace

json materialize_config(const ExperimentConfig& config, const MarketInstance& market) {
  json bounds = json::array();
  for (std::size_t l = 0; l < market.num_bidders(); ++l) {
    bounds.push_back({market.bounds(l).u_min, market.bounds(l).u_max});
  }
  json bidders = json::array();
  for (std::size_t l = 0; l < market.num_bidders(); ++l) {
    const StrategySet& set = market.bidder(l);
    json strategies = json::array();
    for (std::size_t k = 1; k < set.size(); ++k) strategies.push_back(bid_json(set.bid(k)));
    json b = {{"name", config.bidders[l].name}, {"true_cost", bid_json(set.true_cost())}};
    if (!strategies.empty()) b["strategies"] = strategies;
    bidders.push_back(b);
  }
  json arms = json::array();
  for (const ArmSpec& arm : config.arms) {
    const auto learning = resolve_learning(config, market, arm);
    json per_bidder = json::array();
    for (std::size_t l = 0; l < learning.size(); ++l) {
      const LearnerSpec& spec =
          l < arm.per_bidder.size() && arm.per_bidder[l] ? *arm.per_bidder[l] : arm.learner;
      per_bidder.push_back({{"mode", std::string(to_string(learning[l].mode))},
                            {"eta", learning[l].eta},
                            {"alpha_hat", spec.alpha_hat}});
    }
    arms.push_back({{"name", arm.name},
                    {"mode", std::string(to_string(arm.learner.mode))},
                    {"alpha_hat", arm.learner.alpha_hat},
                    {"eta", learning.front().eta},
                    {"per_bidder", per_bidder}});
  }
  return {
      {"schema_version", kConfigSchemaVersion},
      {"market",
       {{"family", std::string(to_string(config.family))},
        {"demand", config.demand},
        {"payment_rule", std::string(to_string(config.payment_rule))},
        {"vcg_sign", std::string(to_string(config.vcg_sign))},
        {"utility_bounds", bounds}}},
      {"bidders", bidders},
      {"strategy_seed", config.strategy_seed},
      {"learning", {{"horizon", config.horizon}, {"arms", arms}}},
      {"runs", {{"seeds", config.seeds}, {"workers", config.workers}}},
      {"outputs", {{"dir", config.out_dir}, {"formats", config.formats}}},
  };
}

json run_report_json(const RunReport& run, const std::string& arm) {
  json bidders = json::array();
  for (const BidderReport& b : run.bidders) {
    bidders.push_back({{"mode", std::string(to_string(b.mode))},
                       {"eta", b.eta},
                       {"regret", b.regret},
                       {"loss_regret", b.loss_regret},
                       {"alpha_avg", b.alpha_avg},
                       {"bound_loss", b.bound_loss},
                       {"bound_dollars", b.bound_dollars},
                       {"zero_allocations", b.zero_allocations},
                       {"cce_gap", b.cce_gap}});
  }
  json joint = json::array();
  for (const auto& [profile, count] : run.joint_distribution) {
    joint.push_back({{"profile", profile}, {"count", count}});
  }
  return {{"schema", kReportSchema},
          {"arm", arm},
          {"seed", run.seed},
          {"horizon", run.horizon},
          {"bidders", bidders},
          {"social_cost", run.social_cost},
          {"average_social_cost", run.average_social_cost},
          {"cce_gap", run.cce_gap},
          {"joint_distribution", joint}};
}

json summary_json(const ExperimentResult& result) {
  json arms = json::array();
  for (const ArmResult& a : result.arms) {
    json bidders = json::array();
    for (const BidderSummary& b : a.summary.bidders) {
      bidders.push_back({{"final_regret", stat_json(b.final_regret)},
                         {"final_loss_regret", stat_json(b.final_loss_regret)},
                         {"alpha_avg", stat_json(b.alpha_avg)},
                         {"zero_allocations", stat_json(b.zero_allocations)},
                         {"cce_gap", stat_json(b.cce_gap)},
                         {"bound_loss", stat_json(b.bound_loss)}});
    }
    arms.push_back({{"name", a.name},
                    {"runs", a.summary.runs},
                    {"final_mean_regret", stat_json(a.summary.final_mean_regret)},
                    {"final_mean_loss_regret", stat_json(a.summary.final_mean_loss_regret)},
                    {"mean_alpha_avg", stat_json(a.summary.mean_alpha_avg)},
                    {"social_cost", stat_json(a.summary.social_cost)},
                    {"cce_gap", stat_json(a.summary.cce_gap)},
                    {"bidders", bidders}});
  }
  return {{"schema", kReportSchema},
          {"truthful_social_cost", result.truthful_social_cost},
          {"arms", arms}};
}

json manifest_json(const ExperimentConfig& config, const ExperimentResult& result,
                   const std::string& config_text, const std::string& command) {
  return {{"schema", kManifestSchema},
          {"version", version_string()},
          {"command", command},
          {"config_source", config.source},
          {"config_sha256", sha256_hex(config_text)},
          {"seeds", config.seeds},
          {"tolerances",
           {{"quantity", kQuantityTolerance},
            {"value", kValueTolerance},
            {"demand", kDemandTolerance},
            {"price", kPriceTolerance},
            {"max_bisection_iterations", kMaxBisectionIterations},
            {"max_discrete_profiles", kMaxDiscreteProfiles}}},
          {"config", materialize_config(config, result.market)}};
}

std::string regret_csv(const ArmResult& arm) {
  const RunSummary& s = arm.summary;
  const std::size_t n = s.bidders.size();
  std::string out = "t" + bidder_header(n, "mean", "std") + ",all_mean,all_std\n";
  for (std::size_t t = 0; t < s.mean_regret.size(); ++t) {
    out += std::to_string(t + 1);
    for (const BidderSummary& b : s.bidders) {
      out += "," + format_number(b.regret[t].mean) + "," + format_number(b.regret[t].std);
    }
    out += "," + format_number(s.mean_regret[t].mean) + "," +
           format_number(s.mean_regret[t].std) + "\n";
  }
  return out;
}

std::string alpha_csv(const ArmResult& arm) {
  std::string out = "bidder,mode,eta,alpha_mean,alpha_std,bound_loss_mean,loss_regret_mean\n";
  for (std::size_t l = 0; l < arm.summary.bidders.size(); ++l) {
    const BidderSummary& b = arm.summary.bidders[l];
    out += std::to_string(l + 1) + "," + std::string(to_string(arm.learning[l].mode)) + "," +
           format_number(arm.learning[l].eta) + "," + format_number(b.alpha_avg.mean) + "," +
           format_number(b.alpha_avg.std) + "," + format_number(b.bound_loss.mean) + "," +
           format_number(b.final_loss_regret.mean) + "\n";
  }
  return out;
}

std::string zero_allocations_csv(const ArmResult& arm) {
  std::string out = "bidder,mean,std,horizon\n";
  const std::size_t horizon = arm.runs.empty() ? 0 : arm.runs.front().horizon;
  for (std::size_t l = 0; l < arm.summary.bidders.size(); ++l) {
    const Stat& z = arm.summary.bidders[l].zero_allocations;
    out += std::to_string(l + 1) + "," + format_number(z.mean) + "," + format_number(z.std) +
           "," + std::to_string(horizon) + "\n";
  }
  return out;
}

std::string social_cost_csv(const ArmResult& arm, double truthful_cost) {
  std::string out = "t,mean,std,truthful\n";
  const std::size_t horizon = arm.runs.empty() ? 0 : arm.runs.front().horizon;
  std::vector<double> column(arm.runs.size());
  for (std::size_t t = 0; t < horizon; ++t) {
    for (std::size_t i = 0; i < arm.runs.size(); ++i) column[i] = arm.runs[i].social_cost[t];
    const Stat s = summarize(column);
    out += std::to_string(t + 1) + "," + format_number(s.mean) + "," + format_number(s.std) +
           "," + format_number(truthful_cost) + "\n";
  }
  return out;
}

std::string summary_csv(const ExperimentResult& result) {
  std::string out =
      "arm,runs,final_regret_mean,final_regret_std,final_loss_regret_mean,alpha_mean,"
      "social_cost_mean,social_cost_std,truthful_social_cost,cce_gap_mean\n";
  for (const ArmResult& a : result.arms) {
    const RunSummary& s = a.summary;
    out += a.name + "," + std::to_string(s.runs) + "," + format_number(s.final_mean_regret.mean) +
           "," + format_number(s.final_mean_regret.std) + "," +
           format_number(s.final_mean_loss_regret.mean) + "," +
           format_number(s.mean_alpha_avg.mean) + "," + format_number(s.social_cost.mean) + "," +
           format_number(s.social_cost.std) + "," + format_number(result.truthful_social_cost) +
           "," + format_number(s.cce_gap.mean) + "\n";
  }
  return out;
}

void write_outputs(const ExperimentConfig& config, const ExperimentResult& result,
                   const std::string& config_text, const fs::path& dir) {
  fs::create_directories(dir);
  write_file(dir / "manifest.json",
             manifest_json(config, result, config_text, "run").dump(2) + "\n");
  if (wants(config, "json")) write_file(dir / "summary.json", summary_json(result).dump(2) + "\n");
  if (wants(config, "csv")) write_file(dir / "summary.csv", summary_csv(result));
  for (const ArmResult& arm : result.arms) {
    const fs::path d = dir / arm.name;
    fs::create_directories(d);
    if (wants(config, "csv")) {
      write_file(d / "regret.csv", regret_csv(arm));
      write_file(d / "alpha.csv", alpha_csv(arm));
      write_file(d / "zero_allocations.csv", zero_allocations_csv(arm));
      write_file(d / "social_cost.csv", social_cost_csv(arm, result.truthful_social_cost));
    }
    if (wants(config, "json")) {
      fs::create_directories(d / "runs");
      for (const RunReport& run : arm.runs) {
        write_file(d / "runs" / ("seed_" + std::to_string(run.seed) + ".json"),
                   run_report_json(run, arm.name).dump() + "\n");
      }
    }
  }
}

std::string sweep_csv(const std::string& parameter, const std::vector<SweepRow>& rows) {
  std::string out = "parameter,value,arm,runs,final_regret_mean,final_regret_std,"
                    "final_loss_regret_mean,alpha_mean,alpha_std,social_cost_mean,cce_gap_mean\n";
  for (const SweepRow& row : rows) {
    for (const ArmResult& a : row.result.arms) {
      const RunSummary& s = a.summary;
      out += parameter + "," + row.value + "," + a.name + "," + std::to_string(s.runs) + "," +
             format_number(s.final_mean_regret.mean) + "," +
             format_number(s.final_mean_regret.std) + "," +
             format_number(s.final_mean_loss_regret.mean) + "," +
             format_number(s.mean_alpha_avg.mean) + "," + format_number(s.mean_alpha_avg.std) +
             "," + format_number(s.social_cost.mean) + "," + format_number(s.cce_gap.mean) + "\n";
    }
  }
  return out;
}

void write_sweep(const std::string& parameter, const std::vector<SweepRow>& rows,
                 const std::string& config_text, const fs::path& dir) {
  fs::create_directories(dir);
  write_file(dir / "sweep.csv", sweep_csv(parameter, rows));
  json points = json::array();
  for (const SweepRow& row : rows) {
    points.push_back({{"value", row.value},
                      {"config", materialize_config(row.config, row.result.market)},
                      {"summary", summary_json(row.result)}});
  }
  const json manifest = {{"schema", kSweepSchema},
                         {"version", version_string()},
                         {"command", "sweep"},
                         {"parameter", parameter},
                         {"config_sha256", sha256_hex(config_text)},
                         {"points", points}};
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace auctionlearn::cli
