#include "auctionlearn/cli/app.h"

#include <CLI11.hpp>

#include <fstream>
#include <sstream>

#include "auctionlearn/cli/config.h"
#include "auctionlearn/cli/experiment.h"
#include "auctionlearn/cli/output.h"
#include "auctionlearn/cli/verify.h"
#include "auctionlearn/errors.h"

namespace auctionlearn::cli {
namespace {

struct Common {
  std::string config_path;
  std::string out_dir;
  std::size_t workers = 0;
  std::string seed_override;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot read config");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    try {
      if (item.empty() || item[0] == '-') throw std::invalid_argument(item);
      seeds.push_back(std::stoull(item, &used));
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw ConfigError("--seed-override: '" + item + "' is not a seed");
    }
  }
  if (seeds.empty()) throw ConfigError("--seed-override: empty seed list");
  return seeds;
}

ExperimentConfig load(const Common& c, std::string& text) {
  text = read_text(c.config_path);
  ExperimentConfig cfg = load_config_string(text, c.config_path);
  if (!c.out_dir.empty()) cfg.out_dir = c.out_dir;
  if (c.workers > 0) cfg.workers = c.workers;
  if (!c.seed_override.empty()) cfg.seeds = parse_seed_list(c.seed_override);
  return cfg;
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "experiment config (YAML or JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out-dir", c.out_dir, "output directory (overrides outputs.dir)");
  cmd->add_option("--workers", c.workers, "parallel seeds (overrides runs.workers)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed-override", c.seed_override,
                  "comma-separated seeds replacing runs.seeds");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Repeated procurement auctions with no-regret learning bidders", "auctionlearn"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version_string());

  Common common;
  CLI::App* run = app.add_subcommand("run", "run every arm of an experiment over all seeds");
  add_common(run, common);

  CLI::App* sweep = app.add_subcommand("sweep", "repeat an experiment over parameter values");
  add_common(sweep, common);
  std::string parameter;
  std::vector<std::string> values;
  std::vector<std::string> sweep_arms;
  sweep->add_option("--param", parameter, "K, alpha_hat, eta, T or Q")->required();
  sweep->add_option("--values", values, "values; eta also takes multiples like 0.5x")
      ->required()
      ->delimiter(',');
  sweep->add_option("--arms", sweep_arms, "arms the parameter applies to (default all)")
      ->delimiter(',');

  CLI::App* verify = app.add_subcommand("verify", "check solvers and estimators against oracles");
  VerifyOptions vopt;
  verify->add_option("--seed", vopt.seed, "seed for the randomized suites");
  // Negative controls for testing the checker itself.
  verify->add_flag("--inject-revelation-fault", vopt.fault_revelation)->group("");
  verify->add_flag("--inject-vcg-sign-fault", vopt.fault_vcg_sign)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) {
      std::string text;
      const ExperimentConfig cfg = load(common, text);
      const ExperimentResult result = run_experiment(cfg, cfg.workers, &err);
      write_outputs(cfg, result, text, cfg.out_dir);
      out << "wrote " << cfg.out_dir << "\n";
      return kExitOk;
    }
    if (*sweep) {
      std::string text;
      const ExperimentConfig base = load(common, text);
      const SweepParameter p = parse_sweep_parameter(parameter);
      std::vector<SweepRow> rows;
      for (const std::string& v : values) {
        ExperimentConfig cfg = apply_sweep(base, p, v, sweep_arms);
        err << std::string(to_string(p)) << " = " << v << "\n";
        ExperimentResult result = run_experiment(cfg, cfg.workers, &err);
        rows.push_back({v, std::move(cfg), std::move(result)});
      }
      write_sweep(std::string(to_string(p)), rows, text, base.out_dir);
      out << "wrote " << base.out_dir << "\n";
      return kExitOk;
    }
    if (*verify) {
      bool all = true;
      for (const PropertyResult& r : run_verify(vopt)) {
        out << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.detail << ")\n";
        all = all && r.passed;
      }
      return all ? kExitOk : kExitPropertyFailure;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const BadAlpha& e) {
    err << "config error (BadAlpha): " << e.what() << "\n";
    return kExitConfig;
  } catch (const Infeasible& e) {
    err << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const Error& e) {
    err << "runtime error: " << e.what() << "\n";
    return kExitInfeasible;
  }
  return kExitConfig;
}

}  // namespace auctionlearn::cli
