#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "auctionlearn/cli/config.h"
#include "auctionlearn/cli/experiment.h"

namespace auctionlearn::cli {

inline constexpr const char* kReportSchema = "auctionlearn.report/1";
inline constexpr const char* kManifestSchema = "auctionlearn.manifest/1";
inline constexpr const char* kSweepSchema = "auctionlearn.sweep/1";

std::string version_string();

// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

std::string sha256_hex(const std::string& bytes);

// A config equivalent to `config` with every default and generated value
// spelled out. Loading it back reproduces the same runs.
nlohmann::json materialize_config(const ExperimentConfig& config, const MarketInstance& market);

nlohmann::json run_report_json(const RunReport& run, const std::string& arm);
nlohmann::json summary_json(const ExperimentResult& result);
nlohmann::json manifest_json(const ExperimentConfig& config, const ExperimentResult& result,
                             const std::string& config_text, const std::string& command);

std::string regret_csv(const ArmResult& arm);
std::string alpha_csv(const ArmResult& arm);
std::string zero_allocations_csv(const ArmResult& arm);
std::string social_cost_csv(const ArmResult& arm, double truthful_cost);
std::string summary_csv(const ExperimentResult& result);

// Writes the full output tree under `dir`.
void write_outputs(const ExperimentConfig& config, const ExperimentResult& result,
                   const std::string& config_text, const std::filesystem::path& dir);

struct SweepRow {
  std::string value;
  ExperimentConfig config;
  ExperimentResult result;
};

std::string sweep_csv(const std::string& parameter, const std::vector<SweepRow>& rows);
void write_sweep(const std::string& parameter, const std::vector<SweepRow>& rows,
                 const std::string& config_text, const std::filesystem::path& dir);

}  // namespace auctionlearn::cli
